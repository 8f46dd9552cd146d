#include "rmlab/modforms.hpp"

#include <sstream>
#include <stdexcept>

namespace rmlab {

QSeries QSeries::operator+(const QSeries& o) const {
    if (o.nmax() != nmax()) throw std::invalid_argument("QSeries: truncation mismatch in +");
    QSeries r = *this;
    for (size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] += o.coeffs[i];
    r.constant_known = constant_known && o.constant_known;
    return r;
}

QSeries QSeries::operator-(const QSeries& o) const {
    if (o.nmax() != nmax()) throw std::invalid_argument("QSeries: truncation mismatch in -");
    QSeries r = *this;
    for (size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] -= o.coeffs[i];
    r.constant_known = constant_known && o.constant_known;
    return r;
}

QSeries QSeries::scaled(const PadicScalar& c) const {
    QSeries r = *this;
    for (auto& a : r.coeffs) a *= c;
    return r;
}

QSeries QSeries::truncated(i64 n) const {
    if (n > nmax()) throw std::invalid_argument("QSeries: cannot extend a truncated series");
    QSeries r = *this;
    r.coeffs.resize(static_cast<size_t>(n + 1));
    return r;
}

QSeries series_from_ints(const PadicCtx& ctx, const std::vector<i64>& a, long level) {
    QSeries s;
    s.level = level;
    for (i64 v : a) s.coeffs.push_back(PadicScalar::from_int(ctx, static_cast<long>(v)));
    return s;
}

std::vector<i64> e2p_coefficients(long p, i64 nmax) {
    std::vector<i64> a(static_cast<size_t>(nmax + 1), 0);
    a[0] = p - 1;
    for (i64 n = 1; n <= nmax; ++n) a[static_cast<size_t>(n)] = 24 * sigma_prime_to(n, p);
    return a;
}

QSeries e2p_series(const PadicCtx& ctx, long p, i64 nmax) {
    if (p < 5 || !is_prime(p)) throw std::invalid_argument("e2p_series needs a prime p >= 5");
    return series_from_ints(ctx, e2p_coefficients(p, nmax), p);
}

std::vector<i64> eta_cusp_coefficients(long level, i64 nmax) {
    if (level != 11) throw std::invalid_argument("eta_cusp_series: only level 11 is supported");
    // prod (1 - q^n)^2 (1 - q^{11n})^2 up to q^{nmax-1}, then shift by q
    std::vector<i64> f(static_cast<size_t>(nmax + 1), 0);
    f[0] = 1;
    auto times_one_minus = [&](i64 step) {
        for (i64 i = nmax; i >= step; --i) f[static_cast<size_t>(i)] -= f[static_cast<size_t>(i - step)];
    };
    for (i64 n = 1; n <= nmax; ++n) {
        times_one_minus(n);
        times_one_minus(n);
        if (11 * n <= nmax) {
            times_one_minus(11 * n);
            times_one_minus(11 * n);
        }
    }
    std::vector<i64> a(static_cast<size_t>(nmax + 1), 0);
    for (i64 n = 1; n <= nmax; ++n) a[static_cast<size_t>(n)] = f[static_cast<size_t>(n - 1)];
    return a;
}

QSeries eta_cusp_series(const PadicCtx& ctx, long level, i64 nmax) {
    return series_from_ints(ctx, eta_cusp_coefficients(level, nmax), level);
}

QSeries hecke_Tn(const QSeries& s, long ell) {
    if (ell < 2 || !is_prime(ell)) throw std::invalid_argument("hecke_Tn: l must be prime");
    i64 m = s.nmax() / ell;
    if (m < 1) throw std::invalid_argument("hecke_Tn: insufficient truncation");
    QSeries r;
    r.level = s.level;
    r.weight = s.weight;
    r.constant_known = s.constant_known;
    bool bad = s.level % ell == 0;
    PadicScalar L = PadicScalar::from_int(s.coeffs[0].ctx(), ell);
    for (i64 n = 0; n <= m; ++n) {
        PadicScalar v = s[n * ell];
        if (!bad) {
            if (n == 0)
                v += s[0] * L;
            else if (n % ell == 0)
                v += s[n / ell] * L;
        }
        r.coeffs.push_back(v);
    }
    return r;
}

int modular_dimension(long p) {
    switch (p) {
        case 5:
        case 7:
        case 13:
            return 1;
        case 11:
            return 2;
        default:
            throw std::invalid_argument("level " + std::to_string(p) + " not supported (5, 7, 11, 13)");
    }
}

std::vector<QSeries> modular_basis(const PadicCtx& ctx, long p, i64 nmax) {
    int d = modular_dimension(p);
    std::vector<QSeries> b{e2p_series(ctx, p, nmax)};
    if (d == 2) b.push_back(eta_cusp_series(ctx, p, nmax));
    return b;
}

std::string FitResult::report() const {
    std::ostringstream os;
    os << "fit: " << coeffs.size() << " basis coefficients, " << check_rows.size()
       << " check rows, min residual valuation " << min_residual_valuation << " (threshold " << threshold << ")";
    if (worst_row) os << ", worst at n = " << *worst_row;
    os << (certified ? ", certified" : ", NOT certified");
    return os.str();
}

FitResult fit_to_basis(const QSeries& s, const std::vector<QSeries>& basis, int threshold, int margin) {
    if (basis.empty()) throw std::invalid_argument("fit_to_basis: empty basis");
    const auto& ctx = s.coeffs.at(0).ctx();
    const int N = ctx->N();
    const size_t d = basis.size();
    i64 nmax = s.nmax();
    for (const auto& b : basis)
        if (b.nmax() < nmax) throw std::invalid_argument("fit_to_basis: basis truncated below the series");

    // choose d rows greedily (rank-increasing at unit-ish pivots) by elimination on row vectors
    FitResult res;
    res.threshold = threshold;
    std::vector<std::vector<PadicScalar>> echelon;  // reduced rows
    std::vector<size_t> pivcol;
    for (i64 n = 1; n <= nmax && res.solve_rows.size() < d; ++n) {
        std::vector<PadicScalar> row;
        for (const auto& b : basis) row.push_back(b[n]);
        for (size_t r = 0; r < echelon.size(); ++r) {
            const auto& e = echelon[r];
            PadicScalar f = row[pivcol[r]] / e[pivcol[r]];
            for (size_t j = 0; j < d; ++j) row[j] -= f * e[j];
        }
        size_t best = d;
        int bestv = N;
        for (size_t j = 0; j < d; ++j)
            if (!row[j].is_zero() && row[j].valuation() < bestv) {
                bestv = row[j].valuation();
                best = j;
            }
        if (best == d) continue;
        echelon.push_back(row);
        pivcol.push_back(best);
        res.solve_rows.push_back(n);
    }
    if (res.solve_rows.size() < d) throw std::runtime_error("fit_to_basis: singular subsystem at working precision");

    // Gaussian elimination on the chosen square system
    std::vector<std::vector<PadicScalar>> M;
    for (i64 n : res.solve_rows) {
        std::vector<PadicScalar> row;
        for (const auto& b : basis) row.push_back(b[n]);
        row.push_back(s[n]);
        M.push_back(row);
    }
    for (size_t c = 0; c < d; ++c) {
        size_t piv = d;
        int bestv = 1 << 30;
        for (size_t r = c; r < d; ++r)
            if (!M[r][c].is_zero() && M[r][c].valuation() < bestv) {
                bestv = M[r][c].valuation();
                piv = r;
            }
        if (piv == d) throw std::runtime_error("fit_to_basis: singular subsystem at working precision");
        std::swap(M[c], M[piv]);
        for (size_t r = 0; r < d; ++r) {
            if (r == c) continue;
            PadicScalar f = M[r][c] / M[c][c];
            for (size_t j = c; j <= d; ++j) M[r][j] -= f * M[c][j];
        }
    }
    for (size_t c = 0; c < d; ++c) res.coeffs.push_back(M[c][d] / M[c][c]);

    res.a0 = PadicScalar::zero(ctx, N);
    for (size_t j = 0; j < d; ++j) res.a0 += res.coeffs[j] * basis[j][0];

    res.min_residual_valuation = N;
    for (i64 n = 1; n <= nmax; ++n) {
        bool used = false;
        for (i64 u : res.solve_rows) used |= u == n;
        if (used) continue;
        PadicScalar pred = PadicScalar::zero(ctx, N);
        for (size_t j = 0; j < d; ++j) pred += res.coeffs[j] * basis[j][n];
        int v = std::min(pred.val_diff(s[n]), N);
        res.check_rows.push_back(n);
        res.residual_valuations.push_back(v);
        if (v < res.min_residual_valuation) {
            res.min_residual_valuation = v;
            res.worst_row = n;
        }
    }
    if (static_cast<int>(res.check_rows.size()) < margin)
        throw std::invalid_argument("fit_to_basis: only " + std::to_string(res.check_rows.size()) +
                                    " check rows, below the overdetermination margin " + std::to_string(margin));
    res.certified = res.min_residual_valuation >= threshold;
    return res;
}

LogJDR extract_logJDR(const FitResult& fit, long p, int tol) {
    if (fit.coeffs.empty()) throw std::invalid_argument("extract_logJDR: empty fit");
    const auto& c = fit.coeffs[0];
    LogJDR r;
    r.value = c.scaled(12 * (p - 1));
    r.a0 = c.scaled(p - 1);
    r.a0_consistent = r.a0.val_diff(fit.a0) >= tol;
    return r;
}

}  // namespace rmlab
