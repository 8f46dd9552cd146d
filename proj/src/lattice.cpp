#include "rmlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rmlab {

namespace {

mpz_class dot(const std::vector<mpz_class>& x, const std::vector<mpz_class>& y) {
    mpz_class s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

// nearest integer to a/b (b > 0), ties rounded towards +infinity
mpz_class round_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_class num = 2 * a + b, den = 2 * b;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
}

mpz_class exact_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

std::vector<std::vector<mpz_class>> IntegerLattice::gram() const {
    size_t n = rank();
    std::vector<std::vector<mpz_class>> G(n, std::vector<mpz_class>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) G[i][j] = dot(rows[i], rows[j]);
    return G;
}

mpz_class IntegerLattice::gram_determinant() const {
    // fraction-free Gaussian elimination (Bareiss)
    auto M = gram();
    size_t n = M.size();
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sgn = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (M[k][k] == 0) {
            size_t s = k + 1;
            while (s < n && M[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(M[k], M[s]);
            sgn = -sgn;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) M[i][j] = exact_div(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev);
        prev = M[k][k];
    }
    return sgn * M[n - 1][n - 1];
}

IntegerLattice lll_reduce(const IntegerLattice& L, long delta_num, long delta_den) {
    if (!(4 * delta_num > delta_den && delta_num < delta_den))
        throw std::invalid_argument("lll_reduce: delta must satisfy 1/4 < delta < 1");
    IntegerLattice R = L;
    auto& b = R.rows;
    const int n = static_cast<int>(b.size());
    if (n <= 1) {
        if (n == 1 && dot(b[0], b[0]) == 0) throw std::invalid_argument("lll_reduce: dependent rows");
        return R;
    }
    // 1-based integral Gram-Schmidt data: d[0] = 1, d[i] = Gram determinant of the first i rows;
    // lam[k][j] = d[j] * mu_kj.
    std::vector<mpz_class> d(static_cast<size_t>(n + 1), 0);
    std::vector<std::vector<mpz_class>> lam(static_cast<size_t>(n + 1), std::vector<mpz_class>(static_cast<size_t>(n + 1), 0));
    auto B = [&](int i) -> std::vector<mpz_class>& { return b[static_cast<size_t>(i - 1)]; };
    d[0] = 1;
    d[1] = dot(B(1), B(1));
    if (d[1] == 0) throw std::invalid_argument("lll_reduce: dependent rows");
    int k = 2, kmax = 1;

    auto red = [&](int kk, int l) {
        mpz_class two_abs = 2 * abs(lam[kk][l]);
        if (two_abs <= d[l]) return;
        mpz_class q = round_div(lam[kk][l], d[l]);
        for (size_t c = 0; c < B(kk).size(); ++c) B(kk)[c] -= q * B(l)[c];
        lam[kk][l] -= q * d[l];
        for (int i = 1; i < l; ++i) lam[kk][i] -= q * lam[l][i];
    };
    auto swap_k = [&](int kk) {
        std::swap(B(kk), B(kk - 1));
        for (int j = 1; j <= kk - 2; ++j) std::swap(lam[kk][j], lam[kk - 1][j]);
        mpz_class l = lam[kk][kk - 1];
        mpz_class Bv = exact_div(d[kk - 2] * d[kk] + l * l, d[kk - 1]);
        for (int i = kk + 1; i <= kmax; ++i) {
            mpz_class t = lam[i][kk];
            lam[i][kk] = exact_div(d[kk] * lam[i][kk - 1] - l * t, d[kk - 1]);
            lam[i][kk - 1] = exact_div(Bv * t + l * lam[i][kk], d[kk]);
        }
        d[kk - 1] = Bv;
    };

    while (k <= n) {
        if (k > kmax) {
            kmax = k;
            for (int j = 1; j <= k; ++j) {
                mpz_class u = dot(B(k), B(j));
                for (int i = 1; i < j; ++i) u = exact_div(d[i] * u - lam[k][i] * lam[j][i], d[i - 1]);
                if (j < k)
                    lam[k][j] = u;
                else {
                    d[k] = u;
                    if (u == 0) throw std::invalid_argument("lll_reduce: dependent rows");
                }
            }
        }
        red(k, k - 1);
        // Lovasz: d_k d_{k-2} >= delta d_{k-1}^2 - lam^2
        mpz_class lhs = delta_den * d[k] * d[k - 2];
        mpz_class rhs = delta_num * d[k - 1] * d[k - 1] - delta_den * lam[k][k - 1] * lam[k][k - 1];
        if (lhs < rhs) {
            swap_k(k);
            k = std::max(2, k - 1);
        } else {
            for (int l = k - 2; l >= 1; --l) red(k, l);
            ++k;
        }
    }
    return R;
}

bool is_lll_reduced(const IntegerLattice& L, long delta_num, long delta_den) {
    const size_t n = L.rank();
    std::vector<std::vector<mpq_class>> bs(n);
    std::vector<mpq_class> norms(n);
    std::vector<std::vector<mpq_class>> mu(n, std::vector<mpq_class>(n));
    for (size_t i = 0; i < n; ++i) {
        bs[i].assign(L.rows[i].begin(), L.rows[i].end());
        for (size_t j = 0; j < i; ++j) {
            mpq_class num = 0;
            for (size_t c = 0; c < L.dim(); ++c) num += mpq_class(L.rows[i][c]) * bs[j][c];
            mu[i][j] = num / norms[j];
            for (size_t c = 0; c < L.dim(); ++c) bs[i][c] -= mu[i][j] * bs[j][c];
        }
        norms[i] = 0;
        for (const auto& v : bs[i]) norms[i] += v * v;
        if (norms[i] == 0) return false;
    }
    mpq_class half(1, 2), delta(delta_num, delta_den);
    delta.canonicalize();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < i; ++j)
            if (abs(mu[i][j]) > half) return false;
    for (size_t k = 1; k < n; ++k)
        if (norms[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1]) return false;
    return true;
}

// ---------------------------------------------------------------- polynomials

mpz_class poly_height(const IntPoly& f) {
    mpz_class h = 0;
    for (const auto& c : f) h = std::max(h, mpz_class(abs(c)));
    return h;
}

std::string poly_str(const IntPoly& f) {
    std::ostringstream os;
    bool first = true;
    for (size_t i = f.size(); i-- > 0;) {
        if (f[i] == 0) continue;
        mpz_class c = f[i];
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        mpz_class a = abs(c);
        if (a != 1 || i == 0) os << a.get_str();
        if (i >= 1) os << "x";
        if (i >= 2) os << "^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

IntPoly poly_primitive(IntPoly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    if (f.empty()) return f;
    mpz_class g = 0;
    for (const auto& c : f) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    for (auto& c : f) c = exact_div(c, g);
    if (f.back() < 0)
        for (auto& c : f) c = -c;
    return f;
}

PadicScalar poly_eval(const IntPoly& f, const PadicScalar& x) {
    PadicScalar r = PadicScalar::zero(x.ctx());
    for (size_t i = f.size(); i-- > 0;) r = r * x + PadicScalar::from_int(x.ctx(), f[i]);
    return r;
}

bool poly_divides(const IntPoly& g0, const IntPoly& f0) {
    IntPoly g = poly_primitive(g0);
    if (g.empty()) return false;
    std::vector<mpq_class> r(f0.begin(), f0.end());
    while (!r.empty() && r.back() == 0) r.pop_back();
    const size_t dg = g.size() - 1;
    while (r.size() > dg && !r.empty()) {
        mpq_class q = r.back() / mpq_class(g.back());
        size_t shift = r.size() - 1 - dg;
        for (size_t i = 0; i <= dg; ++i) r[shift + i] -= q * mpq_class(g[i]);
        while (!r.empty() && r.back() == 0) r.pop_back();
    }
    return r.empty();
}

// ---------------------------------------------------------------- algdep

AlgdepResult algdep_padic(const PadicScalar& x0, int d, int budget, const mpz_class& height_bound) {
    if (d < 1) throw std::invalid_argument("algdep: degree must be >= 1");
    if (budget < 1) throw std::invalid_argument("algdep: budget must be >= 1");
    const auto& ctx = x0.ctx();
    AlgdepResult res;
    res.budget = budget;
    if (x0.is_zero()) {
        res.found = true;
        res.poly = {0, 1};
        res.degree = 1;
        res.height = 1;
        res.margin = INFINITY;
        res.vanishing = x0.abs_prec();
        res.note = "exact zero";
        return res;
    }
    // work with a p-integral number; a negative valuation is handled through 1/x and a reversed polynomial
    bool inverted = x0.valuation() < 0;
    PadicScalar x = inverted ? x0.inverse() : x0;
    if (x.abs_prec() < budget)
        throw std::invalid_argument("algdep: value known to " + std::to_string(x.abs_prec()) + " digits < budget " +
                                    std::to_string(budget));
    const mpz_class pB = ctx->ppow(budget);
    const mpz_class W = pB;
    const size_t n = static_cast<size_t>(d + 1);
    IntegerLattice L;
    PadicScalar xi = PadicScalar::one(ctx);
    for (size_t i = 0; i < n; ++i) {
        auto raw = xi.with_abs_prec(budget).to_raw_integral();
        std::vector<mpz_class> row(n + 2, 0);
        row[i] = 1;
        mpz_class a = raw.a % pB, b = raw.b % pB;
        row[n] = W * a;
        row[n + 1] = W * b;
        L.rows.push_back(row);
        xi = xi * x;
    }
    {
        std::vector<mpz_class> r1(n + 2, 0), r2(n + 2, 0);
        r1[n] = W * pB;
        r2[n + 1] = W * pB;
        L.rows.push_back(r1);
        L.rows.push_back(r2);
    }
    auto R = lll_reduce(L);
    // relation vectors ranked by their raw length (lower degree on ties); reported with powers of x divided out
    struct Cand {
        mpz_class norm;
        IntPoly f;
    };
    std::vector<Cand> kernel;
    for (const auto& row : R.rows) {
        if (row[n] != 0 || row[n + 1] != 0) continue;
        IntPoly f(row.begin(), row.begin() + static_cast<long>(n));
        mpz_class nn = 0;
        for (const auto& c : f) nn += c * c;
        while (!f.empty() && f.front() == 0) f.erase(f.begin());
        f = poly_primitive(f);
        if (f.size() < 2) continue;  // trivial relation c * x^k
        kernel.push_back({nn, f});
    }
    std::sort(kernel.begin(), kernel.end(), [](const Cand& u, const Cand& v) {
        return u.norm != v.norm ? u.norm < v.norm : u.f.size() < v.f.size();
    });
    if (kernel.empty()) {
        res.note = "no relation vector in the reduced basis";
        return res;
    }
    IntPoly f = kernel[0].f;
    if (inverted) {
        std::reverse(f.begin(), f.end());
        f = poly_primitive(f);
    }
    res.poly = f;
    res.degree = static_cast<int>(f.size()) - 1;
    res.height = poly_height(f);
    res.margin = kernel.size() > 1 ? std::sqrt(mpq_class(kernel[1].norm, kernel[0].norm).get_d()) : INFINITY;
    PadicScalar val = poly_eval(f, x0);
    res.vanishing = val.is_zero() ? val.abs_prec() : val.valuation();
    if (res.degree < 1) {
        res.note = "degenerate constant relation";
        return res;
    }
    if (height_bound != 0 && res.height > height_bound) {
        res.note = "shortest candidate height " + res.height.get_str() + " exceeds bound " + height_bound.get_str();
        return res;
    }
    res.found = true;
    return res;
}

AlgdepResult algdep_minimal(const PadicScalar& x, int d_max, int budget, double min_margin,
                            const mpz_class& height_bound) {
    AlgdepResult last;
    for (int d = 1; d <= d_max; ++d) {
        auto r = algdep_padic(x, d, budget, height_bound);
        if (r.found && r.margin >= min_margin) return r;
        last = r;
        if (last.found) {
            last.found = false;
            last.note = "degree " + std::to_string(d) + " candidate margin " + std::to_string(r.margin) +
                        " below " + std::to_string(min_margin);
        }
    }
    return last;
}

std::optional<PadicScalar> hensel_root(const IntPoly& f, const PadicCtx& ctx, bool allow_unramified) {
    if (f.size() < 2) return std::nullopt;
    IntPoly df;
    for (size_t i = 1; i < f.size(); ++i) df.push_back(f[i] * static_cast<long>(i));
    const long p = ctx->p();
    for (long b = 0; b < (allow_unramified ? p : 1); ++b)
        for (long a = 0; a < p; ++a) {
            if (a == 0 && b == 0) continue;
            PadicScalar r = PadicScalar::from_int(ctx, a) + PadicScalar::omega(ctx).scaled(b);
            PadicScalar fr = poly_eval(f, r), dfr = poly_eval(df, r);
            if (!(fr.is_zero() || fr.valuation() >= 1)) continue;
            if (dfr.is_zero() || dfr.valuation() != 0) continue;
            for (int it = 0; it < 64; ++it) {
                PadicScalar step = poly_eval(f, r) / poly_eval(df, r);
                if (step.is_zero() || step.valuation() >= ctx->N()) break;
                r = r - step;
            }
            return r.with_abs_prec(ctx->N());
        }
    return std::nullopt;
}

}  // namespace rmlab
