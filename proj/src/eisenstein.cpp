#include "rmlab/eisenstein.hpp"

#include <atomic>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rmlab {

namespace {

int psi_of(const Character& psi, int cls) { return psi.at(static_cast<size_t>(cls)); }

// class of (nu) d / I given the class of I
int cofactor_class(const NarrowClassGroup& G, int cls_I) {
    return G.compose(G.different_class(), G.inverse(cls_I));
}

PadicScalar log_norm(const QuadEmbedding& emb, i64 norm) { return emb.log(norm, 0, 1); }

PadicScalar dual_zero(const QuadEmbedding& emb) { return PadicScalar::zero(emb.ctx(), emb.ctx()->N()); }

}  // namespace

long sigma_psi(const NarrowClassGroup& G, const Character& psi, i64 x, i64 n, i64 p) {
    long s = 0;
    for (const auto& d : ideal_divisors(G, x, n, p)) s += psi_of(psi, d.cls);
    return s;
}

DualScalar eis_family_coeff(const NarrowClassGroup& G, const Character& psi, EisFamily fam, i64 x, i64 n,
                            const QuadEmbedding& emb) {
    const auto& ctx = emb.ctx();
    long a = 0;
    PadicScalar b = dual_zero(emb);
    for (const auto& d : ideal_divisors(G, x, n, ctx->p())) {
        int w = fam == EisFamily::OnePsi ? psi_of(psi, d.cls) : psi_of(psi, cofactor_class(G, d.cls));
        a += w;
        if (d.norm != 1) b += log_norm(emb, d.norm).scaled(w);
    }
    return {PadicScalar::from_int(ctx, a), b};
}

DualScalar antiparallel_coeff(const NarrowClassGroup& G, const Character& psi, i64 x, i64 n, const PadicScalar& L1,
                              const PadicScalar& L2, const QuadEmbedding& emb) {
    const auto& ctx = emb.ctx();
    const long p = ctx->p();
    if (x % p == 0 && n % p == 0) throw std::invalid_argument("antiparallel_coeff needs p !| nu");
    PadicScalar L = L1 + L2;
    if (L.is_zero() || L.valuation() >= ctx->N())
        throw std::domain_error("degenerate L-invariant: L1 + L2 vanishes at working precision");
    PadicScalar r1 = L1 / L, r2 = L2 / L;
    i64 normA = (n * n * G.D() - x * x) / 4;  // |Nm((nu) d)|
    PadicScalar log_nu = emb.log(x, n, 2) - emb.log(G.D(), 0, 1) / PadicScalar::from_int(ctx, 2);
    long a = 0;
    PadicScalar b = dual_zero(emb);
    for (const auto& d : ideal_divisors(G, x, n, p)) {
        int w = psi_of(psi, d.cls);
        a += w;
        PadicScalar t = -log_nu + r1 * log_norm(emb, d.norm) + r2 * log_norm(emb, normA / d.norm);
        b += t.scaled(w);
    }
    return {PadicScalar::from_int(ctx, a), b};
}

DualScalar dual_coeff_Fplus(const NarrowClassGroup& G, const Character& psi, i64 x, i64 n, const QuadEmbedding& emb) {
    const auto& ctx = emb.ctx();
    const long p = ctx->p();
    i64 x0 = x, n0 = n;
    while (x0 % p == 0 && n0 % p == 0) {
        x0 /= p;
        n0 /= p;
    }
    PadicScalar log_nu0 = emb.log(x0, n0, 2) - emb.log(G.D(), 0, 1) / PadicScalar::from_int(ctx, 2);
    long a = 0;
    PadicScalar b = dual_zero(emb);
    for (const auto& d : ideal_divisors(G, x0, n0, p)) {
        int w = psi_of(psi, d.cls);
        a += w;
        b -= (log_nu0 - log_norm(emb, d.norm)).scaled(w);
    }
    return {PadicScalar::from_int(ctx, a), b};
}

PadicScalar diag_coefficient(const NarrowClassGroup& G, const Character& psi, i64 k, const QuadEmbedding& emb,
                             bool drop_sqrtD) {
    const auto& ctx = emb.ctx();
    const long p = ctx->p();
    PadicScalar total = dual_zero(emb);
    PadicScalar log_sqrtD = emb.log(G.D(), 0, 1) / PadicScalar::from_int(ctx, 2);
    std::map<i64, PadicScalar> norm_logs;
    for (const auto& e : enumerate_trace(k, G.D(), p)) {
        long s = 0;
        PadicScalar norms = dual_zero(emb);
        for (const auto& d : ideal_divisors(G, e.x0, e.n0, p)) {
            int w = psi_of(psi, d.cls);
            s += w;
            if (d.norm == 1) continue;
            auto it = norm_logs.find(d.norm);
            if (it == norm_logs.end()) it = norm_logs.emplace(d.norm, log_norm(emb, d.norm)).first;
            norms += it->second.scaled(w);
        }
        if (s == 0 && norms.is_zero()) continue;
        // log(nu_0 sqrtD) = log(alpha_0)
        PadicScalar la = emb.log(e.x0, e.n0, 2);
        if (drop_sqrtD) la -= log_sqrtD;
        total -= la.scaled(s) - norms;
    }
    return total;
}

DiagSeries diag_restrict_derivative(const NarrowClassGroup& G, const Character& psi, i64 nmax,
                                    const QuadEmbedding& emb, int threads) {
    DiagSeries out;
    out.coeffs.assign(static_cast<size_t>(nmax + 1), dual_zero(emb));
    std::atomic<i64> next{1};
    auto work = [&]() {
        for (i64 n = next++; n <= nmax; n = next++) out.coeffs[static_cast<size_t>(n)] = diag_coefficient(G, psi, n, emb);
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return out;
}

OrdinaryProjection ordinary_projection(const std::function<PadicScalar(i64)>& coeff, i64 n, i64 p, int m_max,
                                       int threshold) {
    if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
    OrdinaryProjection res;
    i64 k = n;
    for (int m = 0; m <= m_max; ++m) {
        res.terms.push_back(coeff(k));
        if (m > 0) res.profile.push_back(res.terms[static_cast<size_t>(m)].val_diff(res.terms[static_cast<size_t>(m - 1)]));
        k *= p * p;
    }
    res.value = res.terms.back();
    res.certificate = res.profile.empty() ? res.value.abs_prec() : res.profile.back();
    res.stabilized = res.certificate >= threshold;
    if (threshold > 0 && !res.stabilized) {
        std::ostringstream os;
        os << "ordinary projection did not stabilize at n = " << n << ": difference valuations";
        for (int v : res.profile) os << " " << v;
        os << " (threshold " << threshold << ")";
        throw std::runtime_error(os.str());
    }
    return res;
}

}  // namespace rmlab
