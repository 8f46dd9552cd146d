#pragma once

#include <functional>
#include <vector>

#include "rmlab/padic.hpp"
#include "rmlab/quadfield.hpp"

namespace rmlab {

// nu = alpha/sqrtD with alpha = (x + n sqrtD)/2, so (nu) d = (alpha) and Tr(nu) = n.
// The narrow class of (alpha) is the class of the different, since N(alpha) < 0.

// Sum over ideals p !| I | (nu) d of psi(I).
long sigma_psi(const NarrowClassGroup& G, const Character& psi, i64 x, i64 n, i64 p);

// Which first-order Eisenstein family: (eta, phi) = (1, psi) or (psi, 1).
enum class EisFamily { OnePsi, PsiOne };

// sum_{p !| I | (nu) d} eta((nu) d / I) phi(I) (1 + eps log Nm(I)); constant term excluded.
DualScalar eis_family_coeff(const NarrowClassGroup& G, const Character& psi, EisFamily fam, i64 x, i64 n,
                            const QuadEmbedding& emb);

// sum_{I | (nu) d} psi(I) (1 + eps(-log nu + (L1/L) log Nm I + (L2/L) log Nm((nu) d / I))), L = L1 + L2; p !| nu.
DualScalar antiparallel_coeff(const NarrowClassGroup& G, const Character& psi, i64 x, i64 n, const PadicScalar& L1,
                              const PadicScalar& L2, const QuadEmbedding& emb);

// sum_{I | (nu_0) d} psi(I) (1 - eps log(nu_0 / Nm I)), nu_0 = nu / p^{v_p(nu)}.
DualScalar dual_coeff_Fplus(const NarrowClassGroup& G, const Character& psi, i64 x, i64 n, const QuadEmbedding& emb);

// Coefficient a_k = -sum_{Tr nu = k} sum_{p !| I | (nu_0) d} psi(I) log(nu_0 sqrtD / Nm I) of the derivative of
// the diagonal restriction. With drop_sqrtD the log(sqrtD) term is omitted (it sums to zero).
PadicScalar diag_coefficient(const NarrowClassGroup& G, const Character& psi, i64 k, const QuadEmbedding& emb,
                             bool drop_sqrtD = false);

// a_1 .. a_nmax (a_0 is an unknown slot, returned as zero with its `known` flag false).
struct DiagSeries {
    std::vector<PadicScalar> coeffs;  // index 0 unused
    bool constant_known = false;
};
DiagSeries diag_restrict_derivative(const NarrowClassGroup& G, const Character& psi, i64 nmax,
                                    const QuadEmbedding& emb, int threads = 1);

// lim_m a_{n p^{2m}} computed for m = 0..m_max.
struct OrdinaryProjection {
    std::vector<PadicScalar> terms;  // a_{n p^{2m}}, m = 0..m_max
    PadicScalar value;               // last term
    int certificate = 0;             // valuation of the last consecutive difference
    bool stabilized = false;         // certificate >= threshold
    std::vector<int> profile;        // valuations of consecutive differences
};
// Throws std::runtime_error (convergence) if threshold > 0 and the certificate falls below it.
OrdinaryProjection ordinary_projection(const std::function<PadicScalar(i64)>& coeff, i64 n, i64 p, int m_max,
                                       int threshold);

}  // namespace rmlab
