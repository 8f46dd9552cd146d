#pragma once

#include <gmpxx.h>

#include <vector>

#include "rmlab/arith.hpp"
#include "rmlab/padic.hpp"
#include "rmlab/quadfield.hpp"

namespace rmlab {

// Dedekind sum s(h, k) = sum_{i mod k} ((i/k)) ((h i/k)), k > 0.
mpq_class dedekind_sum(i64 h, i64 k);
// Same quantity by the defining finite sum (oracle for small k).
mpq_class dedekind_sum_naive(i64 h, i64 k);

// Rademacher function: log Delta(gz) - log Delta(z) = 12 log(cz + d) + 2 pi i Phi(g).
// Phi(g) = b/d for c = 0, (a + d)/c - 12 sign(c) s(d, |c|) otherwise. Integer valued.
i64 rademacher_phi(const Mat2& g);

// Dedekind-Rademacher homomorphism on Gamma_0(p): 2 (Phi(g_p) - Phi(g)), g_p = [[a, p b], [c / p, d]].
i64 phi_DR(const Mat2& g, long p);

// Integer-valued measure on the balls v + p^m Z_p^2, v primitive mod p^m.
struct BallMeasure {
    long p = 0;
    int level = 0;
    i64 pm = 0;                 // p^level
    std::vector<i64> values;    // index a * pm + b; non-primitive slots are zero
    bool p_invariant = true;    // extended to Q_p^2 - 0 by scaling invariance

    i64 at(i64 a, i64 b) const { return values.at(static_cast<size_t>(pos_mod(a, pm) * pm + pos_mod(b, pm))); }
    i64 total() const;                      // mass of X_0 (all primitive vectors)
    i64 mass_p_times_unit() const;          // mass of p Z_p x Z_p^x
    BallMeasure coarsened(int level) const; // push forward to a coarser level (sums of children)
    bool operator==(const BallMeasure& o) const { return level == o.level && values == o.values; }
};

// Letters of an SL_2(Z) word: S = [[0,-1],[1,0]], T^k, and -I.
struct WordLetter {
    enum Kind { S, T, NegI } kind;
    i64 k = 1;  // exponent for T
};
std::vector<WordLetter> sl2z_word(const Mat2& g);  // g = product of letters, left to right
Mat2 word_product(const std::vector<WordLetter>& w);

// The Dedekind-Rademacher measure mu_DR(g) at level m, realized through periods of Siegel units
// c g_{a/p^m, b/p^m} at the base point z = i. For p >= 7 the auxiliary integer is c = 5; for p = 5
// the combination 3 * (c = 7) - (c = 11) is used (same normalization c^2 - 1 = 24).
class SiegelMeasure {
public:
    static constexpr int kMaxLevel = 5;

    SiegelMeasure(long p, int level);
    long p() const { return p_; }
    int level() const { return m_; }
    i64 pm() const { return pm_; }

    // mu_DR(g)(v + p^m Z_p^2) for g in SL_2(Z), v = (a, b) primitive.
    i64 ball(const Mat2& g, i64 a, i64 b) const;
    BallMeasure measure(const Mat2& g) const;

    // Raw generator periods, exposed for tests (oriented as mu_DR).
    i64 letter(WordLetter::Kind kind, i64 a, i64 b) const;
    // Largest distance of a generator period to the nearest integer seen while building.
    double max_rounding_error() const { return max_err_; }

private:
    long p_;
    int m_;
    i64 pm_;
    std::vector<i64> muS_, muT_, muN_;
    double max_err_ = 0;
    size_t idx(i64 a, i64 b) const { return static_cast<size_t>(pos_mod(a, pm_) * pm_ + pos_mod(b, pm_)); }
    i64 letter_value(const WordLetter& l, i64 a, i64 b) const;
};

// Multiplicative Poisson transform J(mu)(tau) = prod over level-M balls (a tau + b)^{mu(ball)}, with integer
// sample points (a, b) in [0, p^M)^2 and mu = mu_DR(gamma_tau).
struct PoissonResult {
    PadicScalar value;       // J, unit part after pinning the valuation (torsion not removed)
    PadicScalar log_value;   // Iwasawa log of J
    int level = 0;
    i64 total_mass = 0;
    i64 balls = 0;
    Mat2 gamma;
};
PoissonResult poisson_JDR(const QuadForm& tau, int level, const QuadEmbedding& emb);

}  // namespace rmlab
