#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rmlab/padic.hpp"
#include "rmlab/quadfield.hpp"

namespace rmlab {

// Sign of x + y sqrt(D) (exact).
int sign_quad(i64 x, i64 y, i64 D);

// A point w = (x + y sqrt D)/den of F with an intersection weight, plus where it came from.
struct WeightedRMPoint {
    enum class Source { IdealPair, Coset };

    i64 x = 0, y = 0, den = 1;  // canonical: den > 0, gcd(x, y, den) = 1
    int weight = 0;             // +1 iff w > 0 > w', -1 iff w' > 0 > w
    Source source = Source::IdealPair;
    // ideal-pair provenance: w = +-nu_0 sqrtD / Nm(I), alpha = nu sqrtD = (alpha_x + alpha_n sqrtD)/2
    IdealF ideal;
    i64 alpha_x = 0, alpha_n = 0;
    // coset provenance: w is the first root of `form`, a translate of delta*tau
    Mat2 delta;
    QuadForm form;

    static WeightedRMPoint make(i64 x, i64 y, i64 den);
    int sign(i64 D) const { return sign_quad(x, y, D) * (den > 0 ? 1 : -1); }
    int sign_conj(i64 D) const { return sign_quad(x, -y, D) * (den > 0 ? 1 : -1); }
    bool same_value(const WeightedRMPoint& o) const { return x == o.x && y == o.y && den == o.den; }
    std::string str() const;
};

// Sort key (value, weight) so two multisets can be compared exactly.
bool point_less(const WeightedRMPoint& a, const WeightedRMPoint& b);

// Intersection number [0, inf] . (w', w): +1 if w' < 0 < w, -1 if w < 0 < w', 0 otherwise.
int intersection_weight(const WeightedRMPoint& w, i64 D);

// RM_n^+(tau): pairs (I, nu) with Tr nu = n, p !| I | (nu) d, I in the class of (1, tau); w = nu_0 sqrtD / Nm I.
std::vector<WeightedRMPoint> rm_plus_set(const NarrowClassGroup& G, const QuadForm& tau, i64 n, i64 p);
// RM_n^-(tau) = -RM_n^+(-tau) with weight -1.
std::vector<WeightedRMPoint> rm_minus_set(const NarrowClassGroup& G, const QuadForm& tau, i64 n, i64 p);

// Iwasawa log of the point (sign ignored: log(-1) = 0).
PadicScalar log_point(const WeightedRMPoint& w, const QuadEmbedding& emb);
// Sum of weight * log(w).
PadicScalar weighted_log_sum(const std::vector<WeightedRMPoint>& pts, const QuadEmbedding& emb);

// log T_n J_w [tau] for p !| n straight from the two sets (slow reference path).
PadicScalar log_Tn_Jw(const NarrowClassGroup& G, const QuadForm& tau, i64 n, const QuadEmbedding& emb);

// Double-coset route: HNF representatives of det-n matrices modulo the automorph, and for each
// the points of the SL2(Z)-orbit of delta*tau with opposite-sign embeddings and p-adic unit value.
// The enumeration of forms with AC < 0 of a fixed discriminant is finite and exhaustive, so no
// height bound is needed and the result is always authoritative.
struct CosetResult {
    std::vector<Mat2> representatives;  // M_n(tau)
    std::vector<WeightedRMPoint> points;
    bool authoritative = true;
};
CosetResult rm_set_by_cosets(const NarrowClassGroup& G, const QuadForm& tau, i64 n, i64 p);
// All HNF matrices [[a, b], [0, d]] with ad = n, 0 <= b < d.
std::vector<Mat2> hnf_matrices(i64 n);
// Left-SL2(Z) Hermite normal form of an integer matrix of positive determinant.
Mat2 left_hnf(const Mat2& m);

// ---------------------------------------------------------------- fast class sums
//
// For a trace k, S(k, C) = sum over p-primitive alpha = (x + k sqrtD)/2 with alpha >> 0 relative to sqrtD
// (i.e. nu = alpha/sqrtD totally positive, Tr nu = k) of sum over ideals I | (alpha) in class C of
// log(alpha) - log Nm(I). Norms are factored with a quadratic sieve over x; logs are taken once per class
// on accumulated products (log is a homomorphism on units, so this is exact).
class ClassLogSums {
public:
    ClassLogSums(const NarrowClassGroup& G, const QuadEmbedding& emb, int threads = 1);

    // Compute (and cache) S(k, .) for all the given traces, in parallel.
    void precompute(const std::vector<i64>& ks);
    // S(k, C) for all classes C (computes on demand).
    const std::vector<PadicScalar>& at(i64 k);
    // Number of (alpha, I) pairs per class that entered S(k, .).
    const std::vector<i64>& counts(i64 k);

    const NarrowClassGroup& group() const { return G_; }
    const QuadEmbedding& embedding() const { return emb_; }

private:
    struct Entry {
        std::vector<PadicScalar> sums;
        std::vector<i64> counts;
    };
    Entry compute(i64 k) const;
    const NarrowClassGroup& G_;
    const QuadEmbedding& emb_;
    int threads_;
    std::vector<i64> primes_;
    std::map<i64, Entry> cache_;
    std::mutex mu_;
    friend struct ClassSumWorker;
};

// log T_n J_w[tau] truncated at p-conductor depth K: sum over t <= K + v_p(n) of S(n' p^t, [tau]) - S(n' p^t, [-tau]),
// n' = n / p^{v_p(n)}. Depth 0 with p !| n is exactly log_Tn_Jw.
PadicScalar log_Tn_Jw_depth(ClassLogSums& sums, const QuadForm& tau, i64 n, int K);

// a_1..a_nmax (index 0 is left as zero) of the winding series at depth K.
std::vector<PadicScalar> winding_series(ClassLogSums& sums, const QuadForm& tau, i64 nmax, int K);

// Limit estimate of a sequence by Wynn's epsilon algorithm (last entry of the highest even column reached).
// A zero difference ends the table early; a single term is returned unchanged.
PadicScalar wynn_epsilon(const std::vector<PadicScalar>& s);

// The depth-K truncation error of the winding sums is close to geometric in K (ratio of valuation 2), so the
// layers K' = 0..K are extrapolated coefficientwise to K -> infinity. `raw` is the plain depth-K series.
struct AcceleratedSeries {
    std::vector<PadicScalar> raw;
    std::vector<PadicScalar> accelerated;
};
AcceleratedSeries winding_series_accelerated(ClassLogSums& sums, const QuadForm& tau, i64 nmax, int K);

}  // namespace rmlab
