#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "rmlab/padic.hpp"

namespace rmlab {

// Integer lattice given by a basis in the rows of `rows`.
struct IntegerLattice {
    std::vector<std::vector<mpz_class>> rows;

    size_t rank() const { return rows.size(); }
    size_t dim() const { return rows.empty() ? 0 : rows[0].size(); }
    std::vector<std::vector<mpz_class>> gram() const;
    mpz_class gram_determinant() const;  // det(B B^T), exact
};

// Exact-integer LLL (integral Gram-Schmidt); delta = num/den with 1/4 < delta < 1.
// Throws std::invalid_argument on linearly dependent rows.
IntegerLattice lll_reduce(const IntegerLattice& L, long delta_num = 99, long delta_den = 100);
// Checks size reduction (|mu_ij| <= 1/2) and the Lovasz condition at delta, exactly.
bool is_lll_reduced(const IntegerLattice& L, long delta_num = 99, long delta_den = 100);

// Integer polynomial c_0 + c_1 x + ... + c_d x^d.
using IntPoly = std::vector<mpz_class>;

mpz_class poly_height(const IntPoly& f);
std::string poly_str(const IntPoly& f);
IntPoly poly_primitive(IntPoly f);  // divide by content, leading coefficient positive, trailing zeros trimmed
PadicScalar poly_eval(const IntPoly& f, const PadicScalar& x);
// True iff g divides f in Q[x].
bool poly_divides(const IntPoly& g, const IntPoly& f);

struct AlgdepResult {
    bool found = false;
    IntPoly poly;              // primitive, leading coefficient positive
    int degree = 0;
    mpz_class height;
    double margin = 0;         // |second shortest| / |shortest| among kernel vectors of the reduced basis
    int budget = 0;
    int vanishing = 0;         // valuation of poly(x) (>= budget by construction when found)
    std::string note;
};

// Smallest-height integer polynomial of degree <= d with sum c_i x^i = 0 mod p^budget in both Z_p-coordinates
// of Q_{p^2} = Q_p + Q_p w. x must be p-integral and known to absolute precision >= budget.
// Candidates above `height_bound` (if nonzero) are reported as not found.
AlgdepResult algdep_padic(const PadicScalar& x, int d, int budget, const mpz_class& height_bound = 0);

// Runs algdep for degree 1, 2, ..., d_max and returns the first hit whose margin exceeds `min_margin`
// (the minimal polynomial shows up at its own degree with a large margin; multiples at higher degree do not).
AlgdepResult algdep_minimal(const PadicScalar& x, int d_max, int budget, double min_margin,
                            const mpz_class& height_bound = 0);

// Hensel-lifted root in Z_{p^2} of f starting from a simple root mod p (for planted-instance tests).
std::optional<PadicScalar> hensel_root(const IntPoly& f, const PadicCtx& ctx, bool allow_unramified = true);

}  // namespace rmlab
