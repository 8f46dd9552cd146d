#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "rmlab/lattice.hpp"
#include "rmlab/padic.hpp"
#include "rmlab/quadfield.hpp"

namespace rmlab {

// sigma -> ord_{p^sigma}(u_tau) = -zeta(C_tau * sigma, 0); classes label their own Galois images.
std::vector<mpq_class> valuation_predictions(const NarrowClassGroup& G, int tau_cls);

struct UnitCandidate {
    PadicScalar value;               // p^pinned * zeta^twist * exp(12 a_0), a candidate for u_tau^12
    long pinned_valuation = 0;       // 12 * prediction at the identity
    int twist = 0;                   // exponent of the chosen generator of the (p^2 - 1)-th roots of unity
    bool degenerate = false;         // a_0 = 0: only torsion * p^Z
    std::optional<AlgdepResult> recognized;
};

// Generator of mu_{p^2 - 1} in Q_{p^2} (Teichmuller lift of a generator of F_{p^2}^x).
PadicScalar torsion_generator(const PadicCtx& ctx);

// All p^2 - 1 twists. Throws std::domain_error if v(12 a_0) < 1 (exp does not converge: broken fit).
std::vector<UnitCandidate> unit_from_constant_term(const PadicScalar& a0, const NarrowClassGroup& G, int tau_cls);

// Root valuations of f at p, read off the Newton polygon (with multiplicity, sorted).
std::vector<mpq_class> newton_root_valuations(const IntPoly& f, long p);
// f has deg f distinct roots modulo ell (ell prime, not dividing the leading coefficient).
bool splits_completely_mod(const IntPoly& f, i64 ell);
// f(x) = +- x^d f(1/x)
bool is_reciprocal(const IntPoly& f);
// First `count` primes splitting completely in Q(sqrt 3, sqrt -1) (that is, ell = 1 mod 12), excluding `avoid`.
std::vector<i64> genus_field_split_primes(int count, const mpz_class& avoid);

struct RecognitionReport {
    bool success = false;
    int twist = -1;
    UnitCandidate unit;
    AlgdepResult algdep;
    int twists_tried = 0;
    int twists_passing = 0;          // twists recognized above the margin threshold
    std::vector<double> margins;     // per twist (best margin found, 0 when nothing)
    std::vector<mpq_class> newton;   // root valuations of the recognized polynomial
    std::vector<mpq_class> predicted;  // 12 * predictions, repeated deg / h times
    bool newton_ok = false;
    bool reciprocal_ok = false;
    int field_primes = 0;
    int field_split = 0;
    bool field_checked = false;      // only for D = 12 (genus field shortcut)
    bool field_ok = false;
    std::string note;
};

// Runs algdep (degrees 1..deg_bound) over all twists; picks the passing twist of least degree, then least height.
RecognitionReport recognize(const std::vector<UnitCandidate>& cands, const NarrowClassGroup& G, int tau_cls,
                            int deg_bound, int budget, double min_margin, int aux_primes = 50);

struct LInvariants {
    PadicScalar L1, L2, L;           // partial L-invariants and their sum
    PadicScalar log1, log2;          // log of the two embeddings of u_psi^12
    mpq_class ord1, ord2;            // their valuations
    mpq_class L_psi_0;               // L(psi, 0) = sum psi(C) zeta(C, 0)
    bool gross_stark_ok = false;     // L_j L(psi, 0) = log(u_psi) in both embeddings
    int gross_stark_precision = 0;
};

// u_psi^12 = prod_sigma sigma(u_tau^12)^{psi(sigma^-1)}, with the Gal(H/F)-conjugate of the recognized unit taken as
// the other root of its quadratic minimal polynomial (h+ = 2); the second embedding is the Frobenius conjugate.
LInvariants l_invariants_from_unit(const RecognitionReport& rec, const NarrowClassGroup& G, const Character& psi,
                                   int tau_cls);

}  // namespace rmlab
