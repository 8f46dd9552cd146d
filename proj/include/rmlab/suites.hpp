#pragma once

#include <cstdint>

#include "rmlab/quadfield.hpp"
#include "rmlab/report.hpp"

namespace rmlab {

// Randomized and exhaustive property suites shared by `rmlab verify` and the acceptance run.
// Each returns a JSON table plus an overall verdict; nothing is cached.
struct SuiteResult {
    bool pass = true;
    json table = json::object();
};

// Ring laws, log/exp and Frobenius in Q_{p^2} on `cases` random inputs each.
SuiteResult suite_padic(long p, int N, int cases, std::uint64_t seed);

// Double-coset enumeration against the ideal-pair sets, as weighted point multisets and as log sums, n = 1..nmax.
SuiteResult suite_bijections(const NarrowClassGroup& G, const QuadForm& tau, i64 nmax, const QuadEmbedding& emb);

// Sum over Tr nu = n of sigma_psi(nu) for every odd psi and n = 1..nmax (exact integers), with and without
// the p-coprimality restriction on the ideals.
SuiteResult suite_vanishing(const NarrowClassGroup& G, i64 nmax, long p);

// Measure identities for `count` pseudorandom gamma in Gamma_0(p) with entries of size <= max_entry:
// total mass zero, mass of pZ_p x Z_p^x equal to phi_DR(gamma), the homomorphism property on `count` pairs
// and phi_DR(T) = 2(p - 1).
SuiteResult suite_measure(long p, int count, i64 max_entry, std::uint64_t seed, int level = 1);

// Pseudorandom element of Gamma_0(p) with |c|, |d| <= max_entry (|a| < |c|, |b| <= |d| when c != 0).
Mat2 random_gamma0(long p, i64 max_entry, std::uint64_t& state);

}  // namespace rmlab
