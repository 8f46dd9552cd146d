#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace rmlab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

// Small integer helpers shared by the number-theoretic modules.

i64 isqrt(i64 n);                      // floor(sqrt(n)), n >= 0
bool is_square(i64 n);
bool is_prime(i64 n);
i64 gcd(i64 a, i64 b);                 // non-negative
i64 floor_div(i64 a, i64 b);
i64 pos_mod(i64 a, i64 m);             // result in [0, m)
i64 mul_mod(i64 a, i64 b, i64 m);
i64 pow_mod(i64 a, i64 e, i64 m);
i64 inv_mod(i64 a, i64 m);             // throws if not invertible
int kronecker(i64 D, i64 n);           // Kronecker symbol (D | n), n > 0
i64 sqrt_mod_prime(i64 a, i64 p);      // a square mod odd prime p; returns root in [0,p)
int valuation(i64 n, i64 p);           // v_p(n), n != 0
int sign(i64 x);

// Trial-division factorization; fine for |n| up to ~1e12 at desk scale.
std::vector<std::pair<i64, int>> factorize(i64 n);

// All primes <= n (Eratosthenes).
std::vector<i64> primes_up_to(i64 n);

// Fundamental discriminant test (D > 1 assumed for the callers here).
bool is_fundamental_discriminant(i64 D);

// Sum of divisors of n not divisible by p.
i64 sigma_prime_to(i64 n, i64 p);

}  // namespace rmlab
