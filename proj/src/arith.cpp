#include "rmlab/arith.hpp"

#include <cmath>
#include <stdexcept>

namespace rmlab {

i64 isqrt(i64 n) {
    if (n < 0) throw std::domain_error("isqrt of negative number");
    i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<i128>(r) * r > n) --r;
    while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(i64 n) {
    if (n < 0) return false;
    i64 r = isqrt(n);
    return r * r == n;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    for (i64 d = 5; d * d <= n; d += 6)
        if (n % d == 0 || n % (d + 2) == 0) return false;
    return true;
}

i64 gcd(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i64 pos_mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 mul_mod(i64 a, i64 b, i64 m) {
    return static_cast<i64>(static_cast<i128>(pos_mod(a, m)) * pos_mod(b, m) % m);
}

i64 pow_mod(i64 a, i64 e, i64 m) {
    i64 r = 1 % m;
    a = pos_mod(a, m);
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

i64 inv_mod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, a1 = pos_mod(a, m);
    while (a1) {
        i64 q = g / a1;
        i64 t = g - q * a1;
        g = a1;
        a1 = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw std::domain_error("inv_mod: not invertible");
    return pos_mod(x, m);
}

int kronecker(i64 D, i64 n) {
    if (n <= 0) throw std::domain_error("kronecker: n must be positive");
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (D % 2 == 0) return 0;
        i64 r = pos_mod(D, 8);
        if (r == 3 || r == 5) result = -result;
    }
    // Jacobi symbol (D | n) for odd n
    i64 a = pos_mod(D, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

i64 sqrt_mod_prime(i64 a, i64 p) {
    a = pos_mod(a, p);
    if (a == 0) return 0;
    if (p == 2) return a;
    if (pow_mod(a, (p - 1) / 2, p) != 1) throw std::domain_error("sqrt_mod_prime: non-residue");
    if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    i64 z = 2;
    while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
    i64 m = s, c = pow_mod(z, q, p), t = pow_mod(a, q, p), r = pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
        i64 i = 0, tt = t;
        while (tt != 1) {
            tt = mul_mod(tt, tt, p);
            ++i;
        }
        i64 b = c;
        for (i64 j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    return r;
}

int valuation(i64 n, i64 p) {
    if (n == 0) throw std::domain_error("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

int sign(i64 x) { return (x > 0) - (x < 0); }

std::vector<std::pair<i64, int>> factorize(i64 n) {
    std::vector<std::pair<i64, int>> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    for (i64 d : {2, 3}) {
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e) out.emplace_back(d, e);
    }
    for (i64 d = 5; d * d <= n; d += 6) {
        for (i64 q : {d, d + 2}) {
            int e = 0;
            while (n % q == 0) {
                n /= q;
                ++e;
            }
            if (e) out.emplace_back(q, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<i64> primes_up_to(i64 n) {
    std::vector<i64> ps;
    if (n < 2) return ps;
    std::vector<bool> comp(static_cast<size_t>(n + 1), false);
    for (i64 i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        ps.push_back(i);
        for (i64 j = i * i; j <= n; j += i) comp[j] = true;
    }
    return ps;
}

bool is_fundamental_discriminant(i64 D) {
    if (D == 0 || D == 1) return false;
    i64 m = pos_mod(D, 4);
    auto squarefree = [](i64 x) {
        if (x < 0) x = -x;
        for (auto& [q, e] : factorize(x))
            if (e > 1) return false;
        return true;
    };
    if (m == 1) return squarefree(D);
    if (m == 0) {
        i64 d = D / 4;
        i64 r = pos_mod(d, 4);
        return (r == 2 || r == 3) && squarefree(d);
    }
    return false;
}

i64 sigma_prime_to(i64 n, i64 p) {
    i64 s = 0;
    for (i64 d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        if (d % p) s += d;
        i64 e = n / d;
        if (e != d && e % p) s += e;
    }
    return s;
}

}  // namespace rmlab
