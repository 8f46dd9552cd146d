#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rmlab/arith.hpp"
#include "rmlab/padic.hpp"

namespace rmlab {

// 2x2 integer matrix [[a, b], [c, d]].
struct Mat2 {
    i64 a = 1, b = 0, c = 0, d = 1;
    i64 det() const { return a * d - b * c; }
    i64 trace() const { return a + d; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 adjugate() const { return {d, -b, -c, a}; }  // inverse when det = 1
    bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
    std::string str() const;
};

// Primitive integral binary quadratic form A x^2 + B xy + C y^2 of discriminant B^2 - 4AC.
// The associated RM point is its first root tau = (-B + sqrt(disc)) / (2A).
struct QuadForm {
    i64 A = 0, B = 0, C = 0;
    i64 disc() const { return B * B - 4 * A * C; }
    bool primitive() const { return gcd(gcd(A, B), C) == 1; }
    bool operator==(const QuadForm& o) const { return A == o.A && B == o.B && C == o.C; }
    bool operator<(const QuadForm& o) const {
        return std::array<i64, 3>{A, B, C} < std::array<i64, 3>{o.A, o.B, o.C};
    }
    // Form whose first root is gamma * tau (Moebius action): f(dx - by, -cx + ay).
    QuadForm act(const Mat2& g) const;
    // f(M(x, y)), i.e. act(M^{-1}).
    QuadForm compose_right(const Mat2& M) const;
    QuadForm negated_root() const { return {-A, B, -C}; }  // first root is -tau
    std::string str() const;
};

// Throws std::invalid_argument naming the violated invariant.
QuadForm make_form(i64 A, i64 B, i64 C);

// Reduction of indefinite forms (0 < B < sqrt D, sqrt D - B < 2|A| < sqrt D + B).
bool is_reduced(const QuadForm& f);
// One reduction step rho: f -> f o [[0,-1],[1,t]] with t chosen so the new middle coefficient is normalized.
QuadForm rho(const QuadForm& f, Mat2* step = nullptr);
// Reduce f to a reduced form; if transform != nullptr, stores M with reduced = f.compose_right(M).
QuadForm reduce_form(const QuadForm& f, Mat2* transform = nullptr);
// The rho-cycle of reduced forms proper-equivalent to f (starting at reduce_form(f)).
std::vector<QuadForm> reduce_cycle(const QuadForm& f);
// Proper (SL2(Z)) equivalence of forms of any non-square positive discriminant.
bool properly_equivalent(const QuadForm& f, const QuadForm& g);

// Fundamental solution (t, u), t, u > 0, of t^2 - D u^2 = 4.
std::pair<i64, i64> pell4(i64 D);
// Generator gamma_tau = [[(t - Bu)/2, -Cu], [Au, (t + Bu)/2]] of the stabiliser of the first root.
Mat2 automorph(const QuadForm& f);
// True iff x^2 - D y^2 = -4 is solvable (fundamental unit of norm -1).
bool has_norm_minus_one(i64 D);

// Principal form of discriminant D: (1, b, (b^2 - D)/4) with b in {s, s-1} of the parity of D (s = floor sqrt D).
QuadForm principal_form(i64 D);

// ---------------------------------------------------------------- ideals

// Element u + v*omega of O_F, omega = (D + sqrt D)/2 (so omega^2 = D omega - (D^2 - D)/4).
struct QuadInt {
    i64 u = 0, v = 0;
};

// Integral ideal with Z-basis {a, b + c*omega} in Hermite normal form: a, c > 0, c | a, c | b, 0 <= b < a.
struct IdealF {
    i64 a = 1, b = 0, c = 1;
    i64 norm() const { return a * c; }
    bool operator==(const IdealF& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const IdealF& o) const {
        return std::array<i64, 3>{a, b, c} < std::array<i64, 3>{o.a, o.b, o.c};
    }
    std::string str() const;
};

class QuadField {
public:
    explicit QuadField(i64 D);  // D fundamental (throws otherwise)
    i64 D() const { return D_; }
    i64 isqrtD() const { return s_; }

    QuadInt mul(const QuadInt& x, const QuadInt& y) const;
    i64 norm(const QuadInt& x) const;       // u^2 + D u v + ((D^2 - D)/4) v^2
    i64 trace(const QuadInt& x) const { return 2 * x.u + D_ * x.v; }
    // (x + y sqrt D)/2 <-> u + v omega
    QuadInt from_half(i64 x, i64 y) const;  // requires x = y D mod 2
    std::pair<i64, i64> to_half(const QuadInt& q) const { return {2 * q.u + D_ * q.v, q.v}; }

    IdealF hnf(const std::vector<QuadInt>& gens) const;  // ideal generated as Z-module (caller passes a Z-spanning set)
    IdealF ideal_mul(const IdealF& I, const IdealF& J) const;
    IdealF principal_ideal(const QuadInt& x) const;
    bool contains(const IdealF& I, const QuadInt& x) const;
    bool divides(const IdealF& I, const IdealF& J) const;  // I | J  <=>  J subset I
    // Closure under multiplication by omega (ideal, not just a lattice).
    bool is_ideal(const IdealF& I) const;

    // Form (a/c, -(2b + Dc)/c, N(b + c omega)/(ac)) attached to the ideal; its class is the ideal's narrow class.
    QuadForm form_of_ideal(const IdealF& I) const;
    // Ideal [A, (-B + sqrt D)/2] for A > 0.
    IdealF ideal_of_form(const QuadForm& f) const;

    // Prime ideals above a rational prime l: split -> 2, inert -> 1 (norm l^2), ramified -> 1.
    struct PrimeIdeal {
        IdealF ideal;
        i64 ell;
        int kind;  // +1 split, -1 inert, 0 ramified
        i64 b;     // for split/ramified: ideal = [l, (b + sqrt D)/2] with b^2 = D mod 4l
    };
    std::vector<PrimeIdeal> primes_above(i64 ell) const;

private:
    i64 D_, s_;
};

// ---------------------------------------------------------------- class group

using Character = std::vector<int>;  // values +-1 indexed by class

class NarrowClassGroup {
public:
    explicit NarrowClassGroup(i64 D);

    i64 D() const { return D_; }
    const QuadField& field() const { return K_; }
    int order() const { return static_cast<int>(cycles_.size()); }
    int identity() const { return 0; }
    int different_class() const { return diff_; }  // class of (sqrt D)
    const std::vector<QuadForm>& cycle(int cls) const { return cycles_[static_cast<size_t>(cls)]; }
    const QuadForm& representative(int cls) const { return cycles_[static_cast<size_t>(cls)].front(); }

    int class_of_form(const QuadForm& f) const;
    int class_of_ideal(const IdealF& I) const { return class_of_form(K_.form_of_ideal(I)); }
    int compose(int x, int y) const { return table_[static_cast<size_t>(x)][static_cast<size_t>(y)]; }
    int inverse(int x) const;
    int power(int x, i64 e) const;

    // Characters with values in {+-1} and psi(class of (sqrt D)) = -1.
    std::vector<Character> odd_characters() const;
    // All characters of order <= 2.
    std::vector<Character> quadratic_characters() const;

    // Zeta value at s = 0 of the narrow class (exact rational), Zagier's reduced-cycle formula.
    mpq_class partial_zeta_zero(int cls) const;
    // The same value by the Shintani cone sum (independent oracle).
    mpq_class partial_zeta_zero_shintani(int cls) const;
    // Zagier-reduced forms (A > 0, C > 0, A + B + C < 0) along the minus-continued-fraction cycle of a class.
    std::vector<QuadForm> zagier_cycle(int cls) const;

    // Class composition of ideal via a precomputed ideal per class.
    const IdealF& class_ideal(int cls) const { return ideals_[static_cast<size_t>(cls)]; }

private:
    i64 D_;
    QuadField K_;
    std::vector<std::vector<QuadForm>> cycles_;
    std::map<QuadForm, int> lookup_;
    std::vector<IdealF> ideals_;
    std::vector<std::vector<int>> table_;
    int diff_ = 0;
};

// ---------------------------------------------------------------- RM points, traces

// sqrt(D) embedded in Q_{p^2} as t*omega (t^2 = D/r in Z_p), t the lift of the smaller residue.
class QuadEmbedding {
public:
    QuadEmbedding(PadicCtx ctx, i64 D, bool conjugate = false);
    const PadicCtx& ctx() const { return ctx_; }
    i64 D() const { return D_; }
    const mpz_class& t() const { return t_; }  // sqrt D = t * omega  (mod p^W)
    // (x + y sqrt D)/den as a p-adic number
    PadicScalar embed(const mpz_class& x, const mpz_class& y, const mpz_class& den) const;
    PadicScalar sqrtD() const { return embed(0, 1, 1); }
    // Iwasawa log of (x + y sqrt D)/den (nonzero); den may be any nonzero integer.
    PadicContext::Raw log_raw(const mpz_class& x, const mpz_class& y) const;  // log((x + y sqrtD)) mod p^W
    PadicScalar log(const mpz_class& x, const mpz_class& y, const mpz_class& den) const;

private:
    PadicCtx ctx_;
    i64 D_;
    mpz_class t_;
};

struct RMPoint {
    QuadForm form;
    double tau = 0, tau_conj = 0;  // real embeddings of the first root and its conjugate
    static RMPoint make(const QuadForm& f);
    PadicScalar padic(const QuadEmbedding& emb) const;  // (-B + sqrtD)/(2A)
};

int class_of_rm_point(const NarrowClassGroup& G, const RMPoint& tau);
// Class of -tau (first root of (-A, B, -C)).
int class_of_negated(const NarrowClassGroup& G, const QuadForm& f);

// nu = alpha / sqrt D with alpha = (x + n sqrt D)/2 in O_F; trace(nu) = n.
struct TotallyPositiveElement {
    i64 x = 0;     // alpha = (x + n sqrt D)/2
    i64 n = 0;     // trace of nu
    int vp = 0;    // p-adic valuation of nu (p inert, p does not divide D)
    i64 x0 = 0, n0 = 0;  // nu_0 = nu / p^vp  (alpha_0 = (x0 + n0 sqrt D)/2)
    i64 norm_alpha(i64 D) const { return (n * n * D - x * x) / 4; }  // N((nu) d) = N(alpha) in absolute value
};

std::vector<TotallyPositiveElement> enumerate_trace(i64 n, i64 D, i64 p = 0);

// Integral ideal divisors I of (alpha), alpha = (x + n sqrt D)/2, with p not dividing I (p = 0: all).
struct IdealDivisor {
    IdealF ideal;
    i64 norm;
    int cls;
};
std::vector<IdealDivisor> ideal_divisors(const NarrowClassGroup& G, i64 x, i64 n, i64 p);

// Exponents of alpha at the prime ideals above its norm, via content stripping and local tests.
struct PrimeExponent {
    QuadField::PrimeIdeal prime;
    int exponent;
};
std::vector<PrimeExponent> factor_element(const QuadField& K, i64 x, i64 n);

}  // namespace rmlab
