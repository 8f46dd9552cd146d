#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

namespace rmlab {

// Fixed-precision model of Q_p and of the unramified quadratic extension
// Q_{p^2} = Q_p[w], w^2 = r with r the least positive non-residue mod p.
//
// A PadicContext is immutable and shared by all scalars built from it.
// Internally all ring work runs modulo p^W with W = N + guard digits, so
// divisions by p inside log/exp series never eat into the N reported digits.
class PadicContext {
public:
    // Element of Z_{p^2} as an integer pair (a + b w) reduced modulo some p^k.
    struct Raw {
        mpz_class a, b;
    };

    static std::shared_ptr<const PadicContext> make(long p, int N);

    long p() const { return p_; }
    int N() const { return N_; }
    int W() const { return W_; }
    long r() const { return r_; }
    const mpz_class& ppow(int k) const;  // p^k, 0 <= k <= W + 64

    // Raw arithmetic modulo p^k (k = W unless stated).
    void mul(Raw& out, const Raw& x, const Raw& y, const mpz_class& mod) const;
    void mul(Raw& out, const Raw& x, const Raw& y) const { mul(out, x, y, ppow(W_)); }
    void sqr(Raw& out, const Raw& x, const mpz_class& mod) const;
    Raw pow(const Raw& x, const mpz_class& e, const mpz_class& mod) const;
    Raw pow(const Raw& x, const mpz_class& e) const { return pow(x, e, ppow(W_)); }
    Raw inverse_unit(const Raw& x, const mpz_class& mod) const;
    void reduce(Raw& x, const mpz_class& mod) const;

    // Iwasawa logarithm of a unit given modulo p^W; result correct modulo p^N
    // (in fact modulo p^(W - guard)).
    Raw log_unit(const Raw& u) const;
    // Same for an element of Z_p^x (b-coordinate ignored): cheaper one-coordinate series.
    mpz_class log_unit_scalar(const mpz_class& u) const;
    // log(1 + z) for z with v(z) >= 1 (no power raising).
    Raw log_one_plus(const Raw& z) const;

    // exp(x) for v(x) >= 1, computed with enough extra digits to return p^W-correct output.
    Raw exp_raw(const Raw& x) const;

    // Square root in Z_p of a p-adic unit that is a square mod p (Hensel); chooses the
    // root whose reduction is the smaller residue in [0, p).
    mpz_class sqrt_scalar(const mpz_class& a) const;

private:
    PadicContext(long p, int N);
    long p_;
    int N_;
    int W_;
    long r_;
    std::vector<mpz_class> pows_;
};

using PadicCtx = std::shared_ptr<const PadicContext>;

// Element of Q_{p^2}: p^v * (a + b w) with (a, b) a unit pair known modulo p^prec,
// or a zero marker carrying its absolute precision bound.
class PadicScalar {
public:
    static constexpr int kExact = 1 << 28;  // "infinite" precision marker for exact zero

    PadicScalar() = default;
    explicit PadicScalar(PadicCtx ctx);  // exact zero

    static PadicScalar zero(PadicCtx ctx, int abs_prec = kExact);
    static PadicScalar one(PadicCtx ctx);
    static PadicScalar from_int(PadicCtx ctx, const mpz_class& n);
    static PadicScalar from_int(PadicCtx ctx, long n) { return from_int(std::move(ctx), mpz_class(n)); }
    static PadicScalar from_rational(PadicCtx ctx, const mpz_class& num, const mpz_class& den);
    static PadicScalar omega(PadicCtx ctx);
    // p^v * (a + b w) with (a, b) arbitrary integers known modulo p^(v + abs_digits) in absolute terms:
    // the value is normalized (p stripped) and the precision adjusted.
    static PadicScalar from_coords(PadicCtx ctx, const mpz_class& a, const mpz_class& b, int v,
                                   int abs_prec);

    const PadicCtx& ctx() const { return ctx_; }
    long p() const { return ctx_->p(); }
    bool is_zero() const { return zero_; }
    int valuation() const { return zero_ ? abs_ : v_; }  // zero: its precision bound
    int rel_prec() const { return zero_ ? 0 : prec_; }
    int abs_prec() const { return zero_ ? abs_ : v_ + prec_; }
    const mpz_class& unit_a() const { return a_; }
    const mpz_class& unit_b() const { return b_; }
    bool in_Qp() const { return zero_ || b_ == 0; }

    PadicScalar operator-() const;
    PadicScalar operator+(const PadicScalar& o) const;
    PadicScalar operator-(const PadicScalar& o) const;
    PadicScalar operator*(const PadicScalar& o) const;
    PadicScalar operator/(const PadicScalar& o) const;
    PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
    PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
    PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }
    PadicScalar inverse() const;
    PadicScalar pow(long e) const;
    PadicScalar scaled(long k) const { return *this * from_int(ctx_, k); }
    PadicScalar with_abs_prec(int abs_prec) const;  // truncate precision

    // Valuation of (this - o), capped by the joint absolute precision.
    int val_diff(const PadicScalar& o) const;
    // Equality up to absolute precision `digits`.
    bool equals(const PadicScalar& o, int digits) const { return val_diff(o) >= digits; }

    // Q_p-coordinates of the value as p^v*(a + b w): returns (a*p^v, b*p^v) reduced mod p^abs_prec
    // when v >= 0 (used for serialization and raw interoperability).
    PadicContext::Raw to_raw_integral() const;

    std::vector<long> digits(int coord) const;  // base-p little endian digits of unit coordinate
    std::string str() const;

private:
    PadicCtx ctx_;
    bool zero_ = true;
    int v_ = 0;
    int prec_ = 0;
    int abs_ = kExact;
    mpz_class a_, b_;
    void normalize_from(const mpz_class& a, const mpz_class& b, int v, int abs_prec);
};

PadicScalar iwasawa_log(const PadicScalar& x);
PadicScalar padic_exp(const PadicScalar& x);
PadicScalar teichmuller(const PadicScalar& x);
PadicScalar frobenius(const PadicScalar& x);
PadicScalar norm_to_Qp(const PadicScalar& x);

// a + b*eps with eps^2 = 0.
struct DualScalar {
    PadicScalar a, b;
    DualScalar() = default;
    DualScalar(PadicScalar a_, PadicScalar b_) : a(std::move(a_)), b(std::move(b_)) {}
    static DualScalar zero(const PadicCtx& ctx) { return {PadicScalar(ctx), PadicScalar(ctx)}; }
    DualScalar operator+(const DualScalar& o) const { return {a + o.a, b + o.b}; }
    DualScalar operator-(const DualScalar& o) const { return {a - o.a, b - o.b}; }
    DualScalar operator-() const { return {-a, -b}; }
    DualScalar operator*(const DualScalar& o) const { return {a * o.a, a * o.b + b * o.a}; }
    DualScalar operator*(const PadicScalar& s) const { return {a * s, b * s}; }
    DualScalar& operator+=(const DualScalar& o) { return *this = *this + o; }
    int val_diff(const DualScalar& o) const;
};

}  // namespace rmlab
