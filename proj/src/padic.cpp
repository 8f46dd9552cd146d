#include "rmlab/padic.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "rmlab/arith.hpp"

namespace rmlab {

namespace {

constexpr int kGuardDigits = 10;
constexpr int kLogPowerRaise = 2;  // log(u) = log(u^{p^j}) / p^j shortens the series

int mpz_val(const mpz_class& x, long p) {
    if (x == 0) return PadicScalar::kExact;
    mpz_class t = x;
    return static_cast<int>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), mpz_class(p).get_mpz_t()));
}

void mod_into(mpz_class& x, const mpz_class& m) { mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()); }

int ceil_log(long p, long n) {  // least k with p^k >= n
    int k = 0;
    long q = 1;
    while (q < n) {
        q *= p;
        ++k;
    }
    return k;
}

}  // namespace

// ---------------------------------------------------------------- context

PadicContext::PadicContext(long p, int N) : p_(p), N_(N) {
    if (p < 5 || !is_prime(p)) throw std::invalid_argument("p must be a prime >= 5");
    if (N < 2) throw std::invalid_argument("precision must be at least 2 digits");
    r_ = 2;
    while (kronecker(r_, p) != -1) ++r_;
    W_ = N + kGuardDigits + ceil_log(p, N);
    int top = 4 * W_ + 128;
    pows_.resize(static_cast<size_t>(top) + 1);
    pows_[0] = 1;
    for (int k = 1; k <= top; ++k) pows_[k] = pows_[k - 1] * p;
}

std::shared_ptr<const PadicContext> PadicContext::make(long p, int N) {
    return std::shared_ptr<const PadicContext>(new PadicContext(p, N));
}

const mpz_class& PadicContext::ppow(int k) const {
    if (k < 0 || static_cast<size_t>(k) >= pows_.size()) throw std::out_of_range("ppow exponent out of range");
    return pows_[static_cast<size_t>(k)];
}

void PadicContext::reduce(Raw& x, const mpz_class& mod) const {
    mod_into(x.a, mod);
    mod_into(x.b, mod);
}

void PadicContext::mul(Raw& out, const Raw& x, const Raw& y, const mpz_class& mod) const {
    // (a + b w)(c + d w) = (ac + r bd) + (ad + bc) w
    thread_local mpz_class t1, t2, t3;
    mpz_mul(t1.get_mpz_t(), x.a.get_mpz_t(), y.a.get_mpz_t());
    mpz_mul(t2.get_mpz_t(), x.b.get_mpz_t(), y.b.get_mpz_t());
    mpz_addmul_ui(t1.get_mpz_t(), t2.get_mpz_t(), static_cast<unsigned long>(r_));
    mpz_mul(t3.get_mpz_t(), x.a.get_mpz_t(), y.b.get_mpz_t());
    mpz_addmul(t3.get_mpz_t(), x.b.get_mpz_t(), y.a.get_mpz_t());
    mpz_fdiv_r(out.a.get_mpz_t(), t1.get_mpz_t(), mod.get_mpz_t());
    mpz_fdiv_r(out.b.get_mpz_t(), t3.get_mpz_t(), mod.get_mpz_t());
}

void PadicContext::sqr(Raw& out, const Raw& x, const mpz_class& mod) const {
    thread_local mpz_class t1, t2, t3;
    mpz_mul(t1.get_mpz_t(), x.a.get_mpz_t(), x.a.get_mpz_t());
    mpz_mul(t2.get_mpz_t(), x.b.get_mpz_t(), x.b.get_mpz_t());
    mpz_addmul_ui(t1.get_mpz_t(), t2.get_mpz_t(), static_cast<unsigned long>(r_));
    mpz_mul(t3.get_mpz_t(), x.a.get_mpz_t(), x.b.get_mpz_t());
    mpz_mul_2exp(t3.get_mpz_t(), t3.get_mpz_t(), 1);
    mpz_fdiv_r(out.a.get_mpz_t(), t1.get_mpz_t(), mod.get_mpz_t());
    mpz_fdiv_r(out.b.get_mpz_t(), t3.get_mpz_t(), mod.get_mpz_t());
}

PadicContext::Raw PadicContext::pow(const Raw& x, const mpz_class& e, const mpz_class& mod) const {
    if (e < 0) return pow(inverse_unit(x, mod), -e, mod);
    Raw result{1, 0};
    Raw base = x;
    reduce(base, mod);
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        sqr(result, result, mod);
        if (mpz_tstbit(e.get_mpz_t(), i)) mul(result, result, base, mod);
    }
    return result;
}

PadicContext::Raw PadicContext::inverse_unit(const Raw& x, const mpz_class& mod) const {
    mpz_class n = x.a * x.a - mpz_class(r_) * x.b * x.b;
    mod_into(n, mod);
    mpz_class inv;
    if (!mpz_invert(inv.get_mpz_t(), n.get_mpz_t(), mod.get_mpz_t()))
        throw std::domain_error("inverse of a non-unit");
    Raw out{x.a * inv, -x.b * inv};
    reduce(out, mod);
    return out;
}

PadicContext::Raw PadicContext::log_one_plus(const Raw& z) const {
    const mpz_class& mod = ppow(W_);
    int vz = std::min(mpz_val(z.a, p_), mpz_val(z.b, p_));
    if (vz >= W_) return Raw{0, 0};
    if (vz < 1) throw std::domain_error("log(1+z) needs v(z) >= 1");
    Raw sum{0, 0}, zk{1, 0}, term;
    mpz_class inv;
    for (long k = 1;; ++k) {
        int vk = valuation(k, p_);
        if (k * vz - vk >= W_ + 1) {
            // all later terms vanish too once k*vz grows faster than v_p(k)
            if (k * vz - ceil_log(p_, k + 1) >= W_ + 1) break;
        }
        mul(zk, zk, z, mod);
        term = zk;
        if (vk > 0) {
            mpz_fdiv_q(term.a.get_mpz_t(), term.a.get_mpz_t(), ppow(vk).get_mpz_t());
            mpz_fdiv_q(term.b.get_mpz_t(), term.b.get_mpz_t(), ppow(vk).get_mpz_t());
        }
        long kk = k;
        for (int i = 0; i < vk; ++i) kk /= p_;
        mpz_class kz(kk);
        mpz_invert(inv.get_mpz_t(), kz.get_mpz_t(), mod.get_mpz_t());
        if (k % 2 == 0) inv = -inv;
        sum.a += term.a * inv;
        sum.b += term.b * inv;
        reduce(sum, mod);
    }
    return sum;
}

PadicContext::Raw PadicContext::log_unit(const Raw& u) const {
    const mpz_class& mod = ppow(W_);
    mpz_class e = mpz_class(p_) * p_ - 1;
    Raw w = pow(u, e, mod);
    w = pow(w, ppow(kLogPowerRaise), mod);
    Raw z{w.a - 1, w.b};
    reduce(z, mod);
    Raw s = log_one_plus(z);
    // divide by p^j (exact: s is divisible by p^{j+1})
    mpz_fdiv_q(s.a.get_mpz_t(), s.a.get_mpz_t(), ppow(kLogPowerRaise).get_mpz_t());
    mpz_fdiv_q(s.b.get_mpz_t(), s.b.get_mpz_t(), ppow(kLogPowerRaise).get_mpz_t());
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    s.a *= inv;
    s.b *= inv;
    reduce(s, mod);
    return s;
}

mpz_class PadicContext::log_unit_scalar(const mpz_class& u) const {
    const mpz_class& mod = ppow(W_);
    mpz_class w;
    mpz_class e(p_ - 1);
    mpz_powm(w.get_mpz_t(), u.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    mpz_powm(w.get_mpz_t(), w.get_mpz_t(), ppow(kLogPowerRaise).get_mpz_t(), mod.get_mpz_t());
    mpz_class z = w - 1;
    mod_into(z, mod);
    int vz = mpz_val(z, p_);
    mpz_class sum = 0;
    if (vz < W_) {
        mpz_class zk = 1, term, inv;
        for (long k = 1;; ++k) {
            if (k * vz - ceil_log(p_, k + 1) >= W_ + 1) break;
            zk *= z;
            mod_into(zk, mod);
            int vk = valuation(k, p_);
            term = zk;
            if (vk > 0) mpz_fdiv_q(term.get_mpz_t(), term.get_mpz_t(), ppow(vk).get_mpz_t());
            long kk = k;
            for (int i = 0; i < vk; ++i) kk /= p_;
            mpz_class kz(kk);
            mpz_invert(inv.get_mpz_t(), kz.get_mpz_t(), mod.get_mpz_t());
            if (k % 2 == 0)
                sum -= term * inv;
            else
                sum += term * inv;
            mod_into(sum, mod);
        }
    }
    mpz_fdiv_q(sum.get_mpz_t(), sum.get_mpz_t(), ppow(kLogPowerRaise).get_mpz_t());
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    sum *= inv;
    mod_into(sum, mod);
    return sum;
}

PadicContext::Raw PadicContext::exp_raw(const Raw& x) const {
    int vx = std::min(mpz_val(x.a, p_), mpz_val(x.b, p_));
    if (vx < 1) throw std::domain_error("exp needs valuation >= 1");
    int W2 = W_ + (2 * W_ + 20) / static_cast<int>(p_ - 2) + 4;
    const mpz_class& mod = ppow(W2);
    Raw sum{1, 0}, term{1, 0};
    mpz_class inv;
    for (long k = 1;; ++k) {
        // v(x^k/k!) >= k*vx - (k-1)/(p-1)
        if (k * vx - (k - 1) / (p_ - 1) >= W2 + 2) break;
        mul(term, term, x, mod);
        int vk = valuation(k, p_);
        if (vk > 0) {
            mpz_fdiv_q(term.a.get_mpz_t(), term.a.get_mpz_t(), ppow(vk).get_mpz_t());
            mpz_fdiv_q(term.b.get_mpz_t(), term.b.get_mpz_t(), ppow(vk).get_mpz_t());
        }
        long kk = k;
        for (int i = 0; i < vk; ++i) kk /= p_;
        mpz_class kz(kk);
        mpz_invert(inv.get_mpz_t(), kz.get_mpz_t(), mod.get_mpz_t());
        term.a *= inv;
        term.b *= inv;
        reduce(term, mod);
        sum.a += term.a;
        sum.b += term.b;
    }
    reduce(sum, ppow(W_));
    return sum;
}

mpz_class PadicContext::sqrt_scalar(const mpz_class& a) const {
    const mpz_class& mod = ppow(W_);
    mpz_class am = a;
    mod_into(am, mod);
    mpz_class amp = am % p_;
    long s = sqrt_mod_prime(amp.get_si(), p_);
    if (s == 0) throw std::domain_error("sqrt_scalar needs a unit");
    if (p_ - s < s) s = p_ - s;
    mpz_class x = s, inv, f;
    for (int it = 0; (1 << it) <= 2 * W_ + 2; ++it) {
        f = x * x - am;
        mpz_class two_x = 2 * x;
        mpz_invert(inv.get_mpz_t(), two_x.get_mpz_t(), mod.get_mpz_t());
        x -= f * inv;
        mod_into(x, mod);
    }
    return x;
}

// ---------------------------------------------------------------- scalar

PadicScalar::PadicScalar(PadicCtx ctx) : ctx_(std::move(ctx)) {}

PadicScalar PadicScalar::zero(PadicCtx ctx, int abs_prec) {
    PadicScalar z(std::move(ctx));
    z.abs_ = std::min(abs_prec, kExact);
    return z;
}

PadicScalar PadicScalar::one(PadicCtx ctx) { return from_int(std::move(ctx), mpz_class(1)); }

PadicScalar PadicScalar::from_int(PadicCtx ctx, const mpz_class& n) {
    PadicScalar x(ctx);
    x.normalize_from(n, mpz_class(0), 0, kExact);
    return x;
}

PadicScalar PadicScalar::from_rational(PadicCtx ctx, const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("zero denominator");
    return from_int(ctx, num) / from_int(ctx, den);
}

PadicScalar PadicScalar::omega(PadicCtx ctx) {
    PadicScalar x(ctx);
    x.normalize_from(mpz_class(0), mpz_class(1), 0, kExact);
    return x;
}

PadicScalar PadicScalar::from_coords(PadicCtx ctx, const mpz_class& a, const mpz_class& b, int v, int abs_prec) {
    PadicScalar x(std::move(ctx));
    x.normalize_from(a, b, v, abs_prec);
    return x;
}

void PadicScalar::normalize_from(const mpz_class& a, const mpz_class& b, int v, int abs_prec) {
    const long p = ctx_->p();
    const int N = ctx_->N();
    abs_prec = std::min(abs_prec, kExact);
    int room = abs_prec >= kExact ? kExact : abs_prec - v;  // digits available for the pair
    mpz_class aa = a, bb = b;
    if (room < kExact) {
        if (room <= 0) {
            zero_ = true;
            abs_ = abs_prec;
            a_ = 0;
            b_ = 0;
            return;
        }
        if (room <= ctx_->W() + 64) {
            mod_into(aa, ctx_->ppow(room));
            mod_into(bb, ctx_->ppow(room));
        }
    }
    int k = std::min(mpz_val(aa, p), mpz_val(bb, p));
    if (k >= kExact || (room < kExact && k >= room)) {
        zero_ = true;
        abs_ = abs_prec;
        a_ = 0;
        b_ = 0;
        return;
    }
    if (k > 0) {
        mpz_divexact(aa.get_mpz_t(), aa.get_mpz_t(), ctx_->ppow(k).get_mpz_t());
        mpz_divexact(bb.get_mpz_t(), bb.get_mpz_t(), ctx_->ppow(k).get_mpz_t());
    }
    zero_ = false;
    v_ = v + k;
    int prec = room >= kExact ? N : room - k;
    prec_ = std::min(prec, N);
    abs_ = v_ + prec_;
    mod_into(aa, ctx_->ppow(prec_));
    mod_into(bb, ctx_->ppow(prec_));
    a_ = std::move(aa);
    b_ = std::move(bb);
}

PadicScalar PadicScalar::operator-() const {
    if (zero_) return *this;
    PadicScalar r = *this;
    r.a_ = -a_;
    r.b_ = -b_;
    mod_into(r.a_, ctx_->ppow(prec_));
    mod_into(r.b_, ctx_->ppow(prec_));
    return r;
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
    int A = std::min(abs_prec(), o.abs_prec());
    if (zero_ && o.zero_) return zero(ctx_, A);
    if (zero_) return o.with_abs_prec(A);
    if (o.zero_) return with_abs_prec(A);
    int m = std::min(v_, o.v_);
    mpz_class a = a_ * ctx_->ppow(v_ - m) + o.a_ * ctx_->ppow(o.v_ - m);
    mpz_class b = b_ * ctx_->ppow(v_ - m) + o.b_ * ctx_->ppow(o.v_ - m);
    PadicScalar r(ctx_);
    r.normalize_from(a, b, m, A);
    return r;
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const { return *this + (-o); }

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
    if (zero_ || o.zero_) {
        long bound = static_cast<long>(valuation()) + static_cast<long>(o.valuation());
        return zero(ctx_, static_cast<int>(std::min<long>(bound, kExact)));
    }
    int prec = std::min(prec_, o.prec_);
    PadicContext::Raw x{a_, b_}, y{o.a_, o.b_}, z;
    ctx_->mul(z, x, y, ctx_->ppow(prec));
    PadicScalar r(ctx_);
    r.normalize_from(z.a, z.b, v_ + o.v_, v_ + o.v_ + prec);
    return r;
}

PadicScalar PadicScalar::inverse() const {
    if (zero_) throw std::domain_error("inverse of zero");
    PadicContext::Raw x{a_, b_};
    auto inv = ctx_->inverse_unit(x, ctx_->ppow(prec_));
    PadicScalar r(ctx_);
    r.normalize_from(inv.a, inv.b, -v_, -v_ + prec_);
    return r;
}

PadicScalar PadicScalar::operator/(const PadicScalar& o) const { return *this * o.inverse(); }

PadicScalar PadicScalar::pow(long e) const {
    if (e == 0) return one(ctx_);
    if (zero_) {
        if (e < 0) throw std::domain_error("negative power of zero");
        return zero(ctx_, static_cast<int>(std::min<long>(static_cast<long>(abs_) * e, kExact)));
    }
    PadicScalar base = e < 0 ? inverse() : *this;
    long n = e < 0 ? -e : e;
    PadicContext::Raw x{base.a_, base.b_};
    auto y = ctx_->pow(x, mpz_class(n), ctx_->ppow(base.prec_));
    PadicScalar r(ctx_);
    r.normalize_from(y.a, y.b, base.v_ * static_cast<int>(n), base.v_ * static_cast<int>(n) + base.prec_);
    return r;
}

PadicScalar PadicScalar::with_abs_prec(int target) const {
    if (zero_) return zero(ctx_, std::min(abs_, target));
    if (target >= abs_prec()) return *this;
    PadicScalar r(ctx_);
    r.normalize_from(a_, b_, v_, target);
    return r;
}

int PadicScalar::val_diff(const PadicScalar& o) const { return (*this - o).valuation(); }

PadicContext::Raw PadicScalar::to_raw_integral() const {
    if (zero_) return {0, 0};
    if (v_ < 0) throw std::domain_error("to_raw_integral on non-integral element");
    PadicContext::Raw r{a_ * ctx_->ppow(v_), b_ * ctx_->ppow(v_)};
    return r;
}

std::vector<long> PadicScalar::digits(int coord) const {
    std::vector<long> out;
    if (zero_) return out;
    mpz_class x = coord == 0 ? a_ : b_;
    for (int i = 0; i < prec_; ++i) {
        mpz_class d = x % ctx_->p();
        out.push_back(d.get_si());
        x /= ctx_->p();
    }
    return out;
}

std::string PadicScalar::str() const {
    std::ostringstream os;
    if (zero_) {
        os << "O(" << ctx_->p() << "^" << (abs_ >= kExact ? std::string("inf") : std::to_string(abs_)) << ")";
        return os.str();
    }
    os << ctx_->p() << "^" << v_ << "*(" << a_.get_str() << " + " << b_.get_str() << "*w) + O(" << ctx_->p() << "^"
       << abs_ << ")";
    return os.str();
}

// ---------------------------------------------------------------- functions

PadicScalar iwasawa_log(const PadicScalar& x) {
    if (x.is_zero()) throw std::domain_error("log of zero");
    const auto& ctx = x.ctx();
    PadicContext::Raw u{x.unit_a(), x.unit_b()};
    auto L = ctx->log_unit(u);
    // absolute precision: log is an isometry on principal units, so the unit's relative precision carries over
    return PadicScalar::from_coords(ctx, L.a, L.b, 0, x.rel_prec());
}

PadicScalar padic_exp(const PadicScalar& x) {
    const auto& ctx = x.ctx();
    if (x.is_zero()) return PadicScalar::one(ctx);
    if (x.valuation() < 1) throw std::domain_error("exp: convergence needs valuation >= 1");
    auto raw = x.to_raw_integral();
    auto e = ctx->exp_raw(raw);
    return PadicScalar::from_coords(ctx, e.a, e.b, 0, x.abs_prec());
}

PadicScalar teichmuller(const PadicScalar& x) {
    if (x.is_zero() || x.valuation() != 0) throw std::domain_error("teichmuller needs a unit");
    const auto& ctx = x.ctx();
    const mpz_class& mod = ctx->ppow(ctx->W());
    PadicContext::Raw y{x.unit_a(), x.unit_b()};
    mpz_class q = mpz_class(ctx->p()) * ctx->p();
    for (int it = 0; it <= ctx->W() + 1; ++it) {
        auto z = ctx->pow(y, q, mod);
        if (z.a == y.a && z.b == y.b) break;
        y = z;
    }
    return PadicScalar::from_coords(ctx, y.a, y.b, 0, x.rel_prec());
}

PadicScalar frobenius(const PadicScalar& x) {
    if (x.is_zero()) return x;
    return PadicScalar::from_coords(x.ctx(), x.unit_a(), -x.unit_b(), x.valuation(), x.abs_prec());
}

PadicScalar norm_to_Qp(const PadicScalar& x) { return x * frobenius(x); }

int DualScalar::val_diff(const DualScalar& o) const { return std::min(a.val_diff(o.a), b.val_diff(o.b)); }

}  // namespace rmlab
