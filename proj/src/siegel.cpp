#include "rmlab/siegel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rmlab {

// ---------------------------------------------------------------- Dedekind sums and Rademacher Phi

mpq_class dedekind_sum(i64 h, i64 k) {
    if (k <= 0) throw std::invalid_argument("dedekind_sum needs k > 0");
    if (gcd(h, k) != 1) throw std::invalid_argument("dedekind_sum needs gcd(h, k) = 1");
    // s(h, k) depends on h mod k; reciprocity s(h,k) + s(k,h) = -1/4 + (h/k + k/h + 1/(hk))/12
    mpq_class acc = 0;
    int sgn = 1;
    h = pos_mod(h, k);
    while (k > 1) {
        if (h == 0) break;
        mpq_class hk{mpz_class(h)}, kk{mpz_class(k)};
        mpq_class corr = mpq_class(-1, 4) + (hk / kk + kk / hk + 1 / (hk * kk)) / 12;
        corr.canonicalize();
        acc += sgn * corr;
        // s(h, k) = corr - s(k, h) = corr - s(k mod h, h)
        i64 nh = pos_mod(k, h);
        k = h;
        h = nh;
        sgn = -sgn;
    }
    acc.canonicalize();
    return acc;
}

mpq_class dedekind_sum_naive(i64 h, i64 k) {
    if (k <= 0) throw std::invalid_argument("dedekind_sum needs k > 0");
    auto saw = [](const mpq_class& x) -> mpq_class {
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        if (x == mpq_class(fl)) return 0;
        return x - fl - mpq_class(1, 2);
    };
    mpq_class s = 0;
    for (i64 i = 1; i < k; ++i) {
        mpq_class a{mpz_class(i), mpz_class(k)}, b{mpz_class(h * i), mpz_class(k)};
        a.canonicalize();
        b.canonicalize();
        s += saw(a) * saw(b);
    }
    return s;
}

i64 rademacher_phi(const Mat2& g) {
    if (g.det() != 1) throw std::invalid_argument("rademacher_phi needs det = 1");
    mpq_class phi;
    if (g.c == 0) {
        phi = mpq_class(mpz_class(g.b * g.d));  // d = +-1
    } else {
        i64 ac = g.c < 0 ? -g.c : g.c;
        mpq_class first{mpz_class(sign(g.c) * (g.a + g.d)), mpz_class(ac)};
        first.canonicalize();
        phi = first - 12 * sign(g.c) * dedekind_sum(g.d, ac);
    }
    phi.canonicalize();
    if (phi.get_den() != 1) throw std::logic_error("rademacher_phi: non-integral value " + phi.get_str());
    return phi.get_num().get_si();
}

i64 phi_DR(const Mat2& g, long p) {
    if (g.c % p != 0) throw std::invalid_argument("phi_DR: lower-left entry not divisible by p");
    Mat2 gp{g.a, g.b * p, g.c / p, g.d};
    return 2 * (rademacher_phi(gp) - rademacher_phi(g));
}

// ---------------------------------------------------------------- ball measures

i64 BallMeasure::total() const {
    i64 s = 0;
    for (i64 v : values) s += v;
    return s;
}

i64 BallMeasure::mass_p_times_unit() const {
    i64 s = 0;
    for (i64 a = 0; a < pm; a += p)
        for (i64 b = 0; b < pm; ++b)
            if (b % p != 0) s += values[static_cast<size_t>(a * pm + b)];
    return s;
}

BallMeasure BallMeasure::coarsened(int lv) const {
    if (lv < 1 || lv > level) throw std::invalid_argument("coarsened: bad level");
    BallMeasure r;
    r.p = p;
    r.level = lv;
    r.pm = 1;
    for (int i = 0; i < lv; ++i) r.pm *= p;
    r.p_invariant = p_invariant;
    r.values.assign(static_cast<size_t>(r.pm * r.pm), 0);
    for (i64 a = 0; a < pm; ++a)
        for (i64 b = 0; b < pm; ++b)
            r.values[static_cast<size_t>((a % r.pm) * r.pm + b % r.pm)] += values[static_cast<size_t>(a * pm + b)];
    return r;
}

// ---------------------------------------------------------------- SL_2(Z) words

std::vector<WordLetter> sl2z_word(const Mat2& g0) {
    if (g0.det() != 1) throw std::invalid_argument("sl2z_word needs det = 1");
    std::vector<WordLetter> w;
    Mat2 g = g0;
    while (g.c != 0) {
        i64 q = floor_div(g.a, g.c);
        if (q != 0) w.push_back({WordLetter::T, q});
        g = Mat2{g.a - q * g.c, g.b - q * g.d, g.c, g.d};
        w.push_back({WordLetter::S, 1});
        g = Mat2{g.c, g.d, -g.a, -g.b};
    }
    if (g.a == 1) {
        if (g.b != 0) w.push_back({WordLetter::T, g.b});
    } else {
        w.push_back({WordLetter::NegI, 1});
        if (g.b != 0) w.push_back({WordLetter::T, -g.b});
    }
    return w;
}

Mat2 word_product(const std::vector<WordLetter>& w) {
    Mat2 m;
    for (const auto& l : w) {
        switch (l.kind) {
            case WordLetter::S: m = m * Mat2{0, -1, 1, 0}; break;
            case WordLetter::T: m = m * Mat2{1, l.k, 0, 1}; break;
            case WordLetter::NegI: m = m * Mat2{-1, 0, 0, -1}; break;
        }
    }
    return m;
}

// ---------------------------------------------------------------- Siegel units

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

cplx e2pi(cplx x) { return std::exp(2.0 * kPi * kI * x); }

// log of prod_{n>=0} (1 - q^{n+al} e(be)) prod_{n>=1} (1 - q^{n-al} e(-be)), principal log per factor
cplx log_g(double al, double be, cplx z) {
    constexpr int kTerms = 14;  // |q| = e^{-2 pi} at the base points used; q^13 is below 1e-30
    cplx s = 0;
    for (int n = 0; n < kTerms; ++n) {
        s += std::log(1.0 - e2pi((n + al) * z + be));
        if (n >= 1) s += std::log(1.0 - e2pi((n - al) * z - be));
    }
    return s;
}

// A continuous logarithm of the Siegel unit c g_{a/N, b/N} at z.
cplx ell(i64 a, i64 b, i64 N, i64 c, cplx z) {
    a = pos_mod(a, N);
    b = pos_mod(b, N);
    double al = static_cast<double>(a) / static_cast<double>(N);
    double be = static_cast<double>(b) / static_cast<double>(N);
    i64 k = (c * a) / N;
    double al1 = static_cast<double>((c * a) % N) / static_cast<double>(N);
    double be1 = static_cast<double>((c * b) % N) / static_cast<double>(N);
    double cc = static_cast<double>(c * c);
    double half = static_cast<double>((c - c * c) / 2);
    double kd = static_cast<double>(k);
    cplx L = 2.0 * kPi * kI * z * (cc - 1.0) / 12.0 + half * (kPi * kI + 2.0 * kPi * kI * (al * z + be)) +
             cc * log_g(al, be, z);
    L -= kd * kPi * kI - 2.0 * kPi * kI * kd * (al1 * z + be1) - kPi * kI * z * kd * (kd - 1.0) + log_g(al1, be1, z);
    // Branch normalization: makes the product over the p^2 refinements of (a, b) equal the parent unit with a
    // v-independent constant, so the periods below are additive under refinement.
    L += 2.0 * kPi * kI * static_cast<double>(((c - 1) / 2) * ((c * b) / N));
    return L;
}

struct Aux {
    i64 c;
    i64 weight;
};

std::vector<Aux> aux_integers(long p) {
    if (p == 5) return {{7, 3}, {11, -1}};
    return {{5, 1}};
}

}  // namespace

SiegelMeasure::SiegelMeasure(long p, int level) : p_(p), m_(level) {
    if (p < 5 || !is_prime(p)) throw std::invalid_argument("SiegelMeasure needs a prime p >= 5");
    if (level < 1) throw std::invalid_argument("SiegelMeasure needs level >= 1");
    if (level > kMaxLevel)
        throw std::invalid_argument("level overflow: level " + std::to_string(level) + " exceeds " +
                                    std::to_string(kMaxLevel));
    pm_ = 1;
    for (int i = 0; i < level; ++i) pm_ *= p;
    const size_t n = static_cast<size_t>(pm_ * pm_);
    std::vector<double> S(n, 0.0), T(n, 0.0), Ng(n, 0.0);
    const cplx zi = kI, zt = kI - 1.0;  // S^{-1} i = i, T^{-1} i = i - 1
    for (const auto& aux : aux_integers(p)) {
        std::vector<cplx> Li(n), Lt(n);
        for (i64 a = 0; a < pm_; ++a)
            for (i64 b = 0; b < pm_; ++b) {
                if (a % p == 0 && b % p == 0) continue;
                Li[idx(a, b)] = ell(a, b, pm_, aux.c, zi);
                Lt[idx(a, b)] = ell(a, b, pm_, aux.c, zt);
            }
        const double w = static_cast<double>(aux.weight);
        for (i64 a = 0; a < pm_; ++a)
            for (i64 b = 0; b < pm_; ++b) {
                if (a % p == 0 && b % p == 0) continue;
                size_t i = idx(a, b);
                // period(g)(v) = (ell_{v g}(g^{-1} z) - ell_v(z)) / 2 pi i; mu_DR = -period
                auto per = [&](const cplx& x) { return ((x - Li[i]) / (2.0 * kPi * kI)); };
                cplx ps = per(Li[idx(b, -a)]), pt = per(Lt[idx(a, a + b)]), pn = per(Li[idx(-a, -b)]);
                for (cplx v : {ps, pt, pn}) max_err_ = std::max(max_err_, std::abs(v.imag()));
                S[i] -= w * ps.real();
                T[i] -= w * pt.real();
                Ng[i] -= w * pn.real();
            }
    }
    auto round_table = [&](const std::vector<double>& src, std::vector<i64>& dst) {
        dst.assign(n, 0);
        for (size_t i = 0; i < n; ++i) {
            double r = std::round(src[i]);
            max_err_ = std::max(max_err_, std::abs(src[i] - r));
            dst[i] = static_cast<i64>(r);
        }
    };
    round_table(S, muS_);
    round_table(T, muT_);
    round_table(Ng, muN_);
    if (max_err_ > 1e-6)
        throw std::runtime_error("Siegel periods not integral to 1e-6 (max error " + std::to_string(max_err_) + ")");
}

i64 SiegelMeasure::letter(WordLetter::Kind kind, i64 a, i64 b) const {
    switch (kind) {
        case WordLetter::S: return muS_[idx(a, b)];
        case WordLetter::T: return muT_[idx(a, b)];
        case WordLetter::NegI: return muN_[idx(a, b)];
    }
    return 0;
}

i64 SiegelMeasure::letter_value(const WordLetter& l, i64 a, i64 b) const {
    if (l.kind != WordLetter::T) return letter(l.kind, a, b);
    // mu(T^k)(v) = sum_{j<k} mu(T)(v T^j), v T^j = (a, b + j a); for k < 0 use mu(T^k)(v) = -mu(T^{-k})(v T^k)
    i64 k = l.k;
    if (k < 0) {
        b = pos_mod(b + (k % pm_) * a, pm_);
        k = -k;
        return -letter_value({WordLetter::T, k}, a, b);
    }
    i64 full = k / pm_, rem = k % pm_;
    i64 s_full = 0, s_rem = 0;
    i64 bb = pos_mod(b, pm_);
    for (i64 j = 0; j < (full > 0 ? pm_ : rem); ++j) {
        i64 v = muT_[idx(a, bb)];
        if (full > 0) s_full += v;
        if (j < rem) s_rem += v;
        bb = (bb + a) % pm_;
        if (bb < 0) bb += pm_;
    }
    return full * s_full + s_rem;
}

i64 SiegelMeasure::ball(const Mat2& g, i64 a, i64 b) const {
    a = pos_mod(a, pm_);
    b = pos_mod(b, pm_);
    if (a % p_ == 0 && b % p_ == 0) throw std::invalid_argument("ball centre must be primitive");
    // mu(g1 g2)(v) = mu(g1)(v) + mu(g2)(v g1)
    i64 s = 0;
    for (const auto& l : sl2z_word(g)) {
        s += letter_value(l, a, b);
        Mat2 m = word_product({l});
        i64 na = pos_mod((a % pm_) * (m.a % pm_) + (b % pm_) * (m.c % pm_), pm_);
        i64 nb = pos_mod((a % pm_) * pos_mod(m.b, pm_) % pm_ + (b % pm_) * (m.d % pm_), pm_);
        a = na;
        b = nb;
    }
    return s;
}

BallMeasure SiegelMeasure::measure(const Mat2& g) const {
    BallMeasure r;
    r.p = p_;
    r.level = m_;
    r.pm = pm_;
    r.values.assign(static_cast<size_t>(pm_ * pm_), 0);
    for (i64 a = 0; a < pm_; ++a)
        for (i64 b = 0; b < pm_; ++b)
            if (a % p_ != 0 || b % p_ != 0) r.values[idx(a, b)] = ball(g, a, b);
    return r;
}

// ---------------------------------------------------------------- Poisson transform

PoissonResult poisson_JDR(const QuadForm& tau, int level, const QuadEmbedding& emb) {
    const auto& ctx = emb.ctx();
    const long p = ctx->p();
    if (tau.disc() % p == 0) throw std::invalid_argument("poisson_JDR: discriminant divisible by p");
    if (kronecker(tau.disc(), p) != -1) throw std::invalid_argument("poisson_JDR: p must be inert");
    SiegelMeasure sm(p, level);
    PoissonResult res;
    res.level = level;
    res.gamma = automorph(tau);
    BallMeasure mu = sm.measure(res.gamma);
    res.total_mass = mu.total();
    if (res.total_mass != 0) throw std::logic_error("poisson_JDR: measure has nonzero total mass");
    // a tau + b = (a(-B + sqrtD) + 2 A b) / 2A; the denominator drops out since the total mass is zero.
    const mpz_class& mod = ctx->ppow(ctx->W());
    PadicContext::Raw num{1, 0}, den{1, 0};
    long val = 0;
    for (i64 a = 0; a < sm.pm(); ++a)
        for (i64 b = 0; b < sm.pm(); ++b) {
            i64 m = mu.values[static_cast<size_t>(a * sm.pm() + b)];
            if (m == 0) continue;
            ++res.balls;
            mpz_class x = mpz_class(-a) * tau.B + mpz_class(2) * tau.A * b, y = a;
            int k = 0;
            while (x % p == 0 && y % p == 0) {
                x /= p;
                y /= p;
                ++k;
            }
            val += static_cast<long>(k) * m;
            PadicContext::Raw f{x, y * emb.t()};
            ctx->reduce(f, mod);
            if (m < 0) f = ctx->pow(f, mpz_class(-m));
            else if (m > 1) f = ctx->pow(f, mpz_class(m));
            auto& acc = m > 0 ? num : den;
            ctx->mul(acc, acc, f);
        }
    auto u = num;
    ctx->mul(u, num, ctx->inverse_unit(den, mod));
    res.value = PadicScalar::from_coords(ctx, u.a, u.b, static_cast<int>(val), static_cast<int>(val) + ctx->N());
    res.log_value = iwasawa_log(res.value);
    return res;
}

}  // namespace rmlab
