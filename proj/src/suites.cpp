#include "rmlab/suites.hpp"

#include <algorithm>
#include <random>

#include "rmlab/eisenstein.hpp"
#include "rmlab/siegel.hpp"
#include "rmlab/winding.hpp"

namespace rmlab {

namespace {

// Agreement up to the joint absolute precision of the two sides.
bool agree(const PadicScalar& x, const PadicScalar& y) {
    return x.val_diff(y) >= std::min(x.abs_prec(), y.abs_prec());
}

struct Tally {
    int passed = 0, total = 0;
    json first_failure = nullptr;
    void record(bool ok, const std::string& what) {
        ++total;
        if (ok) {
            ++passed;
        } else if (first_failure.is_null()) {
            first_failure = what;
        }
    }
    bool ok() const { return passed == total; }
    json to_json() const {
        return json{{"passed", passed}, {"total", total}, {"first_failure", first_failure}};
    }
};

class RandomPadic {
public:
    RandomPadic(PadicCtx ctx, std::uint64_t seed) : ctx_(std::move(ctx)), rng_(gmp_randinit_default) {
        rng_.seed(static_cast<unsigned long>(seed));
    }
    // p^v (a + b w) with a random unit pair, v in [vmin, vmax].
    PadicScalar element(int vmin, int vmax) {
        const int N = ctx_->N();
        mpz_class a = rng_.get_z_range(ctx_->ppow(N));
        mpz_class b = rng_.get_z_range(ctx_->ppow(N));
        if (a % ctx_->p() == 0 && b % ctx_->p() == 0) a += 1;
        int v = vmin + static_cast<int>(mpz_class(rng_.get_z_range(vmax - vmin + 1)).get_si());
        return PadicScalar::from_coords(ctx_, a, b, v, v + N);
    }
    PadicScalar unit() { return element(0, 0); }

private:
    PadicCtx ctx_;
    gmp_randclass rng_;
};

}  // namespace

SuiteResult suite_padic(long p, int N, int cases, std::uint64_t seed) {
    auto ctx = PadicContext::make(p, N);
    RandomPadic rnd(ctx, seed);
    Tally ring, logs, exps, frob;
    const auto one = PadicScalar::one(ctx);
    const auto pp = PadicScalar::from_int(ctx, p);
    for (int i = 0; i < cases; ++i) {
        const std::string tag = "case " + std::to_string(i);
        auto x = rnd.element(-2, 3), y = rnd.element(-2, 3), z = rnd.element(0, 3);
        bool r = agree((x + y) * z, x * z + y * z) && agree((x * y) * z, x * (y * z)) && agree(x + y, y + x) &&
                 agree(x * y, y * x) && agree(x * x.inverse(), one) && (x - x).is_zero() &&
                 agree((x / y) * y, x);
        ring.record(r, tag);

        auto u = rnd.unit(), w = rnd.unit();
        auto lu = iwasawa_log(u), lw = iwasawa_log(w);
        bool l = agree(iwasawa_log(u * w), lu + lw) && iwasawa_log(teichmuller(u)).is_zero() &&
                 iwasawa_log(pp).is_zero() && agree(iwasawa_log(u.inverse()), -lu) &&
                 agree(iwasawa_log(u.pow(5)), lu.scaled(5));
        logs.record(l, tag);

        auto s = rnd.element(1, 4), t = rnd.element(1, 4);
        auto es = padic_exp(s);
        bool e = agree(iwasawa_log(es), s) && agree(padic_exp(s + t), es * padic_exp(t)) &&
                 agree(padic_exp(iwasawa_log(one + s)), one + s) && agree(es * padic_exp(-s), one);
        exps.record(e, tag);

        auto fx = frobenius(x), fy = frobenius(y);
        auto nx = norm_to_Qp(x);
        bool f = agree(frobenius(x * y), fx * fy) && agree(frobenius(x + y), fx + fy) && agree(frobenius(fx), x) &&
                 agree(nx, x * fx) && nx.in_Qp();
        // Frobenius lifts x -> x^p: on units the two agree modulo p.
        f = f && frobenius(u).val_diff(u.pow(p)) >= 1;
        frob.record(f, tag);
    }
    SuiteResult out;
    out.table = json{{"p", p},         {"N", N},       {"cases", cases},     {"seed", seed},
                     {"ring", ring.to_json()}, {"log", logs.to_json()}, {"exp", exps.to_json()},
                     {"frobenius", frob.to_json()}};
    out.pass = ring.ok() && logs.ok() && exps.ok() && frob.ok();
    return out;
}

SuiteResult suite_bijections(const NarrowClassGroup& G, const QuadForm& tau, i64 nmax, const QuadEmbedding& emb) {
    const long p = emb.ctx()->p();
    SuiteResult out;
    json rows = json::array();
    for (i64 n = 1; n <= nmax; ++n) {
        if (n % p == 0) continue;
        auto ideal = rm_plus_set(G, tau, n, p);
        auto minus = rm_minus_set(G, tau, n, p);
        ideal.insert(ideal.end(), minus.begin(), minus.end());
        auto coset = rm_set_by_cosets(G, tau, n, p);
        auto a = ideal, b = coset.points;
        std::sort(a.begin(), a.end(), point_less);
        std::sort(b.begin(), b.end(), point_less);
        bool same = a.size() == b.size();
        for (size_t i = 0; same && i < a.size(); ++i) same = a[i].same_value(b[i]) && a[i].weight == b[i].weight;
        auto la = weighted_log_sum(a, emb), lb = weighted_log_sum(b, emb);
        bool logs_equal = agree(la, lb);
        rows.push_back(json{{"n", n},
                            {"ideal_pair_points", a.size()},
                            {"coset_points", b.size()},
                            {"representatives", coset.representatives.size()},
                            {"multiset_equal", same},
                            {"log_sum_equal", logs_equal},
                            {"log_sum", padic_to_json(la)}});
        out.pass = out.pass && same && logs_equal && coset.authoritative;
    }
    out.table = json{{"form", form_to_json(tau)}, {"rows", rows}};
    return out;
}

SuiteResult suite_vanishing(const NarrowClassGroup& G, i64 nmax, long p) {
    SuiteResult out;
    json per_char = json::array();
    for (const auto& psi : G.odd_characters()) {
        json sums_all = json::array(), sums_p = json::array();
        bool ok = true;
        for (i64 n = 1; n <= nmax; ++n) {
            long s_all = 0, s_p = 0;
            for (const auto& e : enumerate_trace(n, G.D())) {
                s_all += sigma_psi(G, psi, e.x, e.n, 0);
                s_p += sigma_psi(G, psi, e.x, e.n, p);
            }
            sums_all.push_back(s_all);
            sums_p.push_back(s_p);
            ok = ok && s_all == 0 && s_p == 0;
        }
        per_char.push_back(json{{"psi", psi}, {"sums", sums_all}, {"sums_p_coprime", sums_p}, {"vanishes", ok}});
        out.pass = out.pass && ok;
    }
    out.table = json{{"D", G.D()}, {"p", p}, {"nmax", nmax}, {"characters", per_char}};
    if (per_char.empty()) out.table["note"] = "no odd characters (a unit of norm -1 exists)";
    return out;
}

Mat2 random_gamma0(long p, i64 max_entry, std::uint64_t& state) {
    std::mt19937_64 rng(state);
    auto draw = [&](i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng); };
    Mat2 g;
    for (;;) {
        i64 c = p * draw(-max_entry / p, max_entry / p);
        i64 d = draw(-max_entry, max_entry);
        if (d == 0 || gcd(c, d) != 1) continue;
        if (c == 0) {
            g = Mat2{d, draw(-max_entry, max_entry) * d, 0, d};  // d = +-1
            if (g.det() != 1) continue;
            break;
        }
        i64 a = inv_mod(pos_mod(d, std::abs(c)), std::abs(c));  // a d = 1 mod c
        i64 b = (a * d - 1) / c;
        g = Mat2{a, b, c, d};
        break;
    }
    state = rng();
    return g;
}

SuiteResult suite_measure(long p, int count, i64 max_entry, std::uint64_t seed, int level) {
    SiegelMeasure sm(p, level);
    std::uint64_t st = seed;
    SuiteResult out;
    json rows = json::array();
    bool masses = true;
    for (int i = 0; i < count; ++i) {
        Mat2 g = random_gamma0(p, max_entry, st);
        auto mu = sm.measure(g);
        i64 tot = mu.total(), r = mu.mass_p_times_unit(), phi = phi_DR(g, p);
        bool ok = tot == 0 && r == phi;
        masses = masses && ok;
        rows.push_back(json{{"gamma", {g.a, g.b, g.c, g.d}}, {"total", tot}, {"mass_pZp_x_Zpx", r}, {"phi_DR", phi},
                            {"ok", ok}});
    }
    int hom_fail = 0;
    json hom_first = nullptr;
    for (int i = 0; i < count; ++i) {
        Mat2 g = random_gamma0(p, max_entry, st), h = random_gamma0(p, max_entry, st);
        if (phi_DR(g * h, p) != phi_DR(g, p) + phi_DR(h, p)) {
            ++hom_fail;
            if (hom_first.is_null()) hom_first = json{{g.a, g.b, g.c, g.d}, {h.a, h.b, h.c, h.d}};
        }
    }
    i64 phiT = phi_DR(Mat2{1, 1, 0, 1}, p);
    out.pass = masses && hom_fail == 0 && phiT == 2 * (p - 1);
    out.table = json{{"p", p},
                     {"level", level},
                     {"max_entry", max_entry},
                     {"seed", seed},
                     {"max_rounding_error", sm.max_rounding_error()},
                     {"masses", rows},
                     {"masses_ok", masses},
                     {"homomorphism_pairs", count},
                     {"homomorphism_failures", hom_fail},
                     {"homomorphism_first_failure", hom_first},
                     {"phi_DR_T", phiT},
                     {"phi_DR_T_expected", 2 * (p - 1)}};
    return out;
}

}  // namespace rmlab
