#include "rmlab/gsunits.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmlab {

std::vector<mpq_class> valuation_predictions(const NarrowClassGroup& G, int tau_cls) {
    std::vector<mpq_class> out;
    for (int s = 0; s < G.order(); ++s) out.push_back(-G.partial_zeta_zero(G.compose(tau_cls, s)));
    return out;
}

PadicScalar torsion_generator(const PadicCtx& ctx) {
    const long p = ctx->p();
    const long q1 = p * p - 1;
    std::vector<long> primes;
    for (auto [l, e] : factorize(q1)) primes.push_back(static_cast<long>(l));
    // brute force in F_{p^2} = F_p[w], w^2 = r
    auto mulf = [&](std::pair<long, long> x, std::pair<long, long> y) {
        return std::pair<long, long>{pos_mod(x.first * y.first + x.second * y.second * ctx->r(), p),
                                     pos_mod(x.first * y.second + x.second * y.first, p)};
    };
    auto powf = [&](std::pair<long, long> x, long e) {
        std::pair<long, long> r{1, 0};
        while (e) {
            if (e & 1) r = mulf(r, x);
            x = mulf(x, x);
            e >>= 1;
        }
        return r;
    };
    for (long b = 0; b < p; ++b)
        for (long a = 0; a < p; ++a) {
            if (a == 0 && b == 0) continue;
            bool gen = true;
            for (long l : primes)
                if (powf({a, b}, q1 / l) == std::pair<long, long>{1, 0}) gen = false;
            if (gen) return teichmuller(PadicScalar::from_int(ctx, a) + PadicScalar::omega(ctx).scaled(b));
        }
    throw std::logic_error("no generator of F_{p^2}^x found");
}

std::vector<UnitCandidate> unit_from_constant_term(const PadicScalar& a0, const NarrowClassGroup& G, int tau_cls) {
    const auto& ctx = a0.ctx();
    const long p = ctx->p();
    mpq_class pin = 12 * valuation_predictions(G, tau_cls)[0];
    pin.canonicalize();
    if (pin.get_den() != 1) throw std::logic_error("12 * partial zeta value is not integral");
    const long k = pin.get_num().get_si();
    PadicScalar l12 = a0.scaled(12);
    bool degenerate = l12.is_zero();
    if (!degenerate && l12.valuation() < 1)
        throw std::domain_error("exp(12 a_0): valuation " + std::to_string(l12.valuation()) + " < 1 (broken fit)");
    PadicScalar base = degenerate ? PadicScalar::one(ctx).with_abs_prec(l12.abs_prec()) : padic_exp(l12);
    PadicScalar pk = PadicScalar::from_int(ctx, p).pow(k);
    PadicScalar zeta = torsion_generator(ctx);
    std::vector<UnitCandidate> out;
    PadicScalar z = PadicScalar::one(ctx);
    for (int j = 0; j < p * p - 1; ++j) {
        UnitCandidate c;
        c.value = pk * z * base;
        c.pinned_valuation = k;
        c.twist = j;
        c.degenerate = degenerate;
        out.push_back(c);
        z = z * zeta;
    }
    return out;
}

std::vector<mpq_class> newton_root_valuations(const IntPoly& f0, long p) {
    IntPoly f = f0;
    while (!f.empty() && f.back() == 0) f.pop_back();
    std::vector<mpq_class> out;
    if (f.size() < 2) return out;
    // points (i, v(c_i)) with c_i != 0; zero constant terms give roots 0 (reported as +infinity is avoided: skip)
    std::vector<std::pair<long, long>> pts;
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        mpz_class c = abs(f[i]);
        long v = 0;
        while (mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p))) {
            c /= p;
            ++v;
        }
        pts.emplace_back(static_cast<long>(i), v);
    }
    // lower convex hull from the left
    std::vector<std::pair<long, long>> hull;
    for (const auto& q : pts) {
        while (hull.size() >= 2) {
            auto [x1, y1] = hull[hull.size() - 2];
            auto [x2, y2] = hull.back();
            // remove middle point if it lies on or above segment (x1,y1)-(q)
            if ((y2 - y1) * (q.first - x1) >= (q.second - y1) * (x2 - x1))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(q);
    }
    for (size_t s = 0; s + 1 < hull.size(); ++s) {
        long dx = hull[s + 1].first - hull[s].first, dy = hull[s + 1].second - hull[s].second;
        mpq_class slope(-dy, dx);
        slope.canonicalize();
        for (long t = 0; t < dx; ++t) out.push_back(slope);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool splits_completely_mod(const IntPoly& f, i64 ell) {
    if (f.size() < 2) return false;
    mpz_class lead = f.back() % ell;
    if (lead == 0) throw std::invalid_argument("splits_completely_mod: prime divides the leading coefficient");
    std::vector<i64> c;
    for (const auto& x : f) {
        mpz_class r = x % ell;
        if (r < 0) r += ell;
        c.push_back(r.get_si());
    }
    size_t roots = 0;
    for (i64 x = 0; x < ell; ++x) {
        i64 v = 0;
        for (size_t i = c.size(); i-- > 0;) v = (mul_mod(v, x, ell) + c[i]) % ell;
        if (v == 0) ++roots;
    }
    return roots == f.size() - 1;
}

bool is_reciprocal(const IntPoly& f) {
    size_t d = f.size() - 1;
    bool plus = true, minus = true;
    for (size_t i = 0; i <= d; ++i) {
        if (f[i] != f[d - i]) plus = false;
        if (f[i] != -f[d - i]) minus = false;
    }
    return plus || minus;
}

std::vector<i64> genus_field_split_primes(int count, const mpz_class& avoid) {
    std::vector<i64> out;
    for (i64 ell = 13; static_cast<int>(out.size()) < count; ell += 12)
        if (is_prime(ell) && (avoid == 0 || avoid % ell != 0)) out.push_back(ell);
    return out;
}

RecognitionReport recognize(const std::vector<UnitCandidate>& cands, const NarrowClassGroup& G, int tau_cls,
                            int deg_bound, int budget, double min_margin, int aux_primes) {
    RecognitionReport rep;
    if (cands.empty()) throw std::invalid_argument("recognize: no candidates");
    if (cands[0].degenerate) {
        rep.note = "degenerate: a_0 = 0, the candidate is torsion times a power of p";
        return rep;
    }
    const long p = cands[0].value.p();
    std::optional<size_t> best;
    std::vector<AlgdepResult> results(cands.size());
    for (size_t j = 0; j < cands.size(); ++j) {
        ++rep.twists_tried;
        const auto& x = cands[j].value;
        int b = std::min(budget, x.valuation() < 0 ? x.inverse().abs_prec() : x.abs_prec());
        results[j] = algdep_minimal(x, deg_bound, b, min_margin);
        rep.margins.push_back(results[j].found ? results[j].margin : 0.0);
        if (!results[j].found) continue;
        ++rep.twists_passing;
        if (!best) {
            best = j;
            continue;
        }
        const auto& a = results[j];
        const auto& c = results[*best];
        if (a.degree < c.degree || (a.degree == c.degree && a.height < c.height)) best = j;
    }
    if (!best) {
        rep.note = "recognition failed for all " + std::to_string(rep.twists_tried) + " twists";
        return rep;
    }
    rep.success = true;
    rep.twist = static_cast<int>(*best);
    rep.unit = cands[*best];
    rep.algdep = results[*best];
    rep.unit.recognized = rep.algdep;
    const IntPoly& f = rep.algdep.poly;

    rep.newton = newton_root_valuations(f, p);
    auto pred = valuation_predictions(G, tau_cls);
    const int h = G.order();
    if (rep.algdep.degree % h == 0) {
        for (int r = 0; r < rep.algdep.degree / h; ++r)
            for (const auto& v : pred) rep.predicted.push_back(12 * v);
        std::sort(rep.predicted.begin(), rep.predicted.end());
        rep.newton_ok = rep.predicted == rep.newton;
    }
    rep.reciprocal_ok = is_reciprocal(f);
    if (G.D() == 12) {
        rep.field_checked = true;
        for (i64 ell : genus_field_split_primes(aux_primes, f.back())) {
            ++rep.field_primes;
            if (splits_completely_mod(f, ell)) ++rep.field_split;
        }
        rep.field_ok = 100 * rep.field_split >= 95 * rep.field_primes;
    }
    return rep;
}

LInvariants l_invariants_from_unit(const RecognitionReport& rec, const NarrowClassGroup& G, const Character& psi,
                                   int tau_cls) {
    if (!rec.success) throw std::invalid_argument("l_invariants_from_unit: no recognized unit");
    if (G.order() != 2 || rec.algdep.degree != 2)
        throw std::invalid_argument("l_invariants_from_unit: implemented for h+ = 2 with a quadratic minimal polynomial");
    const IntPoly& f = rec.algdep.poly;
    const PadicScalar& x = rec.unit.value;
    const auto& ctx = x.ctx();
    // other root: -c1/c2 - x
    PadicScalar xc = -PadicScalar::from_rational(ctx, f[1], f[2]) - x;
    // u_psi^12 = x^{psi(tau)} * xc^{psi(other)}, psi normalized so psi(identity) = 1
    PadicScalar up = psi[static_cast<size_t>(tau_cls)] > 0 ? x : x.inverse();
    up = up * (psi[static_cast<size_t>(1 - tau_cls)] > 0 ? xc : xc.inverse());
    LInvariants r;
    r.L_psi_0 = 0;
    for (int c = 0; c < G.order(); ++c) r.L_psi_0 += psi[static_cast<size_t>(c)] * G.partial_zeta_zero(c);
    r.L_psi_0.canonicalize();
    PadicScalar u1 = up, u2 = frobenius(up);
    r.ord1 = u1.valuation();
    r.ord2 = u2.valuation();
    if (r.ord1 == 0 || r.ord2 == 0) throw std::domain_error("l_invariants_from_unit: zero valuation (degenerate)");
    r.log1 = iwasawa_log(u1);
    r.log2 = iwasawa_log(u2);
    r.L1 = -r.log1 / PadicScalar::from_int(ctx, r.ord1.get_num());
    r.L2 = -r.log2 / PadicScalar::from_int(ctx, r.ord2.get_num());
    r.L = r.L1 + r.L2;
    // L_j L(psi, 0) = log(u_psi) = log(u_psi^12) / 12
    PadicScalar Lq = PadicScalar::from_rational(ctx, r.L_psi_0.get_num(), r.L_psi_0.get_den());
    PadicScalar twelve = PadicScalar::from_int(ctx, 12);
    int v1 = (r.L1 * Lq).val_diff(r.log1 / twelve), v2 = (r.L2 * Lq).val_diff(r.log2 / twelve);
    r.gross_stark_precision = std::min(v1, v2);
    r.gross_stark_ok = r.gross_stark_precision >= std::min(r.log1.abs_prec(), r.log2.abs_prec()) - 2;
    return r;
}

}  // namespace rmlab
