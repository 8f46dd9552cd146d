#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rmlab/gsunits.hpp"

using namespace rmlab;

namespace {

bool agree(const PadicScalar& x, const PadicScalar& y) {
    return x.val_diff(y) >= std::min(x.abs_prec(), y.abs_prec());
}

// i in Z_5 with i = 2 mod 5.
PadicScalar sqrt_minus_one(const PadicCtx& ctx) {
    mpz_class r = ctx->sqrt_scalar(mpz_class(-1) + ctx->ppow(ctx->W()));
    return PadicScalar::from_coords(ctx, r, 0, 0, ctx->W());
}

// Planted constant term: 12 a_0 = log((3 + 4i)/5), a 5-unit of Q(i), inside the genus field Q(sqrt 3, i).
PadicScalar planted_a0(const PadicCtx& ctx) {
    auto u = (PadicScalar::from_int(ctx, 3) + sqrt_minus_one(ctx).scaled(4)) / PadicScalar::from_int(ctx, 5);
    return iwasawa_log(u) / PadicScalar::from_int(ctx, 12);
}

}  // namespace

TEST_CASE("valuation predictions") {
    for (i64 D : {12, 21, 60}) {
        NarrowClassGroup G(D);
        for (int c = 0; c < G.order(); ++c) {
            auto v = valuation_predictions(G, c);
            mpq_class s = 0;
            for (const auto& x : v) s += x;
            CHECK(s == 0);
            mpq_class t = 12 * v[0];
            t.canonicalize();
            CHECK(t.get_den() == 1);
        }
    }
    NarrowClassGroup G(12);
    auto v = valuation_predictions(G, 0);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == -v[1]);
    CHECK(abs(v[0]) == mpq_class(1, 12));
}

TEST_CASE("torsion generator has exact order p^2 - 1") {
    for (long p : {5L, 7L}) {
        auto ctx = PadicContext::make(p, 20);
        auto z = torsion_generator(ctx);
        const long q = p * p - 1;
        CHECK(agree(z.pow(q), PadicScalar::one(ctx)));
        for (auto [l, e] : factorize(q)) CHECK_FALSE(agree(z.pow(q / l), PadicScalar::one(ctx)));
    }
}

TEST_CASE("unit candidates from a constant term") {
    auto ctx = PadicContext::make(5, 30);
    NarrowClassGroup G(12);
    auto a0 = planted_a0(ctx);
    auto cands = unit_from_constant_term(a0, G, 0);
    CHECK(cands.size() == 24);  // every twist tried
    for (const auto& c : cands) {
        CHECK_FALSE(c.degenerate);
        CHECK(c.value.valuation() == c.pinned_valuation);
        CHECK(agree(iwasawa_log(c.value), a0.scaled(12)));  // log kills p and torsion
    }
    // roundtrip: exp(log) reproduces the principal-unit part
    auto u0 = cands[0].value / PadicScalar::from_int(ctx, 5).pow(cands[0].pinned_valuation);
    CHECK(agree(padic_exp(iwasawa_log(u0)), u0));
    // zero constant term: torsion times p^Z only
    auto deg = unit_from_constant_term(PadicScalar::zero(ctx, 30), G, 0);
    CHECK(deg.front().degenerate);
    // a constant term of non-positive valuation cannot come from a convergent fit
    CHECK_THROWS_AS(unit_from_constant_term(PadicScalar::from_rational(ctx, 1, 5), G, 0), std::domain_error);
}

TEST_CASE("Newton polygon, splitting and reciprocity helpers") {
    auto nv = newton_root_valuations(IntPoly{5, -6, 5}, 5);  // 5x^2 - 6x + 5: slopes -1, +1
    REQUIRE(nv.size() == 2);
    CHECK(nv[0] == -1);
    CHECK(nv[1] == 1);
    auto flat = newton_root_valuations(IntPoly{1, -6, 1}, 5);
    CHECK(flat == std::vector<mpq_class>{0, 0});  // negative control: wrong slope multiset
    CHECK(splits_completely_mod(IntPoly{1, 0, 1}, 13));
    CHECK_FALSE(splits_completely_mod(IntPoly{1, 0, 1}, 7));
    CHECK(is_reciprocal(IntPoly{5, -6, 5}));
    CHECK_FALSE(is_reciprocal(IntPoly{5, -6, 1}));
    auto ps = genus_field_split_primes(10, 5);
    REQUIRE(ps.size() == 10);
    for (i64 l : ps) {
        CHECK(l % 12 == 1);
        CHECK(is_prime(l));
    }
    CHECK(ps[0] == 13);
}

TEST_CASE("planted unit is recognized with its minimal polynomial") {
    auto ctx = PadicContext::make(5, 40);
    NarrowClassGroup G(12);
    auto cands = unit_from_constant_term(planted_a0(ctx), G, 0);
    auto rec = recognize(cands, G, 0, 4, 40, std::pow(5.0, 5));
    REQUIRE(rec.success);
    CHECK(rec.twists_tried == 24);
    CHECK(rec.algdep.poly == IntPoly{5, -6, 5});
    CHECK(rec.algdep.margin >= std::pow(5.0, 5));
    CHECK(rec.newton_ok);
    CHECK(rec.reciprocal_ok);
    REQUIRE(rec.field_checked);
    CHECK(rec.field_ok);
    CHECK(rec.field_split >= 48);  // >= 95% of 50
    // the recognized root really is the candidate
    CHECK(poly_eval(rec.algdep.poly, rec.unit.value).valuation() >= 35);
}

TEST_CASE("L-invariants from the recognized unit") {
    auto ctx = PadicContext::make(5, 40);
    NarrowClassGroup G(12);
    auto psi = G.odd_characters().at(0);
    auto rec = recognize(unit_from_constant_term(planted_a0(ctx), G, 0), G, 0, 4, 40, std::pow(5.0, 5));
    REQUIRE(rec.success);
    auto li = l_invariants_from_unit(rec, G, psi, 0);
    CHECK(agree(li.L, li.L1 + li.L2));
    CHECK(li.L_psi_0 == mpq_class(1, 6));  // sum of psi(C) zeta(C, 0) = 1/12 + 1/12
    CHECK(li.gross_stark_ok);
    // L_j L(psi, 0) = log(embedding j of u_psi), both sides computed independently (division by ord costs digits)
    auto Lq = PadicScalar::from_rational(ctx, 1, 6);
    CHECK((li.L1 * Lq).val_diff(li.log1 / PadicScalar::from_int(ctx, 12)) >= 35);
    CHECK((li.L2 * Lq).val_diff(li.log2 / PadicScalar::from_int(ctx, 12)) >= 35);
    CHECK(li.ord1 == -2);
    // the second embedding is the Frobenius conjugate
    CHECK(agree(li.L2, frobenius(li.L1)));
    // psi is quadratic, so psi^-1 = psi and L1(psi) = L2(psi^-1) = L2(psi)
    CHECK(li.L1.val_diff(li.L2) >= 35);
}
