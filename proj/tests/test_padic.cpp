#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmlab/padic.hpp"
#include "rmlab/report.hpp"
#include "rmlab/suites.hpp"

using namespace rmlab;

namespace {

bool agree(const PadicScalar& x, const PadicScalar& y) {
    return x.val_diff(y) >= std::min(x.abs_prec(), y.abs_prec());
}

PadicScalar I(const PadicCtx& ctx, long n) { return PadicScalar::from_int(ctx, n); }

}  // namespace

TEST_CASE("context basics") {
    auto ctx = PadicContext::make(5, 20);
    CHECK(ctx->p() == 5);
    CHECK(ctx->r() == 2);  // least non-residue mod 5
    CHECK(ctx->W() > ctx->N());
    CHECK(PadicContext::make(7, 10)->r() == 3);
    CHECK_THROWS(PadicContext::make(6, 10));
}

TEST_CASE("valuation and precision bookkeeping") {
    auto ctx = PadicContext::make(5, 20);
    auto x = I(ctx, 250);  // 2 * 5^3
    CHECK(x.valuation() == 3);
    CHECK(x.in_Qp());
    auto y = PadicScalar::from_rational(ctx, 3, 25);
    CHECK(y.valuation() == -2);
    CHECK(agree(y * I(ctx, 25), I(ctx, 3)));
    auto coarse = I(ctx, 7).with_abs_prec(6);
    CHECK((coarse + I(ctx, 1)).abs_prec() == 6);
    CHECK(PadicScalar::zero(ctx, 9).valuation() == 9);
    CHECK((I(ctx, 3) - I(ctx, 3)).is_zero());
}

TEST_CASE("iwasawa_log fixed points") {
    auto ctx = PadicContext::make(5, 25);
    CHECK(iwasawa_log(PadicScalar::one(ctx)).is_zero());
    CHECK(iwasawa_log(I(ctx, 5)).is_zero());
    CHECK(iwasawa_log(I(ctx, -1)).is_zero());
}

TEST_CASE("log(1 + p) against the partial sums of the series") {
    for (long p : {5L, 7L, 11L}) {
        auto ctx = PadicContext::make(p, 30);
        mpq_class s = 0;
        mpz_class pk = 1;
        // terms p^k / k have valuation >= k - log_p k, far past 30 + guard at k = 60
        for (int k = 1; k <= 60; ++k) {
            pk *= p;
            mpq_class t(pk, k);
            t.canonicalize();
            s += (k % 2 ? t : mpq_class(-t));
        }
        auto oracle = PadicScalar::from_rational(ctx, s.get_num(), s.get_den());
        auto got = iwasawa_log(I(ctx, 1 + p));
        CHECK(got.val_diff(oracle) >= 30);
        CHECK(got.valuation() == 1);
    }
}

TEST_CASE("exp basics") {
    auto ctx = PadicContext::make(7, 25);
    CHECK(agree(padic_exp(PadicScalar::zero(ctx, 25)), PadicScalar::one(ctx)));
    auto u = I(ctx, 8);
    CHECK(agree(padic_exp(iwasawa_log(u)), u));
    auto x = I(ctx, 14) + PadicScalar::omega(ctx).scaled(49);
    CHECK(agree(padic_exp(x) * padic_exp(-x), PadicScalar::one(ctx)));
    CHECK_THROWS(padic_exp(I(ctx, 1)));
}

TEST_CASE("teichmuller") {
    auto ctx = PadicContext::make(5, 20);
    CHECK(agree(teichmuller(PadicScalar::one(ctx)), PadicScalar::one(ctx)));
    for (long a = 1; a < 5; ++a)
        for (long b = 0; b < 5; ++b) {
            auto x = I(ctx, a + 5 * (b + 3)) + PadicScalar::omega(ctx).scaled(b);
            auto t = teichmuller(x);
            CHECK(agree(t.pow(24), PadicScalar::one(ctx)));
            CHECK(t.val_diff(x) >= 1);
        }
}

TEST_CASE("frobenius and norm") {
    auto ctx = PadicContext::make(7, 20);
    auto w = PadicScalar::omega(ctx);
    CHECK(agree(frobenius(I(ctx, 12)), I(ctx, 12)));
    CHECK(agree(frobenius(w), -w));
    CHECK(agree(norm_to_Qp(w), I(ctx, -ctx->r())));
    CHECK(agree(w * w, I(ctx, ctx->r())));
}

TEST_CASE("dual numbers") {
    auto ctx = PadicContext::make(5, 15);
    DualScalar x{I(ctx, 2), I(ctx, 3)}, y{I(ctx, 4), I(ctx, 5)};
    auto z = x * y;  // (2 + 3e)(4 + 5e) = 8 + 22e
    CHECK(agree(z.a, I(ctx, 8)));
    CHECK(agree(z.b, I(ctx, 22)));
}

TEST_CASE("JSON serialization roundtrip") {
    auto ctx = PadicContext::make(5, 20);
    for (auto x : {PadicScalar::from_rational(ctx, 7, 125) + PadicScalar::omega(ctx),
                   iwasawa_log(I(ctx, 6)), PadicScalar::zero(ctx, 20), I(ctx, 3).with_abs_prec(4)}) {
        auto j = padic_to_json(x);
        auto y = padic_from_json(j, ctx);
        CHECK(y.abs_prec() == x.abs_prec());
        CHECK(agree(x, y));
        CHECK(padic_to_json(y) == j);
    }
}

TEST_CASE("randomized ring, log, exp and Frobenius laws") {
    for (long p : {5L, 7L, 13L}) {
        auto res = suite_padic(p, 20, 300, 1234 + static_cast<std::uint64_t>(p));
        INFO(res.table.dump());
        CHECK(res.pass);
    }
}
