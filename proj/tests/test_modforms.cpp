#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmlab/modforms.hpp"
#include "rmlab/winding.hpp"

using namespace rmlab;

namespace {

bool agree(const PadicScalar& x, const PadicScalar& y) {
    return x.val_diff(y) >= std::min(x.abs_prec(), y.abs_prec());
}

bool series_agree(const QSeries& a, const QSeries& b, i64 from = 0) {
    i64 n = std::min(a.nmax(), b.nmax());
    for (i64 i = from; i <= n; ++i)
        if (!agree(a[i], b[i])) return false;
    return true;
}

i64 sigma1(i64 n) {
    i64 s = 0;
    for (i64 d = 1; d <= n; ++d)
        if (n % d == 0) s += d;
    return s;
}

// q prod (1 - q^n)^2 (1 - q^{11n})^2 by direct truncated polynomial multiplication.
std::vector<i64> eta11_oracle(i64 nmax) {
    std::vector<i64> f(static_cast<size_t>(nmax + 1), 0);
    f[0] = 1;
    auto mul_one_minus = [&](i64 k) {
        for (i64 i = nmax; i >= k; --i) f[static_cast<size_t>(i)] -= f[static_cast<size_t>(i - k)];
    };
    for (i64 n = 1; n <= nmax; ++n)
        for (int r = 0; r < 2; ++r) {
            mul_one_minus(n);
            if (11 * n <= nmax) mul_one_minus(11 * n);
        }
    std::vector<i64> out(static_cast<size_t>(nmax + 1), 0);
    for (i64 i = 1; i <= nmax; ++i) out[static_cast<size_t>(i)] = f[static_cast<size_t>(i - 1)];
    return out;
}

}  // namespace

TEST_CASE("E2^(p) coefficients") {
    auto e = e2p_coefficients(5, 60);
    CHECK(e[0] == 4);
    CHECK(e[1] == 24);
    CHECK(e[5] == 24);
    for (i64 n = 1; n <= 60; ++n) {
        if (n % 5) CHECK(e[static_cast<size_t>(n)] == 24 * sigma1(n));
        if (5 * n <= 60) CHECK(e[static_cast<size_t>(5 * n)] == e[static_cast<size_t>(n)]);
    }
}

TEST_CASE("eta product of level 11") {
    auto c = eta_cusp_coefficients(11, 80);
    auto o = eta11_oracle(80);
    CHECK(c == o);
    CHECK(c[1] == 1);
    CHECK(c[2] == -2);
    CHECK(c[3] == -1);
    // Hecke recursion at 2: a_{2n} = a_2 a_n - 2 a_{n/2}
    for (i64 n = 1; 2 * n <= 80; ++n) {
        i64 rhs = c[2] * c[static_cast<size_t>(n)] - (n % 2 == 0 ? 2 * c[static_cast<size_t>(n / 2)] : 0);
        CHECK(c[static_cast<size_t>(2 * n)] == rhs);
    }
}

TEST_CASE("Hecke operators on E2^(p)") {
    auto ctx = PadicContext::make(5, 20);
    auto e = e2p_series(ctx, 5, 90);
    for (long l : {2L, 3L}) {
        auto t = hecke_Tn(e, l);
        CHECK(t.nmax() == 90 / l);
        CHECK(series_agree(t, e.scaled(PadicScalar::from_int(ctx, 1 + l))));
    }
    CHECK(series_agree(hecke_Tn(e, 5), e));
    QSeries zero = e.scaled(PadicScalar::zero(ctx, 20));
    auto tz = hecke_Tn(zero, 3);
    for (i64 n = 0; n <= tz.nmax(); ++n) CHECK(tz[n].is_zero());
}

TEST_CASE("Hecke eigenform of level 11") {
    auto ctx = PadicContext::make(11, 15);
    auto f = eta_cusp_series(ctx, 11, 60);
    CHECK(series_agree(hecke_Tn(f, 2), f.scaled(PadicScalar::from_int(ctx, -2))));
    CHECK(series_agree(hecke_Tn(f, 3), f.scaled(PadicScalar::from_int(ctx, -1))));
    CHECK(series_agree(hecke_Tn(f, 11), f));  // a_11 = 1
}

TEST_CASE("dimensions") {
    CHECK(modular_dimension(5) == 1);
    CHECK(modular_dimension(7) == 1);
    CHECK(modular_dimension(11) == 2);
    CHECK(modular_dimension(13) == 1);
    CHECK_THROWS(modular_dimension(17));
}

TEST_CASE("fit: planted multiple of E2^(p)") {
    for (long p : {5L, 7L, 13L}) {
        auto ctx = PadicContext::make(p, 20);
        auto s = e2p_series(ctx, p, 30).scaled(PadicScalar::from_int(ctx, 3));
        s.coeffs[0] = PadicScalar::zero(ctx, 20);
        s.constant_known = false;
        auto fit = fit_to_basis(s, modular_basis(ctx, p, 30), 15);
        REQUIRE(fit.coeffs.size() == 1);
        CHECK(agree(fit.coeffs[0], PadicScalar::from_int(ctx, 3)));
        CHECK(agree(fit.a0, PadicScalar::from_int(ctx, 3 * (p - 1))));
        CHECK(fit.certified);
        CHECK(fit.check_rows.size() == 29);
        CHECK(fit.min_residual_valuation >= 20);
        auto L = extract_logJDR(fit, p, 15);
        CHECK(agree(L.value, PadicScalar::from_int(ctx, 12 * (p - 1) * 3)));
        CHECK(L.a0_consistent);
    }
}

TEST_CASE("fit: planted combination with the level-11 cusp form") {
    auto ctx = PadicContext::make(11, 20);
    auto b = modular_basis(ctx, 11, 40);
    REQUIRE(b.size() == 2);
    auto s = b[0] + b[1].scaled(PadicScalar::from_int(ctx, 7));
    auto fit = fit_to_basis(s, b, 15);
    CHECK(agree(fit.coeffs[0], PadicScalar::one(ctx)));
    CHECK(agree(fit.coeffs[1], PadicScalar::from_int(ctx, 7)));
    CHECK(fit.certified);
}

TEST_CASE("fit: a non-modular perturbation is flagged at its row") {
    auto ctx = PadicContext::make(5, 20);
    auto s = e2p_series(ctx, 5, 30);
    s.coeffs[17] += PadicScalar::from_int(ctx, 125);  // valuation-3 defect at n = 17
    auto fit = fit_to_basis(s, modular_basis(ctx, 5, 30), 15);
    CHECK_FALSE(fit.certified);
    CHECK(fit.min_residual_valuation == 3);
    REQUIRE(fit.worst_row.has_value());
    CHECK(*fit.worst_row == 17);
    CHECK_THROWS(fit_to_basis(s.truncated(5), modular_basis(ctx, 5, 5), 15));  // too few check rows
}

TEST_CASE("extraction is linear") {
    auto ctx = PadicContext::make(7, 20);
    auto s = e2p_series(ctx, 7, 30).scaled(PadicScalar::from_int(ctx, 5));
    auto fit = fit_to_basis(s, modular_basis(ctx, 7, 30), 15);
    auto neg = fit_to_basis(s.scaled(PadicScalar::from_int(ctx, -1)), modular_basis(ctx, 7, 30), 15);
    CHECK(agree(extract_logJDR(fit, 7, 15).value, -extract_logJDR(neg, 7, 15).value));
}

TEST_CASE("winding series: extraction agrees with twelve times the constant term") {
    NarrowClassGroup G(12);
    auto ctx = PadicContext::make(5, 25);
    QuadEmbedding emb(ctx, 12);
    ClassLogSums S(G, emb, 1);
    QSeries q;
    q.level = 5;
    q.coeffs = winding_series(S, G.representative(0), 30, 2);
    q.coeffs[0] = PadicScalar::zero(ctx, 25);
    q.constant_known = false;
    auto fit = fit_to_basis(q, modular_basis(ctx, 5, 30), 5);
    CHECK(fit.certified);
    CHECK(fit.min_residual_valuation >= 7);
    auto L = extract_logJDR(fit, 5, 5);
    CHECK(L.value.val_diff(L.a0.scaled(12)) >= fit.min_residual_valuation);
}

TEST_CASE("accelerated winding series fits to the working precision") {
    NarrowClassGroup G(12);
    auto ctx = PadicContext::make(5, 25);
    QuadEmbedding emb(ctx, 12);
    ClassLogSums S(G, emb, 1);
    auto acc = winding_series_accelerated(S, G.representative(0), 30, 4);
    auto fit_of = [&](const std::vector<PadicScalar>& a) {
        QSeries q;
        q.level = 5;
        q.coeffs = a;
        q.coeffs[0] = PadicScalar::zero(ctx, 25);
        q.constant_known = false;
        return fit_to_basis(q, modular_basis(ctx, 5, 30), 15);
    };
    auto raw = fit_of(acc.raw), fast = fit_of(acc.accelerated);
    CHECK(raw.min_residual_valuation <= 12);
    CHECK(fast.min_residual_valuation >= 18);
    CHECK(fast.certified);
    // both constant terms agree to the precision of the cruder one
    CHECK(extract_logJDR(fast, 5, 15).a0.val_diff(extract_logJDR(raw, 5, 5).a0) >= raw.min_residual_valuation);
}
