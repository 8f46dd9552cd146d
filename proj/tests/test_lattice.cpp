#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rmlab/lattice.hpp"
#include "rmlab/quadfield.hpp"

using namespace rmlab;

namespace {

using Row = std::vector<mpz_class>;

mpz_class norm2(const Row& r) {
    mpz_class s = 0;
    for (const auto& x : r) s += x * x;
    return s;
}

// Random unimodular matrix as a product of elementary row operations.
IntegerLattice scramble(IntegerLattice L, std::mt19937_64& rng, int steps) {
    const size_t n = L.rank();
    for (int s = 0; s < steps; ++s) {
        size_t i = rng() % n, j = rng() % n;
        if (i == j) continue;
        long k = static_cast<long>(rng() % 7) - 3;
        for (size_t c = 0; c < L.dim(); ++c) L.rows[i][c] += k * L.rows[j][c];
        if (rng() % 5 == 0) std::swap(L.rows[i], L.rows[j]);
    }
    return L;
}

}  // namespace

TEST_CASE("orthogonal basis is left alone") {
    IntegerLattice L{{{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}};
    auto R = lll_reduce(L);
    CHECK(is_lll_reduced(R));
    std::vector<mpz_class> norms;
    for (const auto& r : R.rows) norms.push_back(norm2(r));
    std::sort(norms.begin(), norms.end());
    CHECK(norms == std::vector<mpz_class>{1, 4, 9});
    CHECK(R.gram_determinant() == L.gram_determinant());
}

TEST_CASE("planted short vector is recovered first") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        // basis with one very short vector and long companions
        IntegerLattice L;
        const size_t n = 5;
        for (size_t i = 0; i < n; ++i) {
            Row r(n, 0);
            r[i] = (i == 0) ? 1 : 1000 + static_cast<long>(rng() % 1000);
            L.rows.push_back(r);
        }
        auto S = scramble(L, rng, 60);
        auto R = lll_reduce(S);
        CHECK(is_lll_reduced(R));
        CHECK(norm2(R.rows[0]) == 1);
        CHECK(R.gram_determinant() == L.gram_determinant());
    }
}

TEST_CASE("dependent rows are rejected") {
    IntegerLattice L{{{1, 2, 3}, {2, 4, 6}}};
    CHECK_THROWS_AS(lll_reduce(L), std::invalid_argument);
}

TEST_CASE("polynomial helpers") {
    IntPoly f{-3, 0, 1};  // x^2 - 3
    CHECK(poly_height(f) == 3);
    CHECK(poly_str(f) == "x^2 - 3");
    CHECK(poly_primitive(IntPoly{6, -4, 0}) == IntPoly{-3, 2});  // -(2x - 3) normalized to positive leading coefficient
    CHECK(poly_divides(IntPoly{-1, 1}, IntPoly{-1, 0, 1}));
    CHECK_FALSE(poly_divides(IntPoly{1, 1, 1}, IntPoly{-1, 0, 1}));
    auto ctx = PadicContext::make(5, 20);
    auto v = poly_eval(IntPoly{1, 2, 3}, PadicScalar::from_int(ctx, 2));  // 1 + 4 + 12
    CHECK(v.val_diff(PadicScalar::from_int(ctx, 17)) >= 20);
}

TEST_CASE("algdep on known values") {
    auto ctx = PadicContext::make(5, 30);
    auto r = algdep_padic(PadicScalar::from_int(ctx, 3), 1, 30);
    REQUIRE(r.found);
    CHECK(r.poly == IntPoly{-3, 1});
    QuadEmbedding emb(ctx, 12);
    auto s = algdep_minimal(emb.sqrtD(), 4, 30, 1000);
    REQUIRE(s.found);
    CHECK(s.poly == IntPoly{-12, 0, 1});
    CHECK(s.degree == 2);
    // a value of negative valuation: 5 / (2 + sqrt 3), root of x^2 - 20x + 25
    auto u = emb.embed(4, 1, 2).inverse().scaled(5);
    auto t = algdep_minimal(u, 4, 30, 1000);
    REQUIRE(t.found);
    CHECK(t.poly == IntPoly{25, -20, 1});
    auto w = algdep_minimal(PadicScalar::from_rational(ctx, 7, 125), 2, 30, 1000);
    REQUIRE(w.found);
    CHECK(w.poly == IntPoly{-7, 125});
}

TEST_CASE("plant and recover 200 algebraic numbers") {
    auto ctx = PadicContext::make(5, 30);
    std::mt19937_64 rng(7);
    int ok = 0, total = 0;
    while (total < 200) {
        int d = 1 + static_cast<int>(rng() % 4);
        IntPoly f(static_cast<size_t>(d + 1));
        for (auto& c : f) c = static_cast<long>(rng() % 101) - 50;
        if (f[static_cast<size_t>(d)] == 0) continue;
        auto x = hensel_root(f, ctx);
        if (!x) continue;
        ++total;
        auto a = algdep_padic(*x, d, 30, 50);
        if (a.found && poly_divides(a.poly, f) && poly_eval(a.poly, *x).valuation() >= 30) ++ok;
    }
    CHECK(ok >= 198);
}

TEST_CASE("height bound filters candidates") {
    auto ctx = PadicContext::make(5, 30);
    auto r = algdep_padic(PadicScalar::from_rational(ctx, 1000, 999), 1, 30, 100);
    CHECK_FALSE(r.found);
}
