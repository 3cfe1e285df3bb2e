#include <loopinv/factor.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace loopinv;

namespace {
UniPoly P(std::initializer_list<long> coeffs) {
    std::vector<Rational> c;
    for (long v : coeffs) c.emplace_back(v);
    return UniPoly(std::move(c));
}

UniPoly expand(const std::vector<std::pair<UniPoly, int>>& factors) {
    UniPoly acc = UniPoly::constant(Rational(1));
    for (const auto& [f, m] : factors)
        for (int i = 0; i < m; ++i) acc = acc * f;
    return acc;
}
}  // namespace

TEST_CASE("x^2-x-1 is irreducible") {
    auto fs = factor_rational_poly(P({-1, -1, 1}));
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].first == P({-1, -1, 1}));
    CHECK(fs[0].second == 1);
}

TEST_CASE("x^6-10x^4+31x^2-30 splits into three quadratics") {
    UniPoly f = P({-2, 0, 1}) * P({-3, 0, 1}) * P({-5, 0, 1});
    CHECK(f == P({-30, 0, 31, 0, -10, 0, 1}));
    auto fs = factor_rational_poly(f);
    REQUIRE(fs.size() == 3);
    CHECK(fs[0].first == P({-5, 0, 1}));
    CHECK(fs[1].first == P({-3, 0, 1}));
    CHECK(fs[2].first == P({-2, 0, 1}));
    for (auto& [g, m] : fs) CHECK(m == 1);
}

TEST_CASE("monomials and repeated factors") {
    auto fs = factor_rational_poly(P({0, 0, 0, 1}));
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].first == UniPoly::x());
    CHECK(fs[0].second == 3);

    UniPoly f = P({-1, 1}) * P({-1, 1}) * P({1, 0, 1});
    auto gs = factor_rational_poly(f);
    REQUIRE(gs.size() == 2);
    CHECK(gs[0].first == P({-1, 1}));
    CHECK(gs[0].second == 2);
    CHECK(gs[1].first == P({1, 0, 1}));
    CHECK(gs[1].second == 1);
}

TEST_CASE("cyclotomic-like and higher degree inputs") {
    // x^4 - 10x^2 + 1 (minimal polynomial of sqrt2+sqrt3) is irreducible
    auto fs = factor_rational_poly(P({1, 0, -10, 0, 1}));
    REQUIRE(fs.size() == 1);
    // x^4 + 1
    auto gs = factor_rational_poly(P({1, 0, 0, 0, 1}));
    REQUIRE(gs.size() == 1);
    // x^12 - 1 factors into all cyclotomics dividing 12
    std::vector<Rational> c(13, Rational(0));
    c[0] = -1;
    c[12] = 1;
    auto hs = factor_rational_poly(UniPoly(c));
    CHECK(hs.size() == 6);  // phi_1,2,3,4,6,12
    CHECK(expand(hs) == UniPoly(c));
}

TEST_CASE("product of factorization reproduces the input") {
    std::mt19937_64 rng(42);
    std::vector<UniPoly> atoms = {
        P({-1, 1}), P({1, 1}), P({-2, 0, 1}), P({1, 0, 1}), P({-1, -1, 1}), P({1, 1, 1}), P({0, 1}),
    };
    for (int trial = 0; trial < 25; ++trial) {
        UniPoly f = UniPoly::constant(Rational(1));
        int parts = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < parts; ++i) {
            const UniPoly& a = atoms[rng() % atoms.size()];
            int mult = 1 + static_cast<int>(rng() % 2);
            for (int j = 0; j < mult; ++j) f = f * a;
        }
        auto fs = factor_rational_poly(f);
        CHECK(expand(fs) == f.monic());
        for (auto& [g, m] : fs) {
            CHECK(g.leading() == 1);
            // irreducibility sanity: factoring a factor returns itself
            auto sub = factor_rational_poly(g);
            REQUIRE(sub.size() == 1);
            CHECK(sub[0].first == g);
            CHECK(sub[0].second == 1);
        }
    }
}

TEST_CASE("zero polynomial is rejected") {
    CHECK_THROWS_AS(factor_rational_poly(UniPoly()), std::domain_error);
}

TEST_CASE("larger coefficients") {
    // (3x^2 - 7)(5x^3 + x - 11) expanded, non-monic input
    UniPoly f = P({-7, 0, 3}) * P({-11, 1, 0, 5});
    auto fs = factor_rational_poly(f);
    REQUIRE(fs.size() == 2);
    UniPoly prod = expand(fs);
    CHECK(prod == f.monic());
}
