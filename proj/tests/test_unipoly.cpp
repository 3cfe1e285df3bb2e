#include <loopinv/unipoly.hpp>

#include <catch_amalgamated.hpp>

using namespace loopinv;

namespace {
UniPoly P(std::initializer_list<long> coeffs) {
    std::vector<Rational> c;
    for (long v : coeffs) c.emplace_back(v);
    return UniPoly(std::move(c));
}
}  // namespace

TEST_CASE("rational parsing and canonical form") {
    CHECK(parse_rational("4/6") == Rational(2, 3));
    CHECK(parse_rational("-8/2") == Rational(-4));
    CHECK(parse_rational("0/7") == Rational(0));
    CHECK(to_string(parse_rational("1/16")) == "1/16");
    CHECK_THROWS_AS(parse_rational("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(make_rational(1, 0), std::domain_error);
}

TEST_CASE("polynomial arithmetic basics") {
    UniPoly f = P({-1, -1, 1});  // x^2 - x - 1
    UniPoly g = P({1, 1});       // x + 1
    CHECK((f * g).degree() == 3);
    auto [q, r] = (f * g + P({5})).divmod(g);
    CHECK(q == f);
    CHECK(r == P({5}));
    CHECK(f.eval(Rational(2)) == Rational(1));
    CHECK(f.derivative() == P({-1, 2}));
}

TEST_CASE("compose_linear expands f(a*x+b)") {
    UniPoly f = P({0, 0, 1});  // x^2
    CHECK(f.compose_linear(Rational(2), Rational(1)) == P({1, 4, 4}));
    UniPoly h = P({-2, 0, 1});  // x^2 - 2
    // h((x - t)/1) at a = 1, b = -3 -> (x-3)^2 - 2 = x^2 - 6x + 7
    CHECK(h.compose_linear(Rational(1), Rational(-3)) == P({7, -6, 1}));
}

TEST_CASE("gcd and xgcd") {
    UniPoly f = P({-1, 0, 1});   // (x-1)(x+1)
    UniPoly g = P({-1, 1});      // x - 1
    CHECK(poly_gcd(f, g) == g.monic());
    auto [d, s, t] = poly_xgcd(P({-2, 0, 1}), P({1, 1}));
    CHECK(d.is_one());
    CHECK((s * P({-2, 0, 1}) + t * P({1, 1})) == UniPoly::constant(Rational(1)));
}

TEST_CASE("squarefree part") {
    UniPoly f = P({0, 0, 0, 1});  // x^3
    CHECK(squarefree_part(f) == UniPoly::x());
    UniPoly g = P({-1, 1}) * P({-1, 1}) * P({1, 1});
    CHECK(squarefree_part(g) == (P({-1, 1}) * P({1, 1})).monic());
}

TEST_CASE("resultants against closed forms") {
    // res(x^2-2, 2x) = lc^0 * prod f'(roots) = (2*sqrt2)(-2*sqrt2) = -8
    CHECK(resultant(P({-2, 0, 1}), P({0, 2})) == Rational(-8));
    // res(x^2-2, x^2-3) = prod (2 - 3) over both roots = 1
    CHECK(resultant(P({-2, 0, 1}), P({-3, 0, 1})) == Rational(1));
    // common root -> 0
    CHECK(resultant(P({-1, 0, 1}), P({-1, 1})) == Rational(0));
    // res(f, g) with f = x-2, g = x-5 -> g(2) = -3
    CHECK(resultant(P({-2, 1}), P({-5, 1})) == Rational(-3));
    // swap antisymmetry on odd x odd degrees
    CHECK(resultant(P({-5, 1}), P({-2, 1})) == Rational(3));
}

TEST_CASE("primitive integer coefficients") {
    UniPoly f = P({1, 2}) * UniPoly::constant(Rational(3, 7));
    auto z = f.primitive_integer_coeffs();
    REQUIRE(z.size() == 2);
    CHECK(z[0] == 1);
    CHECK(z[1] == 2);
}
