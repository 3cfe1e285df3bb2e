#include <loopinv/numberfield.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace loopinv;

namespace {
UniPoly P(std::initializer_list<long> coeffs) {
    std::vector<Rational> c;
    for (long v : coeffs) c.emplace_back(v);
    return UniPoly(std::move(c));
}
}  // namespace

TEST_CASE("root isolation finds certified disjoint boxes") {
    auto boxes = isolate_roots(P({-2, 0, 1}));  // x^2 - 2
    REQUIRE(boxes.size() == 2);
    CHECK(boxes[0].center_re() < 0);
    CHECK(boxes[1].center_re() > 0);
    for (auto& b : boxes) CHECK(interval_eval(P({-2, 0, 1}), b).contains_zero());

    auto im = isolate_roots(P({1, 0, 1}));  // x^2 + 1
    REQUIRE(im.size() == 2);
    CHECK(im[0].center_im() < 0);
    CHECK(im[1].center_im() > 0);
}

TEST_CASE("refinement shrinks boxes and keeps the root") {
    UniPoly f = P({-1, -1, 1});
    auto boxes = isolate_roots(f);
    REQUIRE(boxes.size() == 2);
    BoxC b = boxes[1];
    for (int i = 0; i < 6; ++i) {
        auto r = krawczyk_refine(f, f.derivative(), b, 256);
        REQUIRE(r.has_value());
        CHECK(r->radius() <= b.radius());
        CHECK(r->re.lo >= b.re.lo);
        CHECK(r->re.hi <= b.re.hi);
        CHECK(interval_eval(f, *r).contains_zero());
        b = *r;
    }
    CHECK(b.radius() < Rational(1, 1000000));
}

TEST_CASE("splitting field of one quadratic") {
    auto sf = splitting_field({P({-2, 0, 1})});
    CHECK(sf.field->degree() == 2);
    REQUIRE(sf.roots[0].size() == 2);
    const auto& r = sf.roots[0];
    CHECK((r[0] + r[1]).is_zero());
    CHECK((r[0] * r[0]) == AlgebraicNumber(Rational(2)));
}

TEST_CASE("splitting field of a linear factor stays rational") {
    auto sf = splitting_field({P({-5, 1})});
    CHECK(sf.field->degree() == 1);
    REQUIRE(sf.roots[0].size() == 1);
    CHECK(sf.roots[0][0].rational_value() == 5);
}

TEST_CASE("splitting field of x^2-2 and x^2-3") {
    auto sf = splitting_field({P({-2, 0, 1}), P({-3, 0, 1})});
    CHECK(sf.field->degree() == 4);
    CHECK(sf.field->min_poly() == P({1, 0, -10, 0, 1}));  // x^4 - 10x^2 + 1
    // pick the positive roots and verify (sqrt2 + sqrt3)^-1 = sqrt3 - sqrt2
    AlgebraicNumber s2 = sf.roots[0][1], s3 = sf.roots[1][1];
    CHECK(s2 * s2 == AlgebraicNumber(Rational(2)));
    CHECK(s3 * s3 == AlgebraicNumber(Rational(3)));
    AlgebraicNumber inv = (s2 + s3).inverse();
    CHECK(inv == s3 - s2);
    CHECK((s2 + s3) * inv == AlgebraicNumber(Rational(1)));
    // min poly of the primitive combination
    CHECK(min_poly_of(s2 + s3) == P({1, 0, -10, 0, 1}));
    CHECK(min_poly_of(s2) == P({-2, 0, 1}));
}

TEST_CASE("field arithmetic identities") {
    auto sf = splitting_field({P({-2, 0, 1})});
    AlgebraicNumber s2 = sf.roots[0][1];
    CHECK(s2 * s2 == AlgebraicNumber(Rational(2)));
    CHECK((s2 + AlgebraicNumber()) == s2);  // a + 0 = a
    CHECK_THROWS_AS(AlgebraicNumber().inverse(), std::domain_error);
}

TEST_CASE("conjugates") {
    auto sf = splitting_field({P({-2, 0, 1})});
    auto cs = conjugates(sf.roots[0][1]);
    REQUIRE(cs.conjugates.size() == 2);
    CHECK(cs.conjugates[0] == -cs.conjugates[1]);
    bool member = false;
    for (auto& c : cs.conjugates) member = member || (c == sf.roots[0][1]);
    CHECK(member);

    // omega = -1/2 + sqrt3/2 i, root of x^2+x+1: conjugates are omega, omega^2
    auto sw = splitting_field({P({1, 1, 1})});
    AlgebraicNumber omega = sw.roots[0][1];  // positive imaginary part
    auto cw = conjugates(omega);
    REQUIRE(cw.conjugates.size() == 2);
    CHECK(cw.conjugates[0] == omega * omega);
    CHECK(cw.conjugates[1] == omega);

    // rational numbers are their own conjugate set
    auto cq = conjugates(AlgebraicNumber(Rational(5)));
    REQUIRE(cq.conjugates.size() == 1);
    CHECK(cq.conjugates[0].rational_value() == 5);
}

TEST_CASE("conjugates satisfy the same minimal polynomial") {
    auto sf = splitting_field({P({-2, 0, 1}), P({1, 1, 1})});
    AlgebraicNumber mix = sf.roots[0][1] + sf.roots[1][0];
    UniPoly m = min_poly_of(mix);
    auto cs = conjugates(mix);
    CHECK(static_cast<long>(cs.conjugates.size()) == m.degree());
    for (auto& c : cs.conjugates) CHECK(kpoly::eval(m, c).is_zero());
}

TEST_CASE("roots of unity") {
    CHECK(root_of_unity_order(AlgebraicNumber(Rational(-1))) == 2ul);
    CHECK(root_of_unity_order(AlgebraicNumber(Rational(1))) == 1ul);
    CHECK(!root_of_unity_order(AlgebraicNumber(Rational(2))).has_value());
    CHECK_THROWS_AS(root_of_unity_order(AlgebraicNumber()), std::domain_error);

    auto sw = splitting_field({P({1, 1, 1})});
    CHECK(root_of_unity_order(sw.roots[0][0]) == 3ul);

    auto si = splitting_field({P({1, 0, 1})});
    CHECK(root_of_unity_order(si.roots[0][1]) == 4ul);
    CHECK(root_of_unity_order(-si.roots[0][1]) == 4ul);

    auto s2 = splitting_field({P({-2, 0, 1})});
    CHECK(!root_of_unity_order(s2.roots[0][1]).has_value());
}

TEST_CASE("inverse round-trip fuzz in a degree-8 field") {
    auto sf = splitting_field({P({-2, 0, 1}), P({-3, 0, 1}), P({-5, 0, 1})});
    REQUIRE(sf.field->degree() == 8);
    std::mt19937_64 rng(7);
    AlgebraicNumber one(Rational(1));
    int tested = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Rational> coords(8);
        for (auto& c : coords)
            c = make_rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3));
        AlgebraicNumber a(sf.field, std::move(coords));
        if (a.is_zero()) continue;
        ++tested;
        CHECK(a * a.inverse() == one);
    }
    CHECK(tested >= 990);
}

TEST_CASE("as_polynomial_in recovers subfield coordinates") {
    auto sf = splitting_field({P({-2, 0, 1}), P({-3, 0, 1})});
    AlgebraicNumber s2 = sf.roots[0][1], s3 = sf.roots[1][1];
    AlgebraicNumber val = s2 * Rational(3) + AlgebraicNumber(Rational(1, 2));
    auto q = as_polynomial_in(val, s2, 2);
    REQUIRE(q.has_value());
    CHECK((*q)[0] == Rational(1, 2));
    CHECK((*q)[1] == Rational(3));
    // sqrt3 is not in Q(sqrt2)
    CHECK(!as_polynomial_in(s3, s2, 2).has_value());
}
