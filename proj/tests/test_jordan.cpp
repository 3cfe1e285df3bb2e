#include <loopinv/jordan.hpp>

#include <catch_amalgamated.hpp>

#include <random>

using namespace loopinv;

namespace {

Mat<Rational> matQ(size_t d, std::initializer_list<long> entries, const Rational& scale = Rational(1)) {
    Mat<Rational> m(d, d);
    auto it = entries.begin();
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) m.at(i, j) = Rational(*it++) * scale;
    return m;
}

std::vector<Rational> vecQ(std::initializer_list<const char*> entries) {
    std::vector<Rational> v;
    for (auto* s : entries) v.push_back(parse_rational(s));
    return v;
}

Loop fibonacci_loop() {
    return Loop{matQ(3, {1, 1, 0, 1, 0, 0, 0, 0, -1}), vecQ({"1", "0", "-1"})};
}

Loop example_isolated() {  // 3 isolated points, eigenvalues 0,0,0,2,2,2
    return Loop{matQ(6,
                     {42, 0, -7, -42, 21, 28,   //
                      -50, 10, 0, 2, -2, -20,   //
                      -26, -20, 28, 52, -10, -30,  //
                      -4, -2, 0, -6, 6, 4,      //
                      14, 0, -14, -28, 28, 14,  //
                      -38, -12, 14, 48, -20, -18},
                     Rational(1, 14)),
                vecQ({"0", "1/2", "7/8", "-5/16", "0", "0"})};
}

Loop example_lattice() {  // primitive third and fourth roots of unity
    return Loop{matQ(6,
                     {0, 0, 0, 0, 0, -1,  //
                      1, 0, 0, 0, 0, -2,  //
                      0, 1, 0, 0, 0, -4,  //
                      0, 0, 1, 0, 0, -4,  //
                      0, 0, 0, 1, 0, -4,  //
                      0, 0, 0, 0, 1, -2},
                     Rational(1)),
                vecQ({"2", "-1", "1", "1", "0", "-1"})};
}

KMat qmat_to_kmat(const Mat<Rational>& m) {
    KMat r(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) r.at(i, j) = AlgebraicNumber(m.at(i, j));
    return r;
}

}  // namespace

TEST_CASE("fibonacci jordan form") {
    auto jd = jordan_decomposition(fibonacci_loop());
    REQUIRE(jd.blocks.size() == 3);
    CHECK(jd.d0 == 0);
    CHECK(jd.nil_index == 0);
    CHECK(jd.n0 == 0);
    for (auto& b : jd.blocks) CHECK(b.size == 1);
    // eigenvalues: the two roots of x^2-x-1 and -1
    int count_golden = 0, count_neg1 = 0;
    for (auto& b : jd.blocks) {
        if (b.eigen_minpoly.degree() == 2) ++count_golden;
        if (b.eigen == AlgebraicNumber(Rational(-1))) ++count_neg1;
    }
    CHECK(count_golden == 2);
    CHECK(count_neg1 == 1);
    CHECK(jd.P * jd.J * jd.Pinv == qmat_to_kmat(fibonacci_loop().update));
}

TEST_CASE("identity matrix decomposes trivially") {
    Loop idloop{matQ(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}), vecQ({"2", "3", "4"})};
    auto jd = jordan_decomposition(idloop);
    CHECK(jd.blocks.size() == 3);
    CHECK(jd.n0 == 0);
    CHECK(jd.J == qmat_to_kmat(idloop.update));
    CHECK(jd.P == qmat_to_kmat(idloop.update));
}

TEST_CASE("isolated-points example: nilpotent 3-block plus eigenvalue-2 3-block") {
    Loop loop = example_isolated();
    auto jd = jordan_decomposition(loop);
    REQUIRE(jd.blocks.size() == 2);
    CHECK(jd.blocks[0].zero_eigen);
    CHECK(jd.blocks[0].size == 3);
    CHECK(jd.blocks[1].size == 3);
    CHECK(jd.blocks[1].eigen == AlgebraicNumber(Rational(2)));
    CHECK(jd.d0 == 3);
    CHECK(jd.nil_index == 3);
    CHECK(jd.n0 == 3);
    REQUIRE(jd.isolated_points.size() == 3);
    CHECK(jd.isolated_points[0] == loop.init);
    CHECK(jd.isolated_points[1] == loop.update * loop.init);
    CHECK(jd.isolated_points[2] == loop.update * (loop.update * loop.init));
    CHECK(jd.P * jd.J * jd.Pinv == qmat_to_kmat(loop.update));

    auto cd = convenient_u(jd);
    CHECK(cd.kindex[0] == 0);
    CHECK(cd.kindex[1] == 3);
    CHECK(cd.U * jd.J == jd.J * cd.U);

    auto rd = build_r(jd, cd);
    // R = Id_3 (+) [[8,2,0],[0,2,0],[0,0,1]]
    Mat<Rational> expect = matQ(6,
                                {1, 0, 0, 0, 0, 0,  //
                                 0, 1, 0, 0, 0, 0,  //
                                 0, 0, 1, 0, 0, 0,  //
                                 0, 0, 0, 8, 2, 0,  //
                                 0, 0, 0, 0, 2, 0,  //
                                 0, 0, 0, 0, 0, 1});
    CHECK(rd.R == qmat_to_kmat(expect));
}

TEST_CASE("lattice example: fingerprint and R diagonal") {
    Loop loop = example_lattice();
    auto jd = jordan_decomposition(loop);
    REQUIRE(jd.blocks.size() == 4);
    CHECK(jd.n0 == 0);
    // order: -i, i (1x1 blocks), then omega^2, omega (2x2 blocks)
    CHECK(jd.blocks[0].size == 1);
    CHECK(jd.blocks[1].size == 1);
    CHECK(jd.blocks[2].size == 2);
    CHECK(jd.blocks[3].size == 2);
    CHECK(jd.blocks[0].eigen_minpoly.degree() == 2);
    CHECK(jd.blocks[0].eigen * jd.blocks[1].eigen == AlgebraicNumber(Rational(1)));  // -i * i
    CHECK(jd.blocks[2].eigen * jd.blocks[3].eigen == AlgebraicNumber(Rational(1)));  // w^2 * w
    CHECK(root_of_unity_order(jd.blocks[0].eigen) == 4ul);
    CHECK(root_of_unity_order(jd.blocks[2].eigen) == 3ul);
    CHECK(jd.P * jd.J * jd.Pinv == qmat_to_kmat(loop.update));

    auto cd = convenient_u(jd);
    CHECK(cd.beta == vecQ({"1", "1", "0", "1", "0", "1"}));
    CHECK(cd.kindex == std::vector<size_t>{1, 1, 2, 2});
    CHECK(cd.U * jd.J == jd.J * cd.U);

    auto rd = build_r(jd, cd);
    KMat expect(6, 6);
    AlgebraicNumber one(Rational(1));
    expect.at(0, 0) = one;
    expect.at(1, 1) = one;
    expect.at(2, 2) = jd.blocks[2].eigen;
    expect.at(3, 3) = one;
    expect.at(4, 4) = jd.blocks[3].eigen;
    expect.at(5, 5) = one;
    CHECK(rd.R == expect);
}

TEST_CASE("fingerprint basics") {
    std::vector<JordanBlock> blocks(1);
    blocks[0].size = 3;
    blocks[0].offset = 0;
    KVec v{AlgebraicNumber(Rational(2)), AlgebraicNumber(Rational(3)), AlgebraicNumber()};
    CHECK(fingerprint(v, blocks) == vecQ({"0", "1", "0"}));
    KVec z{AlgebraicNumber(), AlgebraicNumber(), AlgebraicNumber()};
    CHECK(fingerprint(z, blocks) == vecQ({"0", "0", "0"}));
}

TEST_CASE("stirling coefficients and the power identity") {
    CHECK(stirling_coeffs(1) == std::vector<Int>{1});
    CHECK(stirling_coeffs(2) == std::vector<Int>{1, 2});
    CHECK(stirling_coeffs(3) == std::vector<Int>{1, 6, 6});
    for (size_t k = 1; k <= 6; ++k) {
        auto c = stirling_coeffs(k);
        for (long n = 0; n <= 20; ++n) {
            Int sum(0);
            for (size_t i = 1; i <= k; ++i) {
                Int binom;
                mpz_bin_uiui(binom.get_mpz_t(), n, i);
                sum += c[i - 1] * binom;
            }
            Int expect;
            mpz_ui_pow_ui(expect.get_mpz_t(), n, k);
            CHECK(sum == expect);
        }
    }
}

TEST_CASE("convenient decomposition invariants on random loops") {
    std::mt19937_64 rng(11);
    int done = 0;
    for (int trial = 0; trial < 40 && done < 12; ++trial) {
        size_t d = 2 + rng() % 3;
        Loop loop;
        loop.update = Mat<Rational>(d, d);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j)
                loop.update.at(i, j) = Rational(static_cast<long>(rng() % 5) - 2);
        loop.init.assign(d, Rational(0));
        for (size_t i = 0; i < d; ++i) loop.init[i] = Rational(static_cast<long>(rng() % 5) - 2);
        auto jd = jordan_decomposition(loop);
        CHECK(jd.P * jd.J * jd.Pinv == qmat_to_kmat(loop.update));
        auto cd = convenient_u(jd);
        CHECK(cd.U * jd.J == jd.J * cd.U);
        // beta is the fingerprint of gamma
        KVec beta_alg = cd.U * jd.gamma;
        auto fp = fingerprint(jd.gamma, jd.blocks);
        for (size_t i = 0; i < d; ++i) CHECK(beta_alg[i] == AlgebraicNumber(fp[i]));
        // (P U^-1) J (P U^-1)^-1 = M
        KMat Q = jd.P * cd.Uinv;
        auto Qinv = inverse(Q, AlgebraicNumber(Rational(1)));
        REQUIRE(Qinv.has_value());
        CHECK(Q * jd.J * *Qinv == qmat_to_kmat(loop.update));
        ++done;
    }
    CHECK(done >= 12);
}

TEST_CASE("R turns binomial weights into plain powers") {
    // on the isolated-points example: R * Jtilde^n * beta =
    // (0,0,0, n^2 2^n, n 2^n, 2^n) for all n
    Loop loop = example_isolated();
    auto jd = jordan_decomposition(loop);
    auto cd = convenient_u(jd);
    auto rd = build_r(jd, cd);
    KVec beta(6);
    for (size_t i = 0; i < 6; ++i) beta[i] = AlgebraicNumber(cd.beta[i]);
    AlgebraicNumber one(Rational(1));
    KMat Jn = KMat::identity(6, one);
    for (unsigned long n = 0; n <= 30; ++n) {
        KVec lhs = rd.R * (Jn * beta);
        Rational p2 = rat_pow(Rational(2), n);
        std::vector<Rational> expect{0, 0, 0, Rational(static_cast<long>(n * n)) * p2,
                                     Rational(static_cast<long>(n)) * p2, p2};
        for (size_t i = 0; i < 6; ++i) CHECK(lhs[i] == AlgebraicNumber(expect[i]));
        Jn = Jn * jd.Jtilde;
    }
}

TEST_CASE("determinism: identical outputs across runs") {
    for (Loop loop : {fibonacci_loop(), example_lattice()}) {
        auto a = jordan_decomposition(loop);
        auto b = jordan_decomposition(loop);
        CHECK(a.J == b.J);
        CHECK(a.P == b.P);
        CHECK(a.n0 == b.n0);
        REQUIRE(a.blocks.size() == b.blocks.size());
        for (size_t i = 0; i < a.blocks.size(); ++i) {
            CHECK(a.blocks[i].size == b.blocks[i].size);
            CHECK(a.blocks[i].eigen == b.blocks[i].eigen);
        }
    }
}
