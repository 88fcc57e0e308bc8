#include <doctest.h>

#include "prlab/linalg.hpp"
#include "prlab/rng.hpp"
#include "test_support.hpp"

using namespace prlab;
using namespace prlab::testing;

TEST_CASE("rational arithmetic stays in lowest terms") {
    Rational a(2, 4);
    CHECK(a.numerator() == 1);
    CHECK(a.denominator() == 2);
    Rational b = Q(1, 3) + Q(1, 6);
    CHECK(to_string(b) == "1/2");
    CHECK(to_string(Q(-6, 4)) == "-3/2");
    CHECK(Q(1, 3) * Q(3) == Q(1));
    CHECK(Q(7) / Q(-2) == Q(-7, 2));
    CHECK_THROWS_AS(Q(1) / Q(0), PreconditionError);
}

TEST_CASE("rational string round-trip") {
    for (const char* s : {"0", "5", "-5", "2/3", "-17/4", "123456789123456787/987654321"}) {
        CHECK(to_string(rational_from_string(s)) == s);
    }
    CHECK(rational_from_string("4/2") == Q(2));
    CHECK_THROWS_AS(rational_from_string("1/0"), IoError);
    CHECK_THROWS_AS(rational_from_string("a"), IoError);
    CHECK_THROWS_AS(rational_from_string("1/ 2"), IoError);
    CHECK_THROWS_AS(rational_from_string(""), IoError);
}

TEST_CASE("rank_exact on the stated cases") {
    CHECK(rank_exact(RatMatrix::identity(4)) == 4);
    CHECK(rank_exact(RatMatrix(3, 5)) == 0);
    CHECK(rank_exact(mat({{1, 2}, {2, 4}, {3, 6}})) == 1);
    RatMatrix a = mat({{1, 0, 1}, {0, 1, 1}});
    CHECK(rank_exact(a) == 2);
    CHECK(rank_exact(a) == rank_exact(a.transposed()));
}

TEST_CASE("rank with rational entries and row scaling") {
    RatMatrix m(2, 2);
    m.at(0, 0) = Q(1, 2);
    m.at(0, 1) = Q(1, 3);
    m.at(1, 0) = Q(3, 2);
    m.at(1, 1) = Q(1);
    CHECK(rank_exact(m) == 1);
}

TEST_CASE("null_space_basis on the stated cases") {
    CHECK(null_space_basis(RatMatrix::identity(3)).dim() == 0);

    Subspace s = null_space_basis(mat({{1, 1}}));
    REQUIRE(s.dim() == 1);
    CHECK(s.basis[0][0] == -s.basis[0][1]);

    RatMatrix m = mat({{1, 0, 1}, {0, 1, 1}});
    Subspace t = null_space_basis(m);
    REQUIRE(t.dim() == 1);
    CHECK(is_zero_vec(m.mul(t.basis[0])));
    // proportional to (1, 1, -1)
    CHECK(t.basis[0][0] == t.basis[0][1]);
    CHECK(t.basis[0][0] == -t.basis[0][2]);
}

TEST_CASE("empty matrix null space is the full space") {
    Subspace s = null_space_basis(RatMatrix(0, 4));
    CHECK(s.ambient_dim == 4);
    CHECK(s.dim() == 4);
}

TEST_CASE("rank-nullity holds on random rational matrices") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 1 + rng.bounded(5), cols = 1 + rng.bounded(5);
        RatMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m.at(i, j) = Rational(rng.int_in(-4, 4), 1 + rng.bounded(3));
        Subspace s = null_space_basis(m);
        CHECK(rank_exact(m) + s.dim() == cols);
        for (const auto& v : s.basis) CHECK(is_zero_vec(m.mul(v)));
    }
}

TEST_CASE("solve_linear consistency and independence of rows") {
    RatMatrix a = mat({{1, 0, 1}, {0, 1, 1}, {1, 1, 2}});
    LinearSolve s = solve_linear(a, vec({1, 1, 2}));
    REQUIRE(s.consistent);
    CHECK(a.mul(s.particular) == vec({1, 1, 2}));
    CHECK(s.homogeneous.size() == 1);

    LinearSolve bad = solve_linear(a, vec({1, 1, 3}));
    CHECK(!bad.consistent);

    std::vector<std::size_t> rows = independent_rows(a);
    CHECK(rows == std::vector<std::size_t>{0, 1});
}

TEST_CASE("splitmix64 determinism and bounded sampling") {
    SplitMix64 a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    SplitMix64 c(1);
    for (int i = 0; i < 1000; ++i) {
        const auto v = c.int_in(-10, 10);
        CHECK(v >= -10);
        CHECK(v <= 10);
    }
    SplitMix64 d(3);
    auto s = random_subset(d, 6, 3);
    CHECK(s.size() == 3);
    CHECK(std::is_sorted(s.begin(), s.end()));
}
