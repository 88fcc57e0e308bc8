#include <doctest.h>

#include "prlab/l1_phaseless.hpp"
#include "test_support.hpp"

using namespace prlab;
using namespace prlab::testing;

static Frame id2() { return frame_from_cols(2, {{1, 0}, {0, 1}}); }
static Frame id3() { return frame_from_cols(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}); }
static Frame triple2() { return frame_from_cols(2, {{1, 0}, {0, 1}, {1, 1}}); }

TEST_CASE("phaseless solve: identity R^2, b = (1, 0)") {
    ArgminReport r = solve_l1_phaseless_real({id2(), vec({1, 0})});
    REQUIRE(r.feasible);
    CHECK(r.optimal_value == Q(1));
    REQUIRE(r.minimizer_classes.size() == 1);
    CHECK(r.minimizer_classes[0] == vec({1, 0}));
    CHECK(r.nonpoint_faces.empty());
    CHECK(r.unique);
    CHECK(r.per_epsilon.size() == 1); // one nonzero magnitude -> single pattern
}

TEST_CASE("phaseless solve: identity R^2, b = (1, 1) has two classes") {
    ArgminReport r = solve_l1_phaseless_real({id2(), vec({1, 1})});
    REQUIRE(r.feasible);
    CHECK(r.optimal_value == Q(2));
    REQUIRE(r.minimizer_classes.size() == 2);
    CHECK(r.minimizer_classes[0] == vec({1, -1}));
    CHECK(r.minimizer_classes[1] == vec({1, 1}));
    CHECK(!r.unique);
    CHECK(r.per_epsilon.size() == 2);
}

TEST_CASE("phaseless solve: {e1, e2, e1+e2} recovers (1, 0) from magnitudes") {
    const RatVec b = measure_abs(triple2(), vec({1, 0}));
    CHECK(b == vec({1, 0, 1}));
    ArgminReport r = solve_l1_phaseless_real({triple2(), b});
    REQUIRE(r.feasible);
    CHECK(r.optimal_value == Q(1));
    REQUIRE(r.minimizer_classes.size() == 1);
    CHECK(r.minimizer_classes[0] == vec({1, 0}));
    CHECK(r.unique);

    // independent confirmation through the l0 oracle
    OracleResult o = l0_oracle_solutions({triple2(), b}, 2);
    REQUIRE(o.classes.size() == 1);
    CHECK(o.classes[0] == vec({1, 0}));
}

TEST_CASE("phaseless solve: zero magnitudes give the zero minimizer") {
    ArgminReport r = solve_l1_phaseless_real({id2(), vec({0, 0})});
    REQUIRE(r.feasible);
    CHECK(r.optimal_value == Q(0));
    REQUIRE(r.minimizer_classes.size() == 1);
    CHECK(r.minimizer_classes[0] == vec({0, 0}));
    CHECK(r.unique);
}

TEST_CASE("phaseless solve: infeasible magnitudes") {
    // |x1| = 1, |x2| = 1, |x1 + x2| = 1 has no rational solution
    ArgminReport r = solve_l1_phaseless_real({triple2(), vec({1, 1, 1})});
    CHECK(!r.feasible);
    CHECK(r.minimizer_classes.empty());
    CHECK(r.nonpoint_faces.empty());
}

TEST_CASE("phaseless solve: budget refusal") {
    Frame f = random_frame(2, 21, 1);
    CHECK_THROWS_AS(solve_l1_phaseless_real({f, RatVec(21)}), BudgetError);
}

TEST_CASE("l0 oracle: budget refusal") {
    Frame f = random_frame(40, 2, 1, 5);
    CHECK_THROWS_AS(l0_oracle_solutions({f, RatVec(2)}, 20), BudgetError);
}

TEST_CASE("pattern table is invariant under global sign flips") {
    Frame f = random_frame(3, 4, 8, 9);
    const RatVec x0 = vec({2, -1, 0});
    const RatVec b = measure_abs(f, x0);
    ArgminReport r = solve_l1_phaseless_real({f, b});
    // Solving with every sign flipped reproduces the same value: build the
    // flipped system directly.
    for (const auto& e : r.per_epsilon) {
        RatVec beps(f.m), bneg(f.m);
        for (std::size_t j = 0; j < f.m; ++j) {
            beps[j] = e.eps.signs[j] > 0 ? b[j] : -b[j];
            bneg[j] = -beps[j];
        }
        L1AffineResult plus = l1_min_affine(f.analysis(), beps);
        L1AffineResult minus = l1_min_affine(f.analysis(), bneg);
        CHECK(plus.feasible == e.feasible);
        CHECK(plus.feasible == minus.feasible);
        if (plus.feasible) {
            CHECK(plus.value == e.value);
            CHECK(minus.value == e.value);
        }
    }
}

TEST_CASE("measured magnitudes are always feasible and bounded by the signal") {
    SplitMix64 rng(31);
    for (int t = 0; t < 12; ++t) {
        const std::size_t d = 2 + rng.bounded(3);
        const std::size_t m = 1 + rng.bounded(5);
        Frame f = random_frame(d, m, rng.next(), 20);
        const RatVec x0 = random_k_sparse(rng, d, 1 + rng.bounded(d), 10);
        ArgminReport r = solve_l1_phaseless_real({f, measure_abs(f, x0)});
        REQUIRE(r.feasible);
        CHECK(r.optimal_value <= l1_norm(x0));
        for (const auto& cls : r.minimizer_classes) {
            CHECK(measure_abs(f, cls) == measure_abs(f, x0));
            CHECK(l1_norm(cls) == r.optimal_value);
        }
    }
}

TEST_CASE("l0 oracle on the stated cases") {
    OracleResult a = l0_oracle_solutions({id3(), vec({1, 1, 0})}, 2);
    REQUIRE(a.classes.size() == 2);
    CHECK(a.classes[0] == vec({1, -1, 0}));
    CHECK(a.classes[1] == vec({1, 1, 0}));
    CHECK(a.families.empty());

    OracleResult b = l0_oracle_solutions({id3(), vec({1, 1, 1})}, 2);
    CHECK(b.classes.empty());

    OracleResult c = l0_oracle_solutions({triple2(), vec({1, 1, 0})}, 2);
    REQUIRE(c.classes.size() == 1);
    CHECK(c.classes[0] == vec({1, -1}));
}

TEST_CASE("oracle matches the solver's k-sparse argmin on random instances") {
    SplitMix64 rng(555);
    for (int t = 0; t < 10; ++t) {
        const std::size_t d = 3 + rng.bounded(2);
        const std::size_t m = 2 + rng.bounded(4);
        const std::size_t k = 1 + rng.bounded(2);
        Frame f = random_frame(d, m, rng.next(), 15);
        const RatVec x0 = random_k_sparse(rng, d, k, 6);
        const RatVec b = measure_abs(f, x0);

        ArgminReport rep = solve_l1_phaseless_real({f, b});
        REQUIRE(rep.feasible);
        OracleResult oracle = l0_oracle_solutions({f, b}, k);
        KSparseArgmin members = argmin_k_sparse_members(f, b, k, rep);
        CHECK(members.families.empty());
        CHECK(oracle.families.empty());

        std::vector<RatVec> oracle_optimal;
        for (const auto& cls : oracle.classes) {
            CHECK(l1_norm(cls) >= rep.optimal_value);
            if (l1_norm(cls) == rep.optimal_value) oracle_optimal.push_back(cls);
        }
        CHECK(members.classes == oracle_optimal);
    }
}

TEST_CASE("nonpoint faces and their k-sparse members") {
    Frame f = frame_from_cols(2, {{1, 1}});
    ArgminReport r = solve_l1_phaseless_real({f, vec({1})});
    REQUIRE(r.feasible);
    CHECK(r.optimal_value == Q(1));
    CHECK(r.minimizer_classes.empty());
    REQUIRE(r.nonpoint_faces.size() == 1);
    CHECK(r.nonpoint_faces[0].dim == 1);
    CHECK(!r.unique);

    KSparseArgmin members = argmin_k_sparse_members(f, vec({1}), 1, r);
    REQUIRE(members.classes.size() == 2);
    CHECK(members.classes[0] == vec({0, 1}));
    CHECK(members.classes[1] == vec({1, 0}));
    CHECK(members.families.empty());

    // and the oracle sees the same two 1-sparse points
    OracleResult o = l0_oracle_solutions({f, vec({1})}, 1);
    REQUIRE(o.classes.size() == 2);
    CHECK(o.classes == members.classes);
}

TEST_CASE("recovery experiments on identity frames") {
    RecoverySummary one = recovery_experiment(id3(), 1, 10, 42);
    CHECK(one.trials == 10);
    CHECK(one.successes == 10);

    RecoverySummary two = recovery_experiment(id3(), 2, 10, 42);
    CHECK(two.successes == 0);
    CHECK(!two.failure_exemplars.empty());
}

TEST_CASE("solver output is jobs-invariant") {
    Frame f = random_frame(3, 5, 77, 25);
    const RatVec b = measure_abs(f, vec({1, -2, 3}));
    ArgminReport a = solve_l1_phaseless_real({f, b}, {20, 1});
    ArgminReport c = solve_l1_phaseless_real({f, b}, {20, 4});
    CHECK(a.optimal_value == c.optimal_value);
    CHECK(a.minimizer_classes == c.minimizer_classes);
    CHECK(a.per_epsilon.size() == c.per_epsilon.size());
    for (std::size_t i = 0; i < a.per_epsilon.size(); ++i) {
        CHECK(a.per_epsilon[i].eps.signs == c.per_epsilon[i].eps.signs);
        CHECK(a.per_epsilon[i].feasible == c.per_epsilon[i].feasible);
    }
}
