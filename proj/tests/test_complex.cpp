#include <doctest.h>

#include "prlab/complex_falsifier.hpp"
#include "prlab/json_io.hpp"
#include "test_support.hpp"

using namespace prlab;
using namespace prlab::testing;
using cdouble = std::complex<double>;
using Eigen::VectorXcd;

TEST_CASE("collision residual: unimodular invariance and conjugation symmetry") {
    ComplexFrame f = ComplexFrame::from_rational(random_frame(3, 6, 11));
    SplitMix64 rng(5);
    VectorXcd x(3);
    for (int i = 0; i < 3; ++i) x(i) = cdouble(2 * rng.unit() - 1, 2 * rng.unit() - 1);

    const cdouble phase = std::polar(1.0, 0.7);
    CHECK(collision_residual(f, x, phase * x) <= 1e-12);
    CHECK(collision_residual(f, x, x.conjugate()) <= 1e-12);

    // independent vectors produce a residual far above tolerance
    VectorXcd y(3);
    for (int i = 0; i < 3; ++i) y(i) = cdouble(2 * rng.unit() - 1, 2 * rng.unit() - 1);
    CHECK(collision_residual(f, x, y) > 1e-3);
}

TEST_CASE("collision residual is scale invariant") {
    ComplexFrame f = random_complex_frame(3, 5, 7);
    SplitMix64 rng(6);
    VectorXcd x(3), y(3);
    for (int i = 0; i < 3; ++i) {
        x(i) = cdouble(2 * rng.unit() - 1, 2 * rng.unit() - 1);
        y(i) = cdouble(2 * rng.unit() - 1, 2 * rng.unit() - 1);
    }
    ComplexFrame g = f;
    g.f *= 37.5;
    CHECK(collision_residual(f, x, y) == doctest::Approx(collision_residual(g, x, y)).epsilon(1e-9));
}

TEST_CASE("conjugate_collision detects real and phase-rotated-real frames") {
    ComplexFrame real_f = ComplexFrame::from_rational(random_frame(3, 6, 2));
    auto w = conjugate_collision(real_f);
    REQUIRE(w.has_value());
    CHECK(w->residual <= 1e-12);
    CHECK(collision_residual(real_f, w->x, w->y) <= 1e-12);

    // multiply each column by its own unimodular phase: still degenerate
    ComplexFrame rotated = real_f;
    SplitMix64 rng(9);
    for (Eigen::Index j = 0; j < rotated.f.cols(); ++j)
        rotated.f.col(j) *= std::polar(1.0, 2 * M_PI * rng.unit());
    auto w2 = conjugate_collision(rotated);
    REQUIRE(w2.has_value());
    CHECK(w2->residual <= 1e-12);

    // a generic complex frame is not conjugation-degenerate
    CHECK(!conjugate_collision(random_complex_frame(3, 6, 3)).has_value());
}

TEST_CASE("thm42 search finds witnesses on real-entried frames at m = 2d") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        ComplexFrame f = ComplexFrame::from_rational(random_frame(3, 6, 100 + seed));
        FalsifierOutcome out = search_thm42_witness(f, 100000, seed);
        REQUIRE(out.kind == FalsifyKind::WitnessFound);
        const PartitionWitness& w = *out.witness;
        CHECK(w.max_residual <= 1e-8);
        // the proof's collision pair re-validates through the residual
        const VectorXcd x0 = w.etas[0] - w.etas[1];
        const VectorXcd comp = w.c[1] * w.etas[0] - w.c[0] * w.etas[1];
        CHECK(collision_residual(f, x0, comp) <= 1e-8);
    }
}

TEST_CASE("thm42 search finds witnesses by dimension count when m < 2d") {
    ComplexFrame f = random_complex_frame(3, 4, 17);
    FalsifierOutcome out = search_thm42_witness(f, 100000, 1);
    REQUIRE(out.kind == FalsifyKind::WitnessFound);
    CHECK(out.witness->max_residual <= 1e-9);
    CHECK(out.attempts < 100);
}

TEST_CASE("thm42 reports rank deficiency separately") {
    ComplexFrame f = random_complex_frame(3, 2, 4);
    FalsifierOutcome out = search_thm42_witness(f, 1000, 1);
    CHECK(out.kind == FalsifyKind::RankDeficient);
    const double resid = (f.f.transpose() * out.null_vector).lpNorm<Eigen::Infinity>();
    CHECK(resid <= 1e-9);
}

TEST_CASE("thm42 is inconclusive on a 4d-4 style configuration") {
    ComplexFrame f;
    f.f = Eigen::MatrixXcd(2, 4);
    f.f << cdouble(1, 0), cdouble(0, 0), cdouble(1, 0), cdouble(1, 0),
        cdouble(0, 0), cdouble(1, 0), cdouble(1, 0), cdouble(0, 1);
    FalsifierOutcome out = search_thm42_witness(f, 20000, 5);
    CHECK(out.kind == FalsifyKind::Inconclusive);
    CHECK(out.attempts == 20000);
}

TEST_CASE("thm33 search: conjugation degeneracy manifests as a partition witness") {
    ComplexFrame f = ComplexFrame::from_rational(random_frame(3, 6, 50));
    FalsifierOutcome out = search_thm33_witness(f, 3, 100000, 3);
    REQUIRE(out.kind == FalsifyKind::WitnessFound);
    const PartitionWitness& w = *out.witness;
    CHECK(w.max_residual <= 1e-8);
    CHECK(w.margin >= -1e-9);
    // k = 3 = d here; y0 is the sampled signal
    CHECK(w.partition.size() >= 2);
}

TEST_CASE("thm33 search is inconclusive on generic frames at m = 4k-2") {
    ComplexFrame f = random_complex_frame(4, 6, 21);
    FalsifierOutcome out = search_thm33_witness(f, 2, 30000, 21);
    CHECK(out.kind == FalsifyKind::Inconclusive);
}

TEST_CASE("falsifier outcomes are deterministic and jobs-invariant") {
    ComplexFrame f = ComplexFrame::from_rational(random_frame(3, 6, 77));
    FalsifierOutcome a = search_thm42_witness(f, 50000, 9, 1);
    FalsifierOutcome b = search_thm42_witness(f, 50000, 9, 4);
    FalsifierOutcome c = search_thm42_witness(f, 50000, 9, 1);
    REQUIRE(a.kind == FalsifyKind::WitnessFound);
    CHECK(b.kind == a.kind);
    CHECK(c.kind == a.kind);
    CHECK(a.attempts == b.attempts);
    CHECK(a.witness->eta1 == b.witness->eta1);
    CHECK(a.witness->y0 == c.witness->y0);
    CHECK(a.witness->partition == b.witness->partition);
}

TEST_CASE("scaling the frame does not change found vs none-found") {
    ComplexFrame f = ComplexFrame::from_rational(random_frame(3, 6, 31));
    ComplexFrame g = f;
    g.f *= 1000.0;
    CHECK(search_thm42_witness(f, 20000, 4).kind == search_thm42_witness(g, 20000, 4).kind);

    ComplexFrame h = random_complex_frame(4, 6, 8);
    ComplexFrame h2 = h;
    h2.f *= 0.001;
    CHECK(search_thm33_witness(h, 2, 5000, 4).kind == search_thm33_witness(h2, 2, 5000, 4).kind);
}

TEST_CASE("complex frame JSON round-trips") {
    ComplexFrame f = random_complex_frame(3, 4, 12);
    ComplexFrame g = complex_frame_from_json(complex_frame_to_json(f));
    CHECK(f.f == g.f);

    // rational frame files load as complex
    Frame r = random_frame(2, 3, 5);
    ComplexFrame c = complex_frame_from_json(frame_to_json(r));
    CHECK(c.d() == 2);
    CHECK(c.m() == 3);
}
