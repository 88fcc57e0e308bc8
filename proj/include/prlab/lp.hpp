#pragma once

#include <optional>
#include <utility>
#include <variant>

#include "prlab/linalg.hpp"
#include "prlab/matrix.hpp"

namespace prlab {

enum class VarSign {
    NonNegative, // x >= 0
    Free,        // unbounded below and above
};

/// maximize objective . x  subject to  constraints x = rhs  and the
/// per-variable sign restrictions.
struct LpProblem {
    RatVec objective;
    RatMatrix constraints;
    RatVec rhs;
    std::vector<VarSign> signs;
};

struct LpOptimal {
    Rational value;
    RatVec point;
};

struct LpUnbounded {
    RatVec ray; // feasible improving direction in the original variables
};

struct LpInfeasible {};

using LpOutcome = std::variant<LpOptimal, LpUnbounded, LpInfeasible>;

/// Two-phase primal simplex over rationals with Bland's smallest-index
/// anti-cycling rule. The classification is exact: no tolerances anywhere.
/// Free variables are handled by an internal positive/negative split.
LpOutcome lp_solve_exact(const LpProblem& p);

/// Result of exact l1 minimization over the affine set {x : Ax = b}.
struct L1AffineResult {
    bool feasible = false;
    Rational value;
    RatVec point;
    bool is_unique = false;
    /// Exact [min, max] of each coordinate over the optimal face.
    std::vector<std::pair<Rational, Rational>> coordinate_ranges;
};

/// Minimizes ||x||_1 over {x : Ax = b} via the split x = p - n, p, n >= 0.
/// Uniqueness is decided exactly by extremizing every coordinate over the
/// optimal face (2d auxiliary solves), which stays correct under degeneracy.
L1AffineResult l1_min_affine(const RatMatrix& a, const RatVec& b);

/// Probe-free core of l1_min_affine: value and one optimal point only.
struct L1PointResult {
    bool feasible = false;
    Rational value;
    RatVec point;
};

L1PointResult l1_min_point(const RatMatrix& a, const RatVec& b);

/// The uniqueness probe on its own, for callers that already know the value.
struct L1UniquenessProbe {
    bool is_unique = false;
    std::vector<std::pair<Rational, Rational>> coordinate_ranges;
};

L1UniquenessProbe probe_l1_uniqueness(const RatMatrix& a, const RatVec& b, const Rational& value);

/// Tools for the optimal face F = {x : Ax = b, ||x||_1 = value}.
/// dimension() uses the implicit-equality characterization of the split
/// polytope, which is in bijection with F.
struct L1Face {
    RatMatrix a;
    RatVec b;
    Rational value;

    std::size_t dimension() const;
    /// Is there a face point supported inside the given coordinate set?
    /// Returns one if so.
    std::optional<RatVec> point_with_support(const std::vector<std::size_t>& support) const;
    /// Exact [min, max] of coordinate i over the face restricted to the
    /// given support.
    std::pair<Rational, Rational> coordinate_range_on_support(
        std::size_t i, const std::vector<std::size_t>& support) const;
};

} // namespace prlab
