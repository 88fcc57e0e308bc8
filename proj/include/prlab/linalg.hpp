#pragma once

#include <optional>

#include "prlab/matrix.hpp"

namespace prlab {

/// Row-space dimension via fraction-free (Bareiss) elimination on a
/// denominator-cleared integer copy, so intermediate values stay integral.
std::size_t rank_exact(const RatMatrix& m);

/// A linear subspace of Q^ambient_dim given by an independent basis.
struct Subspace {
    std::size_t ambient_dim = 0;
    std::vector<RatVec> basis;

    std::size_t dim() const { return basis.size(); }
};

/// Basis of {x : Mx = 0}. A 0xd matrix yields the full space (identity
/// basis), which realizes the empty-frame null-space convention.
Subspace null_space_basis(const RatMatrix& m);

/// Reduces m to reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m);

struct LinearSolve {
    bool consistent = false;
    RatVec particular;              // one solution when consistent
    std::vector<RatVec> homogeneous; // null-space basis of the coefficient matrix
};

/// Exact solve of Ax = b (any shape).
LinearSolve solve_linear(const RatMatrix& a, const RatVec& b);

/// Greedy maximal independent row set, scanned in row order; deterministic.
std::vector<std::size_t> independent_rows(const RatMatrix& m);

} // namespace prlab
