#pragma once

#include <cstdint>

#include "prlab/matrix.hpp"
#include "prlab/rng.hpp"

namespace prlab {

enum class Field { Real, Complex };

/// A collection of m measurement vectors in Q^d, stored as columns.
/// Sub-frames may be empty (m = 0); the null space of an empty frame's
/// analysis matrix is all of Q^d.
struct Frame {
    std::size_t d = 0;
    std::size_t m = 0;
    std::vector<RatVec> columns;

    /// The analysis matrix F^T (m x d); row j is the j-th measurement vector.
    RatMatrix analysis() const;
};

/// b_j = |<f_j, x>|, computed exactly.
RatVec measure_abs(const Frame& f, const RatVec& x);

/// Like measure_abs but keeps the signs: returns F^T x.
RatVec measure_signed(const Frame& f, const RatVec& x);

/// Seeded random frame: entries are i.i.d. uniform integers in
/// [-numerator_bound, numerator_bound] (denominator 1), drawn column by
/// column from a splitmix64 stream; an all-zero column is redrawn.
Frame random_frame(std::size_t d, std::size_t m, std::uint64_t seed,
                   long numerator_bound = 1000);

/// Columns {f_j : j in s} in index order; s uses 0-based indices.
Frame sub_frame(const Frame& f, const std::vector<std::size_t>& s);

/// Complement of s inside [0, m).
std::vector<std::size_t> complement(std::size_t m, const std::vector<std::size_t>& s);

/// Canonical representative of the sign class {x, -x}: the first nonzero
/// entry is made positive. Zero maps to zero. Idempotent.
RatVec canonicalize_sign(RatVec x);

/// True when x and y are equal up to a global sign.
bool same_sign_class(const RatVec& x, const RatVec& y);

/// Seeded random k-sparse vector: support uniform over k-subsets, nonzero
/// entries uniform in [-entry_bound, entry_bound] \ {0}.
RatVec random_k_sparse(SplitMix64& rng, std::size_t d, std::size_t k, long entry_bound = 100);

} // namespace prlab
