#pragma once

#include <cstdint>
#include <optional>

#include "prlab/frame.hpp"
#include "prlab/linalg.hpp"

namespace prlab {

/// A pair of non-equivalent vectors with identical measurement magnitudes.
struct CollisionWitness {
    RatVec x;
    RatVec y;
    std::size_t sparsity_bound = 0;
};

/// Re-checks every invariant of the witness against the frame: exact
/// magnitude equality, distinct sign classes, sparsity bounds. Throws
/// InternalError describing the first failure.
void validate_collision(const Frame& f, const CollisionWitness& w);

struct SearchTrace {
    std::uint64_t splits = 0;
    std::uint64_t triples_examined = 0;
    std::uint64_t triples_total = 0;
};

struct RetrievabilityReport {
    bool retrievable = false;
    std::optional<CollisionWitness> witness;
    SearchTrace trace;
};

struct MeasurementBound {
    std::size_t bound = 0;
    /// Real bound is proven necessary and generically sufficient; the
    /// complex bound is only known to be sufficient for generic frames.
    bool sufficient_only = false;
};

/// Minimal number of measurements for k-sparse phase retrievability:
/// min{2k, 2d-1} over the reals, 4k-2 over the complex numbers (generic
/// sufficiency; minimality is an open conjecture).
MeasurementBound minimal_measurement_bound(std::size_t k, std::size_t d, Field field);

/// The matrix of the split system for measurement split (s, s^c) and
/// supports (i_set, j_set): unknown blocks are (v_x, v_y, w_minus, w_plus)
/// of widths (k-l, k-l, k-l..): v-blocks have width k-l and w-blocks
/// width l, where l = #(i_set intersect j_set). Null vectors outside the
/// two safe subspaces reconstruct to magnitude collisions.
struct BlockSystem {
    std::vector<std::size_t> s;     // measurement indices with <f_j, x-y> = 0
    std::vector<std::size_t> i_set; // support of x
    std::vector<std::size_t> j_set; // support of y
    std::vector<std::size_t> l_set; // intersection
    std::vector<std::size_t> i_only, j_only;
    RatMatrix b;

    std::size_t width_v() const { return i_only.size(); }
    std::size_t width_w() const { return l_set.size(); }

    /// z in the block coordinates -> the collision pair (x, y).
    std::pair<RatVec, RatVec> reconstruct(const RatVec& z, std::size_t d) const;
};

BlockSystem build_block_system(const Frame& f, const std::vector<std::size_t>& s,
                               const std::vector<std::size_t>& i_set,
                               const std::vector<std::size_t>& j_set);

/// Full (k = d) phase retrievability over the reals: for every subset S,
/// either F_S or F_{S^c} must span. 2^{m-1} exact rank checks.
RetrievabilityReport is_full_pr_real(const Frame& f, unsigned jobs = 1);

/// k-sparse phase retrievability over the reals, decided by exhausting all
/// measurement splits and support pairs and testing the null space of each
/// split system against the two safe subspaces.
RetrievabilityReport is_k_sparse_pr_real(const Frame& f, std::size_t k, unsigned jobs = 1);

/// Constructive magnitude collision for m < 2k (requires k < d): picks
/// u in the kernel of the first block restricted to the first k+1
/// coordinates, a 2-dimensional kernel slice (alpha, beta) for the second
/// block, and solves a 2x2 system so that x = u + vbar and y = u - vbar
/// are both k-sparse. Deterministic for a given frame.
CollisionWitness collide_below_2k(const Frame& f, std::size_t k);

} // namespace prlab
