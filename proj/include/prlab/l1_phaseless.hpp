#pragma once

#include <cstdint>
#include <string>

#include "prlab/frame.hpp"
#include "prlab/lp.hpp"

namespace prlab {

/// Magnitude-only inversion instance: find the l1-minimal x with
/// |F^T x| = b.
struct PhaselessProblem {
    Frame frame;
    RatVec b;
};

/// Measurement sign pattern; canonical form fixes the first coordinate with
/// a nonzero magnitude to +1 (the pattern and its negation give negated
/// solution sets with identical values). Coordinates with b_j = 0 carry no
/// sign and are rendered as '+'.
struct SignPattern {
    std::vector<int> signs; // entries +1 / -1, full measurement length

    std::string to_string() const {
        std::string s;
        s.reserve(signs.size());
        for (int v : signs) s.push_back(v >= 0 ? '+' : '-');
        return s;
    }
};

struct EpsilonEntry {
    SignPattern eps;
    bool feasible = false;
    Rational value;
};

struct NonpointFace {
    SignPattern eps;
    std::size_t dim = 0;
    RatVec vertex;
};

/// Exact description of the phaseless l1 argmin set.
struct ArgminReport {
    bool feasible = false;
    Rational optimal_value;
    /// Canonical sign-class representatives of the patterns whose optimum
    /// is a single point; sorted, pairwise distinct.
    std::vector<RatVec> minimizer_classes;
    /// Optimum-achieving patterns whose optimal face has dimension >= 1.
    std::vector<NonpointFace> nonpoint_faces;
    std::vector<EpsilonEntry> per_epsilon;
    /// True when the argmin is exactly one sign class (no faces).
    bool unique = false;
};

struct SolveOptions {
    std::size_t m_cap = 20;
    unsigned jobs = 1;
};

/// Solves min ||x||_1 s.t. |F^T x| = b by enumerating canonical sign
/// patterns (2^(#{j : b_j > 0} - 1) exact l1 solves) and aggregating the
/// optimum across patterns.
ArgminReport solve_l1_phaseless_real(const PhaselessProblem& p, const SolveOptions& opt = {});

struct OracleFamily {
    std::vector<std::size_t> support;
    std::size_t dim = 0;
    /// The affine solution set {particular + span(homogeneous)}, embedded in
    /// Q^d, so consumers can reason about the family exactly.
    RatVec particular;
    std::vector<RatVec> homogeneous;
};

/// Exhaustive solutions of |F^T x| = b with ||x||_0 <= k: per support, a
/// maximal independent row subsystem is solved for every local sign
/// assignment and all m magnitudes are verified exactly. Positive-dimensional
/// solution families are reported as families, never sampled.
struct OracleResult {
    std::vector<RatVec> classes; // canonical, sorted, pairwise distinct
    std::vector<OracleFamily> families;
};

OracleResult l0_oracle_solutions(const PhaselessProblem& p, std::size_t k,
                                 std::uint64_t budget_cap = std::uint64_t(1) << 22);

/// Seeded end-to-end recovery experiment: draws k-sparse signals, measures,
/// solves, and counts the trials whose argmin is exactly {+-x0}.
struct RecoverySummary {
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::vector<RatVec> failure_exemplars; // first few failing signals
};

RecoverySummary recovery_experiment(const Frame& f, std::size_t k, std::size_t trials,
                                    std::uint64_t seed, long entry_bound = 100,
                                    const SolveOptions& opt = {});

/// The k-sparse members of the argmin set, computed exactly: unique-pattern
/// minimizers plus isolated k-sparse points of optimal faces (found by
/// support-restricted face probes). Faces whose k-sparse section has
/// positive dimension are reported as families.
struct KSparseArgmin {
    std::vector<RatVec> classes;
    std::vector<OracleFamily> families;
};

KSparseArgmin argmin_k_sparse_members(const Frame& f, const RatVec& b, std::size_t k,
                                      const ArgminReport& rep);

} // namespace prlab
