#pragma once

#include <cstdint>
#include <optional>

#include "prlab/frame.hpp"
#include "prlab/l1_phaseless.hpp"

namespace prlab {

/// Certificate that the classical null space property of order k fails:
/// a nonzero null vector whose l1 mass on T is at least the mass off T.
struct NspViolation {
    std::vector<std::size_t> t_set;
    RatVec eta;
    Rational margin; // ||eta_T||_1 - ||eta_Tc||_1 >= 0
};

void validate_nsp_violation(const Frame& f, std::size_t k, const NspViolation& v);

/// Certificate that the phaseless null space property of order k fails:
/// nonzero u in N(F_S) and v in N(F_Sc) with u+v k-sparse and
/// ||u+v||_1 >= ||u-v||_1.
struct PhaselessNspViolation {
    std::vector<std::size_t> s_set;
    RatVec u;
    RatVec v;
    std::vector<std::size_t> t_set; // support bound for u+v, #T = k
    Rational margin;                // ||u+v||_1 - ||u-v||_1 >= 0
};

void validate_phaseless_violation(const Frame& f, std::size_t k,
                                  const PhaselessNspViolation& w);

/// The theorem statement quantifies splits with #S <= k but its proof uses
/// arbitrary splits; both readings are implemented.
enum class SubsetScope { AllSubsets, CardinalityAtMostK };

struct NspClassicalResult {
    bool holds = false;
    std::optional<NspViolation> violation;
    std::uint64_t cells_total = 0;
    std::uint64_t cells_examined = 0;
};

/// Exact decision of the classical NSP of order k by orthant-wise linear
/// programming over the null space of F^T (supports of size exactly k
/// dominate all smaller ones).
NspClassicalResult check_nsp_classical(const Frame& f, std::size_t k, unsigned jobs = 1);

struct NspPhaselessResult {
    bool holds = false;
    std::optional<PhaselessNspViolation> violation;
    SubsetScope scope = SubsetScope::AllSubsets;
    std::uint64_t cells_total = 0;
    std::uint64_t cells_examined = 0;
};

struct NspPhaselessOptions {
    SubsetScope scope = SubsetScope::AllSubsets;
    unsigned jobs = 1;
    bool override_budget = false;
    /// Fixed stream for the per-cell randomized pre-screen; part of the
    /// deterministic output contract.
    std::uint64_t prescreen_seed = 0xA5F152F2D0FF3A7BULL;
    std::size_t prescreen_samples = 8;
    std::size_t budget_d = 6;
    std::size_t budget_m = 8;
};

/// Exact decision of the phaseless NSP of order k: per split {S, S^c} and
/// support T, the pair space is parametrized exactly and every sign-orthant
/// cell is solved as an LP; equality optima are probed for points with both
/// u and v nonzero (strictness makes equality a violation).
NspPhaselessResult check_nsp_phaseless_real(const Frame& f, std::size_t k,
                                            const NspPhaselessOptions& opt = {});

/// Turns a phaseless NSP violation into a concrete recovery failure:
/// x0 = u+v and z = u-v have identical magnitudes, z is not a sign of x0,
/// and the phaseless l1 argmin of the measured magnitudes is provably not
/// {+-x0}.
struct FailureInstance {
    RatVec x0;
    RatVec competitor;
    ArgminReport report;
};

FailureInstance failure_instance_from_violation(const Frame& f, std::size_t k,
                                                const PhaselessNspViolation& w,
                                                const SolveOptions& solve_opt = {});

} // namespace prlab
