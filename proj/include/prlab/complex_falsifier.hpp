#pragma once

#include <complex>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>
#include <json.hpp>

#include "prlab/frame.hpp"

namespace prlab {

/// Complex frame in double precision. Measurements use the bilinear pairing
/// w_j = f_j^T x (the transpose kernel convention), so the measurement map
/// stays linear in x; magnitudes are unaffected by the convention.
struct ComplexFrame {
    Eigen::MatrixXcd f; // d x m, columns are the measurement vectors

    std::size_t d() const { return static_cast<std::size_t>(f.rows()); }
    std::size_t m() const { return static_cast<std::size_t>(f.cols()); }

    Eigen::VectorXcd measure(const Eigen::VectorXcd& x) const { return f.transpose() * x; }

    static ComplexFrame from_rational(const Frame& fr);
};

nlohmann::ordered_json complex_frame_to_json(const ComplexFrame& f);
/// Accepts field "complex64" or "rational" (converted to doubles).
ComplexFrame complex_frame_from_json(const nlohmann::ordered_json& j);

/// Seeded generic complex frame: real and imaginary parts i.i.d. uniform in
/// [-1, 1) from the splitmix64 stream (real parts first per entry).
ComplexFrame random_complex_frame(std::size_t d, std::size_t m, std::uint64_t seed);

/// Search tolerances. Floating point with explicit tolerances: the
/// unimodular constants live on a continuum, so exact arithmetic is not an
/// option on this path. A found witness is a verified refutation up to
/// these tolerances; none-found is always inconclusive.
struct FalsifierTolerances {
    double tol_eq = 1e-9;   // relative equation / margin tolerance
    double tol_nz = 1e-7;   // relative nonzero-ness threshold
    double svd_rel = 1e-10; // relative singular value cutoff for null solves
    double c_min_sep = 1e-3; // minimum pairwise distance of sampled c's
    int c_grid = 64;        // unit-circle grid size for c sampling
};

/// max_j | |<f_j,x>|^2 - |<f_j,y>|^2 |, normalized by the frame column and
/// signal scales so the value is invariant under positive rescaling.
double collision_residual(const ComplexFrame& f, const Eigen::VectorXcd& x,
                          const Eigen::VectorXcd& y);

struct ComplexCollision {
    Eigen::VectorXcd x;
    Eigen::VectorXcd y;
    double residual = 0.0;
};

/// Detects the conjugation degeneracy: when every column is a unimodular
/// multiple of a real vector, a random non-real x collides with conj(x).
std::optional<ComplexCollision> conjugate_collision(const ComplexFrame& f,
                                                    std::uint64_t seed = 1,
                                                    const FalsifierTolerances& tol = {});

/// Witness that the partition null-space condition fails: all eta_j are
/// nonzero members of N(F_{S_j}) and share the common difference quotient
/// y0 = (eta_1 - eta_j) / (c_1 - c_j).
struct PartitionWitness {
    std::vector<std::vector<std::size_t>> partition; // 0-based blocks
    std::vector<std::complex<double>> c;
    Eigen::VectorXcd eta1;
    Eigen::VectorXcd y0;
    std::vector<Eigen::VectorXcd> etas;
    double margin = 0.0;       // ||y0||_1 - ||c_1 y0 - eta1||_1
    double max_residual = 0.0; // worst block equation residual (relative)
};

enum class FalsifyKind { WitnessFound, RankDeficient, Inconclusive };

struct FalsifierOutcome {
    FalsifyKind kind = FalsifyKind::Inconclusive;
    std::optional<PartitionWitness> witness;
    Eigen::VectorXcd null_vector; // set for RankDeficient
    std::uint64_t attempts = 0;   // attempts consumed in the deciding slice
};

/// Budgeted randomized search for a failure witness of the k-sparse complex
/// null-space condition. Candidates come from two generators: random
/// partitions with sampled unimodular constants solved as a stacked
/// homogeneous system, and conjugation-structured candidates derived from
/// the measurement phases of a sampled signal. Budget exhaustion returns
/// an explicitly inconclusive none-found.
FalsifierOutcome search_thm33_witness(const ComplexFrame& f, std::size_t k,
                                      std::uint64_t budget, std::uint64_t seed,
                                      unsigned jobs = 1, const FalsifierTolerances& tol = {});

/// Same machinery at full sparsity (k = d) and with no inequality
/// condition: any nontrivial solution already refutes full complex phase
/// retrievability. A rank-deficient frame is reported separately (the
/// single-block case reduces to rank(F) = d).
FalsifierOutcome search_thm42_witness(const ComplexFrame& f, std::uint64_t budget,
                                      std::uint64_t seed, unsigned jobs = 1,
                                      const FalsifierTolerances& tol = {});

nlohmann::ordered_json partition_witness_to_json(const PartitionWitness& w);
nlohmann::ordered_json complex_collision_to_json(const ComplexCollision& w);

} // namespace prlab
