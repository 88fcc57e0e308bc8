#include "prlab/complex_falsifier.hpp"

#include <algorithm>

#include "prlab/json_io.hpp"
#include "prlab/parallel.hpp"

namespace prlab {

using cdouble = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using json = nlohmann::ordered_json;

ComplexFrame ComplexFrame::from_rational(const Frame& fr) {
    ComplexFrame cf;
    cf.f = MatrixXcd(fr.d, fr.m);
    for (std::size_t j = 0; j < fr.m; ++j)
        for (std::size_t i = 0; i < fr.d; ++i)
            cf.f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                cdouble(fr.columns[j][i].to_double(), 0.0);
    return cf;
}

json complex_frame_to_json(const ComplexFrame& f) {
    json j;
    j["field"] = "complex64";
    j["d"] = f.d();
    j["m"] = f.m();
    json cols = json::array();
    for (std::size_t c = 0; c < f.m(); ++c) {
        json col = json::array();
        for (std::size_t i = 0; i < f.d(); ++i) {
            const cdouble v = f.f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
            col.push_back(json::array({v.real(), v.imag()}));
        }
        cols.push_back(col);
    }
    j["columns"] = cols;
    return j;
}

ComplexFrame complex_frame_from_json(const json& j) {
    const std::string field = j.value("field", "");
    if (field == "rational") return ComplexFrame::from_rational(frame_from_json(j));
    if (field != "complex64") throw IoError("complex frame: unknown field type '" + field + "'");
    const std::size_t d = j.at("d").get<std::size_t>();
    const std::size_t m = j.at("m").get<std::size_t>();
    if (d < 1 || m < 1) throw IoError("complex frame: d and m must be >= 1");
    const json& cols = j.at("columns");
    if (!cols.is_array() || cols.size() != m) throw IoError("complex frame: bad column count");
    ComplexFrame cf;
    cf.f = MatrixXcd(d, m);
    for (std::size_t c = 0; c < m; ++c) {
        const json& col = cols[c];
        if (!col.is_array() || col.size() != d) throw IoError("complex frame: bad column length");
        for (std::size_t i = 0; i < d; ++i) {
            const json& e = col[i];
            if (!e.is_array() || e.size() != 2) throw IoError("complex frame: entry must be [re, im]");
            const cdouble v(e[0].get<double>(), e[1].get<double>());
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw IoError("complex frame: non-finite entry");
            cf.f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return cf;
}

ComplexFrame random_complex_frame(std::size_t d, std::size_t m, std::uint64_t seed) {
    if (d < 1 || m < 1) throw PreconditionError("random_complex_frame: d and m must be >= 1");
    SplitMix64 rng(seed);
    ComplexFrame cf;
    cf.f = MatrixXcd(d, m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < d; ++i) {
            const double re = 2.0 * rng.unit() - 1.0;
            const double im = 2.0 * rng.unit() - 1.0;
            cf.f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cdouble(re, im);
        }
    return cf;
}

namespace {

double max_col_norm2(const ComplexFrame& f) {
    double m = 0.0;
    for (Eigen::Index j = 0; j < f.f.cols(); ++j) m = std::max(m, f.f.col(j).squaredNorm());
    return m;
}

double l1_norm_c(const VectorXcd& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += std::abs(v[i]);
    return s;
}

// min over |c| = 1 of ||x - c y||^2; zero iff x and y are unimodular
// multiples of each other.
double unimodular_gap2(const VectorXcd& x, const VectorXcd& y) {
    return x.squaredNorm() + y.squaredNorm() - 2.0 * std::abs(x.dot(y));
}

// Bilinear pairing f_t^T v matching the transpose kernel convention.
cdouble bilinear(const VectorXcd& a, const VectorXcd& b) {
    return a.cwiseProduct(b).sum();
}

cdouble unit_circle(double angle) { return cdouble(std::cos(angle), std::sin(angle)); }

struct Candidate {
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<cdouble> c;
    VectorXcd eta1;
    VectorXcd y0;
};

// Full validation shared by both generators: block equations, nonzero-ness,
// the pairwise algebraic identities, and (for the sparse condition) the
// inequality margin.
std::optional<PartitionWitness> validate_candidate(const ComplexFrame& f, const Candidate& cand,
                                                   std::size_t k, bool require_margin,
                                                   const FalsifierTolerances& tol) {
    const std::size_t p = cand.blocks.size();
    if (p < 2) return std::nullopt;
    for (const auto& b : cand.blocks)
        if (b.empty()) return std::nullopt;
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a + 1; b < p; ++b)
            if (std::abs(cand.c[a] - cand.c[b]) < tol.c_min_sep) return std::nullopt;
    for (const auto& cj : cand.c)
        if (std::abs(std::abs(cj) - 1.0) > tol.tol_eq) return std::nullopt;

    PartitionWitness w;
    w.partition = cand.blocks;
    w.c = cand.c;
    w.eta1 = cand.eta1;
    w.y0 = cand.y0;

    const double colmax = std::sqrt(max_col_norm2(f));
    double zmax = std::max(cand.eta1.lpNorm<Eigen::Infinity>(), cand.y0.lpNorm<Eigen::Infinity>());
    const double scale = std::max(1.0, colmax * std::max(zmax, 1.0));
    const double zscale = std::max(cand.eta1.norm(), cand.y0.norm());

    if (cand.y0.norm() <= tol.tol_nz * zscale) return std::nullopt;
    std::size_t nnz = 0;
    for (Eigen::Index i = 0; i < cand.y0.size(); ++i)
        if (std::abs(cand.y0[i]) > tol.tol_nz * zscale) ++nnz;
    if (nnz > k) return std::nullopt;

    w.etas.resize(p);
    w.max_residual = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        w.etas[j] = cand.eta1 - (cand.c[0] - cand.c[j]) * cand.y0;
        if (w.etas[j].norm() <= tol.tol_nz * zscale) return std::nullopt;
        for (std::size_t t : cand.blocks[j]) {
            const double r = std::abs(bilinear(f.f.col(static_cast<Eigen::Index>(t)), w.etas[j]));
            w.max_residual = std::max(w.max_residual, r / scale);
        }
    }
    if (w.max_residual > tol.tol_eq) return std::nullopt;

    // The single-scalar reformulation must agree with direct pairwise
    // evaluation of the theorem's two norms (tests the algebraic identities
    // eta_j - eta_l = (c_j - c_l) y0 and c_l eta_j - c_j eta_l =
    // (c_l - c_j)(eta_1 - c_1 y0)).
    const double lhs_scalar = l1_norm_c(cand.y0);
    const double rhs_scalar = l1_norm_c(cand.c[0] * cand.y0 - cand.eta1);
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a + 1; b < p; ++b) {
            const double cab = std::abs(cand.c[a] - cand.c[b]);
            const double lhs = l1_norm_c(w.etas[a] - w.etas[b]);
            const double rhs = l1_norm_c(cand.c[b] * w.etas[a] - cand.c[a] * w.etas[b]);
            const double sl = std::max(1.0, lhs + cab * lhs_scalar);
            const double sr = std::max(1.0, rhs + cab * rhs_scalar);
            if (std::abs(lhs - cab * lhs_scalar) > 1e-9 * sl) return std::nullopt;
            if (std::abs(rhs - cab * rhs_scalar) > 1e-9 * sr) return std::nullopt;
        }
    }

    w.margin = lhs_scalar - rhs_scalar;
    const double mscale = std::max(1.0, lhs_scalar + rhs_scalar);
    if (require_margin && w.margin < -tol.tol_eq * mscale) return std::nullopt;

    // Cross-validation through the collision of the proof: x0 = eta_1 - eta_2
    // against c_2 eta_1 - c_1 eta_2 must have matching magnitudes and must
    // not be unimodular-equivalent.
    const VectorXcd x0 = w.etas[0] - w.etas[1];
    const VectorXcd comp = cand.c[1] * w.etas[0] - cand.c[0] * w.etas[1];
    if (collision_residual(f, x0, comp) > tol.tol_eq) return std::nullopt;
    if (unimodular_gap2(x0, comp) <= tol.tol_nz * std::max(x0.squaredNorm(), comp.squaredNorm()))
        return std::nullopt;

    return w;
}

// Generator A: sampled partition and unimodular constants; the stacked
// homogeneous system for (eta_1, y0) is solved by the least singular vector.
std::optional<Candidate> generate_system_candidate(const ComplexFrame& f, std::size_t k,
                                                   SplitMix64& rng,
                                                   const FalsifierTolerances& tol) {
    const std::size_t d = f.d(), m = f.m();
    const std::size_t p = 2 + rng.bounded(2);
    if (m < p) return std::nullopt;

    std::vector<std::vector<std::size_t>> blocks;
    for (int tries = 0; tries < 32; ++tries) {
        blocks.assign(p, {});
        for (std::size_t t = 0; t < m; ++t) blocks[rng.bounded(p)].push_back(t);
        bool ok = true;
        for (const auto& b : blocks) ok = ok && !b.empty();
        if (ok) break;
        blocks.clear();
    }
    if (blocks.empty()) return std::nullopt;

    std::vector<cdouble> c(p);
    bool separated = false;
    for (int tries = 0; tries < 8 && !separated; ++tries) {
        for (std::size_t j = 0; j < p; ++j) {
            const double base = 2.0 * M_PI * static_cast<double>(rng.bounded(tol.c_grid)) /
                                static_cast<double>(tol.c_grid);
            const double jitter = rng.bounded(2) ? rng.unit() * 2.0 * M_PI /
                                                       static_cast<double>(tol.c_grid)
                                                 : 0.0;
            c[j] = unit_circle(base + jitter);
        }
        separated = true;
        for (std::size_t a = 0; a < p && separated; ++a)
            for (std::size_t b = a + 1; b < p; ++b)
                separated = separated && std::abs(c[a] - c[b]) >= tol.c_min_sep;
    }
    if (!separated) return std::nullopt;

    const std::vector<std::size_t> support = random_subset(rng, d, k);

    MatrixXcd sys(m, d + k);
    sys.setZero();
    std::size_t row = 0;
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t t : blocks[j]) {
            for (std::size_t i = 0; i < d; ++i)
                sys(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i)) =
                    f.f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t));
            if (j > 0) {
                const cdouble w = -(c[0] - c[j]);
                for (std::size_t q = 0; q < k; ++q)
                    sys(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(d + q)) =
                        w * f.f(static_cast<Eigen::Index>(support[q]),
                                static_cast<Eigen::Index>(t));
            }
            ++row;
        }
    }

    Eigen::JacobiSVD<MatrixXcd> svd(sys, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return std::nullopt;
    if (m >= d + k) {
        const double smin = sv(sv.size() - 1);
        if (smin / sv(0) > tol.svd_rel) return std::nullopt;
    }
    const VectorXcd z = svd.matrixV().col(static_cast<Eigen::Index>(d + k - 1));

    Candidate cand;
    cand.blocks = std::move(blocks);
    cand.c = std::move(c);
    cand.eta1 = z.head(static_cast<Eigen::Index>(d));
    cand.y0 = VectorXcd::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t q = 0; q < k; ++q)
        cand.y0(static_cast<Eigen::Index>(support[q])) = z(static_cast<Eigen::Index>(d + q));
    return cand;
}

// Generator B: conjugation-structured candidate. A sampled k-sparse non-real
// signal x collides with conj(x) exactly when all measurement phase ratios
// are unimodular; clustering those ratios yields the partition, the c's,
// eta_j = c_j x - conj(x) and y0 = x.
std::optional<Candidate> generate_conjugation_candidate(const ComplexFrame& f, std::size_t k,
                                                        SplitMix64& rng,
                                                        const FalsifierTolerances& tol) {
    const std::size_t d = f.d(), m = f.m();
    const std::vector<std::size_t> support = random_subset(rng, d, k);
    VectorXcd x = VectorXcd::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t i : support)
        x(static_cast<Eigen::Index>(i)) =
            cdouble(2.0 * rng.unit() - 1.0, 2.0 * rng.unit() - 1.0);
    if (x.norm() < 1e-6) return std::nullopt;
    const VectorXcd y = x.conjugate();
    if (unimodular_gap2(x, y) <= tol.tol_nz * x.squaredNorm()) return std::nullopt;

    const VectorXcd wx = f.measure(x);
    const VectorXcd wy = f.measure(y);
    const double wscale = std::max(wx.lpNorm<Eigen::Infinity>(), 1e-300);

    std::vector<cdouble> ratio(m);
    std::vector<bool> free_row(m, false);
    for (std::size_t t = 0; t < m; ++t) {
        const cdouble a = wx(static_cast<Eigen::Index>(t)), b = wy(static_cast<Eigen::Index>(t));
        if (std::abs(a) <= tol.tol_eq * wscale) {
            if (std::abs(b) > tol.tol_eq * wscale) return std::nullopt;
            free_row[t] = true;
            continue;
        }
        const cdouble r = b / a;
        if (std::abs(std::abs(r) - 1.0) > tol.tol_eq) return std::nullopt;
        ratio[t] = r / std::abs(r);
    }

    Candidate cand;
    for (std::size_t t = 0; t < m; ++t) {
        if (free_row[t]) continue;
        std::size_t j = cand.blocks.size();
        for (std::size_t b = 0; b < cand.blocks.size(); ++b) {
            if (std::abs(ratio[t] - cand.c[b]) <= 4.0 * tol.tol_eq) {
                j = b;
                break;
            }
        }
        if (j == cand.blocks.size()) {
            cand.blocks.push_back({});
            cand.c.push_back(ratio[t]);
        }
        cand.blocks[j].push_back(t);
    }
    if (cand.blocks.empty()) return std::nullopt;
    for (std::size_t t = 0; t < m; ++t)
        if (free_row[t]) cand.blocks[0].push_back(t);
    for (auto& b : cand.blocks) std::sort(b.begin(), b.end());

    cand.eta1 = cand.c[0] * x - y;
    cand.y0 = x;
    return cand;
}

FalsifierOutcome run_search(const ComplexFrame& f, std::size_t k, std::uint64_t budget,
                            std::uint64_t seed, unsigned jobs, bool require_margin,
                            const FalsifierTolerances& tol) {
    FalsifierOutcome out;
    if (budget < 1) throw PreconditionError("falsifier: budget must be >= 1");

    // Fixed slicing keeps the outcome identical for every jobs value.
    const std::uint64_t nslices = std::min<std::uint64_t>(64, budget);
    const std::uint64_t per_slice = budget / nslices;
    const std::uint64_t extra = budget % nslices;

    struct SliceHit {
        PartitionWitness witness;
        std::uint64_t attempts;
    };

    auto slice_fn = [&](std::size_t s) -> std::optional<SliceHit> {
        SplitMix64 rng = SplitMix64::derived(seed, s);
        const std::uint64_t n = per_slice + (s < extra ? 1 : 0);
        for (std::uint64_t i = 0; i < n; ++i) {
            std::optional<Candidate> cand =
                (i % 4 == 0) ? generate_conjugation_candidate(f, k, rng, tol)
                             : generate_system_candidate(f, k, rng, tol);
            if (!cand) continue;
            auto w = validate_candidate(f, *cand, k, require_margin, tol);
            if (w) return SliceHit{std::move(*w), i + 1};
        }
        return std::nullopt;
    };

    auto hit = indexed_min_search<SliceHit>(nslices, jobs, slice_fn);
    if (hit) {
        out.kind = FalsifyKind::WitnessFound;
        out.witness = std::move(hit->second.witness);
        out.attempts = hit->second.attempts;
    } else {
        out.kind = FalsifyKind::Inconclusive;
        out.attempts = budget;
    }
    return out;
}

} // namespace

double collision_residual(const ComplexFrame& f, const VectorXcd& x, const VectorXcd& y) {
    if (static_cast<std::size_t>(x.size()) != f.d() || static_cast<std::size_t>(y.size()) != f.d())
        throw DimensionError("collision_residual: vector length != d");
    const VectorXcd wx = f.measure(x);
    const VectorXcd wy = f.measure(y);
    const double colmax2 = max_col_norm2(f);
    const double denom =
        std::max({1.0, colmax2 * x.squaredNorm(), colmax2 * y.squaredNorm()});
    double worst = 0.0;
    for (Eigen::Index j = 0; j < wx.size(); ++j) {
        const double dj = std::abs(std::norm(wx(j)) - std::norm(wy(j)));
        worst = std::max(worst, dj / denom);
    }
    return worst;
}

std::optional<ComplexCollision> conjugate_collision(const ComplexFrame& f, std::uint64_t seed,
                                                    const FalsifierTolerances& tol) {
    // Every column must be a unimodular multiple of a real vector.
    for (Eigen::Index j = 0; j < f.f.cols(); ++j) {
        const VectorXcd col = f.f.col(j);
        const double n = col.lpNorm<Eigen::Infinity>();
        if (n == 0.0) continue;
        Eigen::Index imax = 0;
        col.cwiseAbs().maxCoeff(&imax);
        const cdouble phase = col(imax) / std::abs(col(imax));
        const VectorXcd g = col / phase;
        for (Eigen::Index i = 0; i < g.size(); ++i)
            if (std::abs(g(i).imag()) > tol.tol_eq * n) return std::nullopt;
    }

    SplitMix64 rng(seed);
    for (int tries = 0; tries < 16; ++tries) {
        VectorXcd x(static_cast<Eigen::Index>(f.d()));
        for (Eigen::Index i = 0; i < x.size(); ++i)
            x(i) = cdouble(2.0 * rng.unit() - 1.0, 2.0 * rng.unit() - 1.0);
        const VectorXcd y = x.conjugate();
        if (unimodular_gap2(x, y) <= tol.tol_nz * x.squaredNorm()) continue;
        const double r = collision_residual(f, x, y);
        if (r > tol.tol_eq) continue;
        return ComplexCollision{x, y, r};
    }
    return std::nullopt;
}

FalsifierOutcome search_thm33_witness(const ComplexFrame& f, std::size_t k, std::uint64_t budget,
                                      std::uint64_t seed, unsigned jobs,
                                      const FalsifierTolerances& tol) {
    if (k < 1 || k > f.d()) throw PreconditionError("search_thm33_witness: need 1 <= k <= d");
    return run_search(f, k, budget, seed, jobs, /*require_margin=*/true, tol);
}

FalsifierOutcome search_thm42_witness(const ComplexFrame& f, std::uint64_t budget,
                                      std::uint64_t seed, unsigned jobs,
                                      const FalsifierTolerances& tol) {
    // The single-block case is exactly rank deficiency of F.
    Eigen::JacobiSVD<MatrixXcd> svd(f.f.transpose(), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const bool deficient = f.m() < f.d() || sv(sv.size() - 1) <= tol.svd_rel * sv(0);
    if (deficient) {
        FalsifierOutcome out;
        out.kind = FalsifyKind::RankDeficient;
        out.null_vector = svd.matrixV().col(static_cast<Eigen::Index>(f.d() - 1));
        return out;
    }
    return run_search(f, f.d(), budget, seed, jobs, /*require_margin=*/false, tol);
}

json partition_witness_to_json(const PartitionWitness& w) {
    json j;
    j["kind"] = "partition";
    json parts = json::array();
    for (const auto& b : w.partition) {
        json blk = json::array();
        for (std::size_t t : b) blk.push_back(t + 1);
        parts.push_back(blk);
    }
    j["partition"] = parts;
    json cs = json::array();
    for (const auto& c : w.c) cs.push_back(json::array({c.real(), c.imag()}));
    j["c"] = cs;
    auto cvec = [](const VectorXcd& v) {
        json a = json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i)
            a.push_back(json::array({v(i).real(), v(i).imag()}));
        return a;
    };
    j["eta1"] = cvec(w.eta1);
    j["y0"] = cvec(w.y0);
    j["margin"] = w.margin;
    j["max_residual"] = w.max_residual;
    j["inconclusive"] = false;
    return j;
}

json complex_collision_to_json(const ComplexCollision& w) {
    auto cvec = [](const VectorXcd& v) {
        json a = json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i)
            a.push_back(json::array({v(i).real(), v(i).imag()}));
        return a;
    };
    json j;
    j["kind"] = "conjugate-collision";
    j["x"] = cvec(w.x);
    j["y"] = cvec(w.y);
    j["residual"] = w.residual;
    return j;
}

} // namespace prlab
