#include "prlab/nsp.hpp"

#include "prlab/linalg.hpp"
#include "prlab/lp.hpp"
#include "prlab/parallel.hpp"
#include "prlab/rng.hpp"

namespace prlab {

namespace {

std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

std::vector<std::size_t> mask_to_set(std::uint64_t mask, std::size_t m) {
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < m; ++j)
        if (mask & (1ULL << j)) s.push_back(j);
    return s;
}

bool in_set(const std::vector<std::size_t>& sorted, std::size_t x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

RatMatrix basis_columns(const Subspace& s) {
    RatMatrix m(s.ambient_dim, s.dim());
    for (std::size_t j = 0; j < s.dim(); ++j)
        for (std::size_t i = 0; i < s.ambient_dim; ++i) m.at(i, j) = s.basis[j][i];
    return m;
}

} // namespace

void validate_nsp_violation(const Frame& f, std::size_t k, const NspViolation& v) {
    if (v.t_set.size() > k) throw InternalError("nsp violation: support larger than k");
    if (is_zero_vec(v.eta)) throw InternalError("nsp violation: eta is zero");
    if (!is_zero_vec(measure_signed(f, v.eta)))
        throw InternalError("nsp violation: eta is not in the null space");
    Rational on, off;
    for (std::size_t i = 0; i < f.d; ++i)
        (in_set(v.t_set, i) ? on : off) += v.eta[i].abs();
    if (on - off != v.margin || v.margin.sign() < 0)
        throw InternalError("nsp violation: margin mismatch");
}

void validate_phaseless_violation(const Frame& f, std::size_t k,
                                  const PhaselessNspViolation& w) {
    if (w.t_set.size() > k) throw InternalError("phaseless violation: support larger than k");
    if (is_zero_vec(w.u) || is_zero_vec(w.v))
        throw InternalError("phaseless violation: u and v must both be nonzero");
    const Frame fs = sub_frame(f, w.s_set);
    const Frame fc = sub_frame(f, complement(f.m, w.s_set));
    if (!is_zero_vec(measure_signed(fs, w.u)))
        throw InternalError("phaseless violation: u is not in N(F_S)");
    if (!is_zero_vec(measure_signed(fc, w.v)))
        throw InternalError("phaseless violation: v is not in N(F_Sc)");
    const RatVec sum = vec_add(w.u, w.v);
    for (std::size_t i = 0; i < f.d; ++i)
        if (!sum[i].is_zero() && !in_set(w.t_set, i))
            throw InternalError("phaseless violation: u+v leaves the support");
    const Rational margin = l1_norm(sum) - l1_norm(vec_sub(w.u, w.v));
    if (margin != w.margin || margin.sign() < 0)
        throw InternalError("phaseless violation: margin mismatch");
}

NspClassicalResult check_nsp_classical(const Frame& f, std::size_t k, unsigned jobs) {
    if (k < 1 || k > f.d) throw PreconditionError("check_nsp_classical: need 1 <= k <= d");

    NspClassicalResult res;
    const Subspace null_space = null_space_basis(f.analysis());
    if (null_space.dim() == 0) {
        res.holds = true;
        return res;
    }
    const RatMatrix nmat = basis_columns(null_space);
    const std::size_t nb = null_space.dim();
    const auto supports = subsets_of_size(f.d, k);
    const std::size_t npat = std::size_t(1) << (f.d - 1); // sigma_1 pinned to +
    res.cells_total = supports.size() * npat;

    auto probe = [&](std::size_t idx) -> std::optional<NspViolation> {
        const auto& t_set = supports[idx / npat];
        const std::size_t sig = idx % npat;
        std::vector<int> sigma(f.d, +1);
        for (std::size_t i = 1; i < f.d; ++i)
            if (sig & (std::size_t(1) << (i - 1))) sigma[i] = -1;

        // Variables: a (free, nb) then s (nonneg, d). Rows force
        // s_i = sigma_i * (N a)_i and sum s = 1, so s_i = |eta_i| on the
        // sigma-orthant slice of the null space.
        LpProblem lp;
        const std::size_t nvars = nb + f.d;
        lp.constraints = RatMatrix(f.d + 1, nvars);
        lp.rhs.assign(f.d + 1, Rational(0));
        for (std::size_t i = 0; i < f.d; ++i) {
            for (std::size_t j = 0; j < nb; ++j)
                lp.constraints.at(i, j) = Rational(sigma[i]) * nmat.at(i, j);
            lp.constraints.at(i, nb + i) = Rational(-1);
        }
        for (std::size_t i = 0; i < f.d; ++i) lp.constraints.at(f.d, nb + i) = Rational(1);
        lp.rhs[f.d] = Rational(1);
        lp.objective.assign(nvars, Rational(0));
        for (std::size_t i = 0; i < f.d; ++i)
            lp.objective[nb + i] = Rational(in_set(t_set, i) ? 1 : -1);
        lp.signs.assign(nvars, VarSign::NonNegative);
        for (std::size_t j = 0; j < nb; ++j) lp.signs[j] = VarSign::Free;

        const LpOutcome out = lp_solve_exact(lp);
        if (std::holds_alternative<LpInfeasible>(out)) return std::nullopt;
        if (std::holds_alternative<LpUnbounded>(out))
            throw InternalError("classical NSP cell cannot be unbounded");
        const auto& opt = std::get<LpOptimal>(out);
        if (opt.value.sign() < 0) return std::nullopt;

        RatVec eta(f.d);
        for (std::size_t i = 0; i < f.d; ++i)
            for (std::size_t j = 0; j < nb; ++j) eta[i] += nmat.at(i, j) * opt.point[j];
        NspViolation v{t_set, std::move(eta), opt.value};
        validate_nsp_violation(f, k, v);
        return v;
    };

    auto found = indexed_min_search<NspViolation>(res.cells_total, jobs, probe);
    if (found) {
        res.holds = false;
        res.violation = std::move(found->second);
        res.cells_examined = found->first + 1;
    } else {
        res.holds = true;
        res.cells_examined = res.cells_total;
    }
    return res;
}

namespace {

// Per-cell exact machinery for the phaseless check: the pair space
// V_T = {(u, v) : u in N(F_S), v in N(F_Sc), (u+v)_{T^c} = 0} parametrized
// by a rational basis, with column maps for u, v.
struct PairSpace {
    std::size_t dim = 0;
    RatMatrix u_map; // d x dim
    RatMatrix v_map; // d x dim

    RatVec u_of(const RatVec& t) const { return u_map.mul(t); }
    RatVec v_of(const RatVec& t) const { return v_map.mul(t); }
};

std::optional<PairSpace> build_pair_space(const Frame& f, const Subspace& ns,
                                          const Subspace& nc,
                                          const std::vector<std::size_t>& t_set) {
    const std::size_t p1 = ns.dim(), p2 = nc.dim();
    if (p1 == 0 || p2 == 0) return std::nullopt;

    std::vector<std::size_t> off_support;
    for (std::size_t i = 0; i < f.d; ++i)
        if (!in_set(t_set, i)) off_support.push_back(i);

    RatMatrix c(off_support.size(), p1 + p2);
    for (std::size_t r = 0; r < off_support.size(); ++r) {
        const std::size_t i = off_support[r];
        for (std::size_t j = 0; j < p1; ++j) c.at(r, j) = ns.basis[j][i];
        for (std::size_t j = 0; j < p2; ++j) c.at(r, p1 + j) = nc.basis[j][i];
    }
    const Subspace kernel = null_space_basis(c);
    if (kernel.dim() == 0) return std::nullopt;

    PairSpace ps;
    ps.dim = kernel.dim();
    ps.u_map = RatMatrix(f.d, ps.dim);
    ps.v_map = RatMatrix(f.d, ps.dim);
    for (std::size_t t = 0; t < ps.dim; ++t) {
        for (std::size_t i = 0; i < f.d; ++i) {
            Rational ui, vi;
            for (std::size_t j = 0; j < p1; ++j) ui += ns.basis[j][i] * kernel.basis[t][j];
            for (std::size_t j = 0; j < p2; ++j) vi += nc.basis[j][i] * kernel.basis[t][p1 + j];
            ps.u_map.at(i, t) = ui;
            ps.v_map.at(i, t) = vi;
        }
    }
    return ps;
}

struct CellLp {
    const Frame& f;
    const PairSpace& ps;
    const std::vector<std::size_t>& t_set;
    std::vector<int> sigma; // on T
    std::vector<int> tau;   // on [0, d)

    // Variables: t (free, dim), w (nonneg, k), r (nonneg, d).
    // Rows: sigma_i (u+v)_i - w_i = 0 on T;  tau_i (u-v)_i - r_i = 0;
    // sum r = 1. Optional extra row pins sum w.
    LpProblem build(const Rational* pin_sum_w) const {
        const std::size_t k = t_set.size(), d = f.d, dim = ps.dim;
        const std::size_t nvars = dim + k + d;
        const std::size_t extra = pin_sum_w ? 1 : 0;
        LpProblem lp;
        lp.constraints = RatMatrix(k + d + 1 + extra, nvars);
        lp.rhs.assign(k + d + 1 + extra, Rational(0));
        for (std::size_t a = 0; a < k; ++a) {
            const std::size_t i = t_set[a];
            for (std::size_t t = 0; t < dim; ++t)
                lp.constraints.at(a, t) =
                    Rational(sigma[a]) * (ps.u_map.at(i, t) + ps.v_map.at(i, t));
            lp.constraints.at(a, dim + a) = Rational(-1);
        }
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t t = 0; t < dim; ++t)
                lp.constraints.at(k + i, t) =
                    Rational(tau[i]) * (ps.u_map.at(i, t) - ps.v_map.at(i, t));
            lp.constraints.at(k + i, dim + k + i) = Rational(-1);
        }
        for (std::size_t i = 0; i < d; ++i) lp.constraints.at(k + d, dim + k + i) = Rational(1);
        lp.rhs[k + d] = Rational(1);
        if (pin_sum_w) {
            for (std::size_t a = 0; a < k; ++a) lp.constraints.at(k + d + 1, dim + a) = Rational(1);
            lp.rhs[k + d + 1] = *pin_sum_w;
        }
        lp.objective.assign(nvars, Rational(0));
        lp.signs.assign(nvars, VarSign::NonNegative);
        for (std::size_t t = 0; t < dim; ++t) lp.signs[t] = VarSign::Free;
        return lp;
    }

    RatVec t_part(const RatVec& point) const {
        return RatVec(point.begin(), point.begin() + static_cast<std::ptrdiff_t>(ps.dim));
    }
};

} // namespace

NspPhaselessResult check_nsp_phaseless_real(const Frame& f, std::size_t k,
                                            const NspPhaselessOptions& opt) {
    if (k < 1 || k > f.d) throw PreconditionError("check_nsp_phaseless_real: need 1 <= k <= d");
    if (!opt.override_budget && (f.d > opt.budget_d || f.m > opt.budget_m))
        throw BudgetError("check_nsp_phaseless_real: instance exceeds the exhaustive budget (d <= " +
                          std::to_string(opt.budget_d) + ", m <= " + std::to_string(opt.budget_m) +
                          "); pass the override to force it");
    if (f.m > 24 || f.d > 12)
        throw BudgetError("check_nsp_phaseless_real: enumeration is infeasible at this size even "
                          "with the override");

    NspPhaselessResult res;
    res.scope = opt.scope;

    const auto supports = subsets_of_size(f.d, k);
    const RatMatrix analysis = f.analysis();

    // k-sparse null vectors of the whole frame violate the property with
    // u = v (then ||u-v||_1 = 0 < ||u+v||_1); the sign-cell sweep below
    // cannot normalize u-v for them, so they are handled first.
    for (const auto& t_set : supports) {
        RatMatrix sys(analysis.rows() + (f.d - k), f.d);
        for (std::size_t i = 0; i < analysis.rows(); ++i)
            for (std::size_t j = 0; j < f.d; ++j) sys.at(i, j) = analysis.at(i, j);
        std::size_t row = analysis.rows();
        for (std::size_t i = 0; i < f.d; ++i) {
            if (in_set(t_set, i)) continue;
            sys.at(row, i) = Rational(1);
            ++row;
        }
        const Subspace ker = null_space_basis(sys);
        if (ker.dim() == 0) continue;
        std::vector<std::size_t> all_s(f.m);
        for (std::size_t j = 0; j < f.m; ++j) all_s[j] = j;
        const RatVec& w = ker.basis[0];
        PhaselessNspViolation viol{all_s, w, w, t_set, Rational(2) * l1_norm(w)};
        validate_phaseless_violation(f, k, viol);
        res.holds = false;
        res.violation = std::move(viol);
        res.cells_examined = 0;
        return res;
    }

    std::vector<std::uint64_t> masks;
    if (f.m == 0) {
        masks.push_back(0);
    } else {
        for (std::uint64_t t = 0; t < (1ULL << (f.m - 1)); ++t) {
            const std::uint64_t mask = (t << 1) | 1ULL;
            if (opt.scope == SubsetScope::CardinalityAtMostK) {
                const std::size_t c = static_cast<std::size_t>(__builtin_popcountll(mask));
                if (c > k && f.m - c > k) continue;
            }
            masks.push_back(mask);
        }
    }
    res.cells_total = masks.size() * supports.size();

    auto probe_cell = [&](std::size_t idx) -> std::optional<PhaselessNspViolation> {
        const std::uint64_t mask = masks[idx / supports.size()];
        const auto& t_set = supports[idx % supports.size()];
        const std::vector<std::size_t> s_set = mask_to_set(mask, f.m);
        const std::vector<std::size_t> c_set = complement(f.m, s_set);
        const Subspace ns = null_space_basis(sub_frame(f, s_set).analysis());
        const Subspace nc = null_space_basis(sub_frame(f, c_set).analysis());
        const auto ps = build_pair_space(f, ns, nc, t_set);
        if (!ps) return std::nullopt;

        auto make_violation = [&](const RatVec& u, const RatVec& v) {
            PhaselessNspViolation viol{s_set, u, v, t_set,
                                       l1_norm(vec_add(u, v)) - l1_norm(vec_sub(u, v))};
            validate_phaseless_violation(f, k, viol);
            return viol;
        };

        // Randomized pre-screen: cheap seeded samples of the pair space.
        SplitMix64 rng = SplitMix64::derived(opt.prescreen_seed ^ mask, idx);
        for (std::size_t trial = 0; trial < opt.prescreen_samples; ++trial) {
            RatVec t(ps->dim);
            for (auto& e : t) e = Rational(rng.int_in(-9, 9));
            const RatVec u = ps->u_of(t), v = ps->v_of(t);
            if (is_zero_vec(u) || is_zero_vec(v)) continue;
            if (l1_norm(vec_add(u, v)) >= l1_norm(vec_sub(u, v)))
                return make_violation(u, v);
        }

        // Exact sign-cell sweep.
        const std::size_t nsig = std::size_t(1) << k;
        const std::size_t ntau = std::size_t(1) << (f.d - 1); // tau_1 pinned by symmetry
        for (std::size_t sg = 0; sg < nsig; ++sg) {
            for (std::size_t tu = 0; tu < ntau; ++tu) {
                CellLp cell{f, *ps, t_set, std::vector<int>(k, +1), std::vector<int>(f.d, +1)};
                for (std::size_t a = 0; a < k; ++a)
                    if (sg & (std::size_t(1) << a)) cell.sigma[a] = -1;
                for (std::size_t i = 1; i < f.d; ++i)
                    if (tu & (std::size_t(1) << (i - 1))) cell.tau[i] = -1;

                const LpOutcome out = lp_solve_exact(cell.build(nullptr));
                if (std::holds_alternative<LpInfeasible>(out)) continue;
                if (const auto* ub = std::get_if<LpUnbounded>(&out)) {
                    // Rays keep sum tau_i (u-v)_i = 0 with every term
                    // nonnegative, so u = v in N(F) along the ray.
                    const RatVec t = cell.t_part(ub->ray);
                    const RatVec u = ps->u_of(t), v = ps->v_of(t);
                    if (u != v) throw InternalError("phaseless ray must have u = v");
                    return make_violation(u, v);
                }
                const auto& optimal = std::get<LpOptimal>(out);
                if (optimal.value < Rational(1)) continue;
                if (optimal.value > Rational(1)) {
                    const RatVec t = cell.t_part(optimal.point);
                    return make_violation(ps->u_of(t), ps->v_of(t));
                }

                // Equality case: strictness fails iff the optimal face has a
                // point with both u and v nonzero.
                const Rational one(1);
                const LpProblem face = cell.build(&one);
                std::optional<RatVec> with_u, with_v;
                bool u_all_zero = true, v_all_zero = true;
                for (int which = 0; which < 2 && (u_all_zero || v_all_zero); ++which) {
                    const RatMatrix& map = which == 0 ? ps->u_map : ps->v_map;
                    bool& all_zero = which == 0 ? u_all_zero : v_all_zero;
                    std::optional<RatVec>& keeper = which == 0 ? with_u : with_v;
                    for (std::size_t i = 0; i < f.d && all_zero; ++i) {
                        for (int dir = -1; dir <= 1 && all_zero; dir += 2) {
                            LpProblem probe = face;
                            probe.objective.assign(probe.objective.size(), Rational(0));
                            for (std::size_t t = 0; t < ps->dim; ++t)
                                probe.objective[t] = Rational(dir) * map.at(i, t);
                            const LpOutcome po = lp_solve_exact(probe);
                            const auto* popt = std::get_if<LpOptimal>(&po);
                            if (!popt) throw InternalError("face probe must be bounded feasible");
                            if (!popt->value.is_zero()) {
                                all_zero = false;
                                keeper = cell.t_part(popt->point);
                            }
                        }
                    }
                }
                if (u_all_zero || v_all_zero) continue;

                RatVec tx = *with_u;
                if (is_zero_vec(ps->v_of(tx))) {
                    const RatVec ty = *with_v;
                    if (!is_zero_vec(ps->u_of(ty))) {
                        tx = ty;
                    } else {
                        // Convex combinations; only finitely many weights can
                        // cancel a coordinate, so this terminates quickly.
                        bool done = false;
                        for (long den = 2; den < static_cast<long>(ps->dim) + 4 && !done; ++den) {
                            const Rational wgt(1, den);
                            RatVec mix(ps->dim);
                            for (std::size_t t = 0; t < ps->dim; ++t)
                                mix[t] = (Rational(1) - wgt) * tx[t] + wgt * ty[t];
                            if (!is_zero_vec(ps->u_of(mix)) && !is_zero_vec(ps->v_of(mix))) {
                                tx = mix;
                                done = true;
                            }
                        }
                        if (!done) throw InternalError("face mix failed to avoid cancellations");
                    }
                }
                return make_violation(ps->u_of(tx), ps->v_of(tx));
            }
        }
        return std::nullopt;
    };

    auto found =
        indexed_min_search<PhaselessNspViolation>(res.cells_total, opt.jobs, probe_cell);
    if (found) {
        res.holds = false;
        res.violation = std::move(found->second);
        res.cells_examined = found->first + 1;
    } else {
        res.holds = true;
        res.cells_examined = res.cells_total;
    }
    return res;
}

FailureInstance failure_instance_from_violation(const Frame& f, std::size_t k,
                                                const PhaselessNspViolation& w,
                                                const SolveOptions& solve_opt) {
    validate_phaseless_violation(f, k, w);
    FailureInstance inst;
    inst.x0 = vec_add(w.u, w.v);
    inst.competitor = vec_sub(w.u, w.v);
    if (measure_abs(f, inst.x0) != measure_abs(f, inst.competitor))
        throw InternalError("failure instance: magnitudes differ");
    if (same_sign_class(inst.x0, inst.competitor))
        throw InternalError("failure instance: competitor equals +-x0");
    if (l1_norm(inst.competitor) > l1_norm(inst.x0))
        throw InternalError("failure instance: competitor has larger l1 norm");

    inst.report = solve_l1_phaseless_real({f, measure_abs(f, inst.x0)}, solve_opt);
    const bool recovers = inst.report.feasible && inst.report.nonpoint_faces.empty() &&
                          inst.report.minimizer_classes.size() == 1 &&
                          inst.report.minimizer_classes[0] == canonicalize_sign(inst.x0);
    if (recovers)
        throw InternalError("failure instance: argmin is exactly {+-x0} despite the violation");
    return inst;
}

} // namespace prlab
