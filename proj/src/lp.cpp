#include "prlab/lp.hpp"

namespace prlab {

namespace {

// Dense rational simplex tableau. Rows are B^{-1}A with rhs in the last
// column; zrow[j] = c_B B^{-1} A_j - c_j, so the tableau is optimal for a
// maximization when every zrow entry is nonnegative.
struct Tableau {
    std::size_t ncols = 0; // structural + artificial columns (rhs excluded)
    std::vector<RatVec> rows;
    RatVec zrow;
    std::vector<std::size_t> basis;

    Rational& rhs(std::size_t i) { return rows[i][ncols]; }
    const Rational& rhs(std::size_t i) const { return rows[i][ncols]; }

    void pivot(std::size_t r, std::size_t c) {
        const Rational inv = Rational(1) / rows[r][c];
        for (auto& e : rows[r]) e *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c].is_zero()) continue;
            const Rational f = rows[i][c];
            for (std::size_t j = 0; j <= ncols; ++j) rows[i][j] -= f * rows[r][j];
        }
        if (!zrow[c].is_zero()) {
            const Rational f = zrow[c];
            for (std::size_t j = 0; j <= ncols; ++j) zrow[j] -= f * rows[r][j];
        }
        basis[r] = c;
    }

    enum class StepResult { Optimal, Unbounded };

    // Bland's rule: entering = smallest eligible column index, leaving =
    // ratio-test winner with ties broken by smallest basis variable index.
    StepResult run(std::size_t entering_limit, std::size_t* unbounded_col) {
        for (;;) {
            std::size_t enter = entering_limit;
            for (std::size_t j = 0; j < entering_limit; ++j) {
                if (zrow[j].sign() < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == entering_limit) return StepResult::Optimal;

            std::size_t leave = rows.size();
            Rational best;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][enter].sign() <= 0) continue;
                const Rational ratio = rhs(i) / rows[i][enter];
                if (leave == rows.size() || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == rows.size()) {
                if (unbounded_col) *unbounded_col = enter;
                return StepResult::Unbounded;
            }
            pivot(leave, enter);
        }
    }
};

} // namespace

LpOutcome lp_solve_exact(const LpProblem& p) {
    const std::size_t n0 = p.objective.size();
    const std::size_t m = p.constraints.rows();
    if (p.constraints.cols() != n0)
        throw DimensionError("lp_solve_exact: constraint matrix has " +
                             std::to_string(p.constraints.cols()) + " columns, objective has " +
                             std::to_string(n0));
    if (p.rhs.size() != m) throw DimensionError("lp_solve_exact: rhs length mismatch");
    if (p.signs.size() != n0) throw DimensionError("lp_solve_exact: signs length mismatch");

    // Split free variables into a difference of two nonnegatives.
    std::vector<std::size_t> pos(n0), neg(n0, SIZE_MAX);
    std::size_t nstruct = 0;
    for (std::size_t k = 0; k < n0; ++k) {
        pos[k] = nstruct++;
        if (p.signs[k] == VarSign::Free) neg[k] = nstruct++;
    }

    const std::size_t ncols = nstruct + m;
    Tableau t;
    t.ncols = ncols;
    t.basis.resize(m);
    t.rows.assign(m, RatVec(ncols + 1));
    for (std::size_t i = 0; i < m; ++i) {
        const bool flip = p.rhs[i].sign() < 0;
        for (std::size_t k = 0; k < n0; ++k) {
            Rational a = p.constraints.at(i, k);
            if (flip) a = -a;
            t.rows[i][pos[k]] = a;
            if (neg[k] != SIZE_MAX) t.rows[i][neg[k]] = -a;
        }
        t.rows[i][nstruct + i] = Rational(1);
        t.rhs(i) = flip ? -p.rhs[i] : p.rhs[i];
        t.basis[i] = nstruct + i;
    }

    // Phase 1: maximize -(sum of artificials).
    t.zrow.assign(ncols + 1, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= ncols; ++j)
            if (j < nstruct || j == ncols) t.zrow[j] -= t.rows[i][j];

    std::size_t ub_col = 0;
    if (t.run(ncols, &ub_col) != Tableau::StepResult::Optimal)
        throw InternalError("phase-1 simplex reported unbounded");
    if (t.zrow[ncols].sign() < 0) return LpInfeasible{};

    // Drive remaining artificials out of the basis; a row with no structural
    // entry is redundant and gets dropped.
    for (std::size_t i = 0; i < t.rows.size();) {
        if (t.basis[i] < nstruct) {
            ++i;
            continue;
        }
        std::size_t c = nstruct;
        for (std::size_t j = 0; j < nstruct; ++j) {
            if (!t.rows[i][j].is_zero()) {
                c = j;
                break;
            }
        }
        if (c < nstruct) {
            t.pivot(i, c);
            ++i;
        } else {
            t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
            t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }

    // Strip artificial columns.
    for (auto& row : t.rows) {
        row[nstruct] = row[ncols];
        row.resize(nstruct + 1);
    }
    t.ncols = nstruct;

    // Phase 2 objective in split coordinates.
    RatVec c_split(nstruct);
    for (std::size_t k = 0; k < n0; ++k) {
        c_split[pos[k]] = p.objective[k];
        if (neg[k] != SIZE_MAX) c_split[neg[k]] = -p.objective[k];
    }
    t.zrow.assign(nstruct + 1, Rational(0));
    for (std::size_t j = 0; j < nstruct; ++j) t.zrow[j] = -c_split[j];
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const Rational cb = c_split[t.basis[i]];
        if (cb.is_zero()) continue;
        for (std::size_t j = 0; j <= nstruct; ++j) t.zrow[j] += cb * t.rows[i][j];
    }

    if (t.run(nstruct, &ub_col) != Tableau::StepResult::Optimal) {
        RatVec ray_split(nstruct);
        ray_split[ub_col] = Rational(1);
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            ray_split[t.basis[i]] = -t.rows[i][ub_col];
        RatVec ray(n0);
        for (std::size_t k = 0; k < n0; ++k) {
            ray[k] = ray_split[pos[k]];
            if (neg[k] != SIZE_MAX) ray[k] -= ray_split[neg[k]];
        }
        return LpUnbounded{std::move(ray)};
    }

    RatVec z(nstruct);
    for (std::size_t i = 0; i < t.rows.size(); ++i) z[t.basis[i]] = t.rhs(i);
    RatVec x(n0);
    for (std::size_t k = 0; k < n0; ++k) {
        x[k] = z[pos[k]];
        if (neg[k] != SIZE_MAX) x[k] -= z[neg[k]];
    }
    return LpOptimal{t.zrow[nstruct], std::move(x)};
}

namespace {

// Split formulation of min ||x||_1 s.t. Ax = b, optionally restricted to a
// coordinate support and with the l1 value pinned. Variables are p_j, n_j
// for j in the support, interleaved.
struct SplitLp {
    std::vector<std::size_t> support;
    LpProblem lp;

    SplitLp(const RatMatrix& a, const RatVec& b, const Rational* pinned_value,
            const std::vector<std::size_t>* supp) {
        if (supp) {
            support = *supp;
        } else {
            support.resize(a.cols());
            for (std::size_t j = 0; j < a.cols(); ++j) support[j] = j;
        }
        const std::size_t t = support.size();
        const std::size_t m = a.rows();
        const std::size_t extra = pinned_value ? 1 : 0;
        lp.constraints = RatMatrix(m + extra, 2 * t);
        lp.rhs.resize(m + extra);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < t; ++j) {
                lp.constraints.at(i, 2 * j) = a.at(i, support[j]);
                lp.constraints.at(i, 2 * j + 1) = -a.at(i, support[j]);
            }
            lp.rhs[i] = b[i];
        }
        if (pinned_value) {
            for (std::size_t j = 0; j < 2 * t; ++j) lp.constraints.at(m, j) = Rational(1);
            lp.rhs[m] = *pinned_value;
        }
        lp.objective.assign(2 * t, Rational(0));
        lp.signs.assign(2 * t, VarSign::NonNegative);
    }

    void set_objective_l1() {
        for (auto& c : lp.objective) c = Rational(-1);
    }

    void set_objective_coordinate(std::size_t local_j, int direction) {
        lp.objective.assign(lp.objective.size(), Rational(0));
        lp.objective[2 * local_j] = Rational(direction);
        lp.objective[2 * local_j + 1] = Rational(-direction);
    }

    RatVec extract_point(const RatVec& z, std::size_t ambient) const {
        RatVec x(ambient);
        for (std::size_t j = 0; j < support.size(); ++j)
            x[support[j]] = z[2 * j] - z[2 * j + 1];
        return x;
    }
};

} // namespace

L1PointResult l1_min_point(const RatMatrix& a, const RatVec& b) {
    if (b.size() != a.rows()) throw DimensionError("l1_min_point: rhs length mismatch");
    SplitLp base(a, b, nullptr, nullptr);
    base.set_objective_l1();
    LpOutcome out = lp_solve_exact(base.lp);

    L1PointResult res;
    if (std::holds_alternative<LpInfeasible>(out)) return res;
    if (std::holds_alternative<LpUnbounded>(out))
        throw InternalError("l1 objective cannot be unbounded");
    const auto& opt = std::get<LpOptimal>(out);
    res.feasible = true;
    res.value = -opt.value;
    res.point = base.extract_point(opt.point, a.cols());
    return res;
}

L1UniquenessProbe probe_l1_uniqueness(const RatMatrix& a, const RatVec& b, const Rational& value) {
    L1UniquenessProbe probe;
    probe.is_unique = true;
    probe.coordinate_ranges.resize(a.cols());
    SplitLp face(a, b, &value, nullptr);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        Rational lohi[2];
        for (int dir = 0; dir < 2; ++dir) {
            face.set_objective_coordinate(j, dir == 0 ? -1 : 1);
            LpOutcome po = lp_solve_exact(face.lp);
            const auto* po_opt = std::get_if<LpOptimal>(&po);
            if (!po_opt) throw InternalError("face probe must be bounded and feasible");
            lohi[dir] = dir == 0 ? -po_opt->value : po_opt->value;
        }
        probe.coordinate_ranges[j] = {lohi[0], lohi[1]};
        if (lohi[0] != lohi[1]) probe.is_unique = false;
    }
    return probe;
}

L1AffineResult l1_min_affine(const RatMatrix& a, const RatVec& b) {
    const L1PointResult core = l1_min_point(a, b);
    L1AffineResult res;
    if (!core.feasible) return res;
    res.feasible = true;
    res.value = core.value;
    res.point = core.point;
    L1UniquenessProbe probe = probe_l1_uniqueness(a, b, res.value);
    res.is_unique = probe.is_unique;
    res.coordinate_ranges = std::move(probe.coordinate_ranges);
    return res;
}

std::size_t L1Face::dimension() const {
    const std::size_t t = a.cols();
    SplitLp face(a, b, &value, nullptr);

    // Find the implicit equalities (split variables identically zero on the
    // face), then the face dimension is the nullity of the equality system
    // together with those rows.
    std::vector<std::size_t> zero_vars;
    for (std::size_t v = 0; v < 2 * t; ++v) {
        face.lp.objective.assign(2 * t, Rational(0));
        face.lp.objective[v] = Rational(1);
        LpOutcome po = lp_solve_exact(face.lp);
        const auto* opt = std::get_if<LpOptimal>(&po);
        if (!opt) throw InternalError("face variable probe must be bounded and feasible");
        if (opt->value.is_zero()) zero_vars.push_back(v);
    }

    RatMatrix sys(face.lp.constraints.rows() + zero_vars.size(), 2 * t);
    for (std::size_t i = 0; i < face.lp.constraints.rows(); ++i)
        for (std::size_t j = 0; j < 2 * t; ++j) sys.at(i, j) = face.lp.constraints.at(i, j);
    for (std::size_t k = 0; k < zero_vars.size(); ++k)
        sys.at(face.lp.constraints.rows() + k, zero_vars[k]) = Rational(1);
    return null_space_basis(sys).dim();
}

std::optional<RatVec> L1Face::point_with_support(const std::vector<std::size_t>& support) const {
    SplitLp restricted(a, b, &value, &support);
    LpOutcome out = lp_solve_exact(restricted.lp);
    const auto* opt = std::get_if<LpOptimal>(&out);
    if (!opt) return std::nullopt;
    return restricted.extract_point(opt->point, a.cols());
}

std::pair<Rational, Rational> L1Face::coordinate_range_on_support(
    std::size_t i, const std::vector<std::size_t>& support) const {
    SplitLp restricted(a, b, &value, &support);
    std::size_t local = support.size();
    for (std::size_t j = 0; j < support.size(); ++j)
        if (support[j] == i) local = j;
    if (local == support.size())
        throw PreconditionError("coordinate_range_on_support: coordinate not in support");
    Rational lohi[2];
    for (int dir = 0; dir < 2; ++dir) {
        restricted.set_objective_coordinate(local, dir == 0 ? -1 : 1);
        LpOutcome out = lp_solve_exact(restricted.lp);
        const auto* opt = std::get_if<LpOptimal>(&out);
        if (!opt) throw InternalError("support range probe must be bounded and feasible");
        lohi[dir] = dir == 0 ? -opt->value : opt->value;
    }
    return {lohi[0], lohi[1]};
}

} // namespace prlab
