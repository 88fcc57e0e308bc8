#include "prlab/l1_phaseless.hpp"

#include <algorithm>

#include "prlab/parallel.hpp"

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

void insert_class(std::vector<RatVec>& classes, RatVec cls) {
    auto it = std::lower_bound(classes.begin(), classes.end(), cls, lex_less);
    if (it == classes.end() || *it != cls) classes.insert(it, std::move(cls));
}

} // namespace

ArgminReport solve_l1_phaseless_real(const PhaselessProblem& p, const SolveOptions& opt) {
    const Frame& f = p.frame;
    if (p.b.size() != f.m) throw DimensionError("solve_l1_phaseless_real: |b| != m");
    for (const auto& e : p.b)
        if (e.sign() < 0) throw PreconditionError("solve_l1_phaseless_real: negative magnitude");
    if (f.m > opt.m_cap)
        throw BudgetError("solve_l1_phaseless_real: m = " + std::to_string(f.m) +
                          " exceeds the enumeration cap " + std::to_string(opt.m_cap));

    const RatMatrix a = f.analysis();

    // Coordinates with b_j = 0 carry no sign; the first nonzero-magnitude
    // coordinate is pinned to '+' (global sign symmetry).
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < f.m; ++j)
        if (!p.b[j].is_zero()) nz.push_back(j);
    const std::size_t free_bits = nz.empty() ? 0 : nz.size() - 1;
    const std::size_t npat = std::size_t(1) << free_bits;

    auto pattern_for = [&](std::size_t t) {
        SignPattern eps;
        eps.signs.assign(f.m, +1);
        for (std::size_t i = 0; i + 1 < nz.size(); ++i)
            if (t & (std::size_t(1) << i)) eps.signs[nz[i + 1]] = -1;
        return eps;
    };

    auto solve_one = [&](std::size_t t) {
        const SignPattern eps = pattern_for(t);
        RatVec beps(f.m);
        for (std::size_t j = 0; j < f.m; ++j)
            beps[j] = eps.signs[j] > 0 ? p.b[j] : -p.b[j];
        L1PointResult r = l1_min_point(a, beps);
        return std::make_pair(eps, std::move(r));
    };

    const auto solved =
        parallel_map<std::pair<SignPattern, L1PointResult>>(npat, opt.jobs, solve_one);

    ArgminReport rep;
    for (const auto& [eps, r] : solved) {
        EpsilonEntry e;
        e.eps = eps;
        e.feasible = r.feasible;
        if (r.feasible) {
            e.value = r.value;
            if (!rep.feasible || r.value < rep.optimal_value) {
                rep.feasible = true;
                rep.optimal_value = r.value;
            }
        }
        rep.per_epsilon.push_back(std::move(e));
    }
    if (!rep.feasible) return rep;

    // Uniqueness probing only matters for optimum-achieving patterns.
    for (const auto& [eps, r] : solved) {
        if (!r.feasible || r.value != rep.optimal_value) continue;
        RatVec beps(f.m);
        for (std::size_t j = 0; j < f.m; ++j)
            beps[j] = eps.signs[j] > 0 ? p.b[j] : -p.b[j];
        if (probe_l1_uniqueness(a, beps, rep.optimal_value).is_unique) {
            insert_class(rep.minimizer_classes, canonicalize_sign(r.point));
        } else {
            L1Face face{a, beps, rep.optimal_value};
            rep.nonpoint_faces.push_back({eps, face.dimension(), r.point});
        }
    }
    rep.unique = rep.nonpoint_faces.empty() && rep.minimizer_classes.size() == 1;
    return rep;
}

OracleResult l0_oracle_solutions(const PhaselessProblem& p, std::size_t k,
                                 std::uint64_t budget_cap) {
    const Frame& f = p.frame;
    if (p.b.size() != f.m) throw DimensionError("l0_oracle_solutions: |b| != m");
    if (k > f.d) throw PreconditionError("l0_oracle_solutions: k > d");

    // C(d, k) * 2^k sign-resolved linear solves.
    double work = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        work *= static_cast<double>(f.d - i) / static_cast<double>(i + 1);
    work *= static_cast<double>(std::uint64_t(1) << std::min<std::size_t>(k, 63));
    if (work > static_cast<double>(budget_cap))
        throw BudgetError("l0_oracle_solutions: C(d,k)*2^k exceeds the budget");

    const RatMatrix a = f.analysis();
    std::vector<std::size_t> all_rows(f.m);
    for (std::size_t i = 0; i < f.m; ++i) all_rows[i] = i;

    OracleResult out;
    std::vector<std::vector<std::size_t>> family_supports;

    for (const auto& t_set : subsets_of_size(f.d, k)) {
        const RatMatrix at = a.submatrix(all_rows, t_set);
        const std::vector<std::size_t> rset = independent_rows(at);
        const std::size_t r = rset.size();

        // Zero-magnitude rows carry no sign choice.
        std::vector<std::size_t> signed_rows;
        for (std::size_t row : rset)
            if (!p.b[row].is_zero()) signed_rows.push_back(row);

        const RatMatrix art = at.submatrix(rset, [&] {
            std::vector<std::size_t> cols(t_set.size());
            for (std::size_t i = 0; i < t_set.size(); ++i) cols[i] = i;
            return cols;
        }());

        for (std::size_t sig = 0; sig < (std::size_t(1) << signed_rows.size()); ++sig) {
            RatVec rhs(r);
            for (std::size_t i = 0; i < r; ++i) rhs[i] = p.b[rset[i]];
            for (std::size_t i = 0; i < signed_rows.size(); ++i) {
                if (!(sig & (std::size_t(1) << i))) continue;
                for (std::size_t q = 0; q < r; ++q)
                    if (rset[q] == signed_rows[i]) rhs[q] = -rhs[q];
            }
            const LinearSolve sol = solve_linear(art, rhs);
            if (!sol.consistent) continue;

            RatVec x(f.d);
            for (std::size_t i = 0; i < t_set.size(); ++i) x[t_set[i]] = sol.particular[i];
            if (measure_abs(f, x) != p.b) continue;

            if (sol.homogeneous.empty()) {
                insert_class(out.classes, canonicalize_sign(x));
            } else {
                // Every remaining row is a combination of the pinned rows, so
                // the whole affine family solves the magnitude system.
                if (std::find(family_supports.begin(), family_supports.end(), t_set) ==
                    family_supports.end()) {
                    family_supports.push_back(t_set);
                    OracleFamily fam;
                    fam.support = t_set;
                    fam.dim = sol.homogeneous.size();
                    fam.particular = x;
                    for (const auto& h : sol.homogeneous) {
                        RatVec hd(f.d);
                        for (std::size_t i = 0; i < t_set.size(); ++i) hd[t_set[i]] = h[i];
                        fam.homogeneous.push_back(std::move(hd));
                    }
                    out.families.push_back(std::move(fam));
                }
            }
        }
    }
    return out;
}

RecoverySummary recovery_experiment(const Frame& f, std::size_t k, std::size_t trials,
                                    std::uint64_t seed, long entry_bound,
                                    const SolveOptions& opt) {
    SplitMix64 rng(seed);
    RecoverySummary sum;
    sum.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const RatVec x0 = random_k_sparse(rng, f.d, k, entry_bound);
        const ArgminReport rep = solve_l1_phaseless_real({f, measure_abs(f, x0)}, opt);
        const bool ok = rep.feasible && rep.nonpoint_faces.empty() &&
                        rep.minimizer_classes.size() == 1 &&
                        rep.minimizer_classes[0] == canonicalize_sign(x0);
        if (ok) {
            ++sum.successes;
        } else if (sum.failure_exemplars.size() < 5) {
            sum.failure_exemplars.push_back(x0);
        }
    }
    return sum;
}

KSparseArgmin argmin_k_sparse_members(const Frame& f, const RatVec& b, std::size_t k,
                                      const ArgminReport& rep) {
    KSparseArgmin out;
    if (!rep.feasible) return out;
    for (const auto& cls : rep.minimizer_classes)
        if (l0_count(cls) <= k) insert_class(out.classes, cls);

    const RatMatrix a = f.analysis();
    std::vector<std::size_t> all_rows(f.m);
    for (std::size_t i = 0; i < f.m; ++i) all_rows[i] = i;

    for (const auto& face : rep.nonpoint_faces) {
        RatVec beps(f.m);
        for (std::size_t j = 0; j < f.m; ++j)
            beps[j] = face.eps.signs[j] > 0 ? b[j] : -b[j];
        for (const auto& t_set : subsets_of_size(f.d, k)) {
            const L1Face sub{a.submatrix(all_rows, t_set), beps, rep.optimal_value};
            std::vector<std::size_t> local(t_set.size());
            for (std::size_t i = 0; i < t_set.size(); ++i) local[i] = i;
            const auto pt = sub.point_with_support(local);
            if (!pt) continue;
            if (const std::size_t dim = sub.dimension(); dim > 0) {
                bool seen = false;
                for (const auto& fam : out.families) seen = seen || fam.support == t_set;
                if (!seen) {
                    OracleFamily fam;
                    fam.support = t_set;
                    fam.dim = dim;
                    out.families.push_back(std::move(fam));
                }
            } else {
                RatVec x(f.d);
                for (std::size_t i = 0; i < t_set.size(); ++i) x[t_set[i]] = (*pt)[i];
                insert_class(out.classes, canonicalize_sign(x));
            }
        }
    }
    return out;
}

} // namespace prlab
