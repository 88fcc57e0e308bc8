#include "prlab/retrievability.hpp"

#include "prlab/parallel.hpp"

namespace prlab {

void validate_collision(const Frame& f, const CollisionWitness& w) {
    if (w.x.size() != f.d || w.y.size() != f.d)
        throw InternalError("collision witness: vector length != d");
    if (measure_abs(f, w.x) != measure_abs(f, w.y))
        throw InternalError("collision witness: magnitudes differ");
    if (same_sign_class(w.x, w.y))
        throw InternalError("collision witness: x and y are in the same sign class");
    if (l0_count(w.x) > w.sparsity_bound || l0_count(w.y) > w.sparsity_bound)
        throw InternalError("collision witness: sparsity bound violated");
}

MeasurementBound minimal_measurement_bound(std::size_t k, std::size_t d, Field field) {
    if (k < 1 || k > d) throw PreconditionError("minimal_measurement_bound: need 1 <= k <= d");
    if (field == Field::Real) return {std::min(2 * k, 2 * d - 1), false};
    return {4 * k - 2, true};
}

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

// Unordered measurement splits {S, S^c}: every class has exactly one side
// containing measurement 0, so enumerating masks with bit 0 set covers each
// class once. An empty frame has the single split {(), ()}.
std::vector<std::uint64_t> split_masks(std::size_t m) {
    if (m == 0) return {0};
    std::vector<std::uint64_t> masks;
    const std::uint64_t count = 1ULL << (m - 1);
    masks.reserve(count);
    for (std::uint64_t t = 0; t < count; ++t) masks.push_back((t << 1) | 1ULL);
    return masks;
}

std::vector<std::size_t> mask_to_set(std::uint64_t mask, std::size_t m) {
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < m; ++j)
        if (mask & (1ULL << j)) s.push_back(j);
    return s;
}

std::vector<std::size_t> set_difference(const std::vector<std::size_t>& a,
                                        const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    std::size_t i = 0;
    for (std::size_t x : a) {
        while (i < b.size() && b[i] < x) ++i;
        if (i == b.size() || b[i] != x) out.push_back(x);
    }
    return out;
}

std::vector<std::size_t> set_intersection(const std::vector<std::size_t>& a,
                                          const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    std::size_t i = 0;
    for (std::size_t x : a) {
        while (i < b.size() && b[i] < x) ++i;
        if (i < b.size() && b[i] == x) out.push_back(x);
    }
    return out;
}

} // namespace

BlockSystem build_block_system(const Frame& f, const std::vector<std::size_t>& s,
                               const std::vector<std::size_t>& i_set,
                               const std::vector<std::size_t>& j_set) {
    BlockSystem bs;
    bs.s = s;
    bs.i_set = i_set;
    bs.j_set = j_set;
    bs.l_set = set_intersection(i_set, j_set);
    bs.i_only = set_difference(i_set, bs.l_set);
    bs.j_only = set_difference(j_set, bs.l_set);

    const std::size_t kv = bs.i_only.size();
    const std::size_t l = bs.l_set.size();
    const std::vector<std::size_t> sc = complement(f.m, s);

    bs.b = RatMatrix(f.m, 2 * kv + 2 * l);
    std::size_t row = 0;
    for (std::size_t j : s) {
        for (std::size_t t = 0; t < kv; ++t) {
            bs.b.at(row, t) = f.columns[j][bs.i_only[t]];
            bs.b.at(row, kv + t) = -f.columns[j][bs.j_only[t]];
        }
        for (std::size_t t = 0; t < l; ++t)
            bs.b.at(row, 2 * kv + t) = f.columns[j][bs.l_set[t]];
        ++row;
    }
    for (std::size_t j : sc) {
        for (std::size_t t = 0; t < kv; ++t) {
            bs.b.at(row, t) = f.columns[j][bs.i_only[t]];
            bs.b.at(row, kv + t) = f.columns[j][bs.j_only[t]];
        }
        for (std::size_t t = 0; t < l; ++t)
            bs.b.at(row, 2 * kv + l + t) = f.columns[j][bs.l_set[t]];
        ++row;
    }
    return bs;
}

std::pair<RatVec, RatVec> BlockSystem::reconstruct(const RatVec& z, std::size_t d) const {
    const std::size_t kv = width_v();
    const std::size_t l = width_w();
    RatVec x(d), y(d);
    const Rational half(1, 2);
    for (std::size_t t = 0; t < kv; ++t) {
        x[i_only[t]] = z[t];
        y[j_only[t]] = z[kv + t];
    }
    for (std::size_t t = 0; t < l; ++t) {
        const Rational& wm = z[2 * kv + t];
        const Rational& wp = z[2 * kv + l + t];
        x[l_set[t]] = half * (wm + wp); // u_x
        y[l_set[t]] = half * (wp - wm); // u_y
    }
    return {x, y};
}

namespace {

// W1 = {v_x = 0, v_y = 0, w_minus = 0}; W2 swaps w_minus for w_plus. The
// split triple is safe exactly when the null space lies inside one of them
// (a subspace inside a union of two subspaces lies inside one of them).
bool in_w1(const RatVec& z, std::size_t kv, std::size_t l) {
    for (std::size_t t = 0; t < 2 * kv + l; ++t)
        if (!z[t].is_zero()) return false;
    return true;
}

bool in_w2(const RatVec& z, std::size_t kv, std::size_t l) {
    for (std::size_t t = 0; t < 2 * kv; ++t)
        if (!z[t].is_zero()) return false;
    for (std::size_t t = 2 * kv + l; t < 2 * kv + 2 * l; ++t)
        if (!z[t].is_zero()) return false;
    return true;
}

// nullopt when the triple is safe, else a null vector outside W1 and W2.
std::optional<RatVec> unsafe_null_vector(const BlockSystem& bs) {
    const Subspace n = null_space_basis(bs.b);
    const std::size_t kv = bs.width_v(), l = bs.width_w();

    bool all_w1 = true, all_w2 = true;
    const RatVec* out1 = nullptr; // first basis vector outside W1
    const RatVec* out2 = nullptr;
    for (const auto& v : n.basis) {
        const bool w1 = in_w1(v, kv, l), w2 = in_w2(v, kv, l);
        all_w1 = all_w1 && w1;
        all_w2 = all_w2 && w2;
        if (!w1 && !w2) return v;
        if (!w1 && !out1) out1 = &v;
        if (!w2 && !out2) out2 = &v;
    }
    if (all_w1 || all_w2) return std::nullopt;
    // Every basis vector sits in W1 or W2 but the space is in neither:
    // a vector outside W1 plus one outside W2 escapes both.
    if (!out1 || !out2) throw InternalError("containment bookkeeping is inconsistent");
    return vec_add(*out1, *out2);
}

} // namespace

RetrievabilityReport is_k_sparse_pr_real(const Frame& f, std::size_t k, unsigned jobs) {
    if (k < 1 || k > f.d) throw PreconditionError("is_k_sparse_pr_real: need 1 <= k <= d");
    if (f.m > 30)
        throw BudgetError("is_k_sparse_pr_real: 2^(m-1) split enumeration is infeasible for m = " +
                          std::to_string(f.m));

    const std::vector<std::uint64_t> masks = split_masks(f.m);
    const std::vector<std::vector<std::size_t>> supports = subsets_of_size(f.d, k);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < supports.size(); ++a)
        for (std::size_t b = a; b < supports.size(); ++b) pairs.emplace_back(a, b);

    const std::size_t total = masks.size() * pairs.size();

    auto probe = [&](std::size_t idx) -> std::optional<CollisionWitness> {
        const auto& [ia, ib] = pairs[idx % pairs.size()];
        const std::vector<std::size_t> s = mask_to_set(masks[idx / pairs.size()], f.m);
        const BlockSystem bs = build_block_system(f, s, supports[ia], supports[ib]);
        std::optional<RatVec> z = unsafe_null_vector(bs);
        if (!z) return std::nullopt;
        auto [x, y] = bs.reconstruct(*z, f.d);
        CollisionWitness w{std::move(x), std::move(y), k};
        validate_collision(f, w);
        return w;
    };

    auto found = indexed_min_search<CollisionWitness>(total, jobs, probe);

    RetrievabilityReport rep;
    rep.trace.splits = masks.size();
    rep.trace.triples_total = total;
    if (found) {
        rep.retrievable = false;
        rep.witness = std::move(found->second);
        rep.trace.triples_examined = found->first + 1;
    } else {
        rep.retrievable = true;
        rep.trace.triples_examined = total;
    }
    return rep;
}

RetrievabilityReport is_full_pr_real(const Frame& f, unsigned jobs) {
    if (f.m > 30)
        throw BudgetError("is_full_pr_real: 2^(m-1) subset enumeration is infeasible for m = " +
                          std::to_string(f.m));
    const std::vector<std::uint64_t> masks = split_masks(f.m);

    auto probe = [&](std::size_t idx) -> std::optional<CollisionWitness> {
        const std::vector<std::size_t> s = mask_to_set(masks[idx], f.m);
        const std::vector<std::size_t> sc = complement(f.m, s);
        if (rank_exact(sub_frame(f, s).analysis()) == f.d) return std::nullopt;
        if (rank_exact(sub_frame(f, sc).analysis()) == f.d) return std::nullopt;
        // Neither side spans: u kills the S measurements, v the rest, and
        // x = u + v, y = u - v collide.
        const Subspace nu = null_space_basis(sub_frame(f, s).analysis());
        const Subspace nv = null_space_basis(sub_frame(f, sc).analysis());
        if (nu.dim() == 0 || nv.dim() == 0)
            throw InternalError("rank deficit without a null vector");
        CollisionWitness w{vec_add(nu.basis[0], nv.basis[0]),
                           vec_sub(nu.basis[0], nv.basis[0]), f.d};
        validate_collision(f, w);
        return w;
    };

    auto found = indexed_min_search<CollisionWitness>(masks.size(), jobs, probe);

    RetrievabilityReport rep;
    rep.trace.splits = masks.size();
    rep.trace.triples_total = masks.size();
    if (found) {
        rep.retrievable = false;
        rep.witness = std::move(found->second);
        rep.trace.triples_examined = found->first + 1;
    } else {
        rep.retrievable = true;
        rep.trace.triples_examined = masks.size();
    }
    return rep;
}

CollisionWitness collide_below_2k(const Frame& f, std::size_t k) {
    if (k < 1 || k > f.d) throw PreconditionError("collide_below_2k: need 1 <= k <= d");
    if (f.m >= 2 * k)
        throw PreconditionError("collide_below_2k: requires m < 2k (got m = " +
                                std::to_string(f.m) + ", k = " + std::to_string(k) + ")");
    if (k + 1 > f.d)
        throw PreconditionError(
            "collide_below_2k: construction inapplicable for k = d (needs a (k+1)-dimensional "
            "coordinate slice)");

    const std::size_t w_dim = k + 1;
    const std::size_t split = std::min(k, f.m);

    // System for u: the first min(k, m) measurements, restricted to the
    // first k+1 coordinates.
    RatMatrix sys_u(split, w_dim);
    for (std::size_t j = 0; j < split; ++j)
        for (std::size_t i = 0; i < w_dim; ++i) sys_u.at(j, i) = f.columns[j][i];
    const Subspace nu = null_space_basis(sys_u);
    if (nu.dim() == 0)
        throw PreconditionError("collide_below_2k: construction inapplicable: degenerate frame");
    const RatVec& u = nu.basis[0];

    // System for the vbar slice: the remaining measurements, same coordinates.
    RatMatrix sys_v(f.m - split, w_dim);
    for (std::size_t j = split; j < f.m; ++j)
        for (std::size_t i = 0; i < w_dim; ++i) sys_v.at(j - split, i) = f.columns[j][i];
    const Subspace nv = null_space_basis(sys_v);
    if (nv.dim() < 2)
        throw InternalError("collide_below_2k: expected a >= 2-dimensional slice");
    const RatVec& alpha = nv.basis[0];
    const RatVec& beta = nv.basis[1];

    // A coordinate pair where (alpha, beta) has an invertible 2x2 minor
    // exists because they are independent.
    std::size_t i1 = w_dim, i2 = w_dim;
    for (std::size_t a = 0; a < w_dim && i1 == w_dim; ++a)
        for (std::size_t b = a + 1; b < w_dim; ++b) {
            if (!(alpha[a] * beta[b] - alpha[b] * beta[a]).is_zero()) {
                i1 = a;
                i2 = b;
                break;
            }
        }
    if (i1 == w_dim) throw InternalError("collide_below_2k: no invertible coordinate pair");

    RatVec rhs(2);
    if (!u[i1].is_zero() || !u[i2].is_zero()) {
        rhs[0] = u[i1];
        rhs[1] = -u[i2];
    } else {
        rhs[0] = Rational(0);
        rhs[1] = Rational(1);
    }
    RatMatrix two(2, 2);
    two.at(0, 0) = alpha[i1];
    two.at(0, 1) = beta[i1];
    two.at(1, 0) = alpha[i2];
    two.at(1, 1) = beta[i2];
    const LinearSolve ts = solve_linear(two, rhs);
    if (!ts.consistent) throw InternalError("collide_below_2k: 2x2 solve failed");
    const Rational t0 = ts.particular[0], s0 = ts.particular[1];

    RatVec x(f.d), y(f.d);
    for (std::size_t i = 0; i < w_dim; ++i) {
        const Rational vbar = t0 * alpha[i] + s0 * beta[i];
        x[i] = u[i] + vbar;
        y[i] = u[i] - vbar;
    }
    CollisionWitness w{std::move(x), std::move(y), k};
    validate_collision(f, w);
    return w;
}

} // namespace prlab
