#include "prlab/frame.hpp"

namespace prlab {

RatMatrix Frame::analysis() const {
    RatMatrix a(m, d);
    for (std::size_t j = 0; j < m; ++j) {
        if (columns[j].size() != d) throw DimensionError("frame column has wrong length");
        for (std::size_t i = 0; i < d; ++i) a.at(j, i) = columns[j][i];
    }
    return a;
}

RatVec measure_signed(const Frame& f, const RatVec& x) {
    if (x.size() != f.d) throw DimensionError("measure: vector length != frame dimension");
    RatVec b(f.m);
    for (std::size_t j = 0; j < f.m; ++j) b[j] = dot(f.columns[j], x);
    return b;
}

RatVec measure_abs(const Frame& f, const RatVec& x) {
    RatVec b = measure_signed(f, x);
    for (auto& e : b) e = e.abs();
    return b;
}

Frame random_frame(std::size_t d, std::size_t m, std::uint64_t seed, long numerator_bound) {
    if (d < 1 || m < 1) throw PreconditionError("random_frame: d and m must be >= 1");
    if (numerator_bound < 1) throw PreconditionError("random_frame: bound must be >= 1");
    SplitMix64 rng(seed);
    Frame f;
    f.d = d;
    f.m = m;
    f.columns.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        RatVec col(d);
        do {
            for (std::size_t i = 0; i < d; ++i)
                col[i] = Rational(static_cast<long>(rng.int_in(-numerator_bound, numerator_bound)));
        } while (is_zero_vec(col));
        f.columns[j] = col;
    }
    return f;
}

Frame sub_frame(const Frame& f, const std::vector<std::size_t>& s) {
    Frame g;
    g.d = f.d;
    g.m = s.size();
    g.columns.reserve(s.size());
    for (std::size_t j : s) {
        if (j >= f.m) throw PreconditionError("sub_frame: index out of range");
        g.columns.push_back(f.columns[j]);
    }
    return g;
}

std::vector<std::size_t> complement(std::size_t m, const std::vector<std::size_t>& s) {
    std::vector<bool> in(m, false);
    for (std::size_t j : s) in[j] = true;
    std::vector<std::size_t> c;
    for (std::size_t j = 0; j < m; ++j)
        if (!in[j]) c.push_back(j);
    return c;
}

RatVec canonicalize_sign(RatVec x) {
    for (const auto& e : x) {
        if (e.is_zero()) continue;
        if (e.sign() < 0)
            for (auto& t : x) t = -t;
        break;
    }
    return x;
}

bool same_sign_class(const RatVec& x, const RatVec& y) {
    if (x.size() != y.size()) return false;
    return canonicalize_sign(x) == canonicalize_sign(y);
}

RatVec random_k_sparse(SplitMix64& rng, std::size_t d, std::size_t k, long entry_bound) {
    const std::vector<std::size_t> support = random_subset(rng, d, k);
    RatVec x(d);
    for (std::size_t i : support) {
        long v = 0;
        while (v == 0) v = static_cast<long>(rng.int_in(-entry_bound, entry_bound));
        x[i] = Rational(v);
    }
    return x;
}

} // namespace prlab
