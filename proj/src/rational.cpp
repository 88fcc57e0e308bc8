#include "prlab/rational.hpp"

#include <cctype>

namespace prlab {

std::string to_string(const Rational& r) {
    std::string s = r.numerator().get_str();
    if (r.denominator() != 1) {
        s += "/";
        s += r.denominator().get_str();
    }
    return s;
}

Rational rational_from_string(std::string_view s) {
    if (s.empty()) throw IoError("empty rational literal");
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') ++i;
    std::size_t num_begin = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == num_begin) throw IoError("malformed rational literal: " + std::string(s));
    std::string num(s.substr(0, i));
    std::string den = "1";
    if (i < s.size()) {
        if (s[i] != '/') throw IoError("malformed rational literal: " + std::string(s));
        ++i;
        std::size_t den_begin = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == den_begin || i != s.size())
            throw IoError("malformed rational literal: " + std::string(s));
        den = std::string(s.substr(den_begin));
    }
    mpz_class n(num), d(den);
    if (d == 0) throw IoError("rational literal with zero denominator: " + std::string(s));
    mpq_class q(n, d);
    q.canonicalize();
    return Rational(q);
}

Rational l1_norm(const RatVec& x) {
    Rational s;
    for (const auto& e : x) s += e.abs();
    return s;
}

std::size_t l0_count(const RatVec& x) {
    std::size_t n = 0;
    for (const auto& e : x)
        if (!e.is_zero()) ++n;
    return n;
}

Rational dot(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

RatVec negated(const RatVec& x) {
    RatVec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = -x[i];
    return r;
}

RatVec vec_add(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw DimensionError("vec_add: length mismatch");
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

RatVec vec_sub(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw DimensionError("vec_sub: length mismatch");
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

RatVec vec_scale(const Rational& c, const RatVec& x) {
    RatVec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = c * x[i];
    return r;
}

bool is_zero_vec(const RatVec& x) {
    for (const auto& e : x)
        if (!e.is_zero()) return false;
    return true;
}

bool lex_less(const RatVec& a, const RatVec& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return a.size() < b.size();
}

} // namespace prlab
