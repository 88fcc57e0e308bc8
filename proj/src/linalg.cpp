#include "prlab/linalg.hpp"

#include <gmpxx.h>

namespace prlab {

std::size_t rank_exact(const RatMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows == 0 || cols == 0) return 0;

    // Clear denominators row by row; scaling a row by a positive integer
    // does not change the row space.
    std::vector<std::vector<mpz_class>> z(rows, std::vector<mpz_class>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < cols; ++j) {
            mpz_class den = m.at(i, j).denominator();
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
        }
        for (std::size_t j = 0; j < cols; ++j) {
            const Rational& e = m.at(i, j);
            z[i][j] = e.numerator() * (l / e.denominator());
        }
    }

    // Bareiss elimination with column skipping. After the k-th step every
    // entry is a (k+1)-order minor of the integer matrix, so the division
    // by the previous pivot is exact.
    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && z[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(z[r], z[p]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                mpz_class t = z[r][c] * z[i][j] - z[i][c] * z[r][j];
                mpz_divexact(z[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            z[i][c] = 0;
        }
        prev = z[r][c];
        ++r;
    }
    return r;
}

std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m.at(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(r, j), m.at(p, j));
        const Rational inv = Rational(1) / m.at(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m.at(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            const Rational f = m.at(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

Subspace null_space_basis(const RatMatrix& m) {
    Subspace s;
    s.ambient_dim = m.cols();
    RatMatrix r = m;
    const std::vector<std::size_t> pivots = rref(r);

    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : pivots) is_pivot[c] = true;

    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        RatVec v(m.cols());
        v[f] = Rational(1);
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r.at(i, f);
        s.basis.push_back(std::move(v));
    }
    return s;
}

LinearSolve solve_linear(const RatMatrix& a, const RatVec& b) {
    if (b.size() != a.rows()) throw DimensionError("solve_linear: rhs length mismatch");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    const std::vector<std::size_t> pivots = rref(aug);

    LinearSolve out;
    for (std::size_t c : pivots) {
        if (c == a.cols()) return out; // row [0 ... 0 | 1]: inconsistent
    }
    out.consistent = true;
    out.particular.assign(a.cols(), Rational(0));
    for (std::size_t i = 0; i < pivots.size(); ++i)
        out.particular[pivots[i]] = aug.at(i, a.cols());

    std::vector<bool> is_pivot(a.cols(), false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        RatVec v(a.cols());
        v[f] = Rational(1);
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -aug.at(i, f);
        out.homogeneous.push_back(std::move(v));
    }
    return out;
}

std::vector<std::size_t> independent_rows(const RatMatrix& m) {
    std::vector<std::size_t> chosen;
    std::vector<RatVec> reduced;           // running RREF of the chosen rows
    std::vector<std::size_t> lead;         // leading column per reduced row
    for (std::size_t i = 0; i < m.rows(); ++i) {
        RatVec r = m.row(i);
        for (std::size_t t = 0; t < reduced.size(); ++t) {
            if (!r[lead[t]].is_zero()) {
                const Rational f = r[lead[t]];
                for (std::size_t j = 0; j < r.size(); ++j) r[j] -= f * reduced[t][j];
            }
        }
        std::size_t lc = 0;
        while (lc < r.size() && r[lc].is_zero()) ++lc;
        if (lc == r.size()) continue;
        const Rational inv = Rational(1) / r[lc];
        for (std::size_t j = 0; j < r.size(); ++j) r[j] *= inv;
        for (std::size_t t = 0; t < reduced.size(); ++t) {
            if (!reduced[t][lc].is_zero()) {
                const Rational f = reduced[t][lc];
                for (std::size_t j = 0; j < r.size(); ++j) reduced[t][j] -= f * r[j];
            }
        }
        reduced.push_back(std::move(r));
        lead.push_back(lc);
        chosen.push_back(i);
    }
    return chosen;
}

} // namespace prlab
