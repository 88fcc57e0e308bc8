#pragma once

#include <cstddef>
#include <vector>

#include "prlab/rational.hpp"

namespace prlab {

/// Dense rational matrix, row-major. Submatrix extraction copies entries
/// exactly; there is no floating-point path anywhere in this type.
class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
        return m;
    }

    static RatMatrix from_rows(const std::vector<RatVec>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RatVec row(std::size_t i) const;
    RatVec col(std::size_t j) const;

    RatMatrix transposed() const;
    RatMatrix submatrix(const std::vector<std::size_t>& row_idx,
                        const std::vector<std::size_t>& col_idx) const;

    /// Horizontal concatenation; both operands must have equal row counts.
    static RatMatrix hcat(const RatMatrix& a, const RatMatrix& b);
    /// Vertical concatenation; both operands must have equal column counts.
    static RatMatrix vcat(const RatMatrix& a, const RatMatrix& b);

    RatVec mul(const RatVec& x) const;

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Rational> data_;
};

} // namespace prlab
