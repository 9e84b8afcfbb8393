#pragma once

#include <optional>
#include <vector>

#include "detwalk/rational.hpp"

namespace detwalk {

// Dense row-major matrix of exact rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<Rational> multiply(const std::vector<Rational>& x) const;

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

// Rank by fraction-free (Bareiss) elimination over the integers.
std::size_t rank(const RationalMatrix& a);

// Solves A x = b for an m x n matrix with m >= n. Returns nullopt unless the
// system is consistent with a unique solution.
std::optional<std::vector<Rational>> solve_unique(const RationalMatrix& a, const std::vector<Rational>& b);

}  // namespace detwalk
