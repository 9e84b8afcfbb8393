#include "detwalk/linalg.hpp"

#include <stdexcept>

namespace detwalk {

std::vector<Rational> RationalMatrix::multiply(const std::vector<Rational>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("dimension mismatch in multiply");
    std::vector<Rational> y(rows_, Rational(0));
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (!(*this)(r, c).is_zero()) y[r] += (*this)(r, c) * x[c];
    return y;
}

namespace {

using IntegerRows = std::vector<std::vector<mpz_class>>;

// Clears denominators row by row; the augmented column (if any) is last.
IntegerRows to_integer_rows(const RationalMatrix& a, const std::vector<Rational>* b) {
    IntegerRows rows(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        mpz_class scale = 1;
        for (std::size_t c = 0; c < a.cols(); ++c) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), a(r, c).raw().get_den_mpz_t());
        if (b) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), (*b)[r].raw().get_den_mpz_t());
        auto& row = rows[r];
        row.reserve(a.cols() + (b ? 1 : 0));
        for (std::size_t c = 0; c < a.cols(); ++c) row.push_back(a(r, c).numerator() * (scale / a(r, c).denominator()));
        if (b) row.push_back((*b)[r].numerator() * (scale / (*b)[r].denominator()));
    }
    return rows;
}

struct Echelon {
    std::vector<std::size_t> pivot_columns;
};

// In-place fraction-free row echelon form over the first `pivot_cols`
// columns. Every division is exact: entries after step k are minors of the
// input.
Echelon bareiss(IntegerRows& m, std::size_t pivot_cols) {
    Echelon e;
    const std::size_t rows = m.size();
    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < pivot_cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        const mpz_class pivot = m[r][c];
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < m[i].size(); ++j) {
                mpz_class v = pivot * m[i][j] - m[i][c] * m[r][j];
                if (!mpz_divisible_p(v.get_mpz_t(), prev.get_mpz_t()))
                    throw std::logic_error("fraction-free elimination lost exact divisibility");
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m[i][j] = std::move(v);
            }
            m[i][c] = 0;
        }
        prev = pivot;
        e.pivot_columns.push_back(c);
        ++r;
    }
    return e;
}

}  // namespace

std::size_t rank(const RationalMatrix& a) {
    auto rows = to_integer_rows(a, nullptr);
    return bareiss(rows, a.cols()).pivot_columns.size();
}

std::optional<std::vector<Rational>> solve_unique(const RationalMatrix& a, const std::vector<Rational>& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("dimension mismatch in solve");
    const std::size_t n = a.cols();
    auto rows = to_integer_rows(a, &b);
    const Echelon e = bareiss(rows, n);
    const std::size_t r = e.pivot_columns.size();
    for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][n] != 0) return std::nullopt;
    if (r != n) return std::nullopt;
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t i = n; i-- > 0;) {
        mpq_class sum(rows[i][n]);
        for (std::size_t j = i + 1; j < n; ++j) sum -= mpq_class(rows[i][j]) * x[j].raw();
        x[i] = Rational(mpq_class(sum / mpq_class(rows[i][i])));
    }
    return x;
}

}  // namespace detwalk
