#include "doctest.h"

#include <random>

#include "detwalk/linalg.hpp"

using namespace detwalk;

namespace {

RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    RationalMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

// Plain Gauss-Jordan over Q, kept separate from the Bareiss code.
std::size_t naive_rank(RationalMatrix a) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && a(p, c).is_zero()) ++p;
        if (p == a.rows()) continue;
        for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a(p, k), a(r, k));
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || a(i, c).is_zero()) continue;
            const Rational f = a(i, c) / a(r, c);
            for (std::size_t k = 0; k < a.cols(); ++k) a(i, k) = a(i, k) - f * a(r, k);
        }
        ++r;
    }
    return r;
}

Rational small_rational(std::mt19937_64& g) {
    std::uniform_int_distribution<long> num(-6, 6), den(1, 5);
    return Rational(num(g), den(g));
}

RationalMatrix random_matrix(std::mt19937_64& g, std::size_t rows, std::size_t cols, double zero_bias) {
    RationalMatrix m(rows, cols);
    std::bernoulli_distribution zero(zero_bias);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = zero(g) ? Rational(0) : small_rational(g);
    return m;
}

}  // namespace

TEST_CASE("rank of small matrices") {
    CHECK(rank(RationalMatrix(3, 3)) == 0);
    CHECK(rank(from_rows({{1, 2}, {2, 4}})) == 1);
    CHECK(rank(from_rows({{Rational(1, 2), Rational(1, 3)}, {Rational(3), Rational(2)}})) == 1);
    CHECK(rank(from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == 3);
    CHECK(rank(from_rows({{0, 1, 2}, {0, 2, 4}, {1, 0, 0}})) == 2);
    CHECK(rank(from_rows({{1, 2, 3, 4}})) == 1);
    CHECK(rank(RationalMatrix()) == 0);
}

TEST_CASE("unique solutions") {
    const auto a = from_rows({{2, 1}, {1, 3}});
    const auto x = solve_unique(a, {Rational(3), Rational(5)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Rational(4, 5));
    CHECK((*x)[1] == Rational(7, 5));

    // Overdetermined but consistent.
    const auto over = from_rows({{1, 1}, {1, -1}, {2, 0}});
    const auto y = solve_unique(over, {Rational(1, 2), Rational(1, 6), Rational(2, 3)});
    REQUIRE(y.has_value());
    CHECK((*y)[0] == Rational(1, 3));
    CHECK((*y)[1] == Rational(1, 6));
}

TEST_CASE("singular and inconsistent systems") {
    CHECK_FALSE(solve_unique(from_rows({{1, 2}, {2, 4}}), {Rational(1), Rational(2)}).has_value());
    CHECK_FALSE(solve_unique(from_rows({{1, 1}, {1, -1}, {2, 0}}), {Rational(1), Rational(0), Rational(5)}).has_value());
    CHECK_FALSE(solve_unique(from_rows({{1, 2, 3}}), {Rational(1)}).has_value());
    CHECK_THROWS(solve_unique(from_rows({{1, 0}, {0, 1}}), {Rational(1)}));
}

TEST_CASE("rank agrees with Gauss-Jordan on random matrices") {
    std::mt19937_64 g(3);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 7);
        const auto a = random_matrix(g, dim(g), dim(g), 0.4);
        CHECK(rank(a) == naive_rank(a));
    }
    // Row 3 is a combination of rows 0 and 1.
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_matrix(g, 4, 5, 0.0);
        for (std::size_t c = 0; c < 5; ++c) a(3, c) = a(1, c) * Rational(2) - a(0, c);
        CHECK(rank(a) == naive_rank(a));
        CHECK(rank(a) <= 3);
    }
}

TEST_CASE("solutions satisfy the system exactly") {
    std::mt19937_64 g(11);
    int solved = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 8), extra(0, 3);
        const std::size_t n = dim(g);
        const std::size_t m = n + extra(g);
        const auto a = random_matrix(g, m, n, 0.3);
        std::vector<Rational> truth(n);
        for (auto& v : truth) v = small_rational(g);
        const auto b = a.multiply(truth);
        const auto x = solve_unique(a, b);
        CHECK(x.has_value() == (naive_rank(a) == n));
        if (!x) continue;
        ++solved;
        CHECK(*x == truth);
        CHECK(a.multiply(*x) == b);
    }
    CHECK(solved > 100);
}
