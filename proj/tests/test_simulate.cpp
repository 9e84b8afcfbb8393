#include "doctest.h"

#include <cmath>
#include <map>
#include <sstream>

#include "detwalk/builtins.hpp"
#include "detwalk/simulate.hpp"
#include "detwalk/spectral.hpp"
#include "random_models.hpp"

using namespace detwalk;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

bool within_4_sigma(std::uint64_t count, std::uint64_t draws, double p) {
    const double n = static_cast<double>(draws);
    const double sigma = std::sqrt(p * (1.0 - p) * n);
    return std::abs(static_cast<double>(count) - p * n) <= 4.0 * sigma + 1e-9;
}

std::map<CellIndex, std::uint64_t> draw(const BaseMap& base, CellIndex a, std::uint64_t n, Seed seed) {
    const CellSampler sampler(base);
    Rng rng(seed, 3);
    std::map<CellIndex, std::uint64_t> counts;
    for (std::uint64_t k = 0; k < n; ++k) ++counts[sampler.next(a, rng)];
    return counts;
}

WalkModel constant_one_model() {
    RawModel raw = *builtin_raw("twostate");
    raw.environment = EnvironmentTable{{1, 1}, {1, 1}};
    return build_model(raw);
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
    Rng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
    bool differs_stream = false, differs_seed = false;
    for (int k = 0; k < 16; ++k) {
        const auto x = a();
        CHECK(x == b());
        differs_stream |= x != c();
        differs_seed |= x != d();
    }
    CHECK(differs_stream);
    CHECK(differs_seed);
}

TEST_CASE("sampler matches conditional cell probabilities") {
    const std::uint64_t n = 200000;
    {
        const WalkModel m = builtin_model("paper3");
        const auto counts = draw(m.base(), 0, n, 1);
        CHECK(counts.size() == 2);
        CHECK(within_4_sigma(counts.at(0), n, 0.5));
        CHECK(within_4_sigma(counts.at(1), n, 0.5));
        for (CellIndex a = 0; a < 4; ++a)
            for (const auto& [b, count] : draw(m.base(), a, n, 2 + a)) {
                const auto [first, last] = m.base().image_cells(a);
                CHECK(b >= first);
                CHECK(b < last);
                CHECK(within_4_sigma(count, n, 0.5));
            }
    }
    {
        const WalkModel m = builtin_model("nonfull");
        const auto counts = draw(m.base(), 1, n, 5);
        CHECK(counts.size() == 1);
        CHECK(counts.at(0) == n);
    }
    {
        // Cell 2 maps onto [0, 3/4) = cells of length 1/2 and 1/4.
        RawModel raw;
        raw.cells = {{R(0), R(1, 2)}, {R(1, 2), R(3, 4)}, {R(3, 4), R(1)}};
        raw.branches = {{R(2), R(0)}, {R(4), R(-2)}, {R(3), R(-9, 4)}};
        raw.environment = EnvironmentTable{{0, 0, 0}};
        const WalkModel m = build_model(raw);
        const auto counts = draw(m.base(), 2, n, 6);
        CHECK(counts.size() == 2);
        CHECK(within_4_sigma(counts.at(0), n, 2.0 / 3.0));
        CHECK(within_4_sigma(counts.at(1), n, 1.0 / 3.0));
    }
}

TEST_CASE("sampler frequencies on random maps") {
    testing::Gen gen(9);
    const std::uint64_t n = 100000;
    for (int trial = 0; trial < 10; ++trial) {
        const WalkModel m = build_model(testing::random_markov_model(gen, 5, 1));
        for (CellIndex a = 0; a < m.num_cells(); ++a) {
            const auto counts = draw(m.base(), a, n, 100 + trial);
            const auto [first, last] = m.base().image_cells(a);
            const Rational image = m.base().branch(a).image.measure();
            for (CellIndex b = first; b < last; ++b) {
                const double p = (m.base().partition().cell(b).measure() / image).to_double();
                const auto it = counts.find(b);
                CHECK(within_4_sigma(it == counts.end() ? 0 : it->second, n, p));
            }
            CHECK(counts.begin()->first >= first);
            CHECK(counts.rbegin()->first < last);
        }
    }
}

TEST_CASE("Lebesgue start frequencies") {
    RawModel raw;
    raw.cells = {{R(0), R(1, 2)}, {R(1, 2), R(3, 4)}, {R(3, 4), R(1)}};
    raw.branches = {{R(2), R(0)}, {R(4), R(-2)}, {R(3), R(-9, 4)}};
    raw.environment = EnvironmentTable{{0, 0, 0}};
    const WalkModel m = build_model(raw);
    const CellSampler sampler(m.base());
    Rng rng(8, 0);
    std::vector<std::uint64_t> counts(3, 0);
    const std::uint64_t n = 200000;
    for (std::uint64_t k = 0; k < n; ++k) ++counts[sampler.start(rng)];
    CHECK(within_4_sigma(counts[0], n, 0.5));
    CHECK(within_4_sigma(counts[1], n, 0.25));
    CHECK(within_4_sigma(counts[2], n, 0.25));
}

TEST_CASE("walk examples") {
    const WalkModel id = builtin_model("identity2");
    for (Seed seed : {0ULL, 1ULL, 99ULL}) {
        const auto w = run_walk(id, 1, 500, seed);
        for (State s : w.trace.states) CHECK(s == 1);
        CHECK(w.occupancy.counts == std::vector<std::uint64_t>{0, 500});
        CHECK(trace_is_valid(id, w.trace));
    }

    const WalkModel p3 = builtin_model("paper3");
    const auto w = run_walk(p3, 1, 1000, 7, CellIndex{2});
    CHECK(w.trace.cells.front() == 2);
    CHECK(w.trace.states.front() == 1);
    CHECK(w.trace.length() == 1000);
    CHECK(w.occupancy.total == 1000);

    CHECK_THROWS(run_walk(p3, 0, 0, 1));
    CHECK_THROWS(run_walk(p3, 3, 10, 1));
    CHECK_THROWS(run_walk(p3, 0, 10, 1, CellIndex{4}));
}

TEST_CASE("walks are deterministic and valid") {
    testing::Gen gen(12);
    for (int trial = 0; trial < 40; ++trial) {
        const WalkModel m = build_model(testing::random_markov_model(gen));
        const Seed seed = gen();
        for (State i = 0; i < m.num_states(); ++i) {
            const auto a = run_walk(m, i, 300, seed);
            const auto b = run_walk(m, i, 300, seed);
            CHECK(a.trace.cells == b.trace.cells);
            CHECK(a.trace.states == b.trace.states);
            CHECK(trace_is_valid(m, a.trace));
            std::uint64_t total = 0;
            for (auto c : a.occupancy.counts) total += c;
            CHECK(total == 300);
        }
    }
}

TEST_CASE("trace validator rejects broken traces") {
    const WalkModel p3 = builtin_model("paper3");
    auto t = run_walk(p3, 0, 50, 3).trace;
    REQUIRE(trace_is_valid(p3, t));
    auto bad_state = t;
    bad_state.states[10] = (bad_state.states[10] + 1) % 3;
    CHECK_FALSE(trace_is_valid(p3, bad_state));
    auto bad_cell = t;
    // Q1 can only be followed by Q1 or Q2.
    for (std::size_t k = 0; k + 1 < bad_cell.length(); ++k)
        if (bad_cell.cells[k] == 0) {
            bad_cell.cells[k + 1] = 3;
            break;
        }
    CHECK_FALSE(trace_is_valid(p3, bad_cell));
}

TEST_CASE("state-independent traces agree after the first step") {
    RawModel raw;
    raw.cells = uniform_cells(4);
    raw.branches = doubling_branches(4);
    raw.environment = EnvironmentTable{{0, 0, 0, 0}};
    const WalkModel base_only = build_model(raw);
    const WalkModel m(base_only.base(), state_independent_env(3, {2, 0, 1, 1}));
    for (Seed seed = 0; seed < 10; ++seed) {
        const auto a = run_walk(m, 0, 200, seed).trace;
        const auto b = run_walk(m, 1, 200, seed).trace;
        CHECK(a.cells == b.cells);
        CHECK(std::equal(a.states.begin() + 1, a.states.end(), b.states.begin() + 1));
    }
}

TEST_CASE("paper3 occupancy from state 2 converges to the big class") {
    const WalkModel p3 = builtin_model("paper3");
    // Every Q_a x {2} lies in the big class.
    const auto w = run_walk(p3, 2, 1000000, 2024);
    const auto d = w.occupancy.distribution();
    CHECK(std::abs(d[0] - 0.25) < 0.01);
    CHECK(std::abs(d[1] - 0.25) < 0.01);
    CHECK(std::abs(d[2] - 0.5) < 0.01);
}

TEST_CASE("compare_occupation per class") {
    const auto rows = compare_occupation(builtin_model("paper3"), 200000, 5);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].pi == std::vector<Rational>{R(1, 4), R(1, 4), R(1, 2)});
    CHECK(rows[1].start == ProductCell{0, 1});
    CHECK(rows[1].empirical[2] == 0.0);
    for (const auto& r : rows) CHECK(r.pass);
}

TEST_CASE("Monte Carlo hit fractions") {
    {
        const auto rep = monte_carlo_verdicts(builtin_model("paper3"), 2000, 200, 11);
        const double f = rep.hit_fraction(1, 2);
        CHECK(f > 0.0);
        CHECK(f < 1.0);
        CHECK(rep.exact_hit_probability[1][2] == R(1, 2));
        CHECK_FALSE(rep.symbolic_almost_sure[1][2]);
        CHECK(rep.all_consistent());
        for (State s = 0; s < 3; ++s) CHECK(rep.return_fraction(s) == 1.0);
    }
    {
        const auto rep = monte_carlo_verdicts(builtin_model("twostate"), 10000, 1000, 0);
        for (State i = 0; i < 2; ++i)
            for (State j = 0; j < 2; ++j) CHECK(rep.hit_fraction(i, j) == 1.0);
        CHECK(rep.all_consistent());
    }
    {
        const auto rep = monte_carlo_verdicts(constant_one_model(), 500, 100, 4);
        CHECK(rep.return_fraction(0) == 0.0);
        CHECK(rep.return_fraction(1) == 1.0);
        CHECK(rep.hit_fraction(0, 1) == 1.0);
        CHECK(rep.all_consistent());
    }
    CHECK_THROWS(monte_carlo_verdicts(builtin_model("paper3"), 0, 10, 0));
}

TEST_CASE("Monte Carlo is deterministic and tallies every step") {
    const WalkModel m = builtin_model("paper3");
    const auto a = monte_carlo_verdicts(m, 300, 50, 77);
    const auto b = monte_carlo_verdicts(m, 300, 50, 77);
    CHECK(a.hits == b.hits);
    for (State i = 0; i < 3; ++i) {
        CHECK(a.occupancy[i].counts == b.occupancy[i].counts);
        CHECK(a.occupancy[i].total == 300 * 50);
    }
    CHECK(a.prng == std::string(kPrngName));
}

TEST_CASE("Monte Carlo agrees with exact probabilities on random models") {
    testing::Gen gen(61);
    for (int trial = 0; trial < 15; ++trial) {
        const WalkModel m = build_model(testing::random_markov_model(gen, 4, 3));
        const auto rep = monte_carlo_verdicts(m, 400, 400, gen());
        for (State i = 0; i < m.num_states(); ++i)
            for (State j = 0; j < m.num_states(); ++j) {
                // Convergence within the horizon is geometric; a.s. pairs
                // should essentially always be hit.
                if (rep.symbolic_almost_sure[i][j]) CHECK(rep.hit_fraction(i, j) > 0.97);
                if (rep.exact_hit_probability[i][j].is_zero()) CHECK(rep.hit_fraction(i, j) == 0.0);
            }
    }
}

TEST_CASE("trace CSV") {
    // B maps onto A, so the first two rows are forced.
    const WalkModel nf = builtin_model("nonfull");
    const auto w = run_walk(nf, 0, 2, 1, CellIndex{1});
    std::ostringstream os;
    write_trace_csv(os, w.trace);
    CHECK(os.str() == "step,cell_index,state\n0,1,0\n1,0,0\n");
}
