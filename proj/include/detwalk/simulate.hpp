#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "detwalk/model.hpp"
#include "detwalk/rng.hpp"
#include "detwalk/symbolic.hpp"

namespace detwalk {

using Seed = std::uint64_t;

// Draws successor cells with their exact conditional probabilities
// m(b) / m(T(a)). Each draw compares one 64-bit uniform against
// floor(C * 2^64) for the exact cumulative boundaries C, so the per-step
// bias is at most 2^-64.
class CellSampler {
public:
    explicit CellSampler(const BaseMap& base);

    CellIndex next(CellIndex a, Rng& rng) const { return pick(successors_[a], rng); }
    // Cell of a Lebesgue-uniform point.
    CellIndex start(Rng& rng) const { return pick(start_, rng); }

private:
    struct Table {
        CellIndex first;
        // thresholds[k] = floor(C_{k+1} 2^64) for all but the last successor.
        std::vector<std::uint64_t> thresholds;
    };

    static Table make_table(CellIndex first, const std::vector<Rational>& weights);
    static CellIndex pick(const Table& t, Rng& rng) {
        const std::uint64_t u = rng();
        std::size_t k = 0;
        while (k < t.thresholds.size() && u >= t.thresholds[k]) ++k;
        return t.first + k;
    }

    std::vector<Table> successors_;
    Table start_;
};

CellIndex sample_next_cell(const WalkModel& model, CellIndex a, Rng& rng);

struct WalkTrace {
    State start_state;
    std::vector<CellIndex> cells;  // cell at time k
    std::vector<State> states;     // U_k
    std::size_t length() const { return states.size(); }
};

struct OccupancyCounts {
    std::vector<std::uint64_t> counts;  // per state
    std::uint64_t total = 0;

    std::vector<double> distribution() const;
    OccupancyCounts& operator+=(const OccupancyCounts& other);
};

struct WalkResult {
    WalkTrace trace;
    OccupancyCounts occupancy;
};

// Uses stream 0 of `seed`. Without start_cell the start is Lebesgue-random.
WalkResult run_walk(const WalkModel& model, State i, std::size_t steps, Seed seed,
                    std::optional<CellIndex> start_cell = std::nullopt);

// Occupancy only, without storing the trace.
OccupancyCounts run_occupancy(const WalkModel& model, const CellSampler& sampler, State i, CellIndex start_cell,
                              std::size_t steps, Rng& rng);

// Re-checks admissibility and state composition of a trace.
bool trace_is_valid(const WalkModel& model, const WalkTrace& trace);

void write_trace_csv(std::ostream& os, const WalkTrace& trace);

struct MonteCarloReport {
    std::size_t num_states = 0;
    std::size_t replicas = 0;
    std::size_t horizon = 0;
    Seed seed = 0;
    std::string prng = kPrngName;

    // [from][to]: replicas whose walk from `from` visited `to` at some 1 <= n <= horizon.
    std::vector<std::vector<std::uint64_t>> hits;
    // [from]: occupancy over times 0..horizon-1, summed over replicas.
    std::vector<OccupancyCounts> occupancy;

    // Symbolic and exact references.
    std::vector<std::vector<bool>> symbolic_almost_sure;
    std::vector<std::vector<Rational>> exact_hit_probability;

    double hit_fraction(State from, State to) const;
    double return_fraction(State i) const { return hit_fraction(i, i); }
    // |fraction - exact| within a 4 sigma binomial band plus 1/replicas.
    bool consistent(State from, State to) const;
    bool all_consistent() const;
};

// Replica r draws from stream r of `seed` and runs every start state in order.
MonteCarloReport monte_carlo_verdicts(const WalkModel& model, std::size_t replicas, std::size_t horizon, Seed seed);

struct OccupationComparison {
    std::size_t class_index;  // index among closed classes
    ProductCell start;
    std::vector<Rational> pi;
    std::vector<double> empirical;
    double max_abs_gap;
    bool pass;
};

inline constexpr double kOccupationTolerance = 0.01;

// One walk per closed class, started at the class's smallest member and
// drawing from stream (class index + 1) of `seed`.
std::vector<OccupationComparison> compare_occupation(const WalkModel& model, std::size_t steps, Seed seed,
                                                     double tolerance = kOccupationTolerance);

}  // namespace detwalk
