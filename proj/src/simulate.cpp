#include "detwalk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "detwalk/spectral.hpp"

namespace detwalk {

static_assert(sizeof(unsigned long) == 8, "threshold conversion assumes 64-bit unsigned long");

CellSampler::Table CellSampler::make_table(CellIndex first, const std::vector<Rational>& weights) {
    Table t{first, {}};
    Rational cumulative(0);
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
        cumulative += weights[k];
        const mpz_class scaled = (cumulative.numerator() << 64) / cumulative.denominator();
        t.thresholds.push_back(mpz_get_ui(scaled.get_mpz_t()));
    }
    return t;
}

CellSampler::CellSampler(const BaseMap& base) {
    const auto& partition = base.partition();
    for (CellIndex a = 0; a < base.num_cells(); ++a) {
        const auto [first, last] = base.image_cells(a);
        const Rational image = base.branch(a).image.measure();
        std::vector<Rational> weights;
        for (CellIndex b = first; b < last; ++b) weights.push_back(partition.cell(b).measure() / image);
        successors_.push_back(make_table(first, weights));
    }
    std::vector<Rational> lengths;
    for (const auto& c : partition.cells()) lengths.push_back(c.measure());
    start_ = make_table(0, lengths);
}

CellIndex sample_next_cell(const WalkModel& model, CellIndex a, Rng& rng) {
    return CellSampler(model.base()).next(a, rng);
}

std::vector<double> OccupancyCounts::distribution() const {
    std::vector<double> out;
    for (auto c : counts) out.push_back(total == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(total));
    return out;
}

OccupancyCounts& OccupancyCounts::operator+=(const OccupancyCounts& other) {
    if (counts.size() < other.counts.size()) counts.resize(other.counts.size(), 0);
    for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
    return *this;
}

WalkResult run_walk(const WalkModel& model, State i, std::size_t steps, Seed seed, std::optional<CellIndex> start_cell) {
    if (steps == 0) throw std::invalid_argument("walk needs at least one step");
    if (i >= model.num_states()) throw std::out_of_range("unknown state " + std::to_string(i));
    if (start_cell && *start_cell >= model.num_cells()) throw std::out_of_range("unknown cell");
    const CellSampler sampler(model.base());
    Rng rng(seed, 0);
    WalkResult out;
    out.trace.start_state = i;
    out.trace.cells.reserve(steps);
    out.trace.states.reserve(steps);
    out.occupancy.counts.assign(model.num_states(), 0);
    CellIndex a = start_cell ? *start_cell : sampler.start(rng);
    State s = i;
    for (std::size_t k = 0; k < steps; ++k) {
        out.trace.cells.push_back(a);
        out.trace.states.push_back(s);
        ++out.occupancy.counts[s];
        if (k + 1 == steps) break;
        s = model.env().next(s, a);
        a = sampler.next(a, rng);
    }
    out.occupancy.total = steps;
    return out;
}

OccupancyCounts run_occupancy(const WalkModel& model, const CellSampler& sampler, State i, CellIndex start_cell,
                              std::size_t steps, Rng& rng) {
    OccupancyCounts out;
    out.counts.assign(model.num_states(), 0);
    CellIndex a = start_cell;
    State s = i;
    for (std::size_t k = 0; k < steps; ++k) {
        ++out.counts[s];
        s = model.env().next(s, a);
        a = sampler.next(a, rng);
    }
    out.total = steps;
    return out;
}

bool trace_is_valid(const WalkModel& model, const WalkTrace& trace) {
    if (trace.cells.size() != trace.states.size() || trace.states.empty()) return false;
    if (trace.states.front() != trace.start_state) return false;
    for (std::size_t k = 0; k < trace.cells.size(); ++k)
        if (trace.cells[k] >= model.num_cells() || trace.states[k] >= model.num_states()) return false;
    for (std::size_t k = 0; k + 1 < trace.cells.size(); ++k) {
        const auto [first, last] = model.base().image_cells(trace.cells[k]);
        if (trace.cells[k + 1] < first || trace.cells[k + 1] >= last) return false;
        if (trace.states[k + 1] != model.env().next(trace.states[k], trace.cells[k])) return false;
    }
    return true;
}

void write_trace_csv(std::ostream& os, const WalkTrace& trace) {
    os << "step,cell_index,state\n";
    for (std::size_t k = 0; k < trace.length(); ++k) os << k << ',' << trace.cells[k] << ',' << trace.states[k] << '\n';
}

double MonteCarloReport::hit_fraction(State from, State to) const {
    return replicas == 0 ? 0.0 : static_cast<double>(hits[from][to]) / static_cast<double>(replicas);
}

bool MonteCarloReport::consistent(State from, State to) const {
    const double p = exact_hit_probability[from][to].to_double();
    const double f = hit_fraction(from, to);
    const double r = static_cast<double>(replicas);
    const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.0) / r);
    return std::abs(f - p) <= 4.0 * sigma + 1.0 / r;
}

bool MonteCarloReport::all_consistent() const {
    for (State i = 0; i < num_states; ++i)
        for (State j = 0; j < num_states; ++j)
            if (!consistent(i, j)) return false;
    return true;
}

namespace {

struct ReplicaTally {
    std::vector<std::vector<std::uint64_t>> hits;
    std::vector<OccupancyCounts> occupancy;

    explicit ReplicaTally(std::size_t ns)
        : hits(ns, std::vector<std::uint64_t>(ns, 0)), occupancy(ns, OccupancyCounts{std::vector<std::uint64_t>(ns, 0), 0}) {}

    ReplicaTally& operator+=(const ReplicaTally& o) {
        for (std::size_t i = 0; i < hits.size(); ++i) {
            for (std::size_t j = 0; j < hits.size(); ++j) hits[i][j] += o.hits[i][j];
            occupancy[i] += o.occupancy[i];
        }
        return *this;
    }
};

void run_replicas(const WalkModel& model, const CellSampler& sampler, std::size_t begin, std::size_t end,
                  std::size_t horizon, Seed seed, ReplicaTally& tally) {
    const std::size_t ns = model.num_states();
    std::vector<bool> hit(ns);
    for (std::size_t r = begin; r < end; ++r) {
        Rng rng(seed, r);
        for (State i = 0; i < ns; ++i) {
            std::fill(hit.begin(), hit.end(), false);
            CellIndex a = sampler.start(rng);
            State s = i;
            auto& occ = tally.occupancy[i];
            for (std::size_t t = 0; t < horizon; ++t) {
                ++occ.counts[s];
                s = model.env().next(s, a);
                a = sampler.next(a, rng);
                hit[s] = true;
            }
            occ.total += horizon;
            for (State j = 0; j < ns; ++j)
                if (hit[j]) ++tally.hits[i][j];
        }
    }
}

}  // namespace

MonteCarloReport monte_carlo_verdicts(const WalkModel& model, std::size_t replicas, std::size_t horizon, Seed seed) {
    if (replicas == 0 || horizon == 0) throw std::invalid_argument("replicas and horizon must be positive");
    const std::size_t ns = model.num_states();
    const CellSampler sampler(model.base());

    // Replica streams are fixed by index, so the merged tally does not depend
    // on how replicas are split across workers.
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, replicas);
    std::vector<ReplicaTally> partial(workers, ReplicaTally(ns));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = replicas * w / workers;
            const std::size_t end = replicas * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] { run_replicas(model, sampler, begin, end, horizon, seed, partial[w]); });
        }
    }
    ReplicaTally total(ns);
    for (const auto& p : partial) total += p;

    MonteCarloReport report;
    report.num_states = ns;
    report.replicas = replicas;
    report.horizon = horizon;
    report.seed = seed;
    report.hits = std::move(total.hits);
    report.occupancy = std::move(total.occupancy);

    const auto graph = build_product_graph(model);
    const auto classes = communication_classes(graph);
    report.symbolic_almost_sure.assign(ns, std::vector<bool>(ns, false));
    report.exact_hit_probability.assign(ns, std::vector<Rational>(ns, Rational(0)));
    for (State i = 0; i < ns; ++i) {
        for (State j = 0; j < ns; ++j) {
            report.symbolic_almost_sure[i][j] = !hitting_failure(graph, classes, i, j).has_value();
            report.exact_hit_probability[i][j] = hitting_probability(model, graph, i, j);
        }
    }
    return report;
}

std::vector<OccupationComparison> compare_occupation(const WalkModel& model, std::size_t steps, Seed seed,
                                                     double tolerance) {
    if (steps == 0) throw std::invalid_argument("walk needs at least one step");
    const auto occupation = occupation_distribution(model);
    const CellSampler sampler(model.base());
    const std::size_t ns = model.num_states();
    std::vector<OccupationComparison> rows;
    for (std::size_t c = 0; c < occupation.classes.size(); ++c) {
        const auto& cls = occupation.classes[c];
        const NodeIndex first = cls.cls.members.front();
        const ProductCell start{first / ns, first % ns};
        Rng rng(seed, c + 1);
        const auto counts = run_occupancy(model, sampler, start.state, start.cell, steps, rng);
        OccupationComparison row{c, start, cls.pi, counts.distribution(), 0.0, false};
        for (State i = 0; i < ns; ++i)
            row.max_abs_gap = std::max(row.max_abs_gap, std::abs(row.empirical[i] - cls.pi[i].to_double()));
        row.pass = row.max_abs_gap <= tolerance;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detwalk
