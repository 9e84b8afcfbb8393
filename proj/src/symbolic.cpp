#include "detwalk/symbolic.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <limits>
#include <sstream>

namespace detwalk {

TransitionGraph::TransitionGraph(std::size_t num_cells, std::size_t num_states,
                                 std::vector<std::vector<NodeIndex>> successors)
    : num_cells_(num_cells), num_states_(num_states), successors_(std::move(successors)) {
    if (successors_.size() != num_cells_ * num_states_) throw std::invalid_argument("graph size mismatch");
    for (auto& s : successors_) std::sort(s.begin(), s.end());
}

std::size_t TransitionGraph::num_edges() const {
    std::size_t n = 0;
    for (const auto& s : successors_) n += s.size();
    return n;
}

bool TransitionGraph::has_edge(NodeIndex from, NodeIndex to) const {
    const auto& s = successors_.at(from);
    return std::binary_search(s.begin(), s.end(), to);
}

TransitionGraph build_product_graph(const WalkModel& model) {
    const std::size_t ns = model.num_states();
    std::vector<std::vector<NodeIndex>> succ(model.num_product_cells());
    for (CellIndex a = 0; a < model.num_cells(); ++a) {
        const auto [first, last] = model.base().image_cells(a);
        for (State i = 0; i < ns; ++i) {
            const State j = model.env().next(i, a);
            auto& out = succ[a * ns + i];
            for (CellIndex b = first; b < last; ++b) out.push_back(b * ns + j);
        }
    }
    return TransitionGraph(model.num_cells(), ns, std::move(succ));
}

std::string edge_list(const TransitionGraph& graph) {
    std::ostringstream os;
    for (NodeIndex n = 0; n < graph.num_nodes(); ++n) {
        const auto from = graph.product_cell(n);
        for (NodeIndex m : graph.successors(n)) {
            const auto to = graph.product_cell(m);
            os << from.cell << ' ' << from.state << " -> " << to.cell << ' ' << to.state << '\n';
        }
    }
    return os.str();
}

bool CommClass::contains(NodeIndex n) const { return std::binary_search(members.begin(), members.end(), n); }

std::vector<CommClass> communication_classes(const TransitionGraph& graph) {
    // Iterative Tarjan.
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    const std::size_t n = graph.num_nodes();
    std::vector<std::size_t> index(n, unvisited), low(n, 0), component(n, unvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeIndex> stack;
    std::vector<std::pair<NodeIndex, std::size_t>> frames;
    std::vector<std::vector<NodeIndex>> sccs;
    std::size_t counter = 0;

    for (NodeIndex root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        frames.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            const auto& succ = graph.successors(v);
            if (next < succ.size()) {
                const NodeIndex w = succ[next++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const NodeIndex done = v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
            if (low[done] == index[done]) {
                std::vector<NodeIndex> scc;
                NodeIndex w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    component[w] = sccs.size();
                    scc.push_back(w);
                } while (w != done);
                sccs.push_back(std::move(scc));
            }
        }
    }

    std::vector<CommClass> classes;
    classes.reserve(sccs.size());
    for (std::size_t c = 0; c < sccs.size(); ++c) {
        CommClass cls;
        cls.members = std::move(sccs[c]);
        std::sort(cls.members.begin(), cls.members.end());
        cls.closed = true;
        for (NodeIndex v : cls.members)
            for (NodeIndex w : graph.successors(v))
                if (component[w] != c) cls.closed = false;
        cls.intercommunicating = cls.members.size() > 1 || graph.has_edge(cls.members[0], cls.members[0]);
        // A node on no cycle does not even communicate with itself; it can
        // never be closed because every node has a successor.
        if (!cls.intercommunicating) cls.closed = false;
        for (NodeIndex v : cls.members) cls.projection.push_back(graph.product_cell(v).state);
        std::sort(cls.projection.begin(), cls.projection.end());
        cls.projection.erase(std::unique(cls.projection.begin(), cls.projection.end()), cls.projection.end());
        classes.push_back(std::move(cls));
    }
    std::sort(classes.begin(), classes.end(),
              [](const CommClass& x, const CommClass& y) { return x.members.front() < y.members.front(); });
    return classes;
}

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Transitive: return "Transitive";
        case VerdictKind::NotTransitive: return "NotTransitive";
        case VerdictKind::Recurrent: return "Recurrent";
        case VerdictKind::Transient: return "Transient";
    }
    return "Unknown";
}

Verdict transitivity_verdict(const TransitionGraph& graph, const std::vector<CommClass>& classes) {
    for (const auto& cls : classes) {
        if (cls.closed && cls.projection.size() != graph.num_states())
            return {VerdictKind::NotTransitive, cls, {}};
    }
    return {VerdictKind::Transitive, std::nullopt, {}};
}

Verdict transitivity_verdict(const WalkModel& model) {
    const auto graph = build_product_graph(model);
    return transitivity_verdict(graph, communication_classes(graph));
}

namespace {

// Nodes of closed classes that contain no node of fiber `target`.
std::vector<bool> fiber_avoiding_traps(const TransitionGraph& graph, const std::vector<CommClass>& classes,
                                       State target) {
    std::vector<bool> trap(graph.num_nodes(), false);
    for (const auto& cls : classes) {
        if (!cls.closed) continue;
        if (std::binary_search(cls.projection.begin(), cls.projection.end(), target)) continue;
        for (NodeIndex v : cls.members) trap[v] = true;
    }
    return trap;
}

}  // namespace

std::optional<std::vector<ProductCell>> hitting_failure(const TransitionGraph& graph,
                                                        const std::vector<CommClass>& classes, State from, State to) {
    const auto trap = fiber_avoiding_traps(graph, classes, to);
    constexpr NodeIndex none = std::numeric_limits<NodeIndex>::max();
    for (CellIndex a = 0; a < graph.num_cells(); ++a) {
        const NodeIndex start = graph.node({a, from});
        std::vector<NodeIndex> parent(graph.num_nodes(), none);
        std::vector<bool> seen(graph.num_nodes(), false);
        std::deque<NodeIndex> queue{start};
        seen[start] = true;
        NodeIndex hit = trap[start] ? start : none;
        while (hit == none && !queue.empty()) {
            const NodeIndex v = queue.front();
            queue.pop_front();
            for (NodeIndex w : graph.successors(v)) {
                if (seen[w] || graph.product_cell(w).state == to) continue;
                seen[w] = true;
                parent[w] = v;
                if (trap[w]) {
                    hit = w;
                    break;
                }
                queue.push_back(w);
            }
        }
        if (hit == none) continue;
        std::vector<ProductCell> path;
        for (NodeIndex v = hit; v != none; v = parent[v]) path.push_back(graph.product_cell(v));
        std::reverse(path.begin(), path.end());
        return path;
    }
    return std::nullopt;
}

Verdict recurrence_verdict(const TransitionGraph& graph, const std::vector<CommClass>& classes, State i) {
    if (i >= graph.num_states()) throw std::out_of_range("unknown state " + std::to_string(i));
    if (auto path = hitting_failure(graph, classes, i, i)) return {VerdictKind::Transient, std::nullopt, std::move(*path)};
    return {VerdictKind::Recurrent, std::nullopt, {}};
}

Verdict recurrence_verdict(const WalkModel& model, State i) {
    const auto graph = build_product_graph(model);
    return recurrence_verdict(graph, communication_classes(graph), i);
}

bool check_not_transitive_witness(const TransitionGraph& graph, const CommClass& witness) {
    if (witness.members.empty()) return false;
    std::vector<bool> member(graph.num_nodes(), false);
    std::vector<bool> state_seen(graph.num_states(), false);
    for (NodeIndex v : witness.members) {
        member[v] = true;
        state_seen[graph.product_cell(v).state] = true;
    }
    for (NodeIndex v : witness.members)
        for (NodeIndex w : graph.successors(v))
            if (!member[w]) return false;
    return std::find(state_seen.begin(), state_seen.end(), false) != state_seen.end();
}

bool check_transient_witness(const TransitionGraph& graph, const std::vector<CommClass>& classes, State target,
                             const std::vector<ProductCell>& path) {
    if (path.empty() || path.front().state != target) return false;
    for (std::size_t k = 1; k < path.size(); ++k) {
        if (path[k].state == target) return false;
        if (!graph.has_edge(graph.node(path[k - 1]), graph.node(path[k]))) return false;
    }
    const auto trap = fiber_avoiding_traps(graph, classes, target);
    return trap[graph.node(path.back())];
}

// ---------------------------------------------------------------------------

bool admissible(const BaseMap& base, const Cylinder& cyl) {
    if (cyl.word.empty()) return false;
    for (CellIndex a : cyl.word)
        if (a >= base.num_cells()) return false;
    for (std::size_t k = 0; k + 1 < cyl.word.size(); ++k) {
        const auto [first, last] = base.image_cells(cyl.word[k]);
        if (cyl.word[k + 1] < first || cyl.word[k + 1] >= last) return false;
    }
    return true;
}

Itinerary itinerary(const WalkModel& model, const Cylinder& cyl, State r0) {
    if (!admissible(model.base(), cyl)) throw InadmissibleCylinder("cylinder is not admissible");
    if (r0 >= model.num_states()) throw std::out_of_range("unknown state " + std::to_string(r0));
    Itinerary out;
    out.states.push_back(r0);
    for (std::size_t k = 0; k + 1 < cyl.word.size(); ++k) out.states.push_back(model.env().next(out.states.back(), cyl.word[k]));
    out.terminal = out.states.back();
    return out;
}

Rational cylinder_measure(const BaseMap& base, const Cylinder& cyl) {
    if (!admissible(base, cyl)) return Rational(0);
    const auto& cells = base.partition();
    Rational m = cells.cell(cyl.word[0]).measure();
    for (std::size_t k = 0; k + 1 < cyl.word.size(); ++k)
        m *= cells.cell(cyl.word[k + 1]).measure() / base.branch(cyl.word[k]).image.measure();
    return m;
}

void for_each_admissible_cylinder(const BaseMap& base, std::size_t rank,
                                  const std::function<void(const Cylinder&)>& visit) {
    if (rank == 0) return;
    Cylinder cyl;
    std::function<void()> extend = [&]() {
        if (cyl.word.size() == rank) {
            visit(cyl);
            return;
        }
        const auto [first, last] = base.image_cells(cyl.word.back());
        for (CellIndex b = first; b < last; ++b) {
            cyl.word.push_back(b);
            extend();
            cyl.word.pop_back();
        }
    };
    for (CellIndex a = 0; a < base.num_cells(); ++a) {
        cyl.word.assign(1, a);
        extend();
    }
}

// ---------------------------------------------------------------------------

std::string to_string(BruteForceOutcome outcome) {
    switch (outcome) {
        case BruteForceOutcome::ConfirmedTransitiveUpToDepth: return "ConfirmedTransitiveUpToDepth";
        case BruteForceOutcome::CounterexampleFound: return "CounterexampleFound";
        case BruteForceOutcome::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

std::uint64_t default_cylinder_budget() {
    if (const char* env = std::getenv("DETWALK_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return std::uint64_t{1} << 22;
}

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

struct MassEnumerator {
    const WalkModel& model;
    std::size_t depth;
    std::uint64_t all_states;
    std::vector<std::vector<Rational>> transition_ratio;  // per cell, per image cell
    Rational mass;
    std::uint64_t cylinders = 0;

    void extend(CellIndex a, State i, std::uint64_t visited, const Rational& weight, std::size_t step) {
        if (step == depth) return;
        const auto [first, last] = model.base().image_cells(a);
        const State j = model.env().next(i, a);
        const std::uint64_t now = visited | (std::uint64_t{1} << j);
        for (CellIndex b = first; b < last; ++b) {
            ++cylinders;
            Rational w = weight * transition_ratio[a][b - first];
            // Once every state has been seen, all extensions have too.
            if (now == all_states)
                mass += w;
            else
                extend(b, j, now, w, step + 1);
        }
    }
};

}  // namespace

std::uint64_t oracle_cylinder_count(const WalkModel& model, std::size_t depth) {
    const auto& base = model.base();
    std::vector<std::uint64_t> paths(base.num_cells(), 1), next(base.num_cells());
    std::uint64_t total = 0;
    for (std::size_t len = 1; len <= depth; ++len) {
        for (CellIndex a = 0; a < base.num_cells(); ++a) {
            const auto [first, last] = base.image_cells(a);
            std::uint64_t c = 0;
            for (CellIndex b = first; b < last; ++b) c = saturating_add(c, paths[b]);
            next[a] = c;
        }
        paths.swap(next);
        for (auto c : paths) total = saturating_add(total, c);
    }
    return saturating_mul(total, model.num_states());
}

BruteForceResult brute_force_transitivity(const WalkModel& model, std::size_t depth, std::uint64_t budget) {
    if (depth == 0) throw std::invalid_argument("oracle depth must be at least 1");
    const std::size_t ns = model.num_states();
    if (ns > 64) throw std::invalid_argument("oracle supports at most 64 states");
    const std::uint64_t count = oracle_cylinder_count(model, depth);
    if (count > budget)
        throw DepthTooLarge("depth " + std::to_string(depth) + " needs " + std::to_string(count) +
                            " cylinders, budget is " + std::to_string(budget));

    const auto& base = model.base();
    const std::size_t nc = base.num_cells();
    const std::size_t nodes = nc * ns;
    auto successors = [&](std::size_t v, auto&& emit) {
        const CellIndex a = v / ns;
        const State j = model.env().next(v % ns, a);
        const auto [first, last] = base.image_cells(a);
        for (CellIndex b = first; b < last; ++b) emit(b * ns + j);
    };

    BruteForceResult result{BruteForceOutcome::Inconclusive, depth, 0, std::nullopt, std::nullopt, {}};

    // Pass 1: the set of product cells reachable in 1..depth steps from each
    // start. Once a level adds nothing new the set is complete; a complete
    // set missing a state traps the positive-measure start cell forever.
    for (std::size_t v = 0; v < nodes; ++v) {
        std::vector<bool> reached(nodes, false), level(nodes, false), next_level(nodes, false);
        level[v] = true;
        bool complete = false;
        for (std::size_t step = 1; step <= depth && !complete; ++step) {
            std::fill(next_level.begin(), next_level.end(), false);
            for (std::size_t u = 0; u < nodes; ++u)
                if (level[u]) successors(u, [&](std::size_t w) { next_level[w] = true; });
            complete = true;
            for (std::size_t w = 0; w < nodes; ++w) {
                if (next_level[w] && !reached[w]) {
                    complete = false;
                    reached[w] = true;
                }
            }
            level.swap(next_level);
        }
        if (!complete) continue;
        std::vector<bool> seen(ns, false);
        for (std::size_t w = 0; w < nodes; ++w)
            if (reached[w]) seen[w % ns] = true;
        for (State s = 0; s < ns; ++s)
            if (!seen[s]) result.trap_missing_states.push_back(s);
        if (!result.trap_missing_states.empty()) {
            result.outcome = BruteForceOutcome::CounterexampleFound;
            result.trap_start = ProductCell{v / ns, v % ns};
            return result;
        }
    }

    // Pass 2: measure of starts that have visited every state by `depth`.
    MassEnumerator en{model, depth, ns == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << ns) - 1, {}, Rational(0)};
    en.transition_ratio.resize(nc);
    for (CellIndex a = 0; a < nc; ++a) {
        const auto [first, last] = base.image_cells(a);
        const Rational image = base.branch(a).image.measure();
        for (CellIndex b = first; b < last; ++b) en.transition_ratio[a].push_back(base.partition().cell(b).measure() / image);
    }
    std::optional<Rational> smallest;
    for (CellIndex a = 0; a < nc; ++a) {
        for (State i = 0; i < ns; ++i) {
            en.mass = Rational(0);
            en.extend(a, i, 0, Rational(1), 0);
            if (!smallest || en.mass < *smallest) smallest = en.mass;
        }
    }
    result.cylinders = en.cylinders;
    result.min_visited_all_mass = smallest;
    // mass > 1 - 2^(-depth/2)  <=>  (1 - mass)^2 < 2^(-depth)
    const Rational deficit = Rational(1) - *smallest;
    const Rational bound(mpz_class(1), mpz_class(1) << static_cast<mp_bitcnt_t>(depth));
    if (deficit * deficit < bound) result.outcome = BruteForceOutcome::ConfirmedTransitiveUpToDepth;
    return result;
}

}  // namespace detwalk
