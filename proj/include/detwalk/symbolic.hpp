#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "detwalk/model.hpp"

namespace detwalk {

using NodeIndex = std::size_t;

// Element a x {i} of the product partition.
struct ProductCell {
    CellIndex cell;
    State state;

    friend auto operator<=>(const ProductCell&, const ProductCell&) = default;
};

// One-step admissibility graph of the skew product on cells x states.
// Nodes are numbered cell-major: node = cell * #S + state.
class TransitionGraph {
public:
    TransitionGraph(std::size_t num_cells, std::size_t num_states, std::vector<std::vector<NodeIndex>> successors);

    std::size_t num_cells() const { return num_cells_; }
    std::size_t num_states() const { return num_states_; }
    std::size_t num_nodes() const { return successors_.size(); }
    std::size_t num_edges() const;

    NodeIndex node(ProductCell p) const { return p.cell * num_states_ + p.state; }
    ProductCell product_cell(NodeIndex n) const { return {n / num_states_, n % num_states_}; }

    const std::vector<NodeIndex>& successors(NodeIndex n) const { return successors_.at(n); }
    bool has_edge(NodeIndex from, NodeIndex to) const;

private:
    std::size_t num_cells_;
    std::size_t num_states_;
    std::vector<std::vector<NodeIndex>> successors_;
};

TransitionGraph build_product_graph(const WalkModel& model);

// "cell state -> cell state" per line, in node order then target order.
std::string edge_list(const TransitionGraph& graph);

struct CommClass {
    std::vector<NodeIndex> members;  // sorted
    bool closed = false;
    // False for a node on no cycle: it intercommunicates with nothing.
    bool intercommunicating = false;
    std::vector<State> projection;  // sorted distinct states

    bool contains(NodeIndex n) const;
};

// Strongly connected components, ordered by smallest member.
std::vector<CommClass> communication_classes(const TransitionGraph& graph);

enum class VerdictKind { Transitive, NotTransitive, Recurrent, Transient };

std::string to_string(VerdictKind kind);

struct Verdict {
    VerdictKind kind;
    // NotTransitive: a closed class missing some state.
    std::optional<CommClass> witness_class;
    // Transient (and failed hitting checks): a path that never revisits the
    // target fiber after its first node and ends in a closed class disjoint
    // from that fiber.
    std::vector<ProductCell> witness_path;
};

Verdict transitivity_verdict(const WalkModel& model);
Verdict transitivity_verdict(const TransitionGraph& graph, const std::vector<CommClass>& classes);

Verdict recurrence_verdict(const WalkModel& model, State i);
Verdict recurrence_verdict(const TransitionGraph& graph, const std::vector<CommClass>& classes, State i);

// Whether the walk started in state `from` a.s. visits `to` at some time
// n >= 1. Returns nullopt when it does, otherwise a witness path.
std::optional<std::vector<ProductCell>> hitting_failure(const TransitionGraph& graph,
                                                        const std::vector<CommClass>& classes, State from, State to);

bool check_not_transitive_witness(const TransitionGraph& graph, const CommClass& witness);
bool check_transient_witness(const TransitionGraph& graph, const std::vector<CommClass>& classes, State target,
                             const std::vector<ProductCell>& path);

// ---------------------------------------------------------------------------
// Cylinders.

struct Cylinder {
    std::vector<CellIndex> word;

    std::size_t rank() const { return word.size(); }
};

class InadmissibleCylinder : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool admissible(const BaseMap& base, const Cylinder& cyl);

struct Itinerary {
    std::vector<State> states;  // r_0 .. r_{n-1}
    State terminal;             // r_{n-1}
};

Itinerary itinerary(const WalkModel& model, const Cylinder& cyl, State r0);

// Lebesgue measure of [a_0, ..., a_{n-1}] via affine transport; 0 if inadmissible.
Rational cylinder_measure(const BaseMap& base, const Cylinder& cyl);

// Calls visit for every admissible cylinder of the given rank, in
// lexicographic order.
void for_each_admissible_cylinder(const BaseMap& base, std::size_t rank,
                                  const std::function<void(const Cylinder&)>& visit);

// ---------------------------------------------------------------------------
// Exhaustive oracle.

enum class BruteForceOutcome { ConfirmedTransitiveUpToDepth, CounterexampleFound, Inconclusive };

std::string to_string(BruteForceOutcome outcome);

class DepthTooLarge : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BruteForceResult {
    BruteForceOutcome outcome;
    std::size_t depth;
    std::uint64_t cylinders;
    // Smallest, over start cells a x {i}, of the conditional measure of
    // starts that visited every state within `depth` steps. Unset when a
    // counterexample short-circuits the enumeration.
    std::optional<Rational> min_visited_all_mass;
    std::optional<ProductCell> trap_start;
    std::vector<State> trap_missing_states;
};

// Reads DETWALK_BUDGET, default 1 << 22.
std::uint64_t default_cylinder_budget();

// Number of admissible cylinders of ranks 2..depth+1 over all start cells, times #S.
std::uint64_t oracle_cylinder_count(const WalkModel& model, std::size_t depth);

// Independent of the graph/SCC machinery: explores the skew product by
// enumerating admissible cylinders. CounterexampleFound is exact; the
// confirmation threshold 1 - 2^(-depth/2) is a heuristic.
BruteForceResult brute_force_transitivity(const WalkModel& model, std::size_t depth,
                                          std::uint64_t budget = default_cylinder_budget());

}  // namespace detwalk
