#include "detwalk/spectral.hpp"

namespace detwalk {

TransferMatrix::TransferMatrix(const WalkModel& model, const TransitionGraph& graph)
    : entries_(graph.num_nodes(), graph.num_nodes()) {
    for (NodeIndex from = 0; from < graph.num_nodes(); ++from) {
        const Rational weight = model.base().branch(graph.product_cell(from).cell).inverse_derivative();
        for (NodeIndex to : graph.successors(from)) entries_(to, from) = weight;
    }
}

std::size_t TransferMatrix::nonzeros() const {
    std::size_t n = 0;
    for (std::size_t r = 0; r < entries_.rows(); ++r)
        for (std::size_t c = 0; c < entries_.cols(); ++c)
            if (!entries_(r, c).is_zero()) ++n;
    return n;
}

TransferMatrix build_transfer_matrix(const WalkModel& model, const TransitionGraph& graph) {
    return TransferMatrix(model, graph);
}

StationaryDensity stationary_density(const WalkModel& model, const TransferMatrix& matrix, const CommClass& cls) {
    if (!cls.closed) throw NotClosedClass("stationary density requires a closed communication class");
    const std::size_t ns = model.num_states();
    const std::size_t k = cls.members.size();

    // (L_C - I) h = 0 restricted to the class, plus sum h mu = 1.
    RationalMatrix fixed(k, k);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) fixed(r, c) = matrix.entry(cls.members[r], cls.members[c]);
        fixed(r, r) -= Rational(1);
    }
    if (rank(fixed) + 1 != k)
        throw SpectralInconsistency("fixed space of a closed class is not one-dimensional");

    RationalMatrix system(k + 1, k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) system(r, c) = fixed(r, c);
    for (std::size_t c = 0; c < k; ++c) system(k, c) = model.product_cell_measure(cls.members[c] / ns);
    std::vector<Rational> rhs(k + 1, Rational(0));
    rhs[k] = Rational(1);

    auto h = solve_unique(system, rhs);
    if (!h) throw SpectralInconsistency("normalized fixed-point system has no unique solution");

    StationaryDensity out{std::vector<Rational>(matrix.size(), Rational(0)), cls};
    for (std::size_t c = 0; c < k; ++c) {
        if ((*h)[c].sign() <= 0) throw SpectralInconsistency("stationary density is not positive on its class");
        out.values[cls.members[c]] = (*h)[c];
    }
    return out;
}

std::vector<Rational> occupation_of(const WalkModel& model, const StationaryDensity& density) {
    const std::size_t ns = model.num_states();
    std::vector<Rational> pi(ns, Rational(0));
    for (NodeIndex v : density.support.members) pi[v % ns] += density.values[v] * model.product_cell_measure(v / ns);
    return pi;
}

OccupationDistribution occupation_distribution(const WalkModel& model) {
    const auto graph = build_product_graph(model);
    const auto classes = communication_classes(graph);
    const TransferMatrix matrix(model, graph);
    OccupationDistribution out;
    out.irreducible = classes.size() == 1 && classes.front().intercommunicating;
    for (const auto& cls : classes) {
        if (!cls.closed) continue;
        auto density = stationary_density(model, matrix, cls);
        auto pi = occupation_of(model, density);
        out.classes.push_back({cls, std::move(pi), std::move(density)});
    }
    return out;
}

}  // namespace detwalk

namespace detwalk {

Rational hitting_probability(const WalkModel& model, const TransitionGraph& graph, State from, State to) {
    const std::size_t ns = model.num_states();
    const std::size_t n = graph.num_nodes();
    const auto& base = model.base();
    auto step_probability = [&](NodeIndex v, NodeIndex w) {
        return base.partition().cell(w / ns).measure() / base.branch(v / ns).image.measure();
    };
    auto in_target = [&](NodeIndex v) { return v % ns == to; };

    // g(w) = P(reach target fiber at some n >= 0 | w). Zero where the fiber is
    // unreachable; elsewhere off the fiber, g solves (I - P_RR) g = P_RF 1.
    std::vector<std::vector<NodeIndex>> predecessors(n);
    for (NodeIndex v = 0; v < n; ++v)
        for (NodeIndex w : graph.successors(v)) predecessors[w].push_back(v);
    std::vector<bool> reaches(n, false);
    std::vector<NodeIndex> frontier;
    for (NodeIndex v = 0; v < n; ++v)
        if (in_target(v)) {
            reaches[v] = true;
            frontier.push_back(v);
        }
    while (!frontier.empty()) {
        const NodeIndex w = frontier.back();
        frontier.pop_back();
        for (NodeIndex v : predecessors[w])
            if (!reaches[v]) {
                reaches[v] = true;
                frontier.push_back(v);
            }
    }
    std::vector<std::size_t> slot(n, n);
    std::vector<NodeIndex> unknowns;
    for (NodeIndex v = 0; v < n; ++v)
        if (reaches[v] && !in_target(v)) {
            slot[v] = unknowns.size();
            unknowns.push_back(v);
        }

    std::vector<Rational> g(n, Rational(0));
    for (NodeIndex v = 0; v < n; ++v)
        if (in_target(v)) g[v] = Rational(1);
    if (!unknowns.empty()) {
        const std::size_t k = unknowns.size();
        RationalMatrix system(k, k);
        std::vector<Rational> rhs(k, Rational(0));
        for (std::size_t r = 0; r < k; ++r) {
            system(r, r) = Rational(1);
            const NodeIndex v = unknowns[r];
            for (NodeIndex w : graph.successors(v)) {
                const Rational p = step_probability(v, w);
                if (in_target(w))
                    rhs[r] += p;
                else if (slot[w] != n)
                    system(r, slot[w]) -= p;
            }
        }
        auto solution = solve_unique(system, rhs);
        if (!solution) throw SpectralInconsistency("hitting system is singular");
        for (std::size_t r = 0; r < k; ++r) g[unknowns[r]] = (*solution)[r];
    }

    Rational total(0);
    for (CellIndex a = 0; a < model.num_cells(); ++a) {
        const NodeIndex v = graph.node({a, from});
        Rational h(0);
        for (NodeIndex w : graph.successors(v)) h += step_probability(v, w) * g[w];
        total += base.partition().cell(a).measure() * h;
    }
    return total;
}

}  // namespace detwalk
