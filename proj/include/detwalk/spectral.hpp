#pragma once

#include <stdexcept>
#include <vector>

#include "detwalk/linalg.hpp"
#include "detwalk/model.hpp"
#include "detwalk/symbolic.hpp"

namespace detwalk {

// Transfer operator of the skew product on densities (w.r.t. mu) that are
// constant on product cells. entry(to, from) = 1/|slope(from.cell)| on edges.
class TransferMatrix {
public:
    TransferMatrix(const WalkModel& model, const TransitionGraph& graph);

    std::size_t size() const { return entries_.rows(); }
    const Rational& entry(NodeIndex to, NodeIndex from) const { return entries_(to, from); }
    const RationalMatrix& matrix() const { return entries_; }
    std::size_t nonzeros() const;

    std::vector<Rational> apply(const std::vector<Rational>& density) const { return entries_.multiply(density); }

private:
    RationalMatrix entries_;
};

TransferMatrix build_transfer_matrix(const WalkModel& model, const TransitionGraph& graph);

class NotClosedClass : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a closed class does not have a one-dimensional fixed space.
class SpectralInconsistency : public std::logic_error {
    using std::logic_error::logic_error;
};

struct StationaryDensity {
    std::vector<Rational> values;  // per node; zero off the support
    CommClass support;
};

StationaryDensity stationary_density(const WalkModel& model, const TransferMatrix& matrix, const CommClass& cls);

struct ClassOccupation {
    CommClass cls;
    std::vector<Rational> pi;  // per state
    StationaryDensity density;
};

struct OccupationDistribution {
    std::vector<ClassOccupation> classes;  // closed classes, in class order
    bool irreducible = false;
};

OccupationDistribution occupation_distribution(const WalkModel& model);

// Probability that the walk started in `from` at a Lebesgue-random point
// visits `to` at some time n >= 1. Solved exactly on the induced chain of
// product cells, where (a,i) -> (b,j) has probability m(b) / m(T(a)).
Rational hitting_probability(const WalkModel& model, const TransitionGraph& graph, State from, State to);

// pi_i = sum_a h(a, i) mu(a x {i}).
std::vector<Rational> occupation_of(const WalkModel& model, const StationaryDensity& density);

}  // namespace detwalk
