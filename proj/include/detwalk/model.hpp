#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "detwalk/rational.hpp"

namespace detwalk {

using CellIndex = std::size_t;
using State = std::size_t;

// Half-open interval [left, right) with left < right.
class Interval {
public:
    Interval(Rational left, Rational right);

    const Rational& left() const { return left_; }
    const Rational& right() const { return right_; }
    Rational measure() const { return right_ - left_; }

    bool contains(const Rational& x) const { return left_ <= x && x < right_; }
    bool contains(const Interval& other) const { return left_ <= other.left_ && other.right_ <= right_; }
    std::optional<Interval> intersect(const Interval& other) const;

    std::string str() const { return "[" + left_.str() + ", " + right_.str() + ")"; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Rational left_;
    Rational right_;
};

// Sorted tiling of [0,1) by intervals of positive length.
class Partition {
public:
    static Partition from_endpoints(const std::vector<Rational>& endpoints);

    std::size_t size() const { return cells_.size(); }
    const Interval& cell(CellIndex a) const { return cells_.at(a); }
    const std::vector<Interval>& cells() const { return cells_; }
    std::vector<Rational> endpoints() const;

    CellIndex cell_of(const Rational& x) const;
    std::optional<std::size_t> endpoint_index(const Rational& x) const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    explicit Partition(std::vector<Interval> cells) : cells_(std::move(cells)) {}
    std::vector<Interval> cells_;
};

struct AffineBranch {
    CellIndex domain;
    Rational slope;
    Rational intercept;
    Interval image;

    Rational apply(const Rational& x) const { return slope * x + intercept; }
    // Radon-Nikodym derivative of the inverse branch, constant on the image.
    Rational inverse_derivative() const { return slope.abs().inverse(); }
    friend bool operator==(const AffineBranch&, const AffineBranch&) = default;
};

// ---------------------------------------------------------------------------
// Raw (unvalidated) descriptions, as produced by the model file parser.

struct RawCell {
    Rational left;
    Rational right;
};

struct RawBranch {
    Rational slope;
    Rational intercept;
};

// Piecewise-constant transition function: pieces[k].value holds on
// [pieces[k].start, pieces[k+1].start), the last piece extends to 1.
struct RawPiece {
    Rational start;
    State value;
};
using RawPiecewise = std::vector<RawPiece>;

using EnvironmentTable = std::vector<std::vector<State>>;

struct RawModel {
    std::vector<RawCell> cells;
    std::vector<RawBranch> branches;
    std::size_t num_states = 1;
    std::variant<EnvironmentTable, std::vector<RawPiecewise>> environment;
};

enum class ViolationKind { Gap, Overlap, MarkovImageMisaligned, NonBijectiveBranch, EnvironmentIncomplete };

std::string to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    // Informational only: Lebesgue invariance is not required.
    std::optional<bool> lebesgue_invariant;

    bool ok() const { return violations.empty(); }
};

class ModelError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ValidationError : public ModelError {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

class RefinementNotMarkov : public ModelError {
    using ModelError::ModelError;
};

// ---------------------------------------------------------------------------

// Piecewise-affine Markov map of [0,1). Every branch maps its cell
// bijectively onto a contiguous union of cells.
class BaseMap {
public:
    static BaseMap create(const std::vector<RawCell>& cells, const std::vector<RawBranch>& branches);

    const Partition& partition() const { return partition_; }
    std::size_t num_cells() const { return partition_.size(); }
    const AffineBranch& branch(CellIndex a) const { return branches_.at(a); }
    const std::vector<AffineBranch>& branches() const { return branches_; }

    // Cells b with b contained in T(a), as the half-open index range [first, last).
    std::pair<CellIndex, CellIndex> image_cells(CellIndex a) const { return image_ranges_.at(a); }

    Rational apply(const Rational& x) const;

    friend bool operator==(const BaseMap&, const BaseMap&) = default;

private:
    BaseMap(Partition partition, std::vector<AffineBranch> branches);

    Partition partition_;
    std::vector<AffineBranch> branches_;
    std::vector<std::pair<CellIndex, CellIndex>> image_ranges_;
};

class Environment {
public:
    Environment(std::size_t num_states, std::size_t num_cells, EnvironmentTable table);

    std::size_t num_states() const { return num_states_; }
    std::size_t num_cells() const { return num_cells_; }
    State next(State i, CellIndex a) const { return table_[i * num_cells_ + a]; }
    EnvironmentTable table() const;

    friend bool operator==(const Environment&, const Environment&) = default;

private:
    std::size_t num_states_;
    std::size_t num_cells_;
    std::vector<State> table_;
};

class WalkModel {
public:
    WalkModel(BaseMap base, Environment env);

    const BaseMap& base() const { return base_; }
    const Environment& env() const { return env_; }
    std::size_t num_states() const { return env_.num_states(); }
    std::size_t num_cells() const { return base_.num_cells(); }
    std::size_t num_product_cells() const { return num_cells() * num_states(); }

    // mu(a x {i}) = m(a) / #S, independent of i.
    Rational product_cell_measure(CellIndex a) const;

    friend bool operator==(const WalkModel&, const WalkModel&) = default;

private:
    BaseMap base_;
    Environment env_;
};

// ---------------------------------------------------------------------------

ValidationReport validate_model(const RawModel& raw);

// Builds a model from a raw description, refining the partition when the
// environment is given piecewise. Throws ValidationError or RefinementNotMarkov.
WalkModel build_model(const RawModel& raw);

inline constexpr std::size_t kMaxRefinementCells = 4096;

// Coarsest Markov partition refining the base partition and every level set
// of the f_i: the breakpoints are closed under the branches. Throws
// RefinementNotMarkov when that closure exceeds kMaxRefinementCells.
WalkModel refine_for_environment(const BaseMap& base, std::size_t num_states,
                                 const std::vector<RawPiecewise>& functions);

Rational apply_map(const BaseMap& base, const Rational& x);

std::pair<Rational, State> skew_step(const WalkModel& model, const Rational& x, State i);

// g: cell -> state. Every state follows the same update.
Environment state_independent_env(std::size_t num_states, const std::vector<State>& g);

struct DistortionReport {
    Rational distortion_constant;
    std::size_t finite_images_count;
    bool strong_distortion;
};

DistortionReport distortion_report(const WalkModel& model);

// True iff the transfer operator fixes the constant density 1.
bool preserves_lebesgue(const BaseMap& base);

}  // namespace detwalk
