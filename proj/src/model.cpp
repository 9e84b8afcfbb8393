#include "detwalk/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace detwalk {

Interval::Interval(Rational left, Rational right) : left_(std::move(left)), right_(std::move(right)) {
    if (!(left_ < right_)) throw std::invalid_argument("empty interval [" + left_.str() + ", " + right_.str() + ")");
}

std::optional<Interval> Interval::intersect(const Interval& other) const {
    Rational l = max(left_, other.left_);
    Rational r = min(right_, other.right_);
    if (!(l < r)) return std::nullopt;
    return Interval(std::move(l), std::move(r));
}

Partition Partition::from_endpoints(const std::vector<Rational>& endpoints) {
    if (endpoints.size() < 2 || endpoints.front() != Rational(0) || endpoints.back() != Rational(1))
        throw std::invalid_argument("partition endpoints must run from 0 to 1");
    std::vector<Interval> cells;
    cells.reserve(endpoints.size() - 1);
    for (std::size_t k = 0; k + 1 < endpoints.size(); ++k) cells.emplace_back(endpoints[k], endpoints[k + 1]);
    return Partition(std::move(cells));
}

std::vector<Rational> Partition::endpoints() const {
    std::vector<Rational> out;
    out.reserve(cells_.size() + 1);
    for (const auto& c : cells_) out.push_back(c.left());
    out.push_back(cells_.back().right());
    return out;
}

CellIndex Partition::cell_of(const Rational& x) const {
    if (x < Rational(0) || !(x < Rational(1))) throw std::out_of_range("point " + x.str() + " outside [0,1)");
    auto it = std::upper_bound(cells_.begin(), cells_.end(), x,
                               [](const Rational& v, const Interval& c) { return v < c.left(); });
    return static_cast<CellIndex>(std::distance(cells_.begin(), it) - 1);
}

std::optional<std::size_t> Partition::endpoint_index(const Rational& x) const {
    if (x == Rational(1)) return cells_.size();
    auto it = std::lower_bound(cells_.begin(), cells_.end(), x,
                               [](const Interval& c, const Rational& v) { return c.left() < v; });
    if (it == cells_.end() || it->left() != x) return std::nullopt;
    return static_cast<std::size_t>(std::distance(cells_.begin(), it));
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Gap: return "Gap";
        case ViolationKind::Overlap: return "Overlap";
        case ViolationKind::MarkovImageMisaligned: return "MarkovImageMisaligned";
        case ViolationKind::NonBijectiveBranch: return "NonBijectiveBranch";
        case ViolationKind::EnvironmentIncomplete: return "EnvironmentIncomplete";
    }
    return "Unknown";
}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
    std::ostringstream os;
    os << "model validation failed:";
    for (const auto& v : violations) os << "\n  " << to_string(v.kind) << ": " << v.detail;
    return os.str();
}

std::string interval_text(const Rational& l, const Rational& r) { return "[" + l.str() + ", " + r.str() + ")"; }

// Tiling checks. Returns true if the cells tile [0,1) in order.
bool check_tiling(const std::vector<RawCell>& cells, std::vector<Violation>& out) {
    const std::size_t before = out.size();
    if (cells.empty()) {
        out.push_back({ViolationKind::Gap, "no cells; [0, 1) is uncovered"});
        return false;
    }
    Rational covered(0);
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const auto& c = cells[k];
        if (!(c.left < c.right)) {
            out.push_back({ViolationKind::Overlap,
                           "cell " + std::to_string(k) + " " + interval_text(c.left, c.right) + " is empty or reversed"});
            continue;
        }
        if (c.left < Rational(0) || Rational(1) < c.right) {
            out.push_back({ViolationKind::Overlap,
                           "cell " + std::to_string(k) + " " + interval_text(c.left, c.right) + " extends outside [0, 1)"});
        }
        if (covered < c.left) {
            out.push_back({ViolationKind::Gap, "gap at " + interval_text(covered, c.left) + " before cell " + std::to_string(k)});
        } else if (c.left < covered) {
            out.push_back({ViolationKind::Overlap, "cell " + std::to_string(k) + " overlaps " +
                                                       interval_text(c.left, min(covered, c.right))});
        }
        covered = max(covered, c.right);
    }
    if (covered < Rational(1)) out.push_back({ViolationKind::Gap, "gap at " + interval_text(covered, Rational(1))});
    return out.size() == before;
}

// Branch checks against a valid tiling. Fills `branches` when everything aligns.
void check_branches(const Partition& partition, const std::vector<RawBranch>& raw,
                    std::vector<Violation>& out, std::vector<AffineBranch>* branches) {
    const std::size_t n = partition.size();
    if (raw.size() != n) {
        out.push_back({ViolationKind::NonBijectiveBranch, "expected " + std::to_string(n) + " branches, found " +
                                                              std::to_string(raw.size())});
    }
    const std::size_t before = out.size();
    for (std::size_t a = 0; a < std::min(n, raw.size()); ++a) {
        const auto& cell = partition.cell(a);
        const auto& b = raw[a];
        if (b.slope.is_zero()) {
            out.push_back({ViolationKind::NonBijectiveBranch, "branch on cell " + std::to_string(a) + " " + cell.str() +
                                                                  " has zero slope"});
            continue;
        }
        Rational y0 = b.slope * cell.left() + b.intercept;
        Rational y1 = b.slope * cell.right() + b.intercept;
        if (y1 < y0) std::swap(y0, y1);
        const std::string where = "branch on cell " + std::to_string(a) + " " + cell.str() + " has image " +
                                  interval_text(y0, y1);
        if (y0 < Rational(0) || Rational(1) < y1) {
            out.push_back({ViolationKind::MarkovImageMisaligned, where + " outside [0, 1)"});
            continue;
        }
        if (!partition.endpoint_index(y0) || !partition.endpoint_index(y1)) {
            out.push_back({ViolationKind::MarkovImageMisaligned, where + ", not a union of cells"});
            continue;
        }
        if (branches) branches->push_back({a, b.slope, b.intercept, Interval(y0, y1)});
    }
    if (branches && out.size() != before) branches->clear();
}

Partition partition_of(const std::vector<RawCell>& cells) {
    std::vector<Rational> endpoints;
    for (const auto& c : cells) endpoints.push_back(c.left);
    endpoints.push_back(Rational(1));
    return Partition::from_endpoints(endpoints);
}

void check_table(const EnvironmentTable& table, std::size_t num_states, std::size_t num_cells,
                 std::vector<Violation>& out) {
    if (num_states == 0) {
        out.push_back({ViolationKind::EnvironmentIncomplete, "state space is empty"});
        return;
    }
    if (table.size() != num_states) {
        out.push_back({ViolationKind::EnvironmentIncomplete, "expected " + std::to_string(num_states) +
                                                                 " transition functions, found " +
                                                                 std::to_string(table.size())});
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i].size() != num_cells) {
            out.push_back({ViolationKind::EnvironmentIncomplete, "f_" + std::to_string(i) + " has " +
                                                                     std::to_string(table[i].size()) +
                                                                     " entries for " + std::to_string(num_cells) +
                                                                     " cells"});
        }
        for (std::size_t a = 0; a < table[i].size(); ++a) {
            if (table[i][a] >= num_states) {
                out.push_back({ViolationKind::EnvironmentIncomplete, "f_" + std::to_string(i) + " on cell " +
                                                                         std::to_string(a) + " names unknown state " +
                                                                         std::to_string(table[i][a])});
            }
        }
    }
}

void check_piecewise(const std::vector<RawPiecewise>& functions, std::size_t num_states, std::vector<Violation>& out) {
    if (num_states == 0) {
        out.push_back({ViolationKind::EnvironmentIncomplete, "state space is empty"});
        return;
    }
    if (functions.size() != num_states) {
        out.push_back({ViolationKind::EnvironmentIncomplete, "expected " + std::to_string(num_states) +
                                                                 " transition functions, found " +
                                                                 std::to_string(functions.size())});
    }
    for (std::size_t i = 0; i < functions.size(); ++i) {
        const auto& f = functions[i];
        const std::string name = "f_" + std::to_string(i);
        if (f.empty() || f.front().start != Rational(0)) {
            out.push_back({ViolationKind::EnvironmentIncomplete, name + " is undefined near 0"});
            continue;
        }
        for (std::size_t k = 0; k < f.size(); ++k) {
            if (k > 0 && !(f[k - 1].start < f[k].start))
                out.push_back({ViolationKind::EnvironmentIncomplete, name + " breakpoints are not increasing at " +
                                                                         f[k].start.str()});
            if (!(f[k].start < Rational(1)))
                out.push_back({ViolationKind::EnvironmentIncomplete, name + " breakpoint " + f[k].start.str() +
                                                                         " is not inside [0, 1)"});
            if (f[k].value >= num_states)
                out.push_back({ViolationKind::EnvironmentIncomplete, name + " names unknown state " +
                                                                         std::to_string(f[k].value)});
        }
    }
}

State evaluate(const RawPiecewise& f, const Rational& x) {
    auto it = std::upper_bound(f.begin(), f.end(), x, [](const Rational& v, const RawPiece& p) { return v < p.start; });
    return std::prev(it)->value;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : ModelError(summarize(report.violations)), report_(std::move(report)) {}

BaseMap::BaseMap(Partition partition, std::vector<AffineBranch> branches)
    : partition_(std::move(partition)), branches_(std::move(branches)) {
    image_ranges_.reserve(branches_.size());
    for (const auto& b : branches_) {
        image_ranges_.emplace_back(*partition_.endpoint_index(b.image.left()),
                                   *partition_.endpoint_index(b.image.right()));
    }
}

BaseMap BaseMap::create(const std::vector<RawCell>& cells, const std::vector<RawBranch>& raw) {
    ValidationReport report;
    if (!check_tiling(cells, report.violations)) throw ValidationError(std::move(report));
    Partition partition = partition_of(cells);
    std::vector<AffineBranch> branches;
    check_branches(partition, raw, report.violations, &branches);
    if (!report.ok()) throw ValidationError(std::move(report));
    return BaseMap(std::move(partition), std::move(branches));
}

Rational BaseMap::apply(const Rational& x) const {
    const auto& b = branches_[partition_.cell_of(x)];
    Rational y = b.apply(x);
    // Only the left endpoint of a decreasing branch lands on image.right; that
    // point is Lebesgue-null, so fold it back into the half-open image.
    if (y == b.image.right()) return b.image.left();
    return y;
}

Environment::Environment(std::size_t num_states, std::size_t num_cells, EnvironmentTable table)
    : num_states_(num_states), num_cells_(num_cells) {
    ValidationReport report;
    check_table(table, num_states, num_cells, report.violations);
    if (!report.ok()) throw ValidationError(std::move(report));
    table_.reserve(num_states * num_cells);
    for (const auto& row : table) table_.insert(table_.end(), row.begin(), row.end());
}

EnvironmentTable Environment::table() const {
    EnvironmentTable out(num_states_);
    for (State i = 0; i < num_states_; ++i)
        out[i].assign(table_.begin() + static_cast<std::ptrdiff_t>(i * num_cells_),
                      table_.begin() + static_cast<std::ptrdiff_t>((i + 1) * num_cells_));
    return out;
}

WalkModel::WalkModel(BaseMap base, Environment env) : base_(std::move(base)), env_(std::move(env)) {
    if (env_.num_cells() != base_.num_cells()) {
        ValidationReport report;
        report.violations.push_back({ViolationKind::EnvironmentIncomplete,
                                     "environment covers " + std::to_string(env_.num_cells()) + " cells, partition has " +
                                         std::to_string(base_.num_cells())});
        throw ValidationError(std::move(report));
    }
}

Rational WalkModel::product_cell_measure(CellIndex a) const {
    return base_.partition().cell(a).measure() / Rational(static_cast<long>(num_states()));
}

ValidationReport validate_model(const RawModel& raw) {
    ValidationReport report;
    if (check_tiling(raw.cells, report.violations)) {
        const Partition partition = partition_of(raw.cells);
        std::vector<AffineBranch> branches;
        check_branches(partition, raw.branches, report.violations, &branches);
        if (const auto* table = std::get_if<EnvironmentTable>(&raw.environment))
            check_table(*table, raw.num_states, partition.size(), report.violations);
    }
    if (const auto* functions = std::get_if<std::vector<RawPiecewise>>(&raw.environment))
        check_piecewise(*functions, raw.num_states, report.violations);
    if (report.ok()) report.lebesgue_invariant = preserves_lebesgue(BaseMap::create(raw.cells, raw.branches));
    return report;
}

WalkModel build_model(const RawModel& raw) {
    ValidationReport report = validate_model(raw);
    if (!report.ok()) throw ValidationError(std::move(report));
    BaseMap base = BaseMap::create(raw.cells, raw.branches);
    if (const auto* table = std::get_if<EnvironmentTable>(&raw.environment)) {
        Environment env(raw.num_states, base.num_cells(), *table);
        return WalkModel(std::move(base), std::move(env));
    }
    return refine_for_environment(base, raw.num_states, std::get<std::vector<RawPiecewise>>(raw.environment));
}

WalkModel refine_for_environment(const BaseMap& base, std::size_t num_states,
                                 const std::vector<RawPiecewise>& functions) {
    {
        ValidationReport report;
        check_piecewise(functions, num_states, report.violations);
        if (!report.ok()) throw ValidationError(std::move(report));
    }
    // Endpoints of the common refinement: the Markov partition plus every
    // point where some f_i actually changes value.
    std::set<Rational> cut_points;
    for (const auto& e : base.partition().endpoints()) cut_points.insert(e);
    for (const auto& f : functions)
        for (std::size_t k = 1; k < f.size(); ++k)
            if (f[k].value != f[k - 1].value) cut_points.insert(f[k].start);

    // A cell's image ends at the images of its endpoints, so the cut set has
    // to be closed under the branches. Eventually periodic breakpoints close
    // up; orbits with growing denominators do not.
    std::vector<Rational> pending(cut_points.begin(), cut_points.end());
    while (!pending.empty()) {
        const Rational c = pending.back();
        pending.pop_back();
        for (const auto& b : base.branches()) {
            const Interval& dom = base.partition().cell(b.domain);
            if (c < dom.left() || dom.right() < c) continue;
            if (cut_points.insert(b.apply(c)).second) pending.push_back(b.apply(c));
        }
        if (cut_points.size() > kMaxRefinementCells)
            throw RefinementNotMarkov("refined partition is not Markov: closing the breakpoints under T needs more than " +
                                      std::to_string(kMaxRefinementCells) + " cells");
    }

    const std::vector<Rational> endpoints(cut_points.begin(), cut_points.end());
    std::vector<RawCell> cells;
    std::vector<RawBranch> branches;
    for (std::size_t k = 0; k + 1 < endpoints.size(); ++k) {
        cells.push_back({endpoints[k], endpoints[k + 1]});
        const auto& parent = base.branch(base.partition().cell_of(endpoints[k]));
        branches.push_back({parent.slope, parent.intercept});
    }

    ValidationReport report;
    const Partition partition = Partition::from_endpoints(endpoints);
    check_branches(partition, branches, report.violations, nullptr);
    if (!report.ok()) {
        std::string msg = "refined partition is not Markov:";
        for (const auto& v : report.violations) msg += "\n  " + v.detail;
        throw RefinementNotMarkov(msg);
    }
    BaseMap refined = BaseMap::create(cells, branches);

    EnvironmentTable table(num_states, std::vector<State>(refined.num_cells()));
    for (State i = 0; i < num_states; ++i)
        for (CellIndex a = 0; a < refined.num_cells(); ++a)
            table[i][a] = evaluate(functions[i], refined.partition().cell(a).left());
    Environment env(num_states, refined.num_cells(), std::move(table));
    return WalkModel(std::move(refined), std::move(env));
}

Rational apply_map(const BaseMap& base, const Rational& x) { return base.apply(x); }

std::pair<Rational, State> skew_step(const WalkModel& model, const Rational& x, State i) {
    if (i >= model.num_states()) throw std::out_of_range("unknown state " + std::to_string(i));
    const CellIndex a = model.base().partition().cell_of(x);
    return {model.base().apply(x), model.env().next(i, a)};
}

Environment state_independent_env(std::size_t num_states, const std::vector<State>& g) {
    return Environment(num_states, g.size(), EnvironmentTable(num_states, g));
}

DistortionReport distortion_report(const WalkModel& model) {
    // Affine branches and their compositions have constant derivative, so
    // every ratio v'_a(x) / v'_a(y) equals 1.
    std::vector<Interval> images;
    for (const auto& b : model.base().branches())
        if (std::find(images.begin(), images.end(), b.image) == images.end()) images.push_back(b.image);
    return {Rational(1), images.size(), true};
}

bool preserves_lebesgue(const BaseMap& base) {
    std::vector<Rational> density(base.num_cells(), Rational(0));
    for (CellIndex a = 0; a < base.num_cells(); ++a) {
        const auto [first, last] = base.image_cells(a);
        const Rational weight = base.branch(a).inverse_derivative();
        for (CellIndex b = first; b < last; ++b) density[b] += weight;
    }
    return std::all_of(density.begin(), density.end(), [](const Rational& d) { return d == Rational(1); });
}

}  // namespace detwalk
