#include "detwalk/builtins.hpp"

namespace detwalk {

std::vector<RawCell> uniform_cells(std::size_t n) {
    std::vector<RawCell> cells;
    const long d = static_cast<long>(n);
    for (long k = 0; k < d; ++k) cells.push_back({Rational(k, d), Rational(k + 1, d)});
    return cells;
}

std::vector<RawBranch> doubling_branches(std::size_t n) {
    if (n == 0 || n % 2 != 0) throw std::invalid_argument("doubling map needs an even number of equal cells");
    std::vector<RawBranch> branches;
    for (std::size_t k = 0; k < n; ++k) branches.push_back({Rational(2), Rational(k < n / 2 ? 0 : -1)});
    return branches;
}

std::vector<std::string> builtin_names() { return {"paper3", "twostate", "identity2", "nonfull"}; }

std::optional<RawModel> builtin_raw(const std::string& name) {
    RawModel raw;
    raw.cells = uniform_cells(2);
    raw.branches = doubling_branches(2);
    if (name == "paper3") {
        // Given on the halves; the transition functions change value on the
        // quarters, so building this model refines the partition.
        const Rational q1(1, 4), q2(1, 2), q3(3, 4);
        raw.num_states = 3;
        raw.environment = std::vector<RawPiecewise>{
            {{Rational(0), 2}, {q1, 1}, {q3, 0}},
            {{Rational(0), 1}, {q1, 0}, {q2, 2}, {q3, 1}},
            {{Rational(0), 0}, {q1, 2}, {q2, 0}, {q3, 2}},
        };
        return raw;
    }
    if (name == "twostate") {
        raw.num_states = 2;
        raw.environment = EnvironmentTable{{1, 0}, {0, 1}};
        return raw;
    }
    if (name == "identity2") {
        raw.num_states = 2;
        raw.environment = EnvironmentTable{{0, 0}, {1, 1}};
        return raw;
    }
    if (name == "nonfull") {
        raw.branches = {{Rational(2), Rational(0)}, {Rational(1), Rational(-1, 2)}};
        raw.num_states = 1;
        raw.environment = EnvironmentTable{{0, 0}};
        return raw;
    }
    return std::nullopt;
}

WalkModel builtin_model(const std::string& name) {
    auto raw = builtin_raw(name);
    if (!raw) throw std::invalid_argument("unknown builtin model '" + name + "'");
    return build_model(*raw);
}

}  // namespace detwalk
