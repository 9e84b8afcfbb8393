#pragma once

#include <optional>
#include <string>
#include <vector>

#include "detwalk/model.hpp"

namespace detwalk {

// paper3    doubling map, three states, closed classes {0,1} and {0,1,2}
// twostate  doubling map, two states, every f_i leaves i on half the space
// identity2 doubling map, f_i = i on two states
// nonfull   A=[0,1/2) -> [0,1), B=[1/2,1) -> [0,1/2), one state
std::vector<std::string> builtin_names();
std::optional<RawModel> builtin_raw(const std::string& name);
WalkModel builtin_model(const std::string& name);

// Doubling map x -> 2x mod 1 on n equal cells (n even), no environment.
std::vector<RawCell> uniform_cells(std::size_t n);
std::vector<RawBranch> doubling_branches(std::size_t n);

}  // namespace detwalk
