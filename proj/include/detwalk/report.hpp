#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "detwalk/model.hpp"
#include "detwalk/simulate.hpp"
#include "detwalk/symbolic.hpp"

namespace detwalk {

inline constexpr const char* kToolVersion = "detwalk 1.0.0";

enum class OutputFormat { Text, Csv, Structured };

struct ReportHeader {
    std::string command;
    std::string model_source;
    std::string model_hash;
    std::optional<Seed> seed;
    bool uses_prng = false;
};

nlohmann::json header_json(const ReportHeader& header);
// "# key: value" lines; shared by text and CSV output.
void write_comment_header(std::ostream& os, const ReportHeader& header);

// {"exact": "p/q", "decimal": "..."}
nlohmann::json rational_json(const Rational& r);
// "p/q (decimal)"
std::string rational_text(const Rational& r);

std::string product_cell_text(ProductCell p);
std::string state_set_text(const std::vector<State>& states);
std::string class_members_text(const TransitionGraph& graph, const CommClass& cls);
nlohmann::json class_json(const TransitionGraph& graph, const CommClass& cls);

std::string fixed_decimal(double value, int digits = 6);

}  // namespace detwalk
