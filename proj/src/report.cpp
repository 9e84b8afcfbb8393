#include "detwalk/report.hpp"

#include <cstdio>
#include <sstream>

#include "detwalk/rng.hpp"

namespace detwalk {

using nlohmann::json;

json header_json(const ReportHeader& header) {
    json h{{"tool", kToolVersion}, {"command", header.command}, {"model", header.model_source},
           {"model_hash", header.model_hash}};
    if (header.seed) h["seed"] = *header.seed;
    if (header.uses_prng) h["prng"] = kPrngName;
    return h;
}

void write_comment_header(std::ostream& os, const ReportHeader& header) {
    os << "# tool: " << kToolVersion << '\n'
       << "# command: " << header.command << '\n'
       << "# model: " << header.model_source << '\n'
       << "# model_hash: " << header.model_hash << '\n';
    if (header.seed) os << "# seed: " << *header.seed << '\n';
    if (header.uses_prng) os << "# prng: " << kPrngName << '\n';
}

json rational_json(const Rational& r) { return {{"exact", r.str()}, {"decimal", r.decimal(12)}}; }

std::string rational_text(const Rational& r) {
    if (r.is_integer()) return r.str();
    return r.str() + " (" + r.decimal(12) + ")";
}

std::string product_cell_text(ProductCell p) {
    return "(" + std::to_string(p.cell) + "," + std::to_string(p.state) + ")";
}

std::string state_set_text(const std::vector<State>& states) {
    std::string s = "{";
    for (std::size_t k = 0; k < states.size(); ++k) s += (k ? "," : "") + std::to_string(states[k]);
    return s + "}";
}

std::string class_members_text(const TransitionGraph& graph, const CommClass& cls) {
    std::string s = "{";
    for (std::size_t k = 0; k < cls.members.size(); ++k)
        s += (k ? " " : "") + product_cell_text(graph.product_cell(cls.members[k]));
    return s + "}";
}

json class_json(const TransitionGraph& graph, const CommClass& cls) {
    json members = json::array();
    for (NodeIndex v : cls.members) {
        const auto p = graph.product_cell(v);
        members.push_back({{"cell", p.cell}, {"state", p.state}});
    }
    return {{"members", members},
            {"closed", cls.closed},
            {"intercommunicating", cls.intercommunicating},
            {"projection", cls.projection}};
}

std::string fixed_decimal(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

}  // namespace detwalk
