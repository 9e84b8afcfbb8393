#include "detwalk/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "detwalk/builtins.hpp"

namespace detwalk {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ModelFileError(msg); }

Rational rational_field(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where + ": rationals must be quoted \"p/q\" strings");
    try {
        return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
        fail(where + ": " + e.what());
    }
}

State state_field(const json& j, const std::string& where) {
    if (!j.is_number_unsigned()) fail(where + ": state labels must be non-negative integers");
    return j.get<State>();
}

const json& member(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) fail(std::string("missing section '") + key + "'");
    return *it;
}

std::vector<RawCell> parse_partition(const json& p) {
    if (!p.is_array() || p.empty()) fail("partition: expected a non-empty list");
    std::vector<RawCell> cells;
    if (p.front().is_array()) {
        // Explicit cells [[l, r], ...].
        for (std::size_t k = 0; k < p.size(); ++k) {
            const std::string where = "partition[" + std::to_string(k) + "]";
            if (!p[k].is_array() || p[k].size() != 2) fail(where + ": expected [left, right]");
            cells.push_back({rational_field(p[k][0], where), rational_field(p[k][1], where)});
        }
        return cells;
    }
    std::vector<Rational> endpoints;
    for (std::size_t k = 0; k < p.size(); ++k) endpoints.push_back(rational_field(p[k], "partition[" + std::to_string(k) + "]"));
    if (endpoints.size() < 2) fail("partition: need at least the endpoints 0 and 1");
    for (std::size_t k = 0; k + 1 < endpoints.size(); ++k) cells.push_back({endpoints[k], endpoints[k + 1]});
    return cells;
}

std::vector<RawBranch> parse_map(const json& m) {
    if (!m.is_array()) fail("map: expected a list of {slope, intercept}");
    std::vector<RawBranch> branches;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const std::string where = "map[" + std::to_string(k) + "]";
        if (!m[k].is_object()) fail(where + ": expected {slope, intercept}");
        if (!m[k].contains("slope") || !m[k].contains("intercept")) fail(where + ": needs slope and intercept");
        branches.push_back({rational_field(m[k]["slope"], where + ".slope"),
                            rational_field(m[k]["intercept"], where + ".intercept")});
    }
    return branches;
}

void parse_environment(const json& e, RawModel& raw) {
    if (!e.is_array()) fail("environment: expected one entry per state");
    bool piecewise = false;
    for (const auto& row : e) {
        if (!row.is_array()) fail("environment: each state needs a list");
        if (!row.empty() && row.front().is_array()) piecewise = true;
    }
    if (!piecewise) {
        EnvironmentTable table;
        for (std::size_t i = 0; i < e.size(); ++i) {
            std::vector<State> row;
            for (std::size_t a = 0; a < e[i].size(); ++a)
                row.push_back(state_field(e[i][a], "environment[" + std::to_string(i) + "][" + std::to_string(a) + "]"));
            table.push_back(std::move(row));
        }
        raw.environment = std::move(table);
        return;
    }
    std::vector<RawPiecewise> functions;
    for (std::size_t i = 0; i < e.size(); ++i) {
        RawPiecewise f;
        for (std::size_t k = 0; k < e[i].size(); ++k) {
            const std::string where = "environment[" + std::to_string(i) + "][" + std::to_string(k) + "]";
            const auto& piece = e[i][k];
            if (!piece.is_array() || piece.size() != 2) fail(where + ": expected [breakpoint, state]");
            f.push_back({rational_field(piece[0], where), state_field(piece[1], where)});
        }
        functions.push_back(std::move(f));
    }
    raw.environment = std::move(functions);
}

}  // namespace

RawModel parse_model(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        fail(std::string("syntax error: ") + e.what());
    }
    if (!doc.is_object()) fail("model document must be an object");
    RawModel raw;
    raw.num_states = state_field(member(doc, "states"), "states");
    raw.cells = parse_partition(member(doc, "partition"));
    raw.branches = parse_map(member(doc, "map"));
    parse_environment(member(doc, "environment"), raw);
    return raw;
}

RawModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

RawModel resolve_model_source(const std::string& source) {
    if (auto raw = builtin_raw(source)) return *raw;
    return load_model_file(source);
}

json model_to_json(const WalkModel& model) {
    json doc;
    doc["states"] = model.num_states();
    json endpoints = json::array();
    for (const auto& e : model.base().partition().endpoints()) endpoints.push_back(e.str());
    doc["partition"] = endpoints;
    json branches = json::array();
    for (const auto& b : model.base().branches())
        branches.push_back({{"slope", b.slope.str()}, {"intercept", b.intercept.str()}});
    doc["map"] = branches;
    doc["environment"] = model.env().table();
    return doc;
}

std::string model_to_text(const WalkModel& model) { return model_to_json(model).dump(2) + "\n"; }

std::string model_hash(const WalkModel& model) {
    const std::string canonical = model_to_json(model).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace detwalk
