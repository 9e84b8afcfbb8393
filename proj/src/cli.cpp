#include "detwalk/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "detwalk/builtins.hpp"
#include "detwalk/model_io.hpp"
#include "detwalk/report.hpp"
#include "detwalk/simulate.hpp"
#include "detwalk/spectral.hpp"
#include "detwalk/symbolic.hpp"

namespace detwalk {

using nlohmann::json;

namespace {

struct Options {
    std::string command;
    std::string model;
    std::optional<State> state;
    std::optional<std::size_t> depth;
    std::optional<std::size_t> steps;
    std::size_t replicas = 1000;
    std::size_t horizon = 10000;
    Seed seed = 0;
    OutputFormat format = OutputFormat::Text;
    std::string trace_path;
};

class CommandError : public std::runtime_error {
public:
    CommandError(int code, const std::string& category, const std::string& msg)
        : std::runtime_error(msg), code(code), category(category) {}
    int code;
    std::string category;
};

WalkModel load(const Options& opt) {
    RawModel raw = resolve_model_source(opt.model);
    return build_model(raw);
}

void require_state(const WalkModel& model, State s) {
    if (s >= model.num_states())
        throw CommandError(kExitUsage, "BadArgument", "state " + std::to_string(s) + " is not in the model");
}

std::string interval_list(const Partition& p) {
    std::string s;
    for (std::size_t k = 0; k < p.size(); ++k) s += (k ? " " : "") + p.cell(k).str();
    return s;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& opt, std::ostream& out) {
    const RawModel raw = resolve_model_source(opt.model);
    ValidationReport report = validate_model(raw);
    std::optional<WalkModel> model;
    std::string refinement_error;
    if (report.ok()) {
        try {
            model = build_model(raw);
        } catch (const RefinementNotMarkov& e) {
            refinement_error = e.what();
        }
    }
    const bool ok = report.ok() && model.has_value();
    ReportHeader header{"validate", opt.model, model ? model_hash(*model) : "-", std::nullopt, false};

    std::optional<DistortionReport> distortion;
    if (model) distortion = distortion_report(*model);

    switch (opt.format) {
        case OutputFormat::Structured: {
            json doc{{"header", header_json(header)}, {"ok", ok}};
            json violations = json::array();
            for (const auto& v : report.violations) violations.push_back({{"kind", to_string(v.kind)}, {"detail", v.detail}});
            if (!refinement_error.empty()) violations.push_back({{"kind", "RefinementNotMarkov"}, {"detail", refinement_error}});
            doc["violations"] = violations;
            if (report.lebesgue_invariant) doc["lebesgue_invariant"] = *report.lebesgue_invariant;
            if (model) {
                doc["cells"] = model->num_cells();
                doc["states"] = model->num_states();
                doc["product_cells"] = model->num_product_cells();
                doc["model"] = model_to_json(*model);
                doc["distortion"] = {{"distortion_constant", rational_json(distortion->distortion_constant)},
                                     {"finite_images_count", distortion->finite_images_count},
                                     {"strong_distortion", distortion->strong_distortion}};
            }
            out << doc.dump(2) << '\n';
            break;
        }
        case OutputFormat::Csv: {
            write_comment_header(out, header);
            out << "kind,detail\n";
            for (const auto& v : report.violations) out << to_string(v.kind) << ",\"" << v.detail << "\"\n";
            if (!refinement_error.empty()) out << "RefinementNotMarkov,\"" << refinement_error << "\"\n";
            break;
        }
        case OutputFormat::Text: {
            write_comment_header(out, header);
            out << "valid: " << (ok ? "true" : "false") << '\n';
            for (const auto& v : report.violations) out << "violation: " << to_string(v.kind) << ": " << v.detail << '\n';
            if (!refinement_error.empty()) out << "violation: RefinementNotMarkov: " << refinement_error << '\n';
            if (report.lebesgue_invariant)
                out << "lebesgue_invariant: " << (*report.lebesgue_invariant ? "true" : "false") << " (informational)\n";
            if (model) {
                out << "cells: " << model->num_cells() << '\n'
                    << "states: " << model->num_states() << '\n'
                    << "product_cells: " << model->num_product_cells() << '\n'
                    << "partition: " << interval_list(model->base().partition()) << '\n'
                    << "distortion_constant: " << distortion->distortion_constant << '\n'
                    << "finite_images: " << distortion->finite_images_count << '\n'
                    << "strong_distortion: " << (distortion->strong_distortion ? "true" : "false") << '\n';
            }
            break;
        }
    }
    return ok ? kExitOk : kExitValidationFailed;
}

int cmd_graph(const Options& opt, std::ostream& out) {
    const WalkModel model = load(opt);
    const auto graph = build_product_graph(model);
    ReportHeader header{"graph", opt.model, model_hash(model), std::nullopt, false};
    switch (opt.format) {
        case OutputFormat::Structured: {
            json edges = json::array();
            for (NodeIndex v = 0; v < graph.num_nodes(); ++v)
                for (NodeIndex w : graph.successors(v)) {
                    const auto a = graph.product_cell(v), b = graph.product_cell(w);
                    edges.push_back({a.cell, a.state, b.cell, b.state});
                }
            out << json{{"header", header_json(header)},
                        {"nodes", graph.num_nodes()},
                        {"edge_count", graph.num_edges()},
                        {"edges", edges}}
                       .dump(2)
                << '\n';
            break;
        }
        case OutputFormat::Csv:
            write_comment_header(out, header);
            out << "from_cell,from_state,to_cell,to_state\n";
            for (NodeIndex v = 0; v < graph.num_nodes(); ++v)
                for (NodeIndex w : graph.successors(v)) {
                    const auto a = graph.product_cell(v), b = graph.product_cell(w);
                    out << a.cell << ',' << a.state << ',' << b.cell << ',' << b.state << '\n';
                }
            break;
        case OutputFormat::Text:
            write_comment_header(out, header);
            out << "# nodes: " << graph.num_nodes() << '\n' << "# edges: " << graph.num_edges() << '\n';
            out << edge_list(graph);
            break;
    }
    return kExitOk;
}

int cmd_classes(const Options& opt, std::ostream& out) {
    const WalkModel model = load(opt);
    const auto graph = build_product_graph(model);
    const auto classes = communication_classes(graph);
    const auto closed = std::count_if(classes.begin(), classes.end(), [](const CommClass& c) { return c.closed; });
    ReportHeader header{"classes", opt.model, model_hash(model), std::nullopt, false};
    switch (opt.format) {
        case OutputFormat::Structured: {
            json list = json::array();
            for (const auto& c : classes) list.push_back(class_json(graph, c));
            out << json{{"header", header_json(header)},
                        {"nodes", graph.num_nodes()},
                        {"closed_count", closed},
                        {"classes", list}}
                       .dump(2)
                << '\n';
            break;
        }
        case OutputFormat::Csv:
            write_comment_header(out, header);
            out << "class,cell,state,closed,intercommunicating,projection\n";
            for (std::size_t k = 0; k < classes.size(); ++k) {
                std::string proj;
                for (std::size_t s = 0; s < classes[k].projection.size(); ++s)
                    proj += (s ? ";" : "") + std::to_string(classes[k].projection[s]);
                for (NodeIndex v : classes[k].members) {
                    const auto p = graph.product_cell(v);
                    out << k << ',' << p.cell << ',' << p.state << ',' << (classes[k].closed ? "true" : "false") << ','
                        << (classes[k].intercommunicating ? "true" : "false") << ',' << proj << '\n';
                }
            }
            break;
        case OutputFormat::Text:
            write_comment_header(out, header);
            out << "product_cells: " << graph.num_nodes() << '\n'
                << "classes: " << classes.size() << '\n'
                << "closed_classes: " << closed << '\n';
            for (std::size_t k = 0; k < classes.size(); ++k) {
                const auto& c = classes[k];
                out << "class " << k << ": closed=" << (c.closed ? "true" : "false")
                    << " intercommunicating=" << (c.intercommunicating ? "true" : "false")
                    << " size=" << c.members.size() << " projection=" << state_set_text(c.projection) << '\n'
                    << "  members: " << class_members_text(graph, c) << '\n';
            }
            break;
    }
    return kExitOk;
}

std::vector<State> missing_states(const CommClass& c, std::size_t num_states) {
    std::vector<State> out;
    for (State s = 0; s < num_states; ++s)
        if (!std::binary_search(c.projection.begin(), c.projection.end(), s)) out.push_back(s);
    return out;
}

std::string path_text(const std::vector<ProductCell>& path) {
    std::string s;
    for (std::size_t k = 0; k < path.size(); ++k) s += (k ? " -> " : "") + product_cell_text(path[k]);
    return s;
}

int cmd_verdict(const Options& opt, std::ostream& out) {
    const WalkModel model = load(opt);
    const auto graph = build_product_graph(model);
    const auto classes = communication_classes(graph);
    const Verdict transitivity = transitivity_verdict(graph, classes);

    std::vector<State> states;
    if (opt.state) {
        require_state(model, *opt.state);
        states.push_back(*opt.state);
    } else {
        for (State s = 0; s < model.num_states(); ++s) states.push_back(s);
    }
    std::vector<Verdict> recurrence;
    for (State s : states) recurrence.push_back(recurrence_verdict(graph, classes, s));

    std::optional<BruteForceResult> oracle;
    if (opt.depth) {
        try {
            oracle = brute_force_transitivity(model, *opt.depth);
        } catch (const DepthTooLarge& e) {
            throw CommandError(kExitBudgetExceeded, "BudgetExceeded", e.what());
        }
    }
    const bool lebesgue = preserves_lebesgue(model.base());
    const std::string hypothesis =
        "transitivity criterion assumes an ergodic base map (not verified); lebesgue_invariant=" +
        std::string(lebesgue ? "true" : "false");

    ReportHeader header{"verdict", opt.model, model_hash(model), std::nullopt, false};
    switch (opt.format) {
        case OutputFormat::Structured: {
            json doc{{"header", header_json(header)}, {"hypothesis_note", hypothesis}};
            json t{{"verdict", to_string(transitivity.kind)}};
            if (transitivity.witness_class) {
                t["witness"] = class_json(graph, *transitivity.witness_class);
                t["missing_states"] = missing_states(*transitivity.witness_class, model.num_states());
            }
            doc["transitivity"] = t;
            json rec = json::array();
            for (std::size_t k = 0; k < states.size(); ++k) {
                json r{{"state", states[k]}, {"verdict", to_string(recurrence[k].kind)}};
                if (!recurrence[k].witness_path.empty()) {
                    json path = json::array();
                    for (const auto& p : recurrence[k].witness_path) path.push_back({p.cell, p.state});
                    r["witness_path"] = path;
                }
                rec.push_back(r);
            }
            doc["recurrence"] = rec;
            if (oracle) {
                json o{{"outcome", to_string(oracle->outcome)}, {"depth", oracle->depth}, {"cylinders", oracle->cylinders}};
                if (oracle->min_visited_all_mass) o["min_visited_all_mass"] = rational_json(*oracle->min_visited_all_mass);
                if (oracle->trap_start) {
                    o["trap_start"] = {oracle->trap_start->cell, oracle->trap_start->state};
                    o["trap_missing_states"] = oracle->trap_missing_states;
                }
                doc["oracle"] = o;
            }
            out << doc.dump(2) << '\n';
            break;
        }
        case OutputFormat::Csv:
            write_comment_header(out, header);
            out << "subject,verdict,witness\n";
            out << "transitivity," << to_string(transitivity.kind) << ','
                << (transitivity.witness_class ? class_members_text(graph, *transitivity.witness_class) : "") << '\n';
            for (std::size_t k = 0; k < states.size(); ++k)
                out << "state " << states[k] << ',' << to_string(recurrence[k].kind) << ','
                    << path_text(recurrence[k].witness_path) << '\n';
            if (oracle) out << "oracle depth " << oracle->depth << ',' << to_string(oracle->outcome) << ",\n";
            break;
        case OutputFormat::Text:
            write_comment_header(out, header);
            out << "transitivity: " << to_string(transitivity.kind) << '\n';
            if (transitivity.witness_class) {
                const auto& w = *transitivity.witness_class;
                out << "  witness_class: " << class_members_text(graph, w) << '\n'
                    << "  witness_projection: " << state_set_text(w.projection) << '\n'
                    << "  missing_states: " << state_set_text(missing_states(w, model.num_states())) << '\n';
            }
            for (std::size_t k = 0; k < states.size(); ++k) {
                out << "state " << states[k] << ": " << to_string(recurrence[k].kind) << '\n';
                if (!recurrence[k].witness_path.empty())
                    out << "  witness_path: " << path_text(recurrence[k].witness_path) << '\n';
            }
            if (oracle) {
                out << "oracle: " << to_string(oracle->outcome) << " (depth " << oracle->depth << ", "
                    << oracle->cylinders << " cylinders)\n";
                if (oracle->min_visited_all_mass)
                    out << "  min_visited_all_mass: " << rational_text(*oracle->min_visited_all_mass) << '\n';
                if (oracle->trap_start)
                    out << "  trap_start: " << product_cell_text(*oracle->trap_start)
                        << " missing " << state_set_text(oracle->trap_missing_states) << '\n';
            }
            out << "note: " << hypothesis << '\n';
            break;
    }
    return kExitOk;
}

int cmd_occupation(const Options& opt, std::ostream& out) {
    const WalkModel model = load(opt);
    const auto graph = build_product_graph(model);
    const auto occ = occupation_distribution(model);
    ReportHeader header{"occupation", opt.model, model_hash(model), std::nullopt, false};
    const std::string warning = "product partition is not irreducible; occupation is reported per closed class";
    switch (opt.format) {
        case OutputFormat::Structured: {
            json doc{{"header", header_json(header)}, {"irreducible", occ.irreducible}};
            if (!occ.irreducible) doc["warning"] = warning;
            json list = json::array();
            for (const auto& c : occ.classes) {
                json pi = json::array();
                for (const auto& p : c.pi) pi.push_back(rational_json(p));
                json density = json::array();
                for (NodeIndex v : c.cls.members) {
                    const auto p = graph.product_cell(v);
                    density.push_back({{"cell", p.cell}, {"state", p.state}, {"h", rational_json(c.density.values[v])}});
                }
                json entry = class_json(graph, c.cls);
                entry["pi"] = pi;
                entry["density"] = density;
                list.push_back(entry);
            }
            doc["classes"] = list;
            out << doc.dump(2) << '\n';
            break;
        }
        case OutputFormat::Csv:
            write_comment_header(out, header);
            out << "class,state,pi_exact,pi_decimal\n";
            for (std::size_t k = 0; k < occ.classes.size(); ++k)
                for (State s = 0; s < model.num_states(); ++s)
                    out << k << ',' << s << ',' << occ.classes[k].pi[s].str() << ',' << occ.classes[k].pi[s].decimal(12)
                        << '\n';
            break;
        case OutputFormat::Text:
            write_comment_header(out, header);
            out << "irreducible: " << (occ.irreducible ? "true" : "false") << '\n';
            if (!occ.irreducible) out << "warning: " << warning << '\n';
            for (std::size_t k = 0; k < occ.classes.size(); ++k) {
                const auto& c = occ.classes[k];
                out << "closed class " << k << ": " << class_members_text(graph, c.cls) << '\n';
                for (State s = 0; s < model.num_states(); ++s)
                    out << "  pi_" << s << " = " << rational_text(c.pi[s]) << '\n';
            }
            break;
    }
    return kExitOk;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
    const WalkModel model = load(opt);
    const State start = opt.state.value_or(0);
    require_state(model, start);
    const std::size_t steps = opt.steps.value_or(10000);
    if (steps == 0 || opt.replicas == 0 || opt.horizon == 0)
        throw CommandError(kExitUsage, "BadArgument", "steps, replicas and horizon must be positive");

    const WalkResult walk = run_walk(model, start, steps, opt.seed);
    if (!opt.trace_path.empty()) {
        std::ofstream trace(opt.trace_path);
        if (!trace) throw CommandError(kExitUsage, "BadArgument", "cannot write trace to '" + opt.trace_path + "'");
        write_trace_csv(trace, walk.trace);
    }
    const MonteCarloReport mc = monte_carlo_verdicts(model, opt.replicas, opt.horizon, opt.seed);
    const std::size_t ns = model.num_states();
    const auto walk_dist = walk.occupancy.distribution();

    ReportHeader header{"simulate", opt.model, model_hash(model), opt.seed, true};
    switch (opt.format) {
        case OutputFormat::Structured: {
            json doc{{"header", header_json(header)}};
            doc["walk"] = {{"start_state", start},
                           {"steps", steps},
                           {"counts", walk.occupancy.counts},
                           {"empirical", walk_dist}};
            json pairs = json::array();
            for (State i = 0; i < ns; ++i)
                for (State j = 0; j < ns; ++j)
                    pairs.push_back({{"from", i},
                                     {"to", j},
                                     {"hits", mc.hits[i][j]},
                                     {"fraction", mc.hit_fraction(i, j)},
                                     {"exact_probability", rational_json(mc.exact_hit_probability[i][j])},
                                     {"symbolic_almost_sure", static_cast<bool>(mc.symbolic_almost_sure[i][j])},
                                     {"consistent", mc.consistent(i, j)}});
            json occupancy = json::array();
            for (State i = 0; i < ns; ++i)
                occupancy.push_back({{"start_state", i}, {"empirical", mc.occupancy[i].distribution()}});
            doc["monte_carlo"] = {{"replicas", mc.replicas},
                                  {"horizon", mc.horizon},
                                  {"pairs", pairs},
                                  {"occupancy", occupancy},
                                  {"all_consistent", mc.all_consistent()}};
            out << doc.dump(2) << '\n';
            break;
        }
        case OutputFormat::Csv:
            write_comment_header(out, header);
            out << "from,to,hits,replicas,fraction,exact_probability,symbolic_almost_sure,consistent\n";
            for (State i = 0; i < ns; ++i)
                for (State j = 0; j < ns; ++j)
                    out << i << ',' << j << ',' << mc.hits[i][j] << ',' << mc.replicas << ','
                        << fixed_decimal(mc.hit_fraction(i, j)) << ',' << mc.exact_hit_probability[i][j].str() << ','
                        << (mc.symbolic_almost_sure[i][j] ? "true" : "false") << ','
                        << (mc.consistent(i, j) ? "true" : "false") << '\n';
            break;
        case OutputFormat::Text:
            write_comment_header(out, header);
            out << "walk: start_state=" << start << " steps=" << steps << '\n';
            for (State s = 0; s < ns; ++s)
                out << "  occupancy_" << s << ": " << walk.occupancy.counts[s] << " (" << fixed_decimal(walk_dist[s])
                    << ")\n";
            out << "monte_carlo: replicas=" << mc.replicas << " horizon=" << mc.horizon << '\n';
            out << "  from to  fraction  exact                 a.s.  consistent\n";
            for (State i = 0; i < ns; ++i)
                for (State j = 0; j < ns; ++j)
                    out << "  " << i << "    " << j << "   " << fixed_decimal(mc.hit_fraction(i, j)) << "  "
                        << rational_text(mc.exact_hit_probability[i][j]) << "  "
                        << (mc.symbolic_almost_sure[i][j] ? "yes" : "no") << "  "
                        << (mc.consistent(i, j) ? "yes" : "NO") << '\n';
            for (State i = 0; i < ns; ++i) out << "  return_" << i << ": " << fixed_decimal(mc.return_fraction(i)) << '\n';
            for (State i = 0; i < ns; ++i) {
                const auto d = mc.occupancy[i].distribution();
                out << "  occupancy_from_" << i << ":";
                for (double x : d) out << ' ' << fixed_decimal(x);
                out << '\n';
            }
            out << "agreement: " << (mc.all_consistent() ? "PASS" : "FAIL") << '\n';
            break;
    }
    return kExitOk;
}

int cmd_compare(const Options& opt, std::ostream& out) {
    const WalkModel model = load(opt);
    const std::size_t steps = opt.steps.value_or(1000000);
    if (steps == 0) throw CommandError(kExitUsage, "BadArgument", "steps must be positive");
    const auto graph = build_product_graph(model);
    const auto rows = compare_occupation(model, steps, opt.seed);
    const auto occ = occupation_distribution(model);
    const bool all_pass = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
    ReportHeader header{"compare", opt.model, model_hash(model), opt.seed, true};
    const std::size_t ns = model.num_states();
    switch (opt.format) {
        case OutputFormat::Structured: {
            json list = json::array();
            for (const auto& r : rows) {
                json pi = json::array();
                for (const auto& p : r.pi) pi.push_back(rational_json(p));
                list.push_back({{"class", r.class_index},
                                {"members", class_json(graph, occ.classes[r.class_index].cls)["members"]},
                                {"start", {r.start.cell, r.start.state}},
                                {"pi", pi},
                                {"empirical", r.empirical},
                                {"max_abs_gap", r.max_abs_gap},
                                {"pass", r.pass}});
            }
            out << json{{"header", header_json(header)},
                        {"steps", steps},
                        {"tolerance", kOccupationTolerance},
                        {"irreducible", occ.irreducible},
                        {"classes", list},
                        {"pass", all_pass}}
                       .dump(2)
                << '\n';
            break;
        }
        case OutputFormat::Csv:
            write_comment_header(out, header);
            out << "class,state,pi_exact,pi_decimal,empirical,abs_gap,pass\n";
            for (const auto& r : rows)
                for (State s = 0; s < ns; ++s)
                    out << r.class_index << ',' << s << ',' << r.pi[s].str() << ',' << r.pi[s].decimal(12) << ','
                        << fixed_decimal(r.empirical[s]) << ','
                        << fixed_decimal(std::abs(r.empirical[s] - r.pi[s].to_double())) << ','
                        << (r.pass ? "true" : "false") << '\n';
            break;
        case OutputFormat::Text:
            write_comment_header(out, header);
            out << "steps: " << steps << '\n' << "tolerance: " << kOccupationTolerance << '\n';
            for (const auto& r : rows) {
                out << "closed class " << r.class_index << " (start " << product_cell_text(r.start) << ")\n"
                    << "  state  spectral               empirical  gap\n";
                for (State s = 0; s < ns; ++s)
                    out << "  " << s << "      " << rational_text(r.pi[s]) << "  " << fixed_decimal(r.empirical[s])
                        << "  " << fixed_decimal(std::abs(r.empirical[s] - r.pi[s].to_double())) << '\n';
                out << "  max_abs_gap: " << fixed_decimal(r.max_abs_gap) << ' ' << (r.pass ? "PASS" : "FAIL") << '\n';
            }
            out << "result: " << (all_pass ? "PASS" : "FAIL") << '\n';
            break;
    }
    return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deterministic walks driven by piecewise-affine Markov interval maps", "detwalk"};
    Options opt;
    const std::vector<std::string> commands{"validate", "graph", "classes", "verdict", "occupation", "simulate", "compare"};
    const std::map<std::string, OutputFormat> formats{
        {"text", OutputFormat::Text}, {"csv", OutputFormat::Csv}, {"structured", OutputFormat::Structured}};

    app.add_option("command", opt.command, "validate | graph | classes | verdict | occupation | simulate | compare")
        ->required()
        ->check(CLI::IsMember(commands));
    app.add_option("--model", opt.model, "model file path or builtin name (" +
                                             [] {
                                                 std::string s;
                                                 for (const auto& n : builtin_names()) s += (s.empty() ? "" : ", ") + n;
                                                 return s;
                                             }() +
                                             ")")
        ->required();
    app.add_option("--state", opt.state, "start state (simulate) or single state to report (verdict)");
    app.add_option("--depth", opt.depth, "run the exhaustive cylinder oracle to this depth (verdict)");
    app.add_option("--steps", opt.steps, "walk length (simulate: 10000, compare: 1000000)");
    app.add_option("--replicas", opt.replicas, "Monte Carlo replicas")->capture_default_str();
    app.add_option("--horizon", opt.horizon, "Monte Carlo horizon")->capture_default_str();
    app.add_option("--seed", opt.seed, "64-bit seed")->capture_default_str();
    app.add_option("--format", opt.format, "text | csv | structured")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description(""))
        ->type_name("FORMAT")
        ->default_str("text");
    app.add_option("--trace", opt.trace_path, "write the simulated walk as CSV (simulate)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (opt.command == "validate") return cmd_validate(opt, out);
        if (opt.command == "graph") return cmd_graph(opt, out);
        if (opt.command == "classes") return cmd_classes(opt, out);
        if (opt.command == "verdict") return cmd_verdict(opt, out);
        if (opt.command == "occupation") return cmd_occupation(opt, out);
        if (opt.command == "simulate") return cmd_simulate(opt, out);
        if (opt.command == "compare") return cmd_compare(opt, out);
    } catch (const CommandError& e) {
        err << "error: " << e.category << ": " << e.what() << '\n';
        return e.code;
    } catch (const ModelFileError& e) {
        err << "error: BadModelFile: " << e.what() << '\n';
        return kExitBadModelFile;
    } catch (const ModelError& e) {
        err << "error: ValidationFailed: " << e.what() << '\n';
        return kExitValidationFailed;
    } catch (const std::exception& e) {
        err << "error: Internal: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}

}  // namespace detwalk
