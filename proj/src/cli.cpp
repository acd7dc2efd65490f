#include "rtrace/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "rtrace/classical.hpp"
#include "rtrace/command.hpp"
#include "rtrace/kinematics.hpp"
#include "rtrace/library.hpp"
#include "rtrace/rules.hpp"
#include "rtrace/spec_lang.hpp"

namespace rtrace::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct NamedStructure {
    std::string id;
    TraceStructure structure;
    std::optional<int> horizon;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// An input names either a component file on disk or a built-in component.
std::vector<ComponentDef> resolve_input(const std::string& input) {
    if (std::filesystem::exists(input)) {
        return parse_components(read_file(input));
    }
    if (auto builtin = find_builtin(input)) {
        return {*builtin};
    }
    throw std::runtime_error("input '" + input +
                             "' is neither a file nor a built-in component (see 'library')");
}

NamedStructure enumerate_component(const ComponentDef& def, int depth) {
    EnumeratedStructure e = enumerate(def.spec, EnumerationBound{depth});
    // The component's declared alphabets are its interface; widen the
    // command alphabets to them.
    TraceStructure widened(def.inputs, def.outputs, e.structure.traces());
    return NamedStructure{def.name, std::move(widened), e.horizon};
}

std::vector<NamedStructure> resolve_structures(const std::vector<std::string>& inputs,
                                               int depth) {
    std::vector<NamedStructure> out;
    for (const std::string& input : inputs) {
        for (const ComponentDef& def : resolve_input(input)) {
            out.push_back(enumerate_component(def, depth));
        }
    }
    return out;
}

std::vector<RuleId> parse_rule_list(const std::string& text) {
    std::vector<RuleId> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "di") {
            for (RuleId r : di_rules()) out.push_back(r);
            continue;
        }
        auto rule = rule_from_name(item);
        if (!rule.has_value()) {
            throw CLI::ValidationError("--rules", "unknown rule '" + item + "'");
        }
        out.push_back(*rule);
    }
    if (out.empty()) throw CLI::ValidationError("--rules", "empty rule list");
    return out;
}

SymbolSet parse_symbol_list(const std::string& text) {
    SymbolSet out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.insert(Symbol(item));
    }
    return out;
}

std::string symbol_set_text(const SymbolSet& set) {
    std::string out = "{";
    bool first = true;
    for (const Symbol& s : set) {
        if (!first) out += ", ";
        first = false;
        out += s.name();
    }
    return out + "}";
}

ordered_json symbol_set_json(const SymbolSet& set) {
    ordered_json arr = ordered_json::array();
    for (const Symbol& s : set) arr.push_back(s.name());
    return arr;
}

ordered_json trace_set_json(const TermSet& traces) {
    ordered_json arr = ordered_json::array();
    for (const Term& t : traces) arr.push_back(print_trace(t));
    return arr;
}

ordered_json violation_json(const Violation& v) {
    ordered_json j;
    j["rule"] = rule_name(v.rule);
    j["s"] = print_trace(v.s);
    j["pair"] = ordered_json::array({v.a.name(), v.b.name()});
    j["t"] = print_trace(v.t);
    if (v.c.has_value()) j["c"] = v.c->name();
    j["missing"] = trace_set_json(v.missing);
    j["premise_witnesses"] = trace_set_json(v.premise_witnesses);
    return j;
}

ordered_json rule_result_json(const RuleResult& r) {
    ordered_json j;
    j["rule"] = rule_name(r.rule);
    j["status"] = rule_status_name(r.status);
    if (r.inconclusive_instances > 0) j["inconclusive_instances"] = r.inconclusive_instances;
    ordered_json arr = ordered_json::array();
    for (const Violation& v : r.violations) arr.push_back(violation_json(v));
    j["violations"] = std::move(arr);
    return j;
}

void print_violation_text(const Violation& v, std::ostream& out) {
    out << "    violation at s = " << print_trace(v.s) << ", pair (" << v.a.name() << ", "
        << v.b.name() << "), t = " << print_trace(v.t);
    if (v.c.has_value()) out << ", c = " << v.c->name();
    out << "\n";
    if (!v.missing.empty()) {
        out << "      missing:";
        for (const Term& m : v.missing) out << " " << print_trace(m) << " ;";
        out << "\n";
    }
    out << "      witnessed by:";
    for (const Term& w : v.premise_witnesses) out << " " << print_trace(w) << " ;";
    out << "\n";
}

struct Report {
    std::string format;
    ordered_json doc;
    std::ostringstream text;

    Report(const std::string& subcommand, std::string fmt) : format(std::move(fmt)) {
        doc["tool"] = kToolName;
        doc["version"] = kVersion;
        doc["subcommand"] = subcommand;
        text << kToolName << " " << kVersion << "\n";
    }

    void emit(std::ostream& out, int status) {
        doc["status"] = status;
        if (format == "structured") {
            out << doc.dump(2) << "\n";
        } else {
            out << text.str();
        }
    }
};

void describe_structure_text(const NamedStructure& ns, std::ostream& out) {
    out << "structure " << ns.id << ": inputs " << symbol_set_text(ns.structure.inputs())
        << " outputs " << symbol_set_text(ns.structure.outputs()) << ", "
        << ns.structure.traces().size() << " traces";
    if (ns.horizon.has_value()) out << " (truncated at " << *ns.horizon << " events)";
    out << "\n";
}

ordered_json describe_structure_json(const NamedStructure& ns) {
    ordered_json j;
    j["id"] = ns.id;
    j["inputs"] = symbol_set_json(ns.structure.inputs());
    j["outputs"] = symbol_set_json(ns.structure.outputs());
    j["trace_count"] = ns.structure.traces().size();
    if (ns.horizon.has_value()) {
        j["bound"] = *ns.horizon;
        j["truncated"] = true;
    } else {
        j["truncated"] = false;
    }
    return j;
}

// ── check / classify ────────────────────────────────────────────────────────

int run_check(const std::vector<std::string>& inputs, int depth,
              const std::vector<RuleId>& rules, Report& report) {
    ordered_json structures = ordered_json::array();
    int status = 0;
    for (const NamedStructure& ns : resolve_structures(inputs, depth)) {
        CheckReport cr = check_rules(ns.structure, rules, ns.horizon, ns.id);
        ordered_json j = describe_structure_json(ns);
        j["prefix_closed"] = cr.prefix_closed;
        ordered_json rj = ordered_json::array();
        for (const RuleResult& r : cr.rules) rj.push_back(rule_result_json(r));
        j["rules"] = std::move(rj);
        j["overall"] = rule_status_name(cr.overall());
        structures.push_back(std::move(j));

        describe_structure_text(ns, report.text);
        if (!cr.prefix_closed) {
            report.text << "  warning: structure is not prefix-closed; "
                           "rule checks assume prefix closure\n";
        }
        for (const RuleResult& r : cr.rules) {
            report.text << "  " << rule_name(r.rule) << ": " << rule_status_name(r.status);
            if (r.inconclusive_instances > 0) {
                report.text << " (" << r.inconclusive_instances
                            << " premise(s) beyond the bound)";
            }
            report.text << "\n";
            for (const Violation& v : r.violations) print_violation_text(v, report.text);
        }
        report.text << "  overall: " << rule_status_name(cr.overall()) << "\n";
        if (cr.overall() == RuleStatus::Fail) status = 1;
    }
    report.doc["structures"] = std::move(structures);
    return status;
}

int run_classify(const std::vector<std::string>& inputs, int depth, Report& report) {
    ordered_json structures = ordered_json::array();
    int status = 0;
    for (const NamedStructure& ns : resolve_structures(inputs, depth)) {
        CheckReport di = check_di(ns.structure, ns.horizon, ns.id);
        StructureClass cls = classify(ns.structure, ns.horizon);
        ordered_json j = describe_structure_json(ns);
        j["di"] = rule_status_name(di.overall());
        j["classification"] = structure_class_name(cls);

        // Per-variant statuses; a stronger variant that is only
        // inconclusive may pass at a deeper bound.
        ordered_json ladder;
        std::string caveat;
        bool reached_class = false;
        for (RuleId variant : {RuleId::R3P, RuleId::R3PP, RuleId::R3PPP}) {
            const RuleStatus st =
                check_rule(ns.structure, variant, ns.horizon).rules.front().status;
            ladder[rule_name(variant)] = rule_status_name(st);
            if (!reached_class && st == RuleStatus::InconclusiveAtBound) {
                if (!caveat.empty()) caveat += ", ";
                caveat += rule_name(variant);
                caveat += " inconclusive at this bound";
            }
            if (st == RuleStatus::Pass) reached_class = true;
        }
        j["r3_ladder"] = std::move(ladder);
        ordered_json rj = ordered_json::array();
        for (const RuleResult& r : di.rules) rj.push_back(rule_result_json(r));
        j["rules"] = std::move(rj);
        structures.push_back(std::move(j));

        describe_structure_text(ns, report.text);
        report.text << "  di: " << rule_status_name(di.overall()) << "\n";
        report.text << "  class: " << structure_class_name(cls);
        if (!caveat.empty()) report.text << " [" << caveat << "; try a deeper bound]";
        report.text << "\n";
        if (di.overall() == RuleStatus::Fail) status = 1;
    }
    report.doc["structures"] = std::move(structures);
    return status;
}

// ── project / weave / linearize / normalize ─────────────────────────────────

int run_project(const std::vector<std::string>& inputs, int depth, const SymbolSet& keep,
                Report& report) {
    ordered_json structures = ordered_json::array();
    for (const NamedStructure& ns : resolve_structures(inputs, depth)) {
        TraceStructure projected = project_structure(ns.structure, keep);
        ordered_json j;
        j["id"] = ns.id;
        j["keep"] = symbol_set_json(keep);
        j["inputs"] = symbol_set_json(projected.inputs());
        j["outputs"] = symbol_set_json(projected.outputs());
        j["traces"] = trace_set_json(projected.traces());
        structures.push_back(std::move(j));

        report.text << "structure " << ns.id << " projected on " << symbol_set_text(keep)
                    << ": " << projected.traces().size() << " traces\n";
        for (const Term& t : projected.traces()) {
            report.text << "  " << print_trace(t) << "\n";
        }
    }
    report.doc["structures"] = std::move(structures);
    return 0;
}

int run_weave(const std::vector<std::string>& inputs, int depth, Report& report) {
    std::vector<NamedStructure> all = resolve_structures(inputs, depth);
    if (all.size() != 2) {
        throw std::runtime_error("weave expects exactly two components, found " +
                                 std::to_string(all.size()));
    }
    TraceStructure woven = weave(all[0].structure, all[1].structure);
    report.doc["left"] = all[0].id;
    report.doc["right"] = all[1].id;
    report.doc["inputs"] = symbol_set_json(woven.inputs());
    report.doc["outputs"] = symbol_set_json(woven.outputs());
    report.doc["traces"] = trace_set_json(woven.traces());

    report.text << "weave of " << all[0].id << " and " << all[1].id << ": inputs "
                << symbol_set_text(woven.inputs()) << " outputs "
                << symbol_set_text(woven.outputs()) << ", " << woven.traces().size()
                << " traces\n";
    for (const Term& t : woven.traces()) report.text << "  " << print_trace(t) << "\n";
    return 0;
}

int run_linearize(const std::vector<std::string>& inputs, const std::string& trace_text,
                  int depth, Report& report) {
    ordered_json items = ordered_json::array();
    auto add = [&](const std::string& id, const Term& t) {
        ordered_json j;
        j["id"] = id;
        j["trace"] = print_trace(t);
        ordered_json lin = ordered_json::array();
        report.text << "trace " << print_trace(t) << "\n";
        for (const ClassicalTrace& ct : linearize(t)) {
            lin.push_back(print_classical(ct));
            report.text << "  " << print_classical(ct) << "\n";
        }
        j["linearizations"] = std::move(lin);
        items.push_back(std::move(j));
    };
    if (!trace_text.empty()) {
        Term t = parse_trace(trace_text);
        if (contains_any_order(t)) {
            throw std::runtime_error("linearize takes a plain trace; expand '||' first");
        }
        add("trace", t);
    }
    for (const NamedStructure& ns : resolve_structures(inputs, depth)) {
        for (const Term& t : ns.structure.traces()) add(ns.id, t);
    }
    report.doc["traces"] = std::move(items);
    return 0;
}

int run_normalize(const std::string& trace_text, Report& report) {
    Term t = parse_trace(trace_text);
    report.doc["input"] = trace_text;
    report.doc["normal_form"] = print_trace(t);
    report.text << "normal form: " << print_trace(t) << "\n";
    if (contains_any_order(t)) {
        ordered_json exp = ordered_json::array();
        report.text << "expansions:\n";
        for (const Term& v : expand_any_order(t)) {
            exp.push_back(print_trace(v));
            report.text << "  " << print_trace(v) << "\n";
        }
        report.doc["expansions"] = std::move(exp);
    }
    return 0;
}

// ── embeddings ──────────────────────────────────────────────────────────────

std::pair<double, double> parse_layout(const std::string& text) {
    std::stringstream ss(text);
    double a = 0.0, b = 0.0;
    char comma = 0;
    if (!(ss >> a >> comma >> b) || comma != ',') {
        throw CLI::ValidationError("--layout", "expected two comma-separated positions");
    }
    return {a, b};
}

int run_embed_gen(const std::string& input, const std::string& trace_text,
                  const std::string& layout_text, double speed, double gap, double light_speed,
                  Report& report) {
    std::vector<ComponentDef> defs = resolve_input(input);
    if (defs.size() != 1) {
        throw std::runtime_error("embed-gen expects exactly one component");
    }
    const ComponentDef& def = defs.front();
    Term t = parse_trace(trace_text);
    if (contains_any_order(t)) {
        throw std::runtime_error("embed-gen takes a plain trace; expand '||' first");
    }
    std::map<Symbol, SignalDirection> dirs;
    for (const Symbol& s : def.inputs) dirs.emplace(s, SignalDirection::EnvToComp);
    for (const Symbol& s : def.outputs) dirs.emplace(s, SignalDirection::CompToEnv);
    auto [env_x, comp_x] = parse_layout(layout_text);

    auto emb = greedy_embed(t, dirs, WorldlineLayout{env_x, comp_x}, speed, gap, light_speed);
    if (!emb.has_value()) {
        throw std::runtime_error("no embedding found for '" + print_trace(t) +
                                 "' with the given layout, speed and gap");
    }
    const std::string doc = serialize_embedding(*emb, t);
    report.doc["component"] = def.name;
    report.doc["trace"] = print_trace(t);
    report.doc["embedding"] = doc;
    report.text.str("");
    report.text << doc;
    return 0;
}

int run_embed_check(const std::string& path, const std::string& trace_text, double light_speed,
                    Report& report) {
    ParsedEmbedding parsed = parse_embedding(read_file(path), light_speed);
    std::optional<Term> trace = parsed.trace;
    if (!trace_text.empty()) trace = parse_trace(trace_text);
    if (!trace.has_value()) {
        throw std::runtime_error("no trace given: pass --trace or add a 'trace' line");
    }
    if (contains_any_order(*trace)) {
        throw std::runtime_error("embed-check takes a plain trace; expand '||' first");
    }

    InducedRelation rel = induced_relation(parsed.embedding, light_speed);
    const bool match = check_embedding(parsed.embedding, *trace, light_speed);

    report.doc["trace"] = print_trace(*trace);
    report.doc["match"] = match;
    ordered_json table = ordered_json::array();
    report.text << "trace: " << print_trace(*trace) << "\n";
    report.text << "induced relation:\n";
    for (const PathPairOrder& row : rel.table) {
        const auto& p = parsed.embedding.propagations.at(row.first);
        const auto& q = parsed.embedding.propagations.at(row.second);
        ordered_json r;
        r["first"] = p.label.name();
        r["second"] = q.label.name();
        r["relation"] = order_relation_name(row.relation);
        table.push_back(std::move(r));
        report.text << "  " << p.label.name() << " / " << q.label.name() << ": "
                    << order_relation_name(row.relation) << "\n";
    }
    report.doc["relation"] = std::move(table);
    if (rel.term.has_value()) {
        report.doc["induced_term"] = print_trace(*rel.term);
        report.text << "induced term: " << print_trace(*rel.term) << "\n";
    } else {
        report.doc["induced_term"] = nullptr;
        report.text << "induced relation is not series-parallel\n";
    }
    report.text << (match ? "match\n" : "mismatch\n");
    return match ? 0 : 1;
}

int run_library(Report& report) {
    ordered_json arr = ordered_json::array();
    for (const ComponentDef& def : builtin_library()) {
        ordered_json j;
        j["name"] = def.name;
        j["inputs"] = symbol_set_json(def.inputs);
        j["outputs"] = symbol_set_json(def.outputs);
        j["spec"] = print_command(def.spec);
        arr.push_back(std::move(j));
        report.text << def.name << ": inputs " << symbol_set_text(def.inputs) << " outputs "
                    << symbol_set_text(def.outputs) << " spec " << print_command(def.spec)
                    << "\n";
    }
    report.doc["components"] = std::move(arr);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"R-trace structures: delay-insensitive specification checking"};
    app.require_subcommand(1);

    std::vector<std::string> inputs;
    std::string rules_text = "di";
    std::string format = "text";
    std::string trace_text;
    std::string layout_text = "0,1";
    std::string embedding_path;
    std::string keep_text;
    int depth = 8;
    double speed = 1.0;
    double gap = 1.0;
    double light_speed = 1.0;

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"text", "structured"}));
    };
    auto add_depth = [&](CLI::App* sub) {
        sub->add_option("--depth", depth, "Enumeration bound (max events per trace)")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* check = app.add_subcommand("check", "Check rules on component specs");
    check->add_option("inputs", inputs, "Component files or built-in names")->required();
    check->add_option("--rules", rules_text, "Comma-separated rules or 'di'");
    add_depth(check);
    add_format(check);

    CLI::App* classify_cmd = app.add_subcommand("classify", "DI check plus choice class");
    classify_cmd->add_option("inputs", inputs, "Component files or built-in names")->required();
    add_depth(classify_cmd);
    add_format(classify_cmd);

    CLI::App* project = app.add_subcommand("project", "Project enumerated traces on symbols");
    project->add_option("inputs", inputs, "Component files or built-in names")->required();
    project->add_option("--keep", keep_text, "Comma-separated symbols to keep")->required();
    add_depth(project);
    add_format(project);

    CLI::App* weave_cmd = app.add_subcommand("weave", "Weave two component structures");
    weave_cmd->add_option("inputs", inputs, "Exactly two component files or built-in names")
        ->required();
    add_depth(weave_cmd);
    add_format(weave_cmd);

    CLI::App* linearize_cmd =
        app.add_subcommand("linearize", "Classical traces of a trace or of components");
    linearize_cmd->add_option("inputs", inputs, "Component files or built-in names");
    linearize_cmd->add_option("--trace", trace_text, "A trace literal");
    add_depth(linearize_cmd);
    add_format(linearize_cmd);

    CLI::App* normalize_cmd = app.add_subcommand("normalize", "Normalize a trace literal");
    normalize_cmd->add_option("--trace", trace_text, "A trace literal")->required();
    add_format(normalize_cmd);

    CLI::App* embed_gen = app.add_subcommand("embed-gen", "Generate a spacetime embedding");
    embed_gen->add_option("input", embedding_path, "Component file or built-in name")
        ->required();
    embed_gen->add_option("--trace", trace_text, "The trace to embed")->required();
    embed_gen->add_option("--layout", layout_text, "Worldline positions xE,xR");
    embed_gen->add_option("--speed", speed, "Signal speed (<= light speed)");
    embed_gen->add_option("--gap", gap, "Extra spacing between series steps");
    embed_gen->add_option("--light-speed", light_speed, "Light speed");
    add_format(embed_gen);

    CLI::App* embed_check = app.add_subcommand("embed-check", "Validate an embedding file");
    embed_check->add_option("file", embedding_path, "Embedding document")->required();
    embed_check->add_option("--trace", trace_text, "Trace to check (overrides the file)");
    embed_check->add_option("--light-speed", light_speed, "Light speed");
    add_format(embed_check);

    CLI::App* library_cmd = app.add_subcommand("library", "List built-in components");
    add_format(library_cmd);

    std::vector<const char*> argv;
    argv.push_back(kToolName);
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto make_report = [&](const char* name) { return Report(name, format); };

    try {
        int status = 2;
        std::optional<Report> report;
        if (check->parsed()) {
            report.emplace(make_report("check"));
            report->doc["config"] = {{"inputs", inputs},
                                     {"depth", depth},
                                     {"rules", rules_text},
                                     {"format", format}};
            status = run_check(inputs, depth, parse_rule_list(rules_text), *report);
        } else if (classify_cmd->parsed()) {
            report.emplace(make_report("classify"));
            report->doc["config"] = {{"inputs", inputs}, {"depth", depth}, {"format", format}};
            status = run_classify(inputs, depth, *report);
        } else if (project->parsed()) {
            report.emplace(make_report("project"));
            report->doc["config"] = {{"inputs", inputs},
                                     {"depth", depth},
                                     {"keep", keep_text},
                                     {"format", format}};
            status = run_project(inputs, depth, parse_symbol_list(keep_text), *report);
        } else if (weave_cmd->parsed()) {
            report.emplace(make_report("weave"));
            report->doc["config"] = {{"inputs", inputs}, {"depth", depth}, {"format", format}};
            status = run_weave(inputs, depth, *report);
        } else if (linearize_cmd->parsed()) {
            report.emplace(make_report("linearize"));
            report->doc["config"] = {{"inputs", inputs},
                                     {"trace", trace_text},
                                     {"depth", depth},
                                     {"format", format}};
            status = run_linearize(inputs, trace_text, depth, *report);
        } else if (normalize_cmd->parsed()) {
            report.emplace(make_report("normalize"));
            report->doc["config"] = {{"trace", trace_text}, {"format", format}};
            status = run_normalize(trace_text, *report);
        } else if (embed_gen->parsed()) {
            report.emplace(make_report("embed-gen"));
            report->doc["config"] = {{"input", embedding_path},
                                     {"trace", trace_text},
                                     {"layout", layout_text},
                                     {"speed", speed},
                                     {"gap", gap},
                                     {"light_speed", light_speed},
                                     {"format", format}};
            status = run_embed_gen(embedding_path, trace_text, layout_text, speed, gap,
                                   light_speed, *report);
        } else if (embed_check->parsed()) {
            report.emplace(make_report("embed-check"));
            report->doc["config"] = {{"file", embedding_path},
                                     {"trace", trace_text},
                                     {"light_speed", light_speed},
                                     {"format", format}};
            status = run_embed_check(embedding_path, trace_text, light_speed, *report);
        } else if (library_cmd->parsed()) {
            report.emplace(make_report("library"));
            report->doc["config"] = {{"format", format}};
            status = run_library(*report);
        }
        if (report.has_value()) report->emit(out, status);
        return status;
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace rtrace::cli
