#include "rtrace/library.hpp"

#include <array>
#include <utility>

namespace rtrace {

namespace {

struct BuiltinSource {
    const char* name;
    const char* source;
};

constexpr std::array<BuiltinSource, 7> kBuiltins{{
    {"muller",
     "component muller {\n"
     "  inputs: a, b;\n"
     "  outputs: c;\n"
     "  spec: pref *[ (a? || b?) ; c! ];\n"
     "}\n"},
    {"wire",
     "component wire {\n"
     "  inputs: a;\n"
     "  outputs: b;\n"
     "  spec: pref *[ a? ; b! ];\n"
     "}\n"},
    {"fork",
     "component fork {\n"
     "  inputs: a;\n"
     "  outputs: b, c;\n"
     "  spec: pref *[ a? ; (b! || c!) ];\n"
     "}\n"},
    // Two inputs consumed strictly in turn: a merge with no choice anywhere.
    {"merge",
     "component merge {\n"
     "  inputs: a, b;\n"
     "  outputs: c;\n"
     "  spec: pref *[ a? ; c! ; b? ; c! ];\n"
     "}\n"},
    // The environment picks one of the two inputs: input-choice class.
    {"select",
     "component select {\n"
     "  inputs: a, b;\n"
     "  outputs: c;\n"
     "  spec: pref *[ (a? | b?) ; c! ];\n"
     "}\n"},
    // Both requests arrive in any order, the component grants exactly one of
    // two outputs: output-choice class.
    {"arbiter",
     "component arbiter {\n"
     "  inputs: a, b;\n"
     "  outputs: c, d;\n"
     "  spec: pref *[ (a? || b?) ; (c! | d!) ];\n"
     "}\n"},
    // One fixed order of two outputs after the input; the unordered variants
    // are missing, so the dialog depends on propagation delays.
    {"delay_sensitive",
     "component delay_sensitive {\n"
     "  inputs: a;\n"
     "  outputs: b, c;\n"
     "  spec: pref { a < b < c };\n"
     "}\n"},
}};

}  // namespace

const std::vector<ComponentDef>& builtin_library() {
    static const std::vector<ComponentDef> components = [] {
        std::vector<ComponentDef> out;
        out.reserve(kBuiltins.size());
        for (const BuiltinSource& b : kBuiltins) out.push_back(parse_component(b.source));
        return out;
    }();
    return components;
}

std::optional<std::string> builtin_source(const std::string& name) {
    for (const BuiltinSource& b : kBuiltins) {
        if (name == b.name) return std::string(b.source);
    }
    return std::nullopt;
}

std::optional<ComponentDef> find_builtin(const std::string& name) {
    for (const ComponentDef& c : builtin_library()) {
        if (c.name == name) return c;
    }
    return std::nullopt;
}

}  // namespace rtrace
