#include "doctest.h"

#include <random>
#include <sstream>

#include "rtrace/spec_lang.hpp"
#include "support/gen.hpp"

using namespace rtrace;
using rtest::leaf;
using rtest::sym;

TEST_CASE("parse_trace handles the basic grammar") {
    CHECK(parse_trace("(a ~ b) < c") ==
          normalize(Term::seq({Term::par({leaf("a"), leaf("b")}), leaf("c")})));
    CHECK(parse_trace("eps") == Term::epsilon());
    CHECK(parse_trace("((a < b) ~ c) < t_sym") ==
          normalize(Term::seq({Term::par({Term::seq({leaf("a"), leaf("b")}), leaf("c")}),
                               leaf("t_sym")})));
    // '~' binds tighter than '<'.
    CHECK(parse_trace("a ~ b < c") == parse_trace("(a ~ b) < c"));
}

TEST_CASE("parse_trace keeps any-order nodes for later expansion") {
    Term t = parse_trace("a || b");
    CHECK(t.kind() == TermKind::AnyOrder);
    CHECK(expand_any_order(t).size() == 3);
}

TEST_CASE("parse_trace reports located syntax errors") {
    try {
        parse_trace("a <\n< b");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.error().kind == SourceError::Kind::Syntax);
        CHECK(e.error().line == 2);
        CHECK(e.error().column == 1);
    }
    CHECK_THROWS_AS(parse_trace(""), ParseError);
    CHECK_THROWS_AS(parse_trace("a b"), ParseError);
    CHECK_THROWS_AS(parse_trace("(a"), ParseError);
}

TEST_CASE("print_trace renders the expected forms") {
    CHECK(print_trace(normalize(Term::seq({Term::par({leaf("a"), leaf("b")}), leaf("c")}))) ==
          "(a ~ b) < c");
    CHECK(print_trace(Term::epsilon()) == "eps");
    CHECK(print_trace(normalize(Term::par({Term::seq({leaf("a"), leaf("b")}), leaf("c")}))) ==
          "(c ~ (a < b))");
}

TEST_CASE("round trip: parse after print is the identity on normal forms") {
    std::mt19937 rng(42);
    const auto syms = rtest::alphabet(4);
    for (int i = 0; i < 3000; ++i) {
        Term t = rtest::random_normal_term(rng, syms, 12);
        CHECK(parse_trace(print_trace(t)) == t);
    }
}

TEST_CASE("parser totality on generated source strings") {
    // Renders random terms with randomized spacing and comments; every
    // generated string must parse back to the same term.
    std::mt19937 rng(43);
    const auto syms = rtest::alphabet(3);
    for (int i = 0; i < 500; ++i) {
        Term t = rtest::random_normal_term(rng, syms, 8);
        std::string text = print_trace(t);
        std::string noisy;
        for (char c : text) {
            noisy += c;
            if (rng() % 7 == 0) noisy += ' ';
            if (rng() % 41 == 0) noisy += "\n";
            if (rng() % 53 == 0) noisy += "# comment\n";
        }
        CHECK(parse_trace(noisy) == t);
    }
}

TEST_CASE("component files parse and validate") {
    const char* muller_src =
        "component muller {\n"
        "  inputs: a, b;\n"
        "  outputs: c;\n"
        "  spec: pref *[ (a? || b?) ; c! ];\n"
        "}\n";
    ComponentDef def = parse_component(muller_src);
    CHECK(def.name == "muller");
    CHECK(def.inputs == SymbolSet{sym("a"), sym("b")});
    CHECK(def.outputs == SymbolSet{sym("c")});
    CHECK(print_command(def.spec) == "pref *[ (a? || b?) ; c! ]");
}

TEST_CASE("component validation errors carry kind and location") {
    try {
        parse_component("component x { inputs: a; outputs: a; spec: a?; }");
        FAIL("expected alphabet clash");
    } catch (const ParseError& e) {
        CHECK(e.error().kind == SourceError::Kind::AlphabetClash);
        CHECK(e.error().line == 1);
    }
    try {
        parse_component("component x { inputs: a; outputs: b; spec: pref *[ a? ; d! ]; }");
        FAIL("expected unknown symbol");
    } catch (const ParseError& e) {
        CHECK(e.error().kind == SourceError::Kind::UnknownSymbol);
    }
    // Direction mismatch: declared output used as an input atom.
    try {
        parse_component("component x { inputs: a; outputs: b; spec: b?; }");
        FAIL("expected alphabet clash");
    } catch (const ParseError& e) {
        CHECK(e.error().kind == SourceError::Kind::AlphabetClash);
    }
}

TEST_CASE("trace-set literals classify symbols by declaration") {
    ComponentDef def = parse_component(
        "component m {\n"
        "  inputs: a, b;\n"
        "  outputs: c;\n"
        "  spec: pref *[ { (a ~ b) < c, a < b < c, b < a < c } ];\n"
        "}\n");
    REQUIRE(def.spec.kind() == Command::Kind::Pref);
    const Command& star_cmd = def.spec.inner();
    REQUIRE(star_cmd.kind() == Command::Kind::Star);
    const TraceStructure& lit = star_cmd.inner().literal();
    CHECK(lit.inputs() == SymbolSet{sym("a"), sym("b")});
    CHECK(lit.outputs() == SymbolSet{sym("c")});
    CHECK(lit.traces().size() == 3);
}

TEST_CASE("trace-set literals expand any-order shorthand") {
    ComponentDef def = parse_component(
        "component m { inputs: a, b; spec: { a || b }; }");
    CHECK(def.spec.literal().traces().size() == 3);
}

TEST_CASE("multiple components per file") {
    auto defs = parse_components(
        "component one { inputs: a; outputs: b; spec: pref *[ a? ; b! ]; }\n"
        "component two { inputs: x; outputs: y; spec: pref *[ x? ; y! ]; }\n");
    REQUIRE(defs.size() == 2);
    CHECK(defs[0].name == "one");
    CHECK(defs[1].name == "two");
}

TEST_CASE("command printer precedence") {
    ComponentDef def = parse_component(
        "component p { inputs: a, b; outputs: c, d; "
        "spec: a? ; b? | (c! || d!) ; a?; }");
    // Union is loosest; the weave needs parens inside the concatenation.
    CHECK(print_command(def.spec) == "a? ; b? | (c! || d!) ; a?");
    ComponentDef again = parse_component(
        "component p { inputs: a, b; outputs: c, d; spec: " +
        print_command(def.spec) + "; }");
    CHECK(print_command(again.spec) == print_command(def.spec));
}
