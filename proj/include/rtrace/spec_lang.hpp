#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rtrace/command.hpp"
#include "rtrace/term.hpp"

namespace rtrace {

// ── Textual grammars ────────────────────────────────────────────────────────
// Trace literals (ASCII rendering of R-traces):
//
//   trace   := any ( '<' any )*          series composition, loosest
//   any     := par ( '||' par )*         any-order shorthand
//   par     := primary ( '~' primary )*  parallel composition, tightest
//   primary := SYMBOL | 'eps' | '(' trace ')'
//
// Component files:
//
//   component NAME {
//     inputs: a, b;
//     outputs: c;
//     spec: pref *[ (a? || b?) ; c! ];
//   }
//
// Command expressions use '?'/'!' atoms, '{ trace, ... }' trace-set
// literals, ';' (concatenation), '||' (weave), '|' (union), '*[ ... ]'
// (star) and 'pref'.  Precedence, tightest first: atoms / '*[...]' / 'pref',
// then ';', then '||', then '|'; all left-associative.  Whitespace is
// insignificant and '#' starts a line comment.
// ─────────────────────────────────────────────────────────────────────────────

struct SourceError {
    enum class Kind { Syntax, UnknownSymbol, AlphabetClash };

    Kind kind = Kind::Syntax;
    int line = 0;
    int column = 0;
    std::string message;
};

const char* source_error_kind_name(SourceError::Kind k) noexcept;

class ParseError : public std::runtime_error {
public:
    explicit ParseError(SourceError error);
    const SourceError& error() const noexcept { return error_; }

private:
    SourceError error_;
};

/// A component-environment pair: declared alphabets plus the command
/// describing their dialog.
struct ComponentDef {
    std::string name;
    SymbolSet inputs;
    SymbolSet outputs;
    Command spec;
};

/// Parses a trace literal.  AnyOrder nodes ('||') are preserved for later
/// expansion; everything else comes back normalized.
Term parse_trace(const std::string& src);

/// Renders a normalized term in the trace grammar; parse_trace(print_trace(t))
/// yields t back.
std::string print_trace(const Term& t);

/// Parses a component file containing exactly one component.
ComponentDef parse_component(const std::string& src);

/// Parses a component file containing one or more components.
std::vector<ComponentDef> parse_components(const std::string& src);

/// Renders a command in the component-file expression grammar.
std::string print_command(const Command& cmd);

}  // namespace rtrace
