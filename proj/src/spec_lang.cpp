#include "rtrace/spec_lang.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace rtrace {

const char* source_error_kind_name(SourceError::Kind k) noexcept {
    switch (k) {
        case SourceError::Kind::Syntax:        return "syntax";
        case SourceError::Kind::UnknownSymbol: return "unknown-symbol";
        case SourceError::Kind::AlphabetClash: return "alphabet-clash";
    }
    return "?";
}

namespace {

std::string format_error(const SourceError& e) {
    std::ostringstream os;
    os << e.line << ":" << e.column << ": " << source_error_kind_name(e.kind)
       << " error: " << e.message;
    return os.str();
}

}  // namespace

ParseError::ParseError(SourceError error)
    : std::runtime_error(format_error(error)), error_(std::move(error)) {}

// ── Lexer ───────────────────────────────────────────────────────────────────

namespace {

enum class Tok {
    Ident,
    KwEps,
    KwPref,
    KwComponent,
    KwInputs,
    KwOutputs,
    KwSpec,
    Less,      // <
    Tilde,     // ~
    AnyOrder,  // ||
    Pipe,      // |
    Semi,      // ;
    Question,  // ?
    Bang,      // !
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Star,      // *
    Comma,
    Colon,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

[[noreturn]] void fail_at(SourceError::Kind kind, int line, int column, std::string message) {
    throw ParseError(SourceError{kind, line, column, std::move(message)});
}

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        const int tl = line;
        const int tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
                ++j;
            }
            std::string word = src.substr(i, j - i);
            advance(j - i);
            Tok kind = Tok::Ident;
            if (word == "eps") kind = Tok::KwEps;
            else if (word == "pref") kind = Tok::KwPref;
            else if (word == "component") kind = Tok::KwComponent;
            else if (word == "inputs") kind = Tok::KwInputs;
            else if (word == "outputs") kind = Tok::KwOutputs;
            else if (word == "spec") kind = Tok::KwSpec;
            out.push_back(Token{kind, std::move(word), tl, tc});
            continue;
        }
        if (c == '|' && i + 1 < src.size() && src[i + 1] == '|') {
            out.push_back(Token{Tok::AnyOrder, "||", tl, tc});
            advance(2);
            continue;
        }
        Tok kind;
        switch (c) {
            case '<': kind = Tok::Less; break;
            case '~': kind = Tok::Tilde; break;
            case '|': kind = Tok::Pipe; break;
            case ';': kind = Tok::Semi; break;
            case '?': kind = Tok::Question; break;
            case '!': kind = Tok::Bang; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case '{': kind = Tok::LBrace; break;
            case '}': kind = Tok::RBrace; break;
            case '[': kind = Tok::LBracket; break;
            case ']': kind = Tok::RBracket; break;
            case '*': kind = Tok::Star; break;
            case ',': kind = Tok::Comma; break;
            case ':': kind = Tok::Colon; break;
            default:
                fail_at(SourceError::Kind::Syntax, tl, tc,
                        std::string("unexpected character '") + c + "'");
        }
        out.push_back(Token{kind, std::string(1, c), tl, tc});
        advance(1);
    }
    out.push_back(Token{Tok::End, "", line, col});
    return out;
}

// ── Parser ──────────────────────────────────────────────────────────────────

class Parser {
public:
    explicit Parser(const std::string& src) : tokens_(lex(src)) {}

    Term parse_trace_only() {
        Term t = parse_trace_expr();
        expect(Tok::End, "end of input");
        return normalize(t);
    }

    std::vector<ComponentDef> parse_file() {
        std::vector<ComponentDef> out;
        while (peek().kind != Tok::End) out.push_back(parse_component_def());
        if (out.empty()) {
            fail_here(SourceError::Kind::Syntax, "expected a component definition");
        }
        return out;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }

    const Token& peek_ahead(std::size_t n) const {
        return tokens_[std::min(pos_ + n, tokens_.size() - 1)];
    }

    Token take() { return tokens_[pos_++]; }

    bool accept(Tok kind) {
        if (peek().kind == kind) {
            ++pos_;
            return true;
        }
        return false;
    }

    Token expect(Tok kind, const char* what) {
        if (peek().kind != kind) {
            fail_here(SourceError::Kind::Syntax,
                      std::string("expected ") + what + ", found '" +
                          (peek().kind == Tok::End ? "end of input" : peek().text) + "'");
        }
        return take();
    }

    [[noreturn]] void fail_here(SourceError::Kind kind, std::string message) const {
        fail_at(kind, peek().line, peek().column, std::move(message));
    }

    // Trace grammar, loosest to tightest: '<', '||', '~'.
    Term parse_trace_expr() {
        std::vector<Term> parts{parse_any_level()};
        while (accept(Tok::Less)) parts.push_back(parse_any_level());
        return parts.size() == 1 ? parts.front() : Term::seq(std::move(parts));
    }

    Term parse_any_level() {
        Term t = parse_par_level();
        while (accept(Tok::AnyOrder)) t = Term::any_order(std::move(t), parse_par_level());
        return t;
    }

    Term parse_par_level() {
        std::vector<Term> parts{parse_trace_primary()};
        while (accept(Tok::Tilde)) parts.push_back(parse_trace_primary());
        return parts.size() == 1 ? parts.front() : Term::par(std::move(parts));
    }

    Term parse_trace_primary() {
        if (accept(Tok::KwEps)) return Term::epsilon();
        if (peek().kind == Tok::Ident) {
            Token tok = take();
            return Term::leaf(Symbol(tok.text));
        }
        if (accept(Tok::LParen)) {
            Term t = parse_trace_expr();
            expect(Tok::RParen, "')'");
            return t;
        }
        fail_here(SourceError::Kind::Syntax, "expected a symbol, 'eps' or '('");
    }

    // Component files.
    ComponentDef parse_component_def() {
        expect(Tok::KwComponent, "'component'");
        Token name = expect(Tok::Ident, "component name");
        expect(Tok::LBrace, "'{'");

        SymbolSet inputs;
        SymbolSet outputs;
        bool have_inputs = false;
        bool have_outputs = false;
        std::optional<Command> spec;

        while (!accept(Tok::RBrace)) {
            if (peek().kind == Tok::KwInputs || peek().kind == Tok::KwOutputs) {
                const bool is_inputs = peek().kind == Tok::KwInputs;
                Token kw = take();
                if (spec.has_value()) {
                    fail_at(SourceError::Kind::Syntax, kw.line, kw.column,
                            "alphabet declarations must precede the spec");
                }
                if ((is_inputs && have_inputs) || (!is_inputs && have_outputs)) {
                    fail_at(SourceError::Kind::Syntax, kw.line, kw.column,
                            std::string("duplicate '") + kw.text + "' declaration");
                }
                (is_inputs ? have_inputs : have_outputs) = true;
                expect(Tok::Colon, "':'");
                parse_symbol_list(is_inputs ? inputs : outputs,
                                  is_inputs ? outputs : inputs, is_inputs);
                expect(Tok::Semi, "';'");
                continue;
            }
            if (peek().kind == Tok::KwSpec) {
                Token kw = take();
                if (spec.has_value()) {
                    fail_at(SourceError::Kind::Syntax, kw.line, kw.column,
                            "duplicate 'spec' declaration");
                }
                expect(Tok::Colon, "':'");
                spec = parse_command(inputs, outputs);
                expect(Tok::Semi, "';'");
                continue;
            }
            fail_here(SourceError::Kind::Syntax, "expected 'inputs', 'outputs', 'spec' or '}'");
        }
        if (!spec.has_value()) {
            fail_here(SourceError::Kind::Syntax,
                      "component '" + name.text + "' has no spec");
        }
        return ComponentDef{name.text, std::move(inputs), std::move(outputs), *std::move(spec)};
    }

    void parse_symbol_list(SymbolSet& target, const SymbolSet& other, bool is_inputs) {
        while (true) {
            Token tok = expect(Tok::Ident, "symbol name");
            Symbol sym = make_symbol(tok);
            if (other.contains(sym)) {
                fail_at(SourceError::Kind::AlphabetClash, tok.line, tok.column,
                        "symbol '" + tok.text + "' declared both input and output");
            }
            if (!target.insert(sym).second) {
                fail_at(SourceError::Kind::Syntax, tok.line, tok.column,
                        std::string("duplicate symbol '") + tok.text + "' in " +
                            (is_inputs ? "inputs" : "outputs"));
            }
            if (!accept(Tok::Comma)) break;
        }
    }

    Symbol make_symbol(const Token& tok) const {
        try {
            return Symbol(tok.text);
        } catch (const std::invalid_argument& e) {
            fail_at(SourceError::Kind::Syntax, tok.line, tok.column, e.what());
        }
    }

    // Command grammar, loosest to tightest: '|', '||', ';'.
    Command parse_command(const SymbolSet& inputs, const SymbolSet& outputs) {
        Command c = parse_cmd_weave(inputs, outputs);
        while (accept(Tok::Pipe)) {
            c = Command::unite(std::move(c), parse_cmd_weave(inputs, outputs));
        }
        return c;
    }

    Command parse_cmd_weave(const SymbolSet& inputs, const SymbolSet& outputs) {
        Command c = parse_cmd_concat(inputs, outputs);
        while (accept(Tok::AnyOrder)) {
            c = Command::weave(std::move(c), parse_cmd_concat(inputs, outputs));
        }
        return c;
    }

    // ';' is also the declaration terminator, so it only continues a
    // concatenation when the next token can start a command.
    Command parse_cmd_concat(const SymbolSet& inputs, const SymbolSet& outputs) {
        Command c = parse_cmd_primary(inputs, outputs);
        while (peek().kind == Tok::Semi && can_start_command(peek_ahead(1).kind)) {
            take();
            c = Command::concat(std::move(c), parse_cmd_primary(inputs, outputs));
        }
        return c;
    }

    static bool can_start_command(Tok kind) {
        return kind == Tok::Ident || kind == Tok::KwPref || kind == Tok::Star ||
               kind == Tok::LParen || kind == Tok::LBrace;
    }

    Command parse_cmd_primary(const SymbolSet& inputs, const SymbolSet& outputs) {
        if (accept(Tok::KwPref)) {
            return Command::pref(parse_cmd_primary(inputs, outputs));
        }
        if (accept(Tok::Star)) {
            expect(Tok::LBracket, "'['");
            Command c = parse_command(inputs, outputs);
            expect(Tok::RBracket, "']'");
            return Command::star(std::move(c));
        }
        if (accept(Tok::LParen)) {
            Command c = parse_command(inputs, outputs);
            expect(Tok::RParen, "')'");
            return c;
        }
        if (peek().kind == Tok::LBrace) {
            return parse_trace_set(inputs, outputs);
        }
        if (peek().kind == Tok::Ident) {
            Token tok = take();
            Symbol sym = make_symbol(tok);
            if (accept(Tok::Question)) {
                require_declared(sym, tok, inputs, outputs, Command::Direction::Input);
                return Command::atomic(std::move(sym), Command::Direction::Input);
            }
            if (accept(Tok::Bang)) {
                require_declared(sym, tok, inputs, outputs, Command::Direction::Output);
                return Command::atomic(std::move(sym), Command::Direction::Output);
            }
            fail_here(SourceError::Kind::Syntax,
                      "expected '?' or '!' after symbol '" + tok.text + "'");
        }
        fail_here(SourceError::Kind::Syntax, "expected a command");
    }

    void require_declared(const Symbol& sym, const Token& tok, const SymbolSet& inputs,
                          const SymbolSet& outputs, Command::Direction dir) const {
        const bool as_input = dir == Command::Direction::Input;
        if (as_input ? inputs.contains(sym) : outputs.contains(sym)) return;
        if (as_input ? outputs.contains(sym) : inputs.contains(sym)) {
            fail_at(SourceError::Kind::AlphabetClash, tok.line, tok.column,
                    "symbol '" + tok.text + "' is declared as " +
                        (as_input ? "an output" : "an input") + " but used as " +
                        (as_input ? "an input" : "an output"));
        }
        fail_at(SourceError::Kind::UnknownSymbol, tok.line, tok.column,
                "symbol '" + tok.text + "' is not declared");
    }

    Command parse_trace_set(const SymbolSet& inputs, const SymbolSet& outputs) {
        Token open = expect(Tok::LBrace, "'{'");
        TermSet expanded;
        SymbolSet used;
        while (true) {
            Token at = peek();
            Term t = parse_trace_expr();
            for (const Symbol& x : symbols_of(t)) {
                if (!inputs.contains(x) && !outputs.contains(x)) {
                    fail_at(SourceError::Kind::UnknownSymbol, at.line, at.column,
                            "symbol '" + x.name() + "' is not declared");
                }
                used.insert(x);
            }
            TermSet variants = expand_any_order(normalize(t));
            expanded.insert(variants.begin(), variants.end());
            if (!accept(Tok::Comma)) break;
        }
        expect(Tok::RBrace, "'}'");
        if (expanded.empty()) {
            fail_at(SourceError::Kind::Syntax, open.line, open.column,
                    "trace set must not be empty");
        }
        SymbolSet in, out;
        for (const Symbol& x : used) {
            (inputs.contains(x) ? in : out).insert(x);
        }
        return Command::trace_set(TraceStructure(std::move(in), std::move(out), std::move(expanded)));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

Term parse_trace(const std::string& src) { return Parser(src).parse_trace_only(); }

std::vector<ComponentDef> parse_components(const std::string& src) {
    return Parser(src).parse_file();
}

ComponentDef parse_component(const std::string& src) {
    std::vector<ComponentDef> all = parse_components(src);
    if (all.size() != 1) {
        throw ParseError(SourceError{SourceError::Kind::Syntax, 1, 1,
                                     "expected exactly one component, found " +
                                         std::to_string(all.size())});
    }
    return std::move(all.front());
}

// ── Printing ────────────────────────────────────────────────────────────────

namespace {

void print_term(const Term& t, std::string& out) {
    switch (t.kind()) {
        case TermKind::Epsilon:
            out += "eps";
            return;
        case TermKind::Leaf:
            out += t.symbol().name();
            return;
        case TermKind::Seq: {
            bool first = true;
            for (const Term& c : t.children()) {
                if (!first) out += " < ";
                first = false;
                print_term(c, out);
            }
            return;
        }
        case TermKind::Par: {
            out += "(";
            bool first = true;
            for (const Term& c : t.children()) {
                if (!first) out += " ~ ";
                first = false;
                if (c.kind() == TermKind::Seq) {
                    out += "(";
                    print_term(c, out);
                    out += ")";
                } else {
                    print_term(c, out);
                }
            }
            out += ")";
            return;
        }
        case TermKind::AnyOrder: {
            out += "(";
            for (int i = 0; i < 2; ++i) {
                if (i == 1) out += " || ";
                const Term& c = t.children()[static_cast<std::size_t>(i)];
                if (c.kind() == TermKind::Seq) {
                    out += "(";
                    print_term(c, out);
                    out += ")";
                } else {
                    print_term(c, out);
                }
            }
            out += ")";
            return;
        }
    }
}

int command_precedence(Command::Kind k) {
    switch (k) {
        case Command::Kind::Union:  return 0;
        case Command::Kind::Weave:  return 1;
        case Command::Kind::Concat: return 2;
        default:                    return 3;
    }
}

void print_cmd(const Command& c, std::string& out, int parent_prec) {
    const int prec = command_precedence(c.kind());
    const bool parens = prec < parent_prec;
    if (parens) out += "(";
    switch (c.kind()) {
        case Command::Kind::Atomic:
            out += c.symbol().name();
            out += c.direction() == Command::Direction::Input ? "?" : "!";
            break;
        case Command::Kind::TraceSet: {
            out += "{ ";
            bool first = true;
            for (const Term& t : c.literal().traces()) {
                if (!first) out += ", ";
                first = false;
                print_term(t, out);
            }
            out += " }";
            break;
        }
        case Command::Kind::Concat:
            print_cmd(c.left(), out, 2);
            out += " ; ";
            print_cmd(c.right(), out, 3);
            break;
        case Command::Kind::Weave:
            print_cmd(c.left(), out, 1);
            out += " || ";
            print_cmd(c.right(), out, 2);
            break;
        case Command::Kind::Union:
            print_cmd(c.left(), out, 0);
            out += " | ";
            print_cmd(c.right(), out, 1);
            break;
        case Command::Kind::Star:
            out += "*[ ";
            print_cmd(c.inner(), out, 0);
            out += " ]";
            break;
        case Command::Kind::Pref:
            out += "pref ";
            print_cmd(c.inner(), out, 3);
            break;
    }
    if (parens) out += ")";
}

}  // namespace

std::string print_trace(const Term& t) {
    std::string out;
    print_term(t, out);
    return out;
}

std::string print_command(const Command& cmd) {
    std::string out;
    print_cmd(cmd, out, 0);
    return out;
}

}  // namespace rtrace
