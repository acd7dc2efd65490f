#include "rtrace/command.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace rtrace {

struct CommandNode {
    Command::Kind kind;
    std::optional<Symbol> symbol;
    std::optional<Command::Direction> direction;
    std::optional<TraceStructure> literal;
    std::vector<Command> children;
};

Command Command::atomic(Symbol symbol, Direction direction) {
    return Command(std::make_shared<const CommandNode>(
        CommandNode{Kind::Atomic, std::move(symbol), direction, {}, {}}));
}

Command Command::trace_set(TraceStructure literal) {
    return Command(std::make_shared<const CommandNode>(
        CommandNode{Kind::TraceSet, {}, {}, std::move(literal), {}}));
}

Command Command::concat(Command left, Command right) {
    return Command(std::make_shared<const CommandNode>(
        CommandNode{Kind::Concat, {}, {}, {}, {std::move(left), std::move(right)}}));
}

Command Command::unite(Command left, Command right) {
    return Command(std::make_shared<const CommandNode>(
        CommandNode{Kind::Union, {}, {}, {}, {std::move(left), std::move(right)}}));
}

Command Command::weave(Command left, Command right) {
    return Command(std::make_shared<const CommandNode>(
        CommandNode{Kind::Weave, {}, {}, {}, {std::move(left), std::move(right)}}));
}

Command Command::star(Command inner) {
    return Command(std::make_shared<const CommandNode>(
        CommandNode{Kind::Star, {}, {}, {}, {std::move(inner)}}));
}

Command Command::pref(Command inner) {
    return Command(std::make_shared<const CommandNode>(
        CommandNode{Kind::Pref, {}, {}, {}, {std::move(inner)}}));
}

Command::Kind Command::kind() const noexcept { return node_->kind; }

const Symbol& Command::symbol() const {
    if (node_->kind != Kind::Atomic) throw std::logic_error("Command::symbol: not atomic");
    return *node_->symbol;
}

Command::Direction Command::direction() const {
    if (node_->kind != Kind::Atomic) throw std::logic_error("Command::direction: not atomic");
    return *node_->direction;
}

const TraceStructure& Command::literal() const {
    if (node_->kind != Kind::TraceSet) throw std::logic_error("Command::literal: not a trace set");
    return *node_->literal;
}

const Command& Command::left() const {
    if (node_->children.size() != 2) throw std::logic_error("Command::left: not binary");
    return node_->children[0];
}

const Command& Command::right() const {
    if (node_->children.size() != 2) throw std::logic_error("Command::right: not binary");
    return node_->children[1];
}

const Command& Command::inner() const {
    if (node_->children.size() != 1) throw std::logic_error("Command::inner: not unary");
    return node_->children[0];
}

std::pair<SymbolSet, SymbolSet> command_alphabet(const Command& cmd) {
    switch (cmd.kind()) {
        case Command::Kind::Atomic: {
            SymbolSet in, out;
            (cmd.direction() == Command::Direction::Input ? in : out).insert(cmd.symbol());
            return {in, out};
        }
        case Command::Kind::TraceSet:
            return {cmd.literal().inputs(), cmd.literal().outputs()};
        case Command::Kind::Star:
        case Command::Kind::Pref:
            return command_alphabet(cmd.inner());
        default: {
            auto [li, lo] = command_alphabet(cmd.left());
            auto [ri, ro] = command_alphabet(cmd.right());
            for (const Symbol& x : li) {
                if (ro.contains(x)) {
                    throw AlphabetClashError("symbol '" + x.name() +
                                             "' is both an input and an output in the command");
                }
            }
            for (const Symbol& x : lo) {
                if (ri.contains(x)) {
                    throw AlphabetClashError("symbol '" + x.name() +
                                             "' is both an input and an output in the command");
                }
            }
            li.insert(ri.begin(), ri.end());
            lo.insert(ro.begin(), ro.end());
            return {li, lo};
        }
    }
    throw std::logic_error("command_alphabet: unknown command kind");
}

// ── enumerate ───────────────────────────────────────────────────────────────
// Subexpressions are evaluated against an internal horizon that exceeds the
// requested bound by the total base-unit leaf budget of the command.  The
// slack keeps prefix-over-star exact at the requested bound: any prefix of a
// long star trace is also a prefix of a star trace at most one unit longer.
// The final result is filtered back down to the requested bound.
// ─────────────────────────────────────────────────────────────────────────────

namespace {

struct EvalState {
    int user_bound;
    int horizon;
    bool truncated = false;
};

int max_literal_trace_leaves(const TraceStructure& s) {
    int m = 0;
    for (const Term& t : s.traces()) m = std::max(m, leaf_count(t));
    return m;
}

int base_unit_budget(const Command& cmd) {
    switch (cmd.kind()) {
        case Command::Kind::Atomic:
            return 1;
        case Command::Kind::TraceSet:
            return max_literal_trace_leaves(cmd.literal());
        case Command::Kind::Star:
        case Command::Kind::Pref:
            return base_unit_budget(cmd.inner());
        default:
            return base_unit_budget(cmd.left()) + base_unit_budget(cmd.right());
    }
}

TermSet eval(const Command& cmd, EvalState& st);

TermSet eval_weave(const Command& cmd, EvalState& st) {
    const TermSet lhs = eval(cmd.left(), st);
    const TermSet rhs = eval(cmd.right(), st);
    auto [li, lo] = command_alphabet(cmd.left());
    auto [ri, ro] = command_alphabet(cmd.right());
    TraceStructure woven = weave(TraceStructure(std::move(li), std::move(lo), lhs),
                                 TraceStructure(std::move(ri), std::move(ro), rhs));
    TermSet out;
    for (const Term& t : woven.traces()) {
        if (leaf_count(t) > st.horizon) {
            st.truncated = true;
            continue;
        }
        out.insert(t);
    }
    return out;
}

TermSet eval(const Command& cmd, EvalState& st) {
    switch (cmd.kind()) {
        case Command::Kind::Atomic:
            return {Term::leaf(cmd.symbol())};
        case Command::Kind::TraceSet: {
            TermSet out;
            for (const Term& t : cmd.literal().traces()) {
                if (leaf_count(t) > st.user_bound) {
                    throw BoundExceededError("trace with " + std::to_string(leaf_count(t)) +
                                             " events exceeds max_events = " +
                                             std::to_string(st.user_bound));
                }
                out.insert(t);
            }
            return out;
        }
        case Command::Kind::Concat: {
            const TermSet lhs = eval(cmd.left(), st);
            const TermSet rhs = eval(cmd.right(), st);
            TermSet out;
            for (const Term& a : lhs) {
                const int la = leaf_count(a);
                for (const Term& b : rhs) {
                    if (la + leaf_count(b) > st.horizon) {
                        st.truncated = true;
                        continue;
                    }
                    out.insert(normalize(Term::seq({a, b})));
                }
            }
            return out;
        }
        case Command::Kind::Union: {
            TermSet out = eval(cmd.left(), st);
            const TermSet rhs = eval(cmd.right(), st);
            out.insert(rhs.begin(), rhs.end());
            return out;
        }
        case Command::Kind::Weave:
            return eval_weave(cmd, st);
        case Command::Kind::Star: {
            const TermSet units = eval(cmd.inner(), st);
            TermSet out{Term::epsilon()};
            std::deque<Term> work{Term::epsilon()};
            while (!work.empty()) {
                Term w = work.front();
                work.pop_front();
                const int base = leaf_count(w);
                for (const Term& unit : units) {
                    const int grown = leaf_count(unit);
                    if (grown == 0) continue;
                    if (base + grown > st.horizon) {
                        st.truncated = true;
                        continue;
                    }
                    Term next = normalize(Term::seq({w, unit}));
                    if (out.insert(next).second) work.push_back(next);
                }
            }
            return out;
        }
        case Command::Kind::Pref: {
            const TermSet inner = eval(cmd.inner(), st);
            TermSet out;
            for (const Term& t : inner) {
                TermSet ps = prefixes(t);
                out.insert(ps.begin(), ps.end());
            }
            return out;
        }
    }
    throw std::logic_error("enumerate: unknown command kind");
}

}  // namespace

EnumeratedStructure enumerate(const Command& cmd, EnumerationBound bound) {
    if (bound.max_events < 1) {
        throw std::invalid_argument("enumeration bound must be at least 1");
    }
    const int slack = std::min(64, std::max(1, base_unit_budget(cmd)));
    EvalState st{bound.max_events, bound.max_events + slack, false};
    TermSet all = eval(cmd, st);
    TermSet kept;
    for (const Term& t : all) {
        if (leaf_count(t) > bound.max_events) {
            st.truncated = true;
            continue;
        }
        kept.insert(t);
    }
    auto [in, out] = command_alphabet(cmd);
    TraceStructure s(std::move(in), std::move(out), std::move(kept));
    return EnumeratedStructure{std::move(s),
                               st.truncated ? std::optional<int>(bound.max_events) : std::nullopt};
}

}  // namespace rtrace
