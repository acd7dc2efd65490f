#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "rtrace/structure.hpp"

namespace rtrace {

/// Raised when a single non-starred trace (from an atom or a trace-set
/// literal) already exceeds the enumeration bound.
class BoundExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ── Command ─────────────────────────────────────────────────────────────────
// An expression over trace structures.  Star makes the denotation infinite,
// so commands are the persistent representation and enumerate() the sole
// elimination form.
// ─────────────────────────────────────────────────────────────────────────────

struct CommandNode;

class Command {
public:
    enum class Kind { Atomic, TraceSet, Concat, Union, Weave, Star, Pref };
    enum class Direction { Input, Output };

    static Command atomic(Symbol symbol, Direction direction);
    static Command trace_set(TraceStructure literal);
    static Command concat(Command left, Command right);
    static Command unite(Command left, Command right);
    static Command weave(Command left, Command right);
    static Command star(Command inner);
    static Command pref(Command inner);

    Kind kind() const noexcept;
    const Symbol& symbol() const;           // Atomic
    Direction direction() const;            // Atomic
    const TraceStructure& literal() const;  // TraceSet
    const Command& left() const;            // binary kinds
    const Command& right() const;           // binary kinds
    const Command& inner() const;           // Star, Pref

private:
    explicit Command(std::shared_ptr<const CommandNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const CommandNode> node_;
};

/// The statically known alphabets of a command (independent of any bound).
/// Throws AlphabetClashError when subcommands disagree on a direction.
std::pair<SymbolSet, SymbolSet> command_alphabet(const Command& cmd);

struct EnumeratedStructure {
    TraceStructure structure;
    /// Set when the result was truncated by the bound (a star was cut or a
    /// composed trace dropped); empty means the denotation is complete.
    std::optional<int> horizon;
};

/// The denotation of cmd restricted to traces with at most bound.max_events
/// leaves.  Monotone in the bound.  Throws BoundExceededError when a single
/// non-starred trace already exceeds the bound.
EnumeratedStructure enumerate(const Command& cmd, EnumerationBound bound);

}  // namespace rtrace
