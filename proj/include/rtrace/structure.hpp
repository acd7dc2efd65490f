#pragma once

#include <stdexcept>

#include "rtrace/term.hpp"

namespace rtrace {

/// Raised when composing structures whose alphabets disagree on a symbol's
/// direction (input in one operand, output in the other).
class AlphabetClashError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ── TraceStructure ──────────────────────────────────────────────────────────
// A triple of input alphabet, output alphabet and a finite set of normalized
// R-traces.  Every leaf symbol of every trace belongs to one of the two
// alphabets, the alphabets are disjoint, and traces are deduplicated after
// normalization.
// ─────────────────────────────────────────────────────────────────────────────

class TraceStructure {
public:
    TraceStructure(SymbolSet inputs, SymbolSet outputs, TermSet traces);

    const SymbolSet& inputs() const noexcept { return inputs_; }
    const SymbolSet& outputs() const noexcept { return outputs_; }
    const TermSet& traces() const noexcept { return traces_; }

    /// inputs ∪ outputs.
    SymbolSet alphabet() const;

    bool is_input(const Symbol& s) const { return inputs_.contains(s); }
    bool is_output(const Symbol& s) const { return outputs_.contains(s); }

    bool operator==(const TraceStructure&) const = default;

private:
    SymbolSet inputs_;
    SymbolSet outputs_;
    TermSet traces_;
};

/// Bounds enumeration of starred commands: a cap on the number of events per
/// enumerated trace.
struct EnumerationBound {
    int max_events = 8;
};

// ── Structure operations ────────────────────────────────────────────────────

/// Concatenation: alphabets unioned, traces are all series compositions of a
/// trace of each operand.
TraceStructure concat(const TraceStructure& r, const TraceStructure& s);

/// Union: alphabets unioned, trace sets unioned.
TraceStructure unite(const TraceStructure& r, const TraceStructure& s);

/// Star: all finite series compositions of member traces, truncated to
/// traces with at most bound.max_events leaves.
TraceStructure star(const TraceStructure& r, EnumerationBound bound);

/// Prefix closure: adds every series prefix of every trace.
TraceStructure prefix_close(const TraceStructure& r);

bool is_prefix_closed(const TraceStructure& r);

/// Projection onto a symbol set: alphabets intersected, traces projected.
TraceStructure project_structure(const TraceStructure& r, const SymbolSet& keep);

/// Weave: the traces over the merged alphabet whose projection onto each
/// operand's alphabet is a trace of that operand.  Candidates are generated
/// per leaf multiset (determined by the operands' traces), so the result is
/// finite without an explicit bound.
TraceStructure weave(const TraceStructure& r, const TraceStructure& s);

}  // namespace rtrace
