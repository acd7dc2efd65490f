#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtrace/rules.hpp"
#include "rtrace/structure.hpp"

namespace rtrace {

// ── Classical traces ────────────────────────────────────────────────────────
// A classical trace is a total time-ordering: a plain sequence of symbols.
// Occurrence identity is lost in the reduction; only labels remain.
// ─────────────────────────────────────────────────────────────────────────────

using ClassicalTrace = std::vector<Symbol>;

std::string print_classical(const ClassicalTrace& t);

struct ClassicalStructure {
    SymbolSet inputs;
    SymbolSet outputs;
    std::set<ClassicalTrace> traces;

    bool is_input(const Symbol& s) const { return inputs.contains(s); }
    bool is_output(const Symbol& s) const { return outputs.contains(s); }
};

/// All linear extensions of the series-parallel order: an ordered pair maps
/// to its one interleaving, a contemporary pair to both.  Repeated symbols
/// can collapse distinct extensions into one string.
std::set<ClassicalTrace> linearize(const Term& t);

/// Linearizes every member; alphabets are copied.
ClassicalStructure to_classical(const TraceStructure& s);

struct ClassicalViolation {
    RuleId rule;
    ClassicalTrace s;
    Symbol a;
    Symbol b;
    ClassicalTrace t;
    std::optional<Symbol> c;
    std::set<ClassicalTrace> missing;
    std::set<ClassicalTrace> premise_witnesses;
};

struct ClassicalRuleResult {
    RuleId rule;
    RuleStatus status = RuleStatus::Pass;
    std::vector<ClassicalViolation> violations;
};

struct ClassicalCheckReport {
    std::string structure_id;
    std::vector<ClassicalRuleResult> rules;

    RuleStatus overall() const;
};

/// Classical rule scan, with s and t ranging over member traces as the
/// classical displays state.  R2' and the R3 family reuse the relativistic
/// type side-conditions.
ClassicalCheckReport check_classical_rule(const ClassicalStructure& c, RuleId rule,
                                          std::string structure_id = {});

// ── Cross-validation ────────────────────────────────────────────────────────

struct CrossValidation {
    RuleId rule;
    RuleStatus relativistic;
    RuleStatus classical;
    /// Forward direction: relativistic pass implies classical pass on the
    /// linearized image.  False exactly when that implication is refuted.
    bool forward_consistent;
    /// Reverse direction, reported for exploration only (the reduction
    /// forgets the contemporary-versus-both-orders distinction).
    bool reverse_consistent;
    CheckReport relativistic_report;
    ClassicalCheckReport classical_report;
};

CrossValidation cross_validate(const TraceStructure& s, RuleId rule,
                               std::optional<int> horizon = std::nullopt);

}  // namespace rtrace
