#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rtrace/structure.hpp"

namespace rtrace {

// ── Rule identifiers ────────────────────────────────────────────────────────
// Udding's rule names: R2P is R2', R3P/R3PP/R3PPP are the three R3 variants
// in decreasing strength.  A DI component satisfies R0, R1, R2' and R3'''.
// ─────────────────────────────────────────────────────────────────────────────

enum class RuleId { R0, R1, R2, R2P, R3P, R3PP, R3PPP };

const char* rule_name(RuleId r) noexcept;
std::optional<RuleId> rule_from_name(const std::string& name);

/// The four rules whose conjunction defines delay insensitivity.
const std::vector<RuleId>& di_rules();

enum class RuleStatus { Pass, Fail, InconclusiveAtBound };

const char* rule_status_name(RuleStatus s) noexcept;

/// A rule violation with its witness context: the premise held at position
/// (s, pair, t[, c]) but part of the required closure set is absent.
struct Violation {
    RuleId rule;
    Term s = Term::epsilon();
    Symbol a;
    Symbol b;
    Term t = Term::epsilon();
    std::optional<Symbol> c;
    /// Absent members of the required all-orders closure (empty for R0,
    /// where the premise itself is the offence).
    TermSet missing;
    /// Structure members that establish the premise.
    TermSet premise_witnesses;

    auto key() const { return std::tie(rule, s, a, b, t, c); }
};

struct RuleResult {
    RuleId rule;
    RuleStatus status = RuleStatus::Pass;
    std::vector<Violation> violations;
    /// Premise instances whose conclusion lies beyond the enumeration
    /// horizon and could not be decided.
    int inconclusive_instances = 0;
};

struct CheckReport {
    std::string structure_id;
    std::optional<int> bound;
    bool prefix_closed = true;
    std::vector<RuleResult> rules;

    RuleStatus overall() const;
};

/// Scans all instantiations of one rule's premise over the structure.
/// `horizon` is the enumeration cap the structure was produced under (empty
/// when the structure is a complete denotation); premises whose conclusion
/// would exceed it are reported inconclusive rather than failed.
CheckReport check_rule(const TraceStructure& s, RuleId rule,
                       std::optional<int> horizon = std::nullopt,
                       std::string structure_id = {});

CheckReport check_rules(const TraceStructure& s, const std::vector<RuleId>& rules,
                        std::optional<int> horizon = std::nullopt,
                        std::string structure_id = {});

/// The DI conjunction: R0, R1, R2', R3'''.
CheckReport check_di(const TraceStructure& s, std::optional<int> horizon = std::nullopt,
                     std::string structure_id = {});

// ── Classification ──────────────────────────────────────────────────────────

/// Component classes induced by the R3 ladder: choice-free components
/// satisfy R3', input choice (data communication) satisfies R3'' only,
/// output choice (arbitration) satisfies R3''' only.
enum class StructureClass { ChoiceFree, InputChoice, OutputChoice, None };

const char* structure_class_name(StructureClass c) noexcept;

/// Strongest R3 variant the structure satisfies; None when even R3''' fails
/// (inconclusive variants do not count as satisfied).
StructureClass classify(const TraceStructure& s, std::optional<int> horizon = std::nullopt);

}  // namespace rtrace
