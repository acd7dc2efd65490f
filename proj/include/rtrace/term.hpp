#pragma once

#include <compare>
#include <memory>
#include <set>
#include <vector>

#include "rtrace/symbol.hpp"

namespace rtrace {

// ── Term ────────────────────────────────────────────────────────────────────
// An R-trace term: a series-parallel partial order over event occurrences.
//
//   Epsilon        the empty trace
//   Leaf(a)        a single event occurrence labelled a
//   Seq[t1..tn]    series composition (every event of ti before every event
//                  of tj for i < j)
//   Par[t1..tn]    parallel composition (events of different children are
//                  contemporary)
//   AnyOrder(u,v)  input-layer shorthand for the set {u before v, v before u,
//                  u contemporary v}; never present in normalized traces held
//                  by structures, expanded by expand_any_order()
//
// Terms are immutable values sharing subtrees; all operations below are pure.
//
// Normal form: no Seq child is a Seq, no Par child is a Par, no Epsilon
// appears inside a composite, composites have at least two children, and Par
// children are sorted by the structural order (operator<=>), which makes
// commutativity of parallel composition a structural-equality fact.
// ─────────────────────────────────────────────────────────────────────────────

enum class TermKind { Epsilon, Leaf, Seq, Par, AnyOrder };

struct TermNode;

class Term {
public:
    // Raw constructors: they build exactly the requested tree, normalization
    // is a separate step.  Seq/Par accept any arity here; normalize() removes
    // empty and singleton composites.
    static Term epsilon();
    static Term leaf(Symbol symbol);
    static Term seq(std::vector<Term> children);
    static Term par(std::vector<Term> children);
    static Term any_order(Term left, Term right);

    TermKind kind() const noexcept;
    const Symbol& symbol() const;                 // Leaf only
    const std::vector<Term>& children() const;    // composite kinds only

    bool operator==(const Term& other) const;
    std::strong_ordering operator<=>(const Term& other) const;

private:
    explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const TermNode> node_;
};

using TermSet = std::set<Term>;

// ── Occurrences and their order ─────────────────────────────────────────────

/// Identifies one leaf of a term by its path of child indices from the root.
/// Labels repeat in realistic traces, so position is the identity.
struct Occurrence {
    std::vector<int> path;
    Symbol symbol;

    bool operator==(const Occurrence&) const = default;
    auto operator<=>(const Occurrence&) const = default;
};

enum class OrderRelation { Before, After, Contemporary };

const char* order_relation_name(OrderRelation r) noexcept;

// ── Operations ──────────────────────────────────────────────────────────────

/// Rewrites a raw term tree to its unique normal form.  Total on well-formed
/// trees, idempotent, preserves the induced order on occurrences.  AnyOrder
/// nodes are kept (their operands are normalized).
Term normalize(const Term& t);

/// True iff t already satisfies every normal-form invariant.
bool is_normal_form(const Term& t);

/// Number of leaves (event occurrences).
int leaf_count(const Term& t);

/// All symbols appearing on leaves.
SymbolSet symbols_of(const Term& t);

/// True iff an AnyOrder node occurs anywhere in t.
bool contains_any_order(const Term& t);

/// All leaves in depth-first order, with their paths.
std::vector<Occurrence> occurrences(const Term& t);

/// Time order of two distinct occurrences of a normalized term: Before/After
/// when the lowest common ancestor is a Seq, Contemporary when it is a Par.
/// Throws std::invalid_argument on invalid or equal paths, or when the
/// common ancestor is an unexpanded AnyOrder node.
OrderRelation order_of(const Term& t, const Occurrence& a, const Occurrence& b);

/// Projection: every leaf whose symbol is outside `keep` is erased and the
/// structure simplified (empty parts elided).
Term project(const Term& t, const SymbolSet& keep);

/// All u such that t = u followed-in-series by v, plus epsilon and t itself.
/// These are the cuts of the top-level series decomposition.
TermSet prefixes(const Term& t);

/// Replaces every AnyOrder(u,v) node, independently, by each of the three
/// relative orders of u and v, and returns the normalized result set.
TermSet expand_any_order(const Term& t);

/// Top-level series factors: children for a Seq, {} for epsilon, {t} else.
std::vector<Term> series_factors(const Term& t);

/// Inverse of series_factors modulo normalization.
Term from_series_factors(std::vector<Term> factors);

}  // namespace rtrace
