#pragma once

// Shared test helpers: RNG-driven term and structure generators and the
// independent oracles used to cross-check the library implementations.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "rtrace/classical.hpp"
#include "rtrace/structure.hpp"
#include "rtrace/term.hpp"

namespace rtest {

using namespace rtrace;

inline Symbol sym(const std::string& name) { return Symbol(name); }

inline Term leaf(const std::string& name) { return Term::leaf(sym(name)); }

inline std::vector<Symbol> alphabet(int size) {
    static const char* names[] = {"a", "b", "c", "d", "e", "f"};
    std::vector<Symbol> out;
    for (int i = 0; i < size; ++i) out.push_back(sym(names[i]));
    return out;
}

// ── Random raw trees ────────────────────────────────────────────────────────
// Deliberately messy: nested same-kind composites, epsilons, singleton and
// empty composites, unsorted parallel children.

inline Term random_raw_term(std::mt19937& rng, const std::vector<Symbol>& syms, int budget,
                            bool allow_any_order = false) {
    std::uniform_int_distribution<int> kind_die(0, allow_any_order ? 9 : 8);
    const int roll = budget <= 1 ? std::uniform_int_distribution<int>(0, 2)(rng) : kind_die(rng);
    if (roll <= 1) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(syms.size()) - 1);
        return Term::leaf(syms[static_cast<std::size_t>(pick(rng))]);
    }
    if (roll == 2) return Term::epsilon();
    if (roll == 9) {
        return Term::any_order(random_raw_term(rng, syms, budget / 2, allow_any_order),
                               random_raw_term(rng, syms, budget / 2, allow_any_order));
    }
    std::uniform_int_distribution<int> width_die(0, 3);
    const int width = width_die(rng);
    std::vector<Term> children;
    for (int i = 0; i < width; ++i) {
        children.push_back(random_raw_term(rng, syms, budget / std::max(1, width),
                                           allow_any_order));
    }
    return roll <= 5 ? Term::seq(std::move(children)) : Term::par(std::move(children));
}

inline Term random_normal_term(std::mt19937& rng, const std::vector<Symbol>& syms,
                               int max_leaves) {
    for (;;) {
        Term t = normalize(random_raw_term(rng, syms, max_leaves));
        if (leaf_count(t) <= max_leaves) return t;
    }
}

// ── Randomized rewriter (confluence oracle) ─────────────────────────────────
// Applies the local rewrite laws one redex at a time, in random order, until
// no law applies.  Independent of normalize(): a mutable tree plus explicit
// single-step rules.

struct RawNode {
    TermKind kind;
    std::optional<Symbol> symbol;
    std::vector<std::unique_ptr<RawNode>> children;
};

inline std::unique_ptr<RawNode> to_raw(const Term& t) {
    auto node = std::make_unique<RawNode>();
    node->kind = t.kind();
    if (t.kind() == TermKind::Leaf) {
        node->symbol = t.symbol();
    } else if (t.kind() != TermKind::Epsilon) {
        for (const Term& c : t.children()) node->children.push_back(to_raw(c));
    }
    return node;
}

inline Term from_raw(const RawNode& node) {
    switch (node.kind) {
        case TermKind::Epsilon:
            return Term::epsilon();
        case TermKind::Leaf:
            return Term::leaf(*node.symbol);
        default: {
            std::vector<Term> cs;
            for (const auto& c : node.children) cs.push_back(from_raw(*c));
            switch (node.kind) {
                case TermKind::Seq: return Term::seq(std::move(cs));
                case TermKind::Par: return Term::par(std::move(cs));
                default:            return Term::any_order(cs.at(0), cs.at(1));
            }
        }
    }
}

// One applicable rewrite at a specific node: a redex closure mutating the tree.
struct Redex {
    RawNode* parent;
    int index;  // child position, or -1 for node-level rules
    int rule;   // 0 splice, 1 drop-epsilon, 2 collapse-singleton-or-empty, 3 swap-par
};

inline void collect_redexes(RawNode& node, std::vector<Redex>& out) {
    if (node.kind == TermKind::Epsilon || node.kind == TermKind::Leaf) return;
    const bool composite = node.kind == TermKind::Seq || node.kind == TermKind::Par;
    if (composite) {
        for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
            RawNode& c = *node.children[static_cast<std::size_t>(i)];
            if (c.kind == node.kind) out.push_back({&node, i, 0});
            if (c.kind == TermKind::Epsilon) out.push_back({&node, i, 1});
        }
        if (node.children.size() < 2) out.push_back({&node, -1, 2});
        if (node.kind == TermKind::Par) {
            for (int i = 0; i + 1 < static_cast<int>(node.children.size()); ++i) {
                const Term lhs = from_raw(*node.children[static_cast<std::size_t>(i)]);
                const Term rhs = from_raw(*node.children[static_cast<std::size_t>(i) + 1]);
                // Only fully reduced children are compared, otherwise a swap
                // could fight with pending inner rewrites.
                if (is_normal_form(lhs) && is_normal_form(rhs) && rhs < lhs) {
                    out.push_back({&node, i, 3});
                }
            }
        }
    }
    for (auto& c : node.children) collect_redexes(*c, out);
}

inline void apply_redex(const Redex& r) {
    auto& cs = r.parent->children;
    switch (r.rule) {
        case 0: {  // splice same-kind child
            auto idx = static_cast<std::size_t>(r.index);
            auto grand = std::move(cs[idx]->children);
            cs.erase(cs.begin() + r.index);
            cs.insert(cs.begin() + r.index, std::make_move_iterator(grand.begin()),
                      std::make_move_iterator(grand.end()));
            break;
        }
        case 1:  // drop epsilon child
            cs.erase(cs.begin() + r.index);
            break;
        case 2:  // collapse singleton or empty composite
            if (cs.empty()) {
                r.parent->kind = TermKind::Epsilon;
            } else {
                auto only = std::move(cs.front());
                r.parent->kind = only->kind;
                r.parent->symbol = only->symbol;
                r.parent->children = std::move(only->children);
            }
            break;
        case 3:  // swap out-of-order parallel children
            std::swap(cs[static_cast<std::size_t>(r.index)],
                      cs[static_cast<std::size_t>(r.index) + 1]);
            break;
    }
}

/// Rewrites t to a fixpoint, picking one random applicable law per step.
inline Term rewrite_randomly(const Term& t, std::mt19937& rng) {
    // AnyOrder as an inert sentinel wrapper: it is never itself a redex, so
    // the real root can collapse or splice freely underneath it.
    auto root = std::make_unique<RawNode>();
    root->kind = TermKind::AnyOrder;
    root->children.push_back(to_raw(t));
    for (;;) {
        std::vector<Redex> redexes;
        collect_redexes(*root, redexes);
        if (redexes.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, redexes.size() - 1);
        apply_redex(redexes[pick(rng)]);
    }
    return from_raw(*root->children.front());
}

// ── Projection oracle ───────────────────────────────────────────────────────
// Follows the per-part elision cases directly on the raw tree: project each
// part, drop parts that vanish, keep the combinator.

inline Term project_oracle(const Term& t, const SymbolSet& keep) {
    switch (t.kind()) {
        case TermKind::Epsilon:
            return t;
        case TermKind::Leaf:
            return keep.contains(t.symbol()) ? t : Term::epsilon();
        default: {
            std::vector<Term> parts;
            for (const Term& c : t.children()) {
                Term p = project_oracle(c, keep);
                if (p.kind() != TermKind::Epsilon) parts.push_back(std::move(p));
            }
            if (parts.empty()) return Term::epsilon();
            if (parts.size() == 1) return parts.front();
            Term raw = t.kind() == TermKind::Seq ? Term::seq(std::move(parts))
                                                 : Term::par(std::move(parts));
            return normalize(raw);
        }
    }
}

// ── Brute-force linear extensions ───────────────────────────────────────────
// Permutes occurrence indices, filters by the pairwise order, and collapses
// to symbol strings.

inline std::set<ClassicalTrace> brute_force_linearizations(const Term& t) {
    const std::vector<Occurrence> occs = occurrences(t);
    const std::size_t n = occs.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    std::vector<std::vector<bool>> before(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) before[i][j] = order_of(t, occs[i], occs[j]) == OrderRelation::Before;
        }
    }

    std::set<ClassicalTrace> out;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            for (std::size_t j = i + 1; j < n && ok; ++j) {
                if (before[perm[j]][perm[i]]) ok = false;
            }
        }
        if (ok) {
            ClassicalTrace ct;
            for (std::size_t i : perm) ct.push_back(occs[i].symbol);
            out.insert(std::move(ct));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (n == 0) out.insert(ClassicalTrace{});
    return out;
}

// ── Exhaustive series-parallel term enumeration ─────────────────────────────
// All normalized terms with a given leaf multiset; used for weave
// completeness checks and for sweeping small term universes.

inline std::set<Term> all_terms_over(const std::map<Symbol, int>& multiset) {
    std::set<Term> out;
    int n = 0;
    for (const auto& [s, k] : multiset) n += k;
    if (n == 0) {
        out.insert(Term::epsilon());
        return out;
    }
    if (n == 1) {
        out.insert(Term::leaf(multiset.begin()->first));
        return out;
    }
    std::vector<std::pair<Symbol, int>> entries(multiset.begin(), multiset.end());
    std::vector<int> take(entries.size(), 0);
    for (;;) {
        std::size_t i = 0;
        while (i < take.size()) {
            if (take[i] < entries[i].second) {
                ++take[i];
                break;
            }
            take[i] = 0;
            ++i;
        }
        if (i == take.size()) break;
        std::map<Symbol, int> first, second;
        for (std::size_t j = 0; j < entries.size(); ++j) {
            if (take[j] > 0) first[entries[j].first] = take[j];
            if (entries[j].second - take[j] > 0) {
                second[entries[j].first] = entries[j].second - take[j];
            }
        }
        if (first.empty() || second.empty()) continue;
        for (const Term& u : all_terms_over(first)) {
            for (const Term& v : all_terms_over(second)) {
                out.insert(normalize(Term::seq({u, v})));
                out.insert(normalize(Term::par({u, v})));
            }
        }
    }
    return out;
}

/// Every normalized term over the alphabet with 1..max_leaves leaves.
inline std::vector<Term> term_universe(const std::vector<Symbol>& syms, int max_leaves) {
    std::set<Term> out;
    // Enumerate leaf multisets of each size.
    std::vector<int> counts(syms.size(), 0);
    for (;;) {
        std::size_t i = 0;
        while (i < counts.size()) {
            if (counts[i] < max_leaves) {
                ++counts[i];
                break;
            }
            counts[i] = 0;
            ++i;
        }
        if (i == counts.size()) break;
        int total = 0;
        for (int k : counts) total += k;
        if (total < 1 || total > max_leaves) continue;
        std::map<Symbol, int> multiset;
        for (std::size_t j = 0; j < syms.size(); ++j) {
            if (counts[j] > 0) multiset[syms[j]] = counts[j];
        }
        auto terms = all_terms_over(multiset);
        out.insert(terms.begin(), terms.end());
    }
    return std::vector<Term>(out.begin(), out.end());
}

}  // namespace rtest
