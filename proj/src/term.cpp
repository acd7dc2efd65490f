#include "rtrace/term.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace rtrace {

struct TermNode {
    TermKind kind;
    std::optional<Symbol> symbol;
    std::vector<Term> children;
};

Term Term::epsilon() {
    static const Term e{std::make_shared<const TermNode>(TermNode{TermKind::Epsilon, {}, {}})};
    return e;
}

Term Term::leaf(Symbol symbol) {
    return Term(std::make_shared<const TermNode>(
        TermNode{TermKind::Leaf, std::move(symbol), {}}));
}

Term Term::seq(std::vector<Term> children) {
    return Term(std::make_shared<const TermNode>(
        TermNode{TermKind::Seq, {}, std::move(children)}));
}

Term Term::par(std::vector<Term> children) {
    return Term(std::make_shared<const TermNode>(
        TermNode{TermKind::Par, {}, std::move(children)}));
}

Term Term::any_order(Term left, Term right) {
    return Term(std::make_shared<const TermNode>(
        TermNode{TermKind::AnyOrder, {}, {std::move(left), std::move(right)}}));
}

TermKind Term::kind() const noexcept { return node_->kind; }

const Symbol& Term::symbol() const {
    if (node_->kind != TermKind::Leaf) {
        throw std::logic_error("Term::symbol: not a leaf");
    }
    return *node_->symbol;
}

const std::vector<Term>& Term::children() const {
    if (node_->kind == TermKind::Leaf || node_->kind == TermKind::Epsilon) {
        throw std::logic_error("Term::children: leaf or epsilon has no children");
    }
    return node_->children;
}

std::strong_ordering Term::operator<=>(const Term& other) const {
    if (node_ == other.node_) return std::strong_ordering::equal;
    if (auto c = node_->kind <=> other.node_->kind; c != 0) return c;
    switch (node_->kind) {
        case TermKind::Epsilon:
            return std::strong_ordering::equal;
        case TermKind::Leaf:
            return *node_->symbol <=> *other.node_->symbol;
        default:
            return std::lexicographical_compare_three_way(
                node_->children.begin(), node_->children.end(),
                other.node_->children.begin(), other.node_->children.end());
    }
}

bool Term::operator==(const Term& other) const {
    return (*this <=> other) == std::strong_ordering::equal;
}

const char* order_relation_name(OrderRelation r) noexcept {
    switch (r) {
        case OrderRelation::Before:       return "before";
        case OrderRelation::After:        return "after";
        case OrderRelation::Contemporary: return "contemporary";
    }
    return "?";
}

// ── normalize ───────────────────────────────────────────────────────────────
// Bottom-up: normalize children, splice same-kind children (series and
// parallel composition are associative), drop epsilons (identity of both),
// collapse empty and singleton composites, and sort Par children by the
// structural order.

Term normalize(const Term& t) {
    switch (t.kind()) {
        case TermKind::Epsilon:
        case TermKind::Leaf:
            return t;
        case TermKind::AnyOrder: {
            const auto& cs = t.children();
            return Term::any_order(normalize(cs[0]), normalize(cs[1]));
        }
        case TermKind::Seq:
        case TermKind::Par: {
            const TermKind kind = t.kind();
            std::vector<Term> flat;
            flat.reserve(t.children().size());
            for (const Term& child : t.children()) {
                Term nc = normalize(child);
                if (nc.kind() == TermKind::Epsilon) continue;
                if (nc.kind() == kind) {
                    for (const Term& grand : nc.children()) flat.push_back(grand);
                } else {
                    flat.push_back(std::move(nc));
                }
            }
            if (flat.empty()) return Term::epsilon();
            if (flat.size() == 1) return flat.front();
            if (kind == TermKind::Par) {
                std::sort(flat.begin(), flat.end());
                return Term::par(std::move(flat));
            }
            return Term::seq(std::move(flat));
        }
    }
    throw std::logic_error("normalize: unknown term kind");
}

bool is_normal_form(const Term& t) {
    switch (t.kind()) {
        case TermKind::Epsilon:
        case TermKind::Leaf:
            return true;
        case TermKind::AnyOrder:
            return is_normal_form(t.children()[0]) && is_normal_form(t.children()[1]);
        case TermKind::Seq:
        case TermKind::Par: {
            const auto& cs = t.children();
            if (cs.size() < 2) return false;
            for (const Term& c : cs) {
                if (c.kind() == TermKind::Epsilon) return false;
                if (c.kind() == t.kind()) return false;
                if (!is_normal_form(c)) return false;
            }
            if (t.kind() == TermKind::Par) {
                if (!std::is_sorted(cs.begin(), cs.end())) return false;
            }
            return true;
        }
    }
    return false;
}

int leaf_count(const Term& t) {
    switch (t.kind()) {
        case TermKind::Epsilon: return 0;
        case TermKind::Leaf:    return 1;
        default: {
            int n = 0;
            for (const Term& c : t.children()) n += leaf_count(c);
            return n;
        }
    }
}

SymbolSet symbols_of(const Term& t) {
    SymbolSet out;
    switch (t.kind()) {
        case TermKind::Epsilon:
            break;
        case TermKind::Leaf:
            out.insert(t.symbol());
            break;
        default:
            for (const Term& c : t.children()) {
                SymbolSet sub = symbols_of(c);
                out.insert(sub.begin(), sub.end());
            }
    }
    return out;
}

bool contains_any_order(const Term& t) {
    switch (t.kind()) {
        case TermKind::Epsilon:
        case TermKind::Leaf:
            return false;
        case TermKind::AnyOrder:
            return true;
        default:
            for (const Term& c : t.children()) {
                if (contains_any_order(c)) return true;
            }
            return false;
    }
}

namespace {

void collect_occurrences(const Term& t, std::vector<int>& path,
                         std::vector<Occurrence>& out) {
    switch (t.kind()) {
        case TermKind::Epsilon:
            return;
        case TermKind::Leaf:
            out.push_back(Occurrence{path, t.symbol()});
            return;
        default: {
            const auto& cs = t.children();
            for (int i = 0; i < static_cast<int>(cs.size()); ++i) {
                path.push_back(i);
                collect_occurrences(cs[i], path, out);
                path.pop_back();
            }
        }
    }
}

const Term* node_at(const Term& root, const std::vector<int>& path) {
    const Term* cur = &root;
    for (int idx : path) {
        if (cur->kind() == TermKind::Leaf || cur->kind() == TermKind::Epsilon) return nullptr;
        const auto& cs = cur->children();
        if (idx < 0 || idx >= static_cast<int>(cs.size())) return nullptr;
        cur = &cs[static_cast<std::size_t>(idx)];
    }
    return cur;
}

}  // namespace

std::vector<Occurrence> occurrences(const Term& t) {
    std::vector<Occurrence> out;
    std::vector<int> path;
    collect_occurrences(t, path, out);
    return out;
}

OrderRelation order_of(const Term& t, const Occurrence& a, const Occurrence& b) {
    const Term* la = node_at(t, a.path);
    const Term* lb = node_at(t, b.path);
    if (la == nullptr || la->kind() != TermKind::Leaf) {
        throw std::invalid_argument("order_of: first path does not address a leaf");
    }
    if (lb == nullptr || lb->kind() != TermKind::Leaf) {
        throw std::invalid_argument("order_of: second path does not address a leaf");
    }
    if (a.path == b.path) {
        throw std::invalid_argument("order_of: occurrences must be distinct");
    }

    std::size_t k = 0;
    while (k < a.path.size() && k < b.path.size() && a.path[k] == b.path[k]) ++k;
    // Distinct leaf paths can never be prefixes of one another.
    std::vector<int> prefix(a.path.begin(), a.path.begin() + static_cast<long>(k));
    const Term* lca = node_at(t, prefix);
    switch (lca->kind()) {
        case TermKind::Seq:
            return a.path[k] < b.path[k] ? OrderRelation::Before : OrderRelation::After;
        case TermKind::Par:
            return OrderRelation::Contemporary;
        case TermKind::AnyOrder:
            throw std::invalid_argument("order_of: order undefined across an unexpanded any-order node");
        default:
            throw std::logic_error("order_of: leaf ancestor is not a composite");
    }
}

namespace {

Term strip_symbols(const Term& t, const SymbolSet& keep) {
    switch (t.kind()) {
        case TermKind::Epsilon:
            return t;
        case TermKind::Leaf:
            return keep.contains(t.symbol()) ? t : Term::epsilon();
        case TermKind::AnyOrder:
            return Term::any_order(strip_symbols(t.children()[0], keep),
                                   strip_symbols(t.children()[1], keep));
        default: {
            std::vector<Term> cs;
            cs.reserve(t.children().size());
            for (const Term& c : t.children()) cs.push_back(strip_symbols(c, keep));
            return t.kind() == TermKind::Seq ? Term::seq(std::move(cs))
                                             : Term::par(std::move(cs));
        }
    }
}

}  // namespace

Term project(const Term& t, const SymbolSet& keep) {
    return normalize(strip_symbols(t, keep));
}

TermSet prefixes(const Term& t) {
    TermSet out;
    out.insert(Term::epsilon());
    out.insert(t);
    if (t.kind() == TermKind::Seq) {
        const auto& cs = t.children();
        for (std::size_t k = 1; k < cs.size(); ++k) {
            out.insert(from_series_factors(std::vector<Term>(cs.begin(), cs.begin() + static_cast<long>(k))));
        }
    }
    return out;
}

TermSet expand_any_order(const Term& t) {
    switch (t.kind()) {
        case TermKind::Epsilon:
        case TermKind::Leaf:
            return {t};
        case TermKind::AnyOrder: {
            TermSet lefts = expand_any_order(t.children()[0]);
            TermSet rights = expand_any_order(t.children()[1]);
            TermSet out;
            for (const Term& u : lefts) {
                for (const Term& v : rights) {
                    out.insert(normalize(Term::seq({u, v})));
                    out.insert(normalize(Term::seq({v, u})));
                    out.insert(normalize(Term::par({u, v})));
                }
            }
            return out;
        }
        case TermKind::Seq:
        case TermKind::Par: {
            // Cartesian product of the children's expansions.
            std::vector<TermSet> per_child;
            per_child.reserve(t.children().size());
            for (const Term& c : t.children()) per_child.push_back(expand_any_order(c));
            std::vector<std::vector<Term>> partial{{}};
            for (const TermSet& options : per_child) {
                std::vector<std::vector<Term>> next;
                for (const auto& acc : partial) {
                    for (const Term& opt : options) {
                        auto copy = acc;
                        copy.push_back(opt);
                        next.push_back(std::move(copy));
                    }
                }
                partial = std::move(next);
            }
            TermSet out;
            for (auto& cs : partial) {
                Term raw = t.kind() == TermKind::Seq ? Term::seq(std::move(cs))
                                                     : Term::par(std::move(cs));
                out.insert(normalize(raw));
            }
            return out;
        }
    }
    throw std::logic_error("expand_any_order: unknown term kind");
}

std::vector<Term> series_factors(const Term& t) {
    if (t.kind() == TermKind::Epsilon) return {};
    if (t.kind() == TermKind::Seq) return t.children();
    return {t};
}

Term from_series_factors(std::vector<Term> factors) {
    if (factors.empty()) return Term::epsilon();
    if (factors.size() == 1) return factors.front();
    return normalize(Term::seq(std::move(factors)));
}

}  // namespace rtrace
