#include "rtrace/structure.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace rtrace {

namespace {

void check_direction_consistency(const TraceStructure& r, const TraceStructure& s) {
    for (const Symbol& x : r.inputs()) {
        if (s.outputs().contains(x)) {
            throw AlphabetClashError("symbol '" + x.name() +
                                     "' is an input of one operand and an output of the other");
        }
    }
    for (const Symbol& x : r.outputs()) {
        if (s.inputs().contains(x)) {
            throw AlphabetClashError("symbol '" + x.name() +
                                     "' is an output of one operand and an input of the other");
        }
    }
}

SymbolSet set_union(const SymbolSet& a, const SymbolSet& b) {
    SymbolSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

SymbolSet set_intersection(const SymbolSet& a, const SymbolSet& b) {
    SymbolSet out;
    for (const Symbol& x : a) {
        if (b.contains(x)) out.insert(x);
    }
    return out;
}

}  // namespace

TraceStructure::TraceStructure(SymbolSet inputs, SymbolSet outputs, TermSet traces)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
    for (const Symbol& x : inputs_) {
        if (outputs_.contains(x)) {
            throw AlphabetClashError("symbol '" + x.name() + "' declared both input and output");
        }
    }
    for (const Term& raw : traces) {
        if (contains_any_order(raw)) {
            throw std::invalid_argument(
                "trace structures hold plain R-traces; expand any-order shorthand first");
        }
        Term t = normalize(raw);
        for (const Symbol& x : symbols_of(t)) {
            if (!inputs_.contains(x) && !outputs_.contains(x)) {
                throw std::invalid_argument("trace symbol '" + x.name() +
                                            "' is outside the structure alphabet");
            }
        }
        traces_.insert(std::move(t));
    }
}

SymbolSet TraceStructure::alphabet() const { return set_union(inputs_, outputs_); }

TraceStructure concat(const TraceStructure& r, const TraceStructure& s) {
    check_direction_consistency(r, s);
    TermSet out;
    for (const Term& a : r.traces()) {
        for (const Term& b : s.traces()) {
            out.insert(normalize(Term::seq({a, b})));
        }
    }
    return TraceStructure(set_union(r.inputs(), s.inputs()),
                          set_union(r.outputs(), s.outputs()), std::move(out));
}

TraceStructure unite(const TraceStructure& r, const TraceStructure& s) {
    check_direction_consistency(r, s);
    TermSet out = r.traces();
    out.insert(s.traces().begin(), s.traces().end());
    return TraceStructure(set_union(r.inputs(), s.inputs()),
                          set_union(r.outputs(), s.outputs()), std::move(out));
}

TraceStructure star(const TraceStructure& r, EnumerationBound bound) {
    if (bound.max_events < 1) {
        throw std::invalid_argument("enumeration bound must be at least 1");
    }
    TermSet out{Term::epsilon()};
    std::deque<Term> work{Term::epsilon()};
    while (!work.empty()) {
        Term w = work.front();
        work.pop_front();
        const int base = leaf_count(w);
        for (const Term& unit : r.traces()) {
            const int grown = leaf_count(unit);
            if (grown == 0) continue;
            if (base + grown > bound.max_events) continue;
            Term next = normalize(Term::seq({w, unit}));
            if (out.insert(next).second) work.push_back(next);
        }
    }
    return TraceStructure(r.inputs(), r.outputs(), std::move(out));
}

TraceStructure prefix_close(const TraceStructure& r) {
    TermSet out;
    for (const Term& t : r.traces()) {
        TermSet ps = prefixes(t);
        out.insert(ps.begin(), ps.end());
    }
    return TraceStructure(r.inputs(), r.outputs(), std::move(out));
}

bool is_prefix_closed(const TraceStructure& r) {
    for (const Term& t : r.traces()) {
        for (const Term& p : prefixes(t)) {
            if (!r.traces().contains(p)) return false;
        }
    }
    return true;
}

TraceStructure project_structure(const TraceStructure& r, const SymbolSet& keep) {
    TermSet out;
    for (const Term& t : r.traces()) out.insert(project(t, keep));
    return TraceStructure(set_intersection(r.inputs(), keep),
                          set_intersection(r.outputs(), keep), std::move(out));
}

// ── Weave ───────────────────────────────────────────────────────────────────
// Candidate traces are generated per leaf multiset.  For a pair (r, s) the
// multiset is forced: shared symbols must occur equally often in both
// projections, symbols private to one side keep that side's count.  All
// series-parallel terms over a multiset are produced by binary splits plus
// normalization, then filtered by projection membership.
// ─────────────────────────────────────────────────────────────────────────────

namespace {

using Multiset = std::map<Symbol, int>;

Multiset multiset_of(const Term& t) {
    Multiset m;
    for (const Occurrence& o : occurrences(t)) m[o.symbol] += 1;
    return m;
}

int multiset_size(const Multiset& m) {
    int n = 0;
    for (const auto& [sym, k] : m) n += k;
    return n;
}

// All normalized series-parallel terms whose leaves are exactly the multiset.
// Memoized across one weave computation.
const TermSet& terms_over(const Multiset& m, std::map<Multiset, TermSet>& memo) {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;

    TermSet out;
    const int n = multiset_size(m);
    if (n == 0) {
        out.insert(Term::epsilon());
    } else if (n == 1) {
        out.insert(Term::leaf(m.begin()->first));
    } else {
        // Enumerate ordered splits into two nonempty parts.
        std::vector<std::pair<Symbol, int>> entries(m.begin(), m.end());
        std::vector<int> take(entries.size(), 0);
        while (true) {
            // Advance the counting vector.
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

            Multiset first, second;
            for (std::size_t j = 0; j < entries.size(); ++j) {
                if (take[j] > 0) first[entries[j].first] = take[j];
                const int rest = entries[j].second - take[j];
                if (rest > 0) second[entries[j].first] = rest;
            }
            if (first.empty() || second.empty()) continue;

            const TermSet& us = terms_over(first, memo);
            const TermSet& vs = terms_over(second, memo);
            for (const Term& u : us) {
                for (const Term& v : vs) {
                    out.insert(normalize(Term::seq({u, v})));
                    out.insert(normalize(Term::par({u, v})));
                }
            }
        }
    }
    return memo.emplace(m, std::move(out)).first->second;
}

}  // namespace

TraceStructure weave(const TraceStructure& r, const TraceStructure& s) {
    check_direction_consistency(r, s);
    const SymbolSet ar = r.alphabet();
    const SymbolSet as = s.alphabet();
    const SymbolSet shared = set_intersection(ar, as);

    std::set<Multiset> candidates;
    for (const Term& tr : r.traces()) {
        const Multiset mr = multiset_of(tr);
        for (const Term& ts : s.traces()) {
            const Multiset ms = multiset_of(ts);
            bool compatible = true;
            for (const Symbol& x : shared) {
                const auto itr = mr.find(x);
                const auto its = ms.find(x);
                const int cr = itr == mr.end() ? 0 : itr->second;
                const int cs = its == ms.end() ? 0 : its->second;
                if (cr != cs) {
                    compatible = false;
                    break;
                }
            }
            if (!compatible) continue;
            Multiset merged = mr;
            for (const auto& [sym, k] : ms) {
                if (!shared.contains(sym)) merged[sym] += k;
            }
            candidates.insert(std::move(merged));
        }
    }

    std::map<Multiset, TermSet> memo;
    TermSet out;
    for (const Multiset& m : candidates) {
        for (const Term& t : terms_over(m, memo)) {
            if (r.traces().contains(project(t, ar)) && s.traces().contains(project(t, as))) {
                out.insert(t);
            }
        }
    }
    return TraceStructure(set_union(r.inputs(), s.inputs()),
                          set_union(r.outputs(), s.outputs()), std::move(out));
}

}  // namespace rtrace
