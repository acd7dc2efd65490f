#include "rtrace/rules.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace rtrace {

const char* rule_name(RuleId r) noexcept {
    switch (r) {
        case RuleId::R0:    return "r0";
        case RuleId::R1:    return "r1";
        case RuleId::R2:    return "r2";
        case RuleId::R2P:   return "r2p";
        case RuleId::R3P:   return "r3p";
        case RuleId::R3PP:  return "r3pp";
        case RuleId::R3PPP: return "r3ppp";
    }
    return "?";
}

std::optional<RuleId> rule_from_name(const std::string& name) {
    for (RuleId r : {RuleId::R0, RuleId::R1, RuleId::R2, RuleId::R2P, RuleId::R3P,
                     RuleId::R3PP, RuleId::R3PPP}) {
        if (name == rule_name(r)) return r;
    }
    return std::nullopt;
}

const std::vector<RuleId>& di_rules() {
    static const std::vector<RuleId> kRules{RuleId::R0, RuleId::R1, RuleId::R2P, RuleId::R3PPP};
    return kRules;
}

const char* rule_status_name(RuleStatus s) noexcept {
    switch (s) {
        case RuleStatus::Pass:                return "pass";
        case RuleStatus::Fail:                return "fail";
        case RuleStatus::InconclusiveAtBound: return "inconclusive-at-bound";
    }
    return "?";
}

const char* structure_class_name(StructureClass c) noexcept {
    switch (c) {
        case StructureClass::ChoiceFree:   return "choice-free (r3p)";
        case StructureClass::InputChoice:  return "input-choice (r3pp)";
        case StructureClass::OutputChoice: return "output-choice (r3ppp)";
        case StructureClass::None:         return "none";
    }
    return "?";
}

RuleStatus CheckReport::overall() const {
    RuleStatus out = RuleStatus::Pass;
    for (const RuleResult& r : rules) {
        if (r.status == RuleStatus::Fail) return RuleStatus::Fail;
        if (r.status == RuleStatus::InconclusiveAtBound) out = RuleStatus::InconclusiveAtBound;
    }
    return out;
}

// ── Scanning machinery ──────────────────────────────────────────────────────
// Premises are found by decomposing member traces at their top-level series
// factors: s (a factor prefix), the pattern core (adjacent leaves or a
// binary parallel pair), and t (a factor suffix).  Membership of a displayed
// trace means exact membership of its normal form, and membership of an
// all-orders trace means membership of all three expanded variants.
// ─────────────────────────────────────────────────────────────────────────────

namespace {

using Factors = std::vector<Term>;

Term compose(const Factors& s, std::initializer_list<Term> core, const Factors& t,
             const std::optional<Symbol>& tail) {
    Factors all = s;
    for (const Term& x : core) all.push_back(x);
    all.insert(all.end(), t.begin(), t.end());
    if (tail.has_value()) all.push_back(Term::leaf(*tail));
    return from_series_factors(std::move(all));
}

std::optional<std::pair<Symbol, Symbol>> par_leaf_pair(const Term& t) {
    if (t.kind() != TermKind::Par) return std::nullopt;
    const auto& cs = t.children();
    if (cs.size() != 2) return std::nullopt;
    if (cs[0].kind() != TermKind::Leaf || cs[1].kind() != TermKind::Leaf) return std::nullopt;
    return std::make_pair(cs[0].symbol(), cs[1].symbol());
}

bool factors_start_with(const Factors& haystack, const Factors& prefix) {
    if (prefix.size() > haystack.size()) return false;
    return std::equal(prefix.begin(), prefix.end(), haystack.begin());
}

struct Scan {
    const TraceStructure& S;
    RuleId rule;
    std::optional<int> horizon;

    std::map<std::tuple<RuleId, Term, Symbol, Symbol, Term, std::optional<Symbol>>, Violation>
        violations;
    int inconclusive = 0;
    int premises = 0;

    bool member(const Term& t) const { return S.traces().contains(t); }

    bool same_type(const Symbol& a, const Symbol& b) const {
        return (S.is_input(a) && S.is_input(b)) || (S.is_output(a) && S.is_output(b));
    }

    bool mixed_type(const Symbol& a, const Symbol& b) const {
        return (S.is_input(a) && S.is_output(b)) || (S.is_output(a) && S.is_input(b));
    }

    // Requires all three relative orders of (a, b) between s and t (with an
    // optional trailing symbol) to be members; records a violation listing
    // the absent ones otherwise.
    void require_closure(const Factors& s, const Symbol& a, const Symbol& b, const Factors& t,
                         const std::optional<Symbol>& tail, TermSet premise_witnesses) {
        ++premises;
        const Term ordered_ab = compose(s, {Term::leaf(a), Term::leaf(b)}, t, tail);
        const Term ordered_ba = compose(s, {Term::leaf(b), Term::leaf(a)}, t, tail);
        const Term par_ab =
            compose(s, {normalize(Term::par({Term::leaf(a), Term::leaf(b)}))}, t, tail);

        if (horizon.has_value() && leaf_count(ordered_ab) > *horizon) {
            ++inconclusive;
            return;
        }
        TermSet missing;
        for (const Term& needed : {ordered_ab, ordered_ba, par_ab}) {
            if (!member(needed)) missing.insert(needed);
        }
        if (missing.empty()) return;
        record(Violation{rule, from_series_factors(s), a, b, from_series_factors(t), tail,
                         std::move(missing), std::move(premise_witnesses)});
    }

    void record(Violation v) {
        auto key = std::make_tuple(v.rule, v.s, v.a, v.b, v.t, v.c);
        auto it = violations.find(key);
        if (it == violations.end()) {
            violations.emplace(std::move(key), std::move(v));
        } else {
            it->second.premise_witnesses.insert(v.premise_witnesses.begin(),
                                                v.premise_witnesses.end());
            it->second.missing.insert(v.missing.begin(), v.missing.end());
        }
    }
};

Factors take_factors(const Factors& f, std::size_t begin, std::size_t end) {
    return Factors(f.begin() + static_cast<long>(begin), f.begin() + static_cast<long>(end));
}

// R1: two adjacent same-type symbols in either a fixed order or contemporary
// require all three relative orders.
void scan_r1(Scan& scan) {
    for (const Term& w : scan.S.traces()) {
        const Factors f = series_factors(w);
        const std::size_t n = f.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (f[i].kind() == TermKind::Leaf && f[i + 1].kind() == TermKind::Leaf) {
                const Symbol& a = f[i].symbol();
                const Symbol& b = f[i + 1].symbol();
                if (a != b && scan.same_type(a, b)) {
                    scan.require_closure(take_factors(f, 0, i), a, b, take_factors(f, i + 2, n),
                                         std::nullopt, {w});
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (auto p = par_leaf_pair(f[i])) {
                const auto& [x, y] = *p;
                if (x != y && scan.same_type(x, y)) {
                    scan.require_closure(take_factors(f, 0, i), x, y, take_factors(f, i + 1, n),
                                         std::nullopt, {w});
                }
            }
        }
    }
}

// R0: no member may end in two identical events, ordered or contemporary.
void scan_r0(Scan& scan) {
    for (const Term& w : scan.S.traces()) {
        const Factors f = series_factors(w);
        const std::size_t n = f.size();
        if (n >= 2 && f[n - 2].kind() == TermKind::Leaf && f[n - 1].kind() == TermKind::Leaf &&
            f[n - 2].symbol() == f[n - 1].symbol()) {
            ++scan.premises;
            scan.record(Violation{scan.rule, from_series_factors(take_factors(f, 0, n - 2)),
                                  f[n - 1].symbol(), f[n - 1].symbol(), Term::epsilon(),
                                  std::nullopt, {}, {w}});
        }
        if (n >= 1) {
            if (auto p = par_leaf_pair(f[n - 1]); p.has_value() && p->first == p->second) {
                ++scan.premises;
                scan.record(Violation{scan.rule, from_series_factors(take_factors(f, 0, n - 1)),
                                      p->first, p->first, Term::epsilon(), std::nullopt, {}, {w}});
            }
        }
    }
}

struct TrailingIndex {
    // s -> symbols x with s < x a member; s -> ordered (a, b) with s < a < b a
    // member; s -> sorted (x, y) with s < (x ~ y) a member.
    std::map<Term, SymbolSet> singles;
    std::map<Term, std::set<std::pair<Symbol, Symbol>>> ordered;
    std::map<Term, std::set<std::pair<Symbol, Symbol>>> par;
};

TrailingIndex build_trailing_index(const TraceStructure& S) {
    TrailingIndex idx;
    for (const Term& w : S.traces()) {
        const Factors f = series_factors(w);
        const std::size_t n = f.size();
        if (n >= 1 && f[n - 1].kind() == TermKind::Leaf) {
            idx.singles[from_series_factors(Factors(f.begin(), f.end() - 1))].insert(
                f[n - 1].symbol());
        }
        if (n >= 2 && f[n - 2].kind() == TermKind::Leaf && f[n - 1].kind() == TermKind::Leaf) {
            idx.ordered[from_series_factors(Factors(f.begin(), f.end() - 2))].insert(
                {f[n - 2].symbol(), f[n - 1].symbol()});
        }
        if (n >= 1) {
            if (auto p = par_leaf_pair(f[n - 1])) {
                idx.par[from_series_factors(Factors(f.begin(), f.end() - 1))].insert(*p);
            }
        }
    }
    return idx;
}

std::pair<Symbol, Symbol> sorted_pair(const Symbol& a, const Symbol& b) {
    return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

// R2: a mixed-type pair realized in both orders (or contemporary) right
// after s makes every continuation t insensitive to the pair's order.
void scan_r2(Scan& scan) {
    const TrailingIndex idx = build_trailing_index(scan.S);

    std::map<Term, std::set<std::pair<Symbol, Symbol>>> premise_pairs;
    for (const auto& [s, pairs] : idx.ordered) {
        for (const auto& [a, b] : pairs) {
            if (!scan.mixed_type(a, b)) continue;
            if (pairs.contains({b, a})) premise_pairs[s].insert(sorted_pair(a, b));
        }
    }
    for (const auto& [s, pairs] : idx.par) {
        for (const auto& [x, y] : pairs) {
            if (x != y && scan.mixed_type(x, y)) premise_pairs[s].insert(sorted_pair(x, y));
        }
    }

    for (const auto& [s, pairs] : premise_pairs) {
        const Factors sf = series_factors(s);
        for (const auto& [a, b] : pairs) {
            TermSet outer;
            const Term sab = compose(sf, {Term::leaf(a), Term::leaf(b)}, {}, std::nullopt);
            const Term sba = compose(sf, {Term::leaf(b), Term::leaf(a)}, {}, std::nullopt);
            const Term spar =
                compose(sf, {normalize(Term::par({Term::leaf(a), Term::leaf(b)}))}, {}, std::nullopt);
            for (const Term& cand : {sab, sba, spar}) {
                if (scan.member(cand)) outer.insert(cand);
            }
            // Continuations of the realized forms found in the structure.
            std::set<Term> continuations;
            TermSet inner_witnesses;
            for (const Term& w : scan.S.traces()) {
                const Factors fw = series_factors(w);
                if (!factors_start_with(fw, sf)) continue;
                const std::size_t k = sf.size();
                if (fw.size() >= k + 2 && fw[k].kind() == TermKind::Leaf &&
                    fw[k + 1].kind() == TermKind::Leaf) {
                    const Symbol& x = fw[k].symbol();
                    const Symbol& y = fw[k + 1].symbol();
                    if ((x == a && y == b) || (x == b && y == a)) {
                        continuations.insert(
                            from_series_factors(take_factors(fw, k + 2, fw.size())));
                        inner_witnesses.insert(w);
                    }
                } else if (fw.size() >= k + 1) {
                    if (auto p = par_leaf_pair(fw[k]);
                        p.has_value() && *p == sorted_pair(a, b)) {
                        continuations.insert(
                            from_series_factors(take_factors(fw, k + 1, fw.size())));
                        inner_witnesses.insert(w);
                    }
                }
            }
            for (const Term& t : continuations) {
                TermSet witnesses = outer;
                witnesses.insert(inner_witnesses.begin(), inner_witnesses.end());
                scan.require_closure(sf, a, b, series_factors(t), std::nullopt,
                                     std::move(witnesses));
            }
        }
    }
}

// R2': like R2 but relaxed, the closure is only demanded when a later symbol
// c of a's type has already been emitted after the pair.
void scan_r2p(Scan& scan) {
    for (const Term& w : scan.S.traces()) {
        const Factors f = series_factors(w);
        const std::size_t n = f.size();
        if (n < 2 || f[n - 1].kind() != TermKind::Leaf) continue;
        const Symbol c = f[n - 1].symbol();

        // Pattern: s < a < b < t < c with s < b < a < t also a member.
        for (std::size_t i = 0; i + 1 < n - 1; ++i) {
            if (f[i].kind() != TermKind::Leaf || f[i + 1].kind() != TermKind::Leaf) continue;
            const Symbol& a = f[i].symbol();
            const Symbol& b = f[i + 1].symbol();
            if (a == b || !scan.same_type(a, c) || !scan.mixed_type(a, b)) continue;
            const Factors s = take_factors(f, 0, i);
            const Factors t = take_factors(f, i + 2, n - 1);
            const Term swapped = compose(s, {Term::leaf(b), Term::leaf(a)}, t, std::nullopt);
            if (!scan.member(swapped)) continue;
            scan.require_closure(s, a, b, t, c, {w, swapped});
        }
        // Pattern: s < (a ~ b) < t < c.
        for (std::size_t i = 0; i + 1 < n; ++i) {
            auto p = par_leaf_pair(f[i]);
            if (!p.has_value()) continue;
            for (auto [a, b] : {*p, std::make_pair(p->second, p->first)}) {
                if (a == b || !scan.same_type(a, c) || !scan.mixed_type(a, b)) continue;
                scan.require_closure(take_factors(f, 0, i), a, b, take_factors(f, i + 1, n - 1),
                                     c, {w});
            }
        }
    }
}

enum class R3Variant { Prime, DoublePrime, TriplePrime };

// R3 family: when neither party can know which of a, b comes first (both are
// enabled after s, or they occur contemporary), all three relative orders
// must be offered.  The variants differ in which symbol pairs they constrain.
void scan_r3(Scan& scan, R3Variant variant) {
    const TrailingIndex idx = build_trailing_index(scan.S);

    auto constrained = [&](const Symbol& a, const Symbol& b) {
        switch (variant) {
            case R3Variant::Prime:
                return true;
            case R3Variant::DoublePrime:
                return !(scan.S.is_input(a) && scan.S.is_input(b));
            case R3Variant::TriplePrime:
                return scan.mixed_type(a, b);
        }
        return false;
    };

    std::set<Term> contexts;
    for (const auto& [s, syms] : idx.singles) contexts.insert(s);
    for (const auto& [s, pairs] : idx.par) contexts.insert(s);

    for (const Term& s : contexts) {
        const Factors sf = series_factors(s);
        std::set<std::pair<Symbol, Symbol>> pairs;

        auto singles_it = idx.singles.find(s);
        if (singles_it != idx.singles.end()) {
            for (const Symbol& a : singles_it->second) {
                for (const Symbol& b : singles_it->second) {
                    if (a < b) pairs.insert({a, b});
                }
            }
        }
        auto par_it = idx.par.find(s);
        if (par_it != idx.par.end()) {
            for (const auto& [x, y] : par_it->second) {
                if (x != y) pairs.insert(sorted_pair(x, y));
            }
        }

        for (const auto& [a, b] : pairs) {
            if (!constrained(a, b)) continue;
            TermSet witnesses;
            const Term sa = compose(sf, {Term::leaf(a)}, {}, std::nullopt);
            const Term sb = compose(sf, {Term::leaf(b)}, {}, std::nullopt);
            const Term spar =
                compose(sf, {normalize(Term::par({Term::leaf(a), Term::leaf(b)}))}, {}, std::nullopt);
            const bool via_singles = scan.member(sa) && scan.member(sb);
            const bool via_par = scan.member(spar);
            if (!via_singles && !via_par) continue;
            if (via_singles) {
                witnesses.insert(sa);
                witnesses.insert(sb);
            }
            if (via_par) witnesses.insert(spar);
            scan.require_closure(sf, a, b, {}, std::nullopt, std::move(witnesses));
        }
    }
}

int min_premise_events(RuleId rule) {
    return rule == RuleId::R2P ? 3 : 2;
}

}  // namespace

CheckReport check_rule(const TraceStructure& s, RuleId rule, std::optional<int> horizon,
                       std::string structure_id) {
    return check_rules(s, {rule}, horizon, std::move(structure_id));
}

CheckReport check_rules(const TraceStructure& s, const std::vector<RuleId>& rules,
                        std::optional<int> horizon, std::string structure_id) {
    CheckReport report;
    report.structure_id = std::move(structure_id);
    report.bound = horizon;
    report.prefix_closed = is_prefix_closed(s);

    for (RuleId rule : rules) {
        Scan scan{s, rule, horizon, {}, 0, 0};
        switch (rule) {
            case RuleId::R0:    scan_r0(scan); break;
            case RuleId::R1:    scan_r1(scan); break;
            case RuleId::R2:    scan_r2(scan); break;
            case RuleId::R2P:   scan_r2p(scan); break;
            case RuleId::R3P:   scan_r3(scan, R3Variant::Prime); break;
            case RuleId::R3PP:  scan_r3(scan, R3Variant::DoublePrime); break;
            case RuleId::R3PPP: scan_r3(scan, R3Variant::TriplePrime); break;
        }
        RuleResult result;
        result.rule = rule;
        result.inconclusive_instances = scan.inconclusive;
        for (auto& [key, v] : scan.violations) result.violations.push_back(std::move(v));
        if (!result.violations.empty()) {
            result.status = RuleStatus::Fail;
        } else if (scan.inconclusive > 0) {
            result.status = RuleStatus::InconclusiveAtBound;
        } else if (scan.premises == 0 && horizon.has_value() &&
                   *horizon < min_premise_events(rule)) {
            result.status = RuleStatus::InconclusiveAtBound;
        } else {
            result.status = RuleStatus::Pass;
        }
        report.rules.push_back(std::move(result));
    }
    return report;
}

CheckReport check_di(const TraceStructure& s, std::optional<int> horizon,
                     std::string structure_id) {
    return check_rules(s, di_rules(), horizon, std::move(structure_id));
}

StructureClass classify(const TraceStructure& s, std::optional<int> horizon) {
    auto passes = [&](RuleId rule) {
        CheckReport r = check_rule(s, rule, horizon);
        return r.rules.front().status == RuleStatus::Pass;
    };
    if (passes(RuleId::R3P)) return StructureClass::ChoiceFree;
    if (passes(RuleId::R3PP)) return StructureClass::InputChoice;
    if (passes(RuleId::R3PPP)) return StructureClass::OutputChoice;
    return StructureClass::None;
}

}  // namespace rtrace
