#include "rtrace/classical.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace rtrace {

std::string print_classical(const ClassicalTrace& t) {
    if (t.empty()) return "eps";
    std::string out;
    for (const Symbol& s : t) {
        if (!out.empty()) out += " ";
        out += s.name();
    }
    return out;
}

// ── linearize ───────────────────────────────────────────────────────────────

namespace {

std::set<ClassicalTrace> shuffle_product(const std::set<ClassicalTrace>& lhs,
                                         const std::set<ClassicalTrace>& rhs) {
    // All interleavings of one trace from each side, preserving both
    // internal orders.
    std::set<ClassicalTrace> out;
    for (const ClassicalTrace& u : lhs) {
        for (const ClassicalTrace& v : rhs) {
            std::vector<std::pair<ClassicalTrace, std::pair<std::size_t, std::size_t>>> stack;
            stack.push_back({{}, {0, 0}});
            while (!stack.empty()) {
                auto [acc, pos] = stack.back();
                stack.pop_back();
                auto [i, j] = pos;
                if (i == u.size() && j == v.size()) {
                    out.insert(acc);
                    continue;
                }
                if (i < u.size()) {
                    auto next = acc;
                    next.push_back(u[i]);
                    stack.push_back({std::move(next), {i + 1, j}});
                }
                if (j < v.size()) {
                    auto next = acc;
                    next.push_back(v[j]);
                    stack.push_back({std::move(next), {i, j + 1}});
                }
            }
        }
    }
    return out;
}

std::set<ClassicalTrace> concat_product(const std::set<ClassicalTrace>& lhs,
                                        const std::set<ClassicalTrace>& rhs) {
    std::set<ClassicalTrace> out;
    for (const ClassicalTrace& u : lhs) {
        for (const ClassicalTrace& v : rhs) {
            ClassicalTrace w = u;
            w.insert(w.end(), v.begin(), v.end());
            out.insert(std::move(w));
        }
    }
    return out;
}

}  // namespace

std::set<ClassicalTrace> linearize(const Term& t) {
    switch (t.kind()) {
        case TermKind::Epsilon:
            return {ClassicalTrace{}};
        case TermKind::Leaf:
            return {ClassicalTrace{t.symbol()}};
        case TermKind::Seq: {
            std::set<ClassicalTrace> acc{ClassicalTrace{}};
            for (const Term& c : t.children()) acc = concat_product(acc, linearize(c));
            return acc;
        }
        case TermKind::Par: {
            std::set<ClassicalTrace> acc{ClassicalTrace{}};
            for (const Term& c : t.children()) acc = shuffle_product(acc, linearize(c));
            return acc;
        }
        case TermKind::AnyOrder:
            throw std::invalid_argument("linearize: expand any-order shorthand first");
    }
    throw std::logic_error("linearize: unknown term kind");
}

ClassicalStructure to_classical(const TraceStructure& s) {
    ClassicalStructure out{s.inputs(), s.outputs(), {}};
    for (const Term& t : s.traces()) {
        auto lin = linearize(t);
        out.traces.insert(lin.begin(), lin.end());
    }
    return out;
}

// ── Classical rule scan ─────────────────────────────────────────────────────

RuleStatus ClassicalCheckReport::overall() const {
    RuleStatus out = RuleStatus::Pass;
    for (const ClassicalRuleResult& r : rules) {
        if (r.status == RuleStatus::Fail) return RuleStatus::Fail;
        if (r.status == RuleStatus::InconclusiveAtBound) out = RuleStatus::InconclusiveAtBound;
    }
    return out;
}

namespace {

struct ClassicalScan {
    const ClassicalStructure& C;
    RuleId rule;
    std::map<std::tuple<ClassicalTrace, Symbol, Symbol, ClassicalTrace, std::optional<Symbol>>,
             ClassicalViolation>
        violations;

    bool member(const ClassicalTrace& t) const { return C.traces.contains(t); }

    bool same_type(const Symbol& a, const Symbol& b) const {
        return (C.is_input(a) && C.is_input(b)) || (C.is_output(a) && C.is_output(b));
    }

    bool mixed_type(const Symbol& a, const Symbol& b) const {
        return (C.is_input(a) && C.is_output(b)) || (C.is_output(a) && C.is_input(b));
    }

    void record(ClassicalViolation v) {
        auto key = std::make_tuple(v.s, v.a, v.b, v.t, v.c);
        auto it = violations.find(key);
        if (it == violations.end()) {
            violations.emplace(std::move(key), std::move(v));
        } else {
            it->second.premise_witnesses.insert(v.premise_witnesses.begin(),
                                                v.premise_witnesses.end());
        }
    }
};

ClassicalTrace splice(const ClassicalTrace& s, std::initializer_list<Symbol> mid,
                      const ClassicalTrace& t, const std::optional<Symbol>& tail) {
    ClassicalTrace out = s;
    for (const Symbol& x : mid) out.push_back(x);
    out.insert(out.end(), t.begin(), t.end());
    if (tail.has_value()) out.push_back(*tail);
    return out;
}

ClassicalTrace slice(const ClassicalTrace& w, std::size_t begin, std::size_t end) {
    return ClassicalTrace(w.begin() + static_cast<long>(begin),
                          w.begin() + static_cast<long>(end));
}

// R1: s a b t in the set iff s b a t is, for same-type a, b and member s, t.
void classical_r1(ClassicalScan& scan) {
    for (const ClassicalTrace& w : scan.C.traces) {
        const std::size_t n = w.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const Symbol& a = w[i];
            const Symbol& b = w[i + 1];
            if (a == b || !scan.same_type(a, b)) continue;
            const ClassicalTrace s = slice(w, 0, i);
            const ClassicalTrace t = slice(w, i + 2, n);
            if (!scan.member(s) || !scan.member(t)) continue;
            const ClassicalTrace swapped = splice(s, {b, a}, t, std::nullopt);
            if (!scan.member(swapped)) {
                scan.record(ClassicalViolation{scan.rule, s, a, b, t, std::nullopt,
                                               {swapped}, {w}});
            }
        }
    }
}

// R0: no member trace s a a with member s.
void classical_r0(ClassicalScan& scan) {
    for (const ClassicalTrace& w : scan.C.traces) {
        const std::size_t n = w.size();
        if (n < 2 || !(w[n - 2] == w[n - 1])) continue;
        const ClassicalTrace s = slice(w, 0, n - 2);
        if (!scan.member(s)) continue;
        scan.record(ClassicalViolation{scan.rule, s, w[n - 1], w[n - 1], {}, std::nullopt,
                                       {}, {w}});
    }
}

// R2: when both orders s a b and s b a are realized, every continuation
// must be insensitive to the order.
void classical_r2(ClassicalScan& scan) {
    for (const ClassicalTrace& w : scan.C.traces) {
        const std::size_t n = w.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const Symbol& a = w[i];
            const Symbol& b = w[i + 1];
            if (!scan.mixed_type(a, b)) continue;
            const ClassicalTrace s = slice(w, 0, i);
            const ClassicalTrace t = slice(w, i + 2, n);
            if (!scan.member(s) || !scan.member(t)) continue;
            const ClassicalTrace sab = splice(s, {a, b}, {}, std::nullopt);
            const ClassicalTrace sba = splice(s, {b, a}, {}, std::nullopt);
            if (!scan.member(sab) || !scan.member(sba)) continue;
            const ClassicalTrace swapped = splice(s, {b, a}, t, std::nullopt);
            if (!scan.member(swapped)) {
                scan.record(ClassicalViolation{scan.rule, s, a, b, t, std::nullopt,
                                               {swapped}, {w, sab, sba}});
            }
        }
    }
}

// R2': s a b t c present and s b a t realized forces s b a t c.
void classical_r2p(ClassicalScan& scan) {
    for (const ClassicalTrace& w : scan.C.traces) {
        const std::size_t n = w.size();
        if (n < 3) continue;
        const Symbol& c = w[n - 1];
        for (std::size_t i = 0; i + 1 < n - 1; ++i) {
            const Symbol& a = w[i];
            const Symbol& b = w[i + 1];
            if (a == b || !scan.same_type(a, c) || !scan.mixed_type(a, b)) continue;
            const ClassicalTrace s = slice(w, 0, i);
            const ClassicalTrace t = slice(w, i + 2, n - 1);
            if (!scan.member(s) || !scan.member(t)) continue;
            const ClassicalTrace sbat = splice(s, {b, a}, t, std::nullopt);
            if (!scan.member(sbat)) continue;
            const ClassicalTrace conclusion = splice(s, {b, a}, t, c);
            if (!scan.member(conclusion)) {
                scan.record(ClassicalViolation{scan.rule, s, a, b, t, c,
                                               {conclusion}, {w, sbat}});
            }
        }
    }
}

// R3 family: s a and s b realized forces s a b, for constrained pairs.
void classical_r3(ClassicalScan& scan, RuleId variant) {
    auto constrained = [&](const Symbol& a, const Symbol& b) {
        switch (variant) {
            case RuleId::R3P:
                return true;
            case RuleId::R3PP:
                return !(scan.C.is_input(a) && scan.C.is_input(b));
            case RuleId::R3PPP:
                return scan.mixed_type(a, b);
            default:
                return false;
        }
    };
    std::map<ClassicalTrace, SymbolSet> extensions;
    for (const ClassicalTrace& w : scan.C.traces) {
        if (w.empty()) continue;
        const ClassicalTrace s = slice(w, 0, w.size() - 1);
        if (!scan.member(s)) continue;
        extensions[s].insert(w.back());
    }
    for (const auto& [s, syms] : extensions) {
        for (const Symbol& a : syms) {
            for (const Symbol& b : syms) {
                if (a == b || !constrained(a, b)) continue;
                const ClassicalTrace conclusion = splice(s, {a, b}, {}, std::nullopt);
                if (!scan.member(conclusion)) {
                    scan.record(ClassicalViolation{
                        scan.rule, s, a, b, {}, std::nullopt,
                        {conclusion},
                        {splice(s, {a}, {}, std::nullopt), splice(s, {b}, {}, std::nullopt)}});
                }
            }
        }
    }
}

}  // namespace

ClassicalCheckReport check_classical_rule(const ClassicalStructure& c, RuleId rule,
                                          std::string structure_id) {
    ClassicalScan scan{c, rule, {}};
    switch (rule) {
        case RuleId::R0:    classical_r0(scan); break;
        case RuleId::R1:    classical_r1(scan); break;
        case RuleId::R2:    classical_r2(scan); break;
        case RuleId::R2P:   classical_r2p(scan); break;
        case RuleId::R3P:
        case RuleId::R3PP:
        case RuleId::R3PPP: classical_r3(scan, rule); break;
    }
    ClassicalCheckReport report;
    report.structure_id = std::move(structure_id);
    ClassicalRuleResult result;
    result.rule = rule;
    for (auto& [key, v] : scan.violations) result.violations.push_back(std::move(v));
    result.status = result.violations.empty() ? RuleStatus::Pass : RuleStatus::Fail;
    report.rules.push_back(std::move(result));
    return report;
}

CrossValidation cross_validate(const TraceStructure& s, RuleId rule,
                               std::optional<int> horizon) {
    CheckReport rel = check_rule(s, rule, horizon);
    ClassicalCheckReport cls = check_classical_rule(to_classical(s), rule);
    const RuleStatus rel_status = rel.rules.front().status;
    const RuleStatus cls_status = cls.rules.front().status;
    const bool forward =
        !(rel_status == RuleStatus::Pass && cls_status == RuleStatus::Fail);
    const bool reverse =
        !(cls_status == RuleStatus::Pass && rel_status == RuleStatus::Fail);
    return CrossValidation{rule,    rel_status, cls_status, forward,
                           reverse, std::move(rel), std::move(cls)};
}

}  // namespace rtrace
