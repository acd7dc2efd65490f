#include "rtrace/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "rtrace/spec_lang.hpp"

namespace rtrace {

SpacetimeEvent boost(const SpacetimeEvent& e, Velocity v, double c) {
    if (c <= 0.0) throw std::invalid_argument("light speed must be positive");
    if (!(std::abs(v.v) < c)) {
        throw std::invalid_argument("frame velocity must satisfy |v| < c");
    }
    const double gamma = 1.0 / std::sqrt(1.0 - (v.v * v.v) / (c * c));
    return SpacetimeEvent{gamma * (e.t - (v.v / (c * c)) * e.x), gamma * (e.x - v.v * e.t)};
}

SpacetimeEvent galilean_boost(const SpacetimeEvent& e, Velocity v) {
    return SpacetimeEvent{e.t, e.x - v.v * e.t};
}

double interval(const SpacetimeEvent& a, const SpacetimeEvent& b, double c) {
    const double dt = a.t - b.t;
    const double dx = a.x - b.x;
    return c * c * dt * dt - dx * dx;
}

const char* pair_class_name(PairClass p) noexcept {
    switch (p) {
        case PairClass::TimelikeFuture: return "timelike-future";
        case PairClass::TimelikePast:   return "timelike-past";
        case PairClass::Lightlike:      return "lightlike";
        case PairClass::Spacelike:      return "spacelike";
    }
    return "?";
}

namespace {

double lightlike_tolerance(const SpacetimeEvent& a, const SpacetimeEvent& b, double c) {
    const double ct2 = c * c * std::max(a.t * a.t, b.t * b.t);
    const double x2 = std::max(a.x * a.x, b.x * b.x);
    return 1e-9 * std::max({1.0, ct2, x2});
}

/// Closed causal future: B reachable from A by a sub-light or light signal.
bool in_closed_future(const SpacetimeEvent& a, const SpacetimeEvent& b, double c) {
    const double i = interval(a, b, c);
    const double tol = lightlike_tolerance(a, b, c);
    if (std::abs(i) <= tol) return b.t >= a.t;
    return i > 0.0 && b.t > a.t;
}

}  // namespace

PairClass classify_pair(const SpacetimeEvent& a, const SpacetimeEvent& b, double c) {
    const double i = interval(a, b, c);
    if (std::abs(i) <= lightlike_tolerance(a, b, c)) return PairClass::Lightlike;
    if (i < 0.0) return PairClass::Spacelike;
    return b.t > a.t ? PairClass::TimelikeFuture : PairClass::TimelikePast;
}

PropagationEvent make_propagation(Symbol label, SpacetimeEvent emission,
                                  SpacetimeEvent reception, double c) {
    if (!(reception.t > emission.t)) {
        throw std::invalid_argument("propagation '" + label.name() +
                                    "': reception must be later than emission");
    }
    const double i = interval(emission, reception, c);
    if (i < -lightlike_tolerance(emission, reception, c)) {
        throw std::invalid_argument("propagation '" + label.name() +
                                    "': reception outside the emission light cone");
    }
    return PropagationEvent{std::move(label), emission, reception};
}

OrderRelation prop_order(const PropagationEvent& p, const PropagationEvent& q, double c) {
    if (in_closed_future(p.reception, q.emission, c)) return OrderRelation::Before;
    if (in_closed_future(q.reception, p.emission, c)) return OrderRelation::After;
    return OrderRelation::Contemporary;
}

// ── Induced relation and series-parallel reconstruction ─────────────────────

namespace {

struct Item {
    std::vector<int> path;
    Symbol sym;
};

// Recursive series-parallel decomposition of the poset given by `before`.
// Parallel factors are the components of the comparability graph; series
// blocks are the classes of the transitive closure of incomparability.  A
// block that admits neither split is not series-parallel.
struct PosetDecomposer {
    const std::vector<Item>& items;
    const std::vector<std::vector<bool>>& before;

    bool comparable(std::size_t i, std::size_t j) const {
        return before[i][j] || before[j][i];
    }

    std::vector<std::vector<std::size_t>> components(const std::vector<std::size_t>& nodes,
                                                     bool by_comparability) const {
        std::vector<std::vector<std::size_t>> comps;
        std::set<std::size_t> seen;
        for (std::size_t start : nodes) {
            if (seen.contains(start)) continue;
            std::vector<std::size_t> comp{start};
            seen.insert(start);
            for (std::size_t k = 0; k < comp.size(); ++k) {
                for (std::size_t cand : nodes) {
                    if (seen.contains(cand)) continue;
                    const bool edge = by_comparability ? comparable(comp[k], cand)
                                                       : !comparable(comp[k], cand);
                    if (edge) {
                        comp.push_back(cand);
                        seen.insert(cand);
                    }
                }
            }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
        return comps;
    }

    std::optional<Term> build(const std::vector<std::size_t>& nodes) const {
        if (nodes.empty()) return Term::epsilon();
        if (nodes.size() == 1) return Term::leaf(items[nodes.front()].sym);

        auto par_comps = components(nodes, true);
        if (par_comps.size() > 1) {
            std::vector<Term> children;
            for (const auto& comp : par_comps) {
                auto sub = build(comp);
                if (!sub.has_value()) return std::nullopt;
                children.push_back(std::move(*sub));
            }
            return normalize(Term::par(std::move(children)));
        }

        auto blocks = components(nodes, false);
        if (blocks.size() > 1) {
            // Cross-block pairs are all comparable; order blocks by any
            // representative pair (direction is consistent within a poset).
            std::sort(blocks.begin(), blocks.end(),
                      [&](const std::vector<std::size_t>& lhs, const std::vector<std::size_t>& rhs) {
                          return before[lhs.front()][rhs.front()];
                      });
            std::vector<Term> children;
            for (const auto& block : blocks) {
                auto sub = build(block);
                if (!sub.has_value()) return std::nullopt;
                children.push_back(std::move(*sub));
            }
            return normalize(Term::seq(std::move(children)));
        }
        return std::nullopt;
    }

    std::optional<std::array<std::size_t, 4>> find_n_witness() const {
        const std::size_t n = items.size();
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                for (std::size_t c = 0; c < n; ++c) {
                    for (std::size_t d = 0; d < n; ++d) {
                        if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
                        if (before[a][c] && before[b][c] && before[b][d] && !comparable(a, b) &&
                            !comparable(c, d) && !comparable(a, d)) {
                            return std::array<std::size_t, 4>{a, b, c, d};
                        }
                    }
                }
            }
        }
        return std::nullopt;
    }
};

}  // namespace

InducedRelation induced_relation(const Embedding& emb, double c) {
    std::vector<Item> items;
    for (const auto& [path, prop] : emb.propagations) items.push_back(Item{path, prop.label});

    const std::size_t n = items.size();
    std::vector<std::vector<bool>> before(n, std::vector<bool>(n, false));
    InducedRelation out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const OrderRelation rel = prop_order(emb.propagations.at(items[i].path),
                                                 emb.propagations.at(items[j].path), c);
            out.table.push_back(PathPairOrder{items[i].path, items[j].path, rel});
            if (rel == OrderRelation::Before) before[i][j] = true;
            if (rel == OrderRelation::After) before[j][i] = true;
        }
    }

    PosetDecomposer decomposer{items, before};
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    out.term = decomposer.build(all);
    if (!out.term.has_value()) {
        if (auto w = decomposer.find_n_witness()) {
            out.n_witness = std::array<std::vector<int>, 4>{
                items[(*w)[0]].path, items[(*w)[1]].path, items[(*w)[2]].path,
                items[(*w)[3]].path};
        }
    }
    return out;
}

bool check_embedding(const Embedding& emb, const Term& t, double c) {
    const std::vector<Occurrence> occs = occurrences(t);
    if (occs.size() != emb.propagations.size()) {
        throw std::invalid_argument("check_embedding: occurrence count mismatch");
    }
    for (const Occurrence& o : occs) {
        auto it = emb.propagations.find(o.path);
        if (it == emb.propagations.end()) {
            throw std::invalid_argument("check_embedding: no propagation for an occurrence");
        }
        if (it->second.label != o.symbol) {
            throw std::invalid_argument("check_embedding: propagation label mismatch at '" +
                                        o.symbol.name() + "'");
        }
    }
    for (std::size_t i = 0; i < occs.size(); ++i) {
        for (std::size_t j = i + 1; j < occs.size(); ++j) {
            const OrderRelation want = order_of(t, occs[i], occs[j]);
            const OrderRelation got = prop_order(emb.propagations.at(occs[i].path),
                                                 emb.propagations.at(occs[j].path), c);
            if (want != got) return false;
        }
    }
    return true;
}

// ── Greedy embedding ────────────────────────────────────────────────────────

namespace {

struct Scheduler {
    const std::map<Symbol, SignalDirection>& directions;
    WorldlineLayout layout;
    double travel;   // reception delay
    double cross;    // light-crossing slack between series steps
    double gap;
    double stagger;
    Embedding emb;

    // Returns the latest reception time in the scheduled subtree.
    double schedule(const Term& t, std::vector<int>& path, double start) {
        switch (t.kind()) {
            case TermKind::Epsilon:
                return start;
            case TermKind::Leaf: {
                auto it = directions.find(t.symbol());
                if (it == directions.end()) {
                    throw std::invalid_argument("greedy_embed: no direction for symbol '" +
                                                t.symbol().name() + "'");
                }
                const bool from_env = it->second == SignalDirection::EnvToComp;
                const double sx = from_env ? layout.env_x : layout.comp_x;
                const double rx = from_env ? layout.comp_x : layout.env_x;
                emb.propagations.emplace(
                    path, PropagationEvent{t.symbol(), SpacetimeEvent{start, sx},
                                           SpacetimeEvent{start + travel, rx}});
                return start + travel;
            }
            case TermKind::Seq: {
                double cur = start;
                double finish = start;
                const auto& cs = t.children();
                for (int i = 0; i < static_cast<int>(cs.size()); ++i) {
                    path.push_back(i);
                    finish = schedule(cs[static_cast<std::size_t>(i)], path, cur);
                    path.pop_back();
                    cur = finish + gap + cross;
                }
                return finish;
            }
            case TermKind::Par: {
                // Longer children first, so short contemporaries start inside
                // the window the long ones open.
                const auto& cs = t.children();
                std::vector<int> order(cs.size());
                for (std::size_t i = 0; i < cs.size(); ++i) order[i] = static_cast<int>(i);
                std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
                    return leaf_count(cs[static_cast<std::size_t>(l)]) >
                           leaf_count(cs[static_cast<std::size_t>(r)]);
                });
                double finish = start;
                double offset = 0.0;
                for (int idx : order) {
                    path.push_back(idx);
                    finish = std::max(
                        finish, schedule(cs[static_cast<std::size_t>(idx)], path, start + offset));
                    path.pop_back();
                    offset += stagger;
                }
                return finish;
            }
            case TermKind::AnyOrder:
                throw std::invalid_argument("greedy_embed: expand any-order shorthand first");
        }
        throw std::logic_error("greedy_embed: unknown term kind");
    }
};

}  // namespace

std::optional<Embedding> greedy_embed(const Term& t,
                                      const std::map<Symbol, SignalDirection>& directions,
                                      WorldlineLayout layout, double speed, double gap,
                                      double c) {
    if (c <= 0.0) throw std::invalid_argument("light speed must be positive");
    if (!(speed > 0.0) || speed > c) {
        throw std::invalid_argument("signal speed must satisfy 0 < speed <= c");
    }
    if (gap < 0.0) throw std::invalid_argument("gap must be nonnegative");
    if (leaf_count(t) > 0 && layout.env_x == layout.comp_x) return std::nullopt;

    const double distance = std::abs(layout.comp_x - layout.env_x);
    Scheduler sched{directions,
                    layout,
                    distance / speed,
                    distance / c,
                    gap,
                    std::max(gap, 1.0) * 1e-3,
                    Embedding{layout, {}}};
    std::vector<int> path;
    sched.schedule(t, path, 0.0);
    if (!check_embedding(sched.emb, t, c)) return std::nullopt;
    return std::move(sched.emb);
}

// ── Serialization ───────────────────────────────────────────────────────────
// Line format:
//   # rtrace embedding
//   worldlines <env_x> <comp_x>
//   trace <trace literal>                 (optional)
//   prop <path> <symbol> <t_em> <x_em> <t_rec> <x_rec>
// Paths are dot-separated child indices; "." addresses a root leaf.

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_path(const std::vector<int>& path) {
    if (path.empty()) return ".";
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) out += ".";
        out += std::to_string(path[i]);
    }
    return out;
}

std::vector<int> parse_path(const std::string& text, int line_no) {
    if (text == ".") return {};
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t dot = text.find('.', pos);
        const std::string piece =
            dot == std::string::npos ? text.substr(pos) : text.substr(pos, dot - pos);
        try {
            std::size_t used = 0;
            const int idx = std::stoi(piece, &used);
            if (used != piece.size() || idx < 0) throw std::invalid_argument(piece);
            out.push_back(idx);
        } catch (const std::exception&) {
            throw std::invalid_argument("embedding line " + std::to_string(line_no) +
                                        ": bad occurrence path '" + text + "'");
        }
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return out;
}

}  // namespace

std::string serialize_embedding(const Embedding& emb, const std::optional<Term>& trace) {
    std::string out = "# rtrace embedding\n";
    out += "worldlines " + format_double(emb.layout.env_x) + " " +
           format_double(emb.layout.comp_x) + "\n";
    if (trace.has_value()) out += "trace " + print_trace(*trace) + "\n";
    for (const auto& [path, prop] : emb.propagations) {
        out += "prop " + format_path(path) + " " + prop.label.name() + " " +
               format_double(prop.emission.t) + " " + format_double(prop.emission.x) + " " +
               format_double(prop.reception.t) + " " + format_double(prop.reception.x) + "\n";
    }
    return out;
}

ParsedEmbedding parse_embedding(const std::string& src, double c) {
    ParsedEmbedding out;
    bool have_worldlines = false;
    std::istringstream is(src);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        auto bad = [&](const std::string& why) -> std::invalid_argument {
            return std::invalid_argument("embedding line " + std::to_string(line_no) + ": " + why);
        };
        if (word == "worldlines") {
            if (!(ls >> out.embedding.layout.env_x >> out.embedding.layout.comp_x)) {
                throw bad("expected two worldline positions");
            }
            have_worldlines = true;
        } else if (word == "trace") {
            std::string rest;
            std::getline(ls, rest);
            out.trace = parse_trace(rest);
        } else if (word == "prop") {
            std::string path_text, name;
            double te, xe, tr, xr;
            if (!(ls >> path_text >> name >> te >> xe >> tr >> xr)) {
                throw bad("expected: prop <path> <symbol> <t_em> <x_em> <t_rec> <x_rec>");
            }
            std::vector<int> path = parse_path(path_text, line_no);
            PropagationEvent prop = make_propagation(Symbol(name), SpacetimeEvent{te, xe},
                                                     SpacetimeEvent{tr, xr}, c);
            if (!out.embedding.propagations.emplace(std::move(path), std::move(prop)).second) {
                throw bad("duplicate occurrence path '" + path_text + "'");
            }
        } else {
            throw bad("unknown directive '" + word + "'");
        }
    }
    if (!have_worldlines) {
        throw std::invalid_argument("embedding: missing 'worldlines' line");
    }
    // Endpoints must sit on the declared worldlines, one on each.
    const double ex = out.embedding.layout.env_x;
    const double cx = out.embedding.layout.comp_x;
    const double tol = 1e-9 * std::max({1.0, std::abs(ex), std::abs(cx)});
    for (const auto& [path, prop] : out.embedding.propagations) {
        const bool em_env = std::abs(prop.emission.x - ex) <= tol;
        const bool em_comp = std::abs(prop.emission.x - cx) <= tol;
        const bool rec_env = std::abs(prop.reception.x - ex) <= tol;
        const bool rec_comp = std::abs(prop.reception.x - cx) <= tol;
        const bool ok = (em_env && rec_comp) || (em_comp && rec_env);
        if (!ok) {
            throw std::invalid_argument("embedding: propagation '" + prop.label.name() +
                                        "' endpoints are not on the declared worldlines");
        }
    }
    return out;
}

}  // namespace rtrace
