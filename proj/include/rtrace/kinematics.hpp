#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "rtrace/term.hpp"

namespace rtrace {

// ── Special-relativity primitives ───────────────────────────────────────────
// One time and one spatial coordinate; units put the light speed at c = 1 by
// default, and every operation takes c as an explicit parameter for other
// unit systems.
// ─────────────────────────────────────────────────────────────────────────────

struct SpacetimeEvent {
    double t = 0.0;
    double x = 0.0;

    bool operator==(const SpacetimeEvent&) const = default;
};

struct Velocity {
    double v = 0.0;
};

/// Lorentz boost into the frame moving at velocity v.  Rejects |v| >= c.
SpacetimeEvent boost(const SpacetimeEvent& e, Velocity v, double c = 1.0);

/// The Galilean analogue (x' = x - vt, t' = t), kept for contrast checks.
SpacetimeEvent galilean_boost(const SpacetimeEvent& e, Velocity v);

/// The invariant interval c^2 (t_A - t_B)^2 - (x_A - x_B)^2.
double interval(const SpacetimeEvent& a, const SpacetimeEvent& b, double c = 1.0);

enum class PairClass { TimelikeFuture, TimelikePast, Lightlike, Spacelike };

const char* pair_class_name(PairClass p) noexcept;

/// Light-cone partition of B relative to A.  Lightlike is decided within a
/// coordinate-scaled tolerance so boosts of exactly lightlike pairs stay
/// lightlike.
PairClass classify_pair(const SpacetimeEvent& a, const SpacetimeEvent& b, double c = 1.0);

// ── Propagation events ──────────────────────────────────────────────────────
// A communication is a propagation: an emission and a reception joined by a
// causal (timelike or lightlike, future-directed) segment.
// ─────────────────────────────────────────────────────────────────────────────

struct PropagationEvent {
    Symbol label;
    SpacetimeEvent emission;
    SpacetimeEvent reception;
};

/// Validates the causal-segment invariant; throws std::invalid_argument.
PropagationEvent make_propagation(Symbol label, SpacetimeEvent emission,
                                  SpacetimeEvent reception, double c = 1.0);

/// Time order of two propagations: p before q when q is emitted in the
/// closed causal future of p's reception (lightlike contact included);
/// contemporary when neither direction holds.
OrderRelation prop_order(const PropagationEvent& p, const PropagationEvent& q, double c = 1.0);

// ── Embeddings ──────────────────────────────────────────────────────────────

struct WorldlineLayout {
    double env_x = 0.0;
    double comp_x = 1.0;
};

/// Maps every occurrence (by path) of some term to a propagation between the
/// two worldlines.
struct Embedding {
    WorldlineLayout layout;
    std::map<std::vector<int>, PropagationEvent> propagations;
};

struct PathPairOrder {
    std::vector<int> first;
    std::vector<int> second;
    OrderRelation relation;
};

struct InducedRelation {
    /// Pairwise order for every occurrence pair, in path order.
    std::vector<PathPairOrder> table;
    /// The unique normalized term inducing the relation, when it is
    /// series-parallel.
    std::optional<Term> term;
    /// Otherwise, four paths forming the forbidden N configuration.
    std::optional<std::array<std::vector<int>, 4>> n_witness;
};

InducedRelation induced_relation(const Embedding& emb, double c = 1.0);

/// True iff the embedding realizes exactly the order of t on every
/// occurrence pair.  Throws std::invalid_argument when the occurrence paths
/// of t and the embedding's domain differ.
bool check_embedding(const Embedding& emb, const Term& t, double c = 1.0);

enum class SignalDirection { EnvToComp, CompToEnv };

/// Schedules emissions for t along the two worldlines in topological order,
/// spacing series steps by the causal minimum plus `gap` and staggering
/// parallel groups by a small offset.  The result is verified; failure to
/// realize the requested order (some contemporary groups are not realizable
/// between two worldlines) returns nullopt.
std::optional<Embedding> greedy_embed(const Term& t,
                                      const std::map<Symbol, SignalDirection>& directions,
                                      WorldlineLayout layout, double speed = 1.0,
                                      double gap = 1.0, double c = 1.0);

/// Structured text document: worldline positions, the trace, and one line
/// per occurrence with emission and reception coordinates.
std::string serialize_embedding(const Embedding& emb, const std::optional<Term>& trace);

struct ParsedEmbedding {
    Embedding embedding;
    std::optional<Term> trace;
};

/// Parses serialize_embedding's format; validates propagation invariants and
/// that endpoints lie on the declared worldlines.
ParsedEmbedding parse_embedding(const std::string& src, double c = 1.0);

}  // namespace rtrace
