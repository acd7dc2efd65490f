#include "doctest.h"

#include <random>

#include "rtrace/term.hpp"
#include "support/gen.hpp"

using namespace rtrace;
using rtest::leaf;
using rtest::sym;

namespace {

// The Muller C-element history used throughout: (a ~ b) < c < a < b < c < b
// < a < c < (a ~ b) < c.
Term muller_history() {
    auto ab = [] { return Term::par({leaf("a"), leaf("b")}); };
    return normalize(Term::seq({ab(), leaf("c"), leaf("a"), leaf("b"), leaf("c"), leaf("b"),
                                leaf("a"), leaf("c"), ab(), leaf("c")}));
}

}  // namespace

TEST_CASE("normalize drops epsilons and collapses singletons") {
    CHECK(normalize(Term::seq({leaf("a"), Term::epsilon()})) == leaf("a"));
    CHECK(normalize(Term::seq({Term::epsilon(), leaf("a")})) == leaf("a"));
    CHECK(normalize(Term::par({leaf("a")})) == leaf("a"));
    CHECK(normalize(Term::seq({})) == Term::epsilon());
    CHECK(normalize(Term::par({Term::epsilon(), Term::epsilon()})) == Term::epsilon());
}

TEST_CASE("normalize flattens nested compositions") {
    Term nested = Term::par({Term::par({leaf("a"), leaf("b")}), leaf("c")});
    Term flat = Term::par({leaf("a"), leaf("b"), leaf("c")});
    CHECK(normalize(nested) == normalize(flat));

    Term seq_nested = Term::seq({leaf("a"), Term::seq({leaf("b"), leaf("c")})});
    CHECK(normalize(seq_nested) == normalize(Term::seq({leaf("a"), leaf("b"), leaf("c")})));
}

TEST_CASE("parallel composition is commutative after normalization") {
    CHECK(normalize(Term::par({leaf("b"), leaf("a")})) ==
          normalize(Term::par({leaf("a"), leaf("b")})));
}

TEST_CASE("duplicate-symbol parallel pairs are representable") {
    Term aa = normalize(Term::par({leaf("a"), leaf("a")}));
    CHECK(aa.kind() == TermKind::Par);
    CHECK(leaf_count(aa) == 2);
}

TEST_CASE("normalization is idempotent and confluent on random raw trees") {
    std::mt19937 rng(20260811);
    const auto syms = rtest::alphabet(4);
    for (int i = 0; i < 10000; ++i) {
        Term raw = rtest::random_raw_term(rng, syms, 12);
        Term norm = normalize(raw);
        CHECK(is_normal_form(norm));
        CHECK(normalize(norm) == norm);
        // Applying the laws one random redex at a time reaches the same form.
        Term rewritten = rtest::rewrite_randomly(raw, rng);
        REQUIRE(rewritten == norm);
    }
}

TEST_CASE("order relation: series and parallel ancestors") {
    Term t = normalize(Term::seq({Term::par({leaf("a"), leaf("b")}), leaf("c")}));
    auto occs = occurrences(t);
    REQUIRE(occs.size() == 3);
    const Occurrence& a = occs[0];
    const Occurrence& b = occs[1];
    const Occurrence& c = occs[2];
    CHECK(a.symbol == sym("a"));
    CHECK(c.symbol == sym("c"));
    CHECK(order_of(t, a, c) == OrderRelation::Before);
    CHECK(order_of(t, c, a) == OrderRelation::After);
    CHECK(order_of(t, a, b) == OrderRelation::Contemporary);
}

TEST_CASE("order relation on the Muller history") {
    Term t = muller_history();
    auto occs = occurrences(t);
    REQUIRE(leaf_count(t) == 12);
    // First parallel pair: contemporary; its first leaf is before the first c.
    CHECK(order_of(t, occs[0], occs[1]) == OrderRelation::Contemporary);
    CHECK(occs[2].symbol == sym("c"));
    CHECK(order_of(t, occs[0], occs[2]) == OrderRelation::Before);
}

TEST_CASE("order errors on bad input") {
    Term t = normalize(Term::seq({leaf("a"), leaf("b")}));
    auto occs = occurrences(t);
    CHECK_THROWS_AS(order_of(t, occs[0], occs[0]), std::invalid_argument);
    Occurrence bogus{{7}, sym("a")};
    CHECK_THROWS_AS(order_of(t, occs[0], bogus), std::invalid_argument);
}

TEST_CASE("order is antisymmetric and transitive on random terms") {
    std::mt19937 rng(7);
    const auto syms = rtest::alphabet(4);
    for (int round = 0; round < 200; ++round) {
        Term t = rtest::random_normal_term(rng, syms, 8);
        auto occs = occurrences(t);
        const std::size_t n = occs.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                auto rel = order_of(t, occs[i], occs[j]);
                auto rev = order_of(t, occs[j], occs[i]);
                if (rel == OrderRelation::Before) CHECK(rev == OrderRelation::After);
                if (rel == OrderRelation::Contemporary) {
                    CHECK(rev == OrderRelation::Contemporary);
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < n; ++k) {
                    if (i == j || j == k || i == k) continue;
                    if (order_of(t, occs[i], occs[j]) == OrderRelation::Before &&
                        order_of(t, occs[j], occs[k]) == OrderRelation::Before) {
                        CHECK(order_of(t, occs[i], occs[k]) == OrderRelation::Before);
                    }
                }
            }
        }
    }
}

TEST_CASE("contemporary is not transitive: concrete witness") {
    // In ((a < b) ~ c): a ~ c and c ~ b hold while a < b.
    Term t = normalize(Term::par({Term::seq({leaf("a"), leaf("b")}), leaf("c")}));
    auto occs = occurrences(t);
    REQUIRE(occs.size() == 3);
    Occurrence a{{}, sym("a")}, b{{}, sym("b")}, c{{}, sym("c")};
    for (const auto& o : occs) {
        if (o.symbol == sym("a")) a = o;
        if (o.symbol == sym("b")) b = o;
        if (o.symbol == sym("c")) c = o;
    }
    CHECK(order_of(t, a, c) == OrderRelation::Contemporary);
    CHECK(order_of(t, c, b) == OrderRelation::Contemporary);
    CHECK(order_of(t, a, b) == OrderRelation::Before);
}

TEST_CASE("projection golden: Muller history on {a, c}") {
    Term t = muller_history();
    Term projected = project(t, {sym("a"), sym("c")});
    Term expected = normalize(Term::seq({leaf("a"), leaf("c"), leaf("a"), leaf("c"), leaf("a"),
                                         leaf("c"), leaf("a"), leaf("c")}));
    CHECK(projected == expected);
}

TEST_CASE("projection basics") {
    Term t = normalize(Term::seq({Term::par({leaf("a"), leaf("b")}), leaf("c")}));
    CHECK(project(t, symbols_of(t)) == t);
    CHECK(project(t, {sym("b")}) == leaf("b"));
    CHECK(project(t, {}) == Term::epsilon());
}

TEST_CASE("projection agrees with the per-part elision oracle") {
    std::mt19937 rng(11);
    const auto syms = rtest::alphabet(4);
    for (int i = 0; i < 2000; ++i) {
        Term t = rtest::random_normal_term(rng, syms, 10);
        SymbolSet keep;
        for (const Symbol& s : syms) {
            if (rng() % 2 == 0) keep.insert(s);
        }
        CHECK(project(t, keep) == rtest::project_oracle(t, keep));
    }
}

TEST_CASE("projection is compositional over series composition and idempotent") {
    std::mt19937 rng(13);
    const auto syms = rtest::alphabet(4);
    for (int i = 0; i < 2000; ++i) {
        Term u = rtest::random_normal_term(rng, syms, 6);
        Term v = rtest::random_normal_term(rng, syms, 6);
        SymbolSet keep;
        for (const Symbol& s : syms) {
            if (rng() % 2 == 0) keep.insert(s);
        }
        Term whole = project(normalize(Term::seq({u, v})), keep);
        Term split = normalize(Term::seq({project(u, keep), project(v, keep)}));
        CHECK(whole == split);
        CHECK(project(project(u, keep), keep) == project(u, keep));
    }
}

TEST_CASE("prefixes enumerate series cuts") {
    Term abc = normalize(Term::seq({leaf("a"), leaf("b"), leaf("c")}));
    TermSet expected{Term::epsilon(), leaf("a"), normalize(Term::seq({leaf("a"), leaf("b")})),
                     abc};
    CHECK(prefixes(abc) == expected);

    CHECK(prefixes(Term::epsilon()) == TermSet{Term::epsilon()});

    Term par_then = normalize(Term::seq({Term::par({leaf("a"), leaf("b")}), leaf("c")}));
    TermSet expected2{Term::epsilon(), normalize(Term::par({leaf("a"), leaf("b")})), par_then};
    CHECK(prefixes(par_then) == expected2);
}

TEST_CASE("any-order expansion") {
    Term ab = Term::any_order(leaf("a"), leaf("b"));
    TermSet expanded = expand_any_order(ab);
    TermSet expected{normalize(Term::seq({leaf("a"), leaf("b")})),
                     normalize(Term::seq({leaf("b"), leaf("a")})),
                     normalize(Term::par({leaf("a"), leaf("b")}))};
    CHECK(expanded == expected);

    CHECK(expand_any_order(leaf("a")) == TermSet{leaf("a")});

    // Two independent shorthands expand to the full cartesian set.
    Term two = Term::seq({Term::any_order(leaf("a"), leaf("b")),
                          Term::any_order(leaf("c"), leaf("d"))});
    CHECK(expand_any_order(two).size() == 9);
}
