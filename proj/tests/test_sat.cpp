#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "pdgsat/forbidden.hpp"
#include "pdgsat/sat.hpp"

using namespace pdgsat;

namespace {

Clause cl(std::initializer_list<int> pos, std::initializer_list<int> neg = {}) {
    Clause c;
    for (int v : pos) c.pos |= uint32_t(1) << v;
    for (int v : neg) c.neg |= uint32_t(1) << v;
    return c;
}

Formula formula(int n, int k, std::initializer_list<Clause> clauses) {
    Formula f = make_formula(n, k);
    for (const Clause& c : clauses) add_clause(f, c);
    return f;
}

// the non-minimal four-clause example: {wx, wy, xz~, y~z} on w,x,y,z = 0..3
Formula paper_nonminimal() {
    return parse_formula("0 1, 0 2, 1 ~3, ~2 3");
}

}  // namespace

TEST_CASE("evaluation basics") {
    Formula empty = make_formula(3, 2);
    CHECK_FALSE(evaluate(empty, 0));
    CHECK_FALSE(evaluate(empty, 7));

    Formula f = formula(2, 2, {cl({0, 1})});
    CHECK(evaluate(f, 0b11));
    CHECK_FALSE(evaluate(f, 0b01));

    Formula g = formula(2, 2, {cl({0}, {1})});
    CHECK_FALSE(evaluate(g, 0b11));
    CHECK(evaluate(g, 0b01));
}

TEST_CASE("truth tables use variable 0 as the low index bit") {
    Formula f = formula(2, 2, {cl({0, 1})});
    TruthTable t = truth_table(f);
    CHECK_FALSE(t.get(0b00));
    CHECK_FALSE(t.get(0b01));
    CHECK_FALSE(t.get(0b10));
    CHECK(t.get(0b11));

    Formula g = formula(2, 2, {cl({1}, {0})});
    TruthTable tg = truth_table(g);
    CHECK(tg.get(0b10));
    CHECK_FALSE(tg.get(0b11));
    CHECK_FALSE(tg.get(0b00));

    // re-adding a clause is a no-op, so the function is unchanged
    Formula h = f;
    add_clause(h, cl({0, 1}));
    CHECK(truth_table(h) == t);
}

TEST_CASE("witness search") {
    Formula bad = paper_nonminimal();
    CHECK_FALSE(find_witness(bad, cl({0, 1})).has_value());

    Formula single = formula(4, 2, {cl({0, 1})});
    auto w = find_witness(single, cl({0, 1}));
    REQUIRE(w.has_value());
    CHECK((*w & 0b11) == 0b11);

    Formula mono = formula(3, 2, {cl({0, 1}), cl({1, 2})});
    auto w2 = find_witness(mono, cl({0, 1}));
    REQUIRE(w2.has_value());
    CHECK((*w2 & 0b011) == 0b011);
    CHECK((*w2 & 0b100) == 0);

    CHECK_THROWS_AS(find_witness(single, cl({2, 3})), std::invalid_argument);
}

TEST_CASE("minimality") {
    CHECK_FALSE(is_minimal(paper_nonminimal()));
    MinimalityReport rep = minimality_report(paper_nonminimal());
    CHECK_FALSE(rep.minimal);
    CHECK_FALSE(rep.witnesses[0].has_value());  // clause {0,1} has no witness

    // monotone formulas are minimal
    std::mt19937_64 rng(67);
    for (int it = 0; it < 50; ++it) {
        Formula f = make_formula(5, 3);
        for (uint32_t vars = 0; vars < 32; ++vars) {
            if (__builtin_popcount(vars) != 3 || rng() % 2) continue;
            Clause c;
            c.pos = vars;
            add_clause(f, c);
        }
        CHECK(is_minimal(f));
    }

    CHECK(is_minimal(formula(4, 2, {cl({1}, {3})})));  // single clause
    CHECK(is_minimal(make_formula(3, 2)));             // empty formula
}

TEST_CASE("removing a clause from a minimal formula changes the function") {
    std::mt19937_64 rng(71);
    int seen = 0;
    while (seen < 40) {
        Formula f = make_formula(4, 2);
        for (uint32_t vars = 0; vars < 16; ++vars) {
            if (__builtin_popcount(vars) != 2 || rng() % 2) continue;
            Clause c;
            c.neg = vars & uint32_t(rng());
            c.pos = vars & ~c.neg;
            if (!f.has_clause(c)) {
                bool slot_taken = false;
                for (const Clause& o : f.clauses) slot_taken |= o.vars() == vars;
                if (!slot_taken) add_clause(f, c);
            }
        }
        if (f.clauses.empty() || !is_minimal(f)) continue;
        seen++;
        TruthTable full = truth_table(f);
        for (size_t i = 0; i < f.clauses.size(); ++i) {
            Formula g = f;
            g.clauses.erase(g.clauses.begin() + i);
            CHECK_FALSE(truth_table(g) == full);
        }
    }
}

TEST_CASE("blowup reproduces the sixteen-clause expansion") {
    // {x0 x1 x2, x0 ~x2 x3} doubled: duplicates are v + 4
    Formula f = formula(4, 3, {cl({0, 1, 2}), cl({0, 3}, {2})});
    Formula b = blowup(f, 2);
    CHECK(b.n == 8);
    REQUIRE(b.clauses.size() == 16);
    std::set<std::pair<uint32_t, uint32_t>> got;
    for (const Clause& c : b.clauses) got.insert({c.pos, c.neg});
    std::set<std::pair<uint32_t, uint32_t>> expect;
    for (int a : {0, 4})
        for (int bb : {1, 5})
            for (int c : {2, 6})
                expect.insert({uint32_t(1 << a | 1 << bb | 1 << c), 0});
    for (int a : {0, 4})
        for (int c : {2, 6})
            for (int d : {3, 7})
                expect.insert({uint32_t(1 << a | 1 << d), uint32_t(1 << c)});
    CHECK(got == expect);

    // multiplicity one is the identity
    CHECK(blowup(f, 1).clauses == f.clauses);
}

TEST_CASE("blowup preserves polarities") {
    std::mt19937_64 rng(73);
    for (int it = 0; it < 50; ++it) {
        Formula f = make_formula(4, 2);
        for (uint32_t vars = 0; vars < 16; ++vars) {
            if (__builtin_popcount(vars) != 2 || rng() % 2) continue;
            Clause c;
            c.neg = vars & uint32_t(rng());
            c.pos = vars & ~c.neg;
            bool taken = false;
            for (const Clause& o : f.clauses) taken |= o.vars() == vars;
            if (!taken) add_clause(f, c);
        }
        int b = 2 + int(rng() % 2);
        Formula big = blowup(f, b);
        CHECK(big.clauses.size() == f.clauses.size() * size_t(std::pow(b, f.k) + 0.5));
        for (const Clause& c : big.clauses) {
            Clause orig;
            for (int v = 0; v < big.n; ++v) {
                uint32_t bit = uint32_t(1) << (v % f.n);
                if (c.pos >> v & 1) orig.pos |= bit;
                if (c.neg >> v & 1) orig.neg |= bit;
            }
            CHECK(f.has_clause(orig));
        }
    }
}

TEST_CASE("simple and semisimple predicates") {
    CHECK(is_simple(parse_formula("0 1 2, 0 1 ~3, 1 2 3")));
    CHECK_FALSE(is_simple(parse_formula("0 1 2, 0 1 ~2")));

    CHECK(is_semisimple(parse_formula("0 ~1 2, 0 ~1 ~2, 0 1 ~3")));
    CHECK_FALSE(is_semisimple(parse_formula("0 ~1 2, 0 1 ~2")));  // two flips apart
    CHECK(is_semisimple(make_formula(4, 2)));
}

TEST_CASE("type map") {
    // {abc, ab~c, ~ab~d, bd~e, ~bd~e} with a..e = 0..4
    Formula g = parse_formula("0 1 2, 0 1 ~2, ~0 1 ~3, 1 3 ~4, ~1 3 ~4", 5);
    Pdg t = type_of(g);
    CHECK(to_text(t) == "5 3 ; 0 1 2>2 , 0 1 3 , 1 3 4>1");

    Formula mono = parse_formula("0 1, 1 2, 0 2");
    Pdg tm = type_of(mono);
    CHECK(tm.directed_count() == 0);
    CHECK(tm.undirected_count() == 3);

    CHECK_THROWS_AS(type_of(parse_formula("0 ~1 2, 0 1 ~2")), std::invalid_argument);
}

TEST_CASE("positive instance and its census") {
    Pdg h = parse_pdg("3 3 ; 0 1 2>2");
    Formula f = positive_instance(h);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.has_clause(cl({0, 1, 2})));
    CHECK(f.has_clause(cl({0, 1}, {2})));

    Pdg complete = make_pdg(4, 2);
    for (uint16_t m = 0; m < 16; ++m)
        if (__builtin_popcount(m) == 2) add_edge(complete, make_edge(2, m));
    Formula mono = positive_instance(complete);
    CHECK(mono.clauses.size() == 6);
    for (const Clause& c : mono.clauses) CHECK(c.neg == 0);

    // type is a left inverse of the positive instance
    std::mt19937_64 rng(79);
    for (int it = 0; it < 80; ++it) {
        int n = 3 + int(rng() % 3);
        int k = 2 + int(rng() % 2);
        if (k > n) continue;
        Pdg g = make_pdg(n, k);
        for (uint16_t m = 0; m < (uint16_t(1) << n); ++m) {
            if (__builtin_popcount(m) != k || rng() % 2) continue;
            Edge e;
            e.vertices = m;
            if (rng() % 2) {
                int pick = int(rng() % k);
                for (int v = 0; v < n; ++v)
                    if (m >> v & 1 && pick-- == 0) e.head = uint8_t(v);
            }
            add_edge(g, e);
        }
        CHECK(type_of(positive_instance(g)) == g);
    }
}

TEST_CASE("positive instance sweep: single edge and oriented four-cycle") {
    ForbiddenFamily f2 = generate_Fk(2);

    Pdg single = parse_pdg("3 2 ; 0 1");
    PositiveInstanceReport r1 = check_positive_instance_lemmas(single, 100000, &f2);
    CHECK(r1.family_free);
    CHECK(r1.subformula_count == 2);
    CHECK(r1.all_minimal);
    CHECK(r1.all_distinct);

    // all four pairs oriented into one side of a bipartition
    Pdg k22 = make_pdg(4, 2);
    add_edge(k22, make_edge(2, {0, 2}, 2));
    add_edge(k22, make_edge(2, {0, 3}, 3));
    add_edge(k22, make_edge(2, {1, 2}, 2));
    add_edge(k22, make_edge(2, {1, 3}, 3));
    REQUIRE(is_family_free(k22, f2));
    PositiveInstanceReport r2 = check_positive_instance_lemmas(k22, 100000, &f2);
    CHECK(r2.subformula_count == 81);
    CHECK(r2.checked == 81);
    CHECK(r2.all_minimal);
    CHECK(r2.all_distinct);

    // precondition violation is reported, not silently swept
    PositiveInstanceReport r3 = check_positive_instance_lemmas(make_Tk(2), 100000, &f2);
    CHECK_FALSE(r3.family_free);
    CHECK(r3.checked == 0);
}

TEST_CASE("two clauses on one variable set blow up to non-minimal formulas") {
    // all negation patterns j = 1..k for k = 2..4
    for (int k = 2; k <= 4; ++k)
        for (int j = 1; j <= k; ++j) {
            Formula f = make_formula(k, k);
            Clause a;
            a.pos = (uint32_t(1) << k) - 1;
            Clause b;
            b.neg = (uint32_t(1) << j) - 1;
            b.pos = a.pos & ~b.neg;
            add_clause(f, a);
            add_clause(f, b);
            CAPTURE(k);
            CAPTURE(j);
            CHECK(check_blowup_nonminimality(f));
        }
}

TEST_CASE("semisimple formula with a forbidden type blows up to non-minimal") {
    // {abc, ab~c, ~bc d, ~bc ~d} has type {01>2, 12>3}
    Formula g = parse_formula("0 1 2, 0 1 ~2, ~1 2 3, ~1 2 ~3", 4);
    Pdg t = type_of(g);
    ForbiddenFamily f3 = generate_Fk(3);
    CHECK_FALSE(is_family_free(t, f3));
    CHECK(check_blowup_nonminimality(g));
}

TEST_CASE("clique blowups: unate stays minimal, non-unate does not") {
    // every polarity pattern of the triangle {xy, yz, xz}
    int non_unate_seen = 0, unate_seen = 0;
    for (int code = 0; code < 64; ++code) {
        Formula f = make_formula(3, 2);
        int c = code;
        for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
            Clause q;
            uint32_t vars = uint32_t(1 << a | 1 << b);
            q.neg = (c % 4 & 1 ? uint32_t(1 << a) : 0) | (c % 4 & 2 ? uint32_t(1 << b) : 0);
            q.pos = vars & ~q.neg;
            c /= 4;
            add_clause(f, q);
        }
        if (f.clauses.size() != 3) continue;
        bool nonminimal = check_blowup_nonminimality(f);
        if (is_unate(f)) {
            unate_seen++;
            CHECK_FALSE(nonminimal);
        } else {
            non_unate_seen++;
            CHECK(nonminimal);
        }
    }
    CHECK(unate_seen > 0);
    CHECK(non_unate_seen > 0);
}

TEST_CASE("function census") {
    CHECK(count_functions(2, 2) == 16);
    CHECK(count_functions(3, 2) == 166);
    CHECK(count_functions(3, 3) == 256);  // clauses are the 8 minterms
    CHECK_THROWS_AS(count_functions(4, 3), std::invalid_argument);

    CHECK(count_unate_functions(2, 2) <= count_functions(2, 2));
    CHECK(count_unate_functions(3, 2) <= count_functions(3, 2));
}

TEST_CASE("literal counts, unateness, distance") {
    Formula f = parse_formula("~0 1, 0 1, 1 2");
    LiteralCounts lc = literal_counts(f);
    CHECK(lc.pos[0] == 1);
    CHECK(lc.neg[0] == 1);
    CHECK(lc.pos[1] == 3);
    CHECK(lc.neg[1] == 0);
    CHECK_FALSE(is_unate(f));
    CHECK(distance_to_unate(f) == 1);

    CHECK(is_unate(parse_formula("~0 1, 1 2")));
    CHECK(distance_to_unate(parse_formula("~0 1, 1 2")) == 0);

    Formula mono = parse_formula("0 1, 1 2, 0 2");
    CHECK(is_unate(mono));
    CHECK(distance_to_unate(mono) == 0);
}

TEST_CASE("unate distance is invariant under global negation and permutation") {
    std::mt19937_64 rng(83);
    for (int it = 0; it < 60; ++it) {
        Formula f = make_formula(4, 2);
        for (uint32_t vars = 0; vars < 16; ++vars) {
            if (__builtin_popcount(vars) != 2 || rng() % 2) continue;
            Clause c;
            c.neg = vars & uint32_t(rng());
            c.pos = vars & ~c.neg;
            bool taken = false;
            for (const Clause& o : f.clauses) taken |= o.vars() == vars;
            if (!taken) add_clause(f, c);
        }
        int d = distance_to_unate(f);
        CHECK(is_unate(f) == (d == 0));

        int flip = int(rng() % 4);
        Formula neg = make_formula(4, 2);
        for (Clause c : f.clauses) {
            uint32_t bit = uint32_t(1) << flip;
            if (c.vars() & bit) {
                bool was_pos = c.pos & bit;
                c.pos = was_pos ? c.pos & ~bit : c.pos | bit;
                c.neg = was_pos ? c.neg | bit : c.neg & ~bit;
            }
            add_clause(neg, c);
        }
        CHECK(distance_to_unate(neg) == d);

        Formula swapped = make_formula(4, 2);
        int a = int(rng() % 4), b = int(rng() % 4);
        auto swap_bits = [&](uint32_t m) {
            bool ba = m >> a & 1, bb = m >> b & 1;
            m &= ~uint32_t(1 << a | 1 << b);
            if (ba) m |= uint32_t(1) << b;
            if (bb) m |= uint32_t(1) << a;
            return m;
        };
        for (Clause c : f.clauses) {
            Clause s;
            s.pos = swap_bits(c.pos);
            s.neg = swap_bits(c.neg);
            add_clause(swapped, s);
        }
        CHECK(distance_to_unate(swapped) == d);
    }
}

TEST_CASE("formula text round-trips") {
    Formula f = parse_formula("0 1, 0 2, 1 ~3, ~2 3");
    CHECK(to_text(f) == "0 1, 0 2, 1 ~3, ~2 3");
    CHECK(parse_formula(to_text(f)).clauses == f.clauses);
    CHECK_THROWS_AS(parse_formula("0 1, 0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_formula(""), std::invalid_argument);
}
