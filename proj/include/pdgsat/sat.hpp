#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdgsat/pdg.hpp"

namespace pdgsat {

// k-SAT DNF formulas: a formula is a set of clauses, a clause is a
// conjunction of k literals on k distinct variables. Variables are indexed
// 0..n-1 and clauses are stored as positive/negative bitmasks. Supports
// n <= 30 structurally; exhaustive routines state their own budgets.

struct Literal {
    int var = 0;
    bool positive = true;
};

struct Clause {
    uint32_t pos = 0;  // variables appearing as positive literals
    uint32_t neg = 0;  // variables appearing as negative literals

    uint32_t vars() const { return pos | neg; }
    bool satisfied(uint32_t w) const { return (w & pos) == pos && (w & neg) == 0; }
    friend bool operator==(const Clause& a, const Clause& b) { return a.pos == b.pos && a.neg == b.neg; }
    friend bool operator<(const Clause& a, const Clause& b) {
        if (a.vars() != b.vars()) return a.vars() < b.vars();
        return a.neg < b.neg;
    }
};

struct Formula {
    int n = 0;  // variable count
    int k = 0;  // clause width
    std::vector<Clause> clauses;  // sorted, duplicate-free

    bool has_clause(const Clause& c) const;
};

struct TruthTable {
    int n = 0;
    std::vector<uint64_t> bits;  // 2^n entries, variable 0 is the low index bit

    bool get(uint32_t w) const { return bits[w >> 6] >> (w & 63) & 1; }
    friend bool operator==(const TruthTable& a, const TruthTable& b) { return a.n == b.n && a.bits == b.bits; }
};

Formula make_formula(int n, int k);
Clause make_clause(int k, const std::vector<Literal>& lits);
void add_clause(Formula& f, const Clause& c);  // set semantics; re-adding is a no-op

bool evaluate(const Formula& f, uint32_t w);
TruthTable truth_table(const Formula& f);  // n <= 24

// An assignment satisfying clause c and no other clause of f, found by fixing
// c's literals and searching the rest with unit-style propagation. nullopt if
// none exists.
std::optional<uint32_t> find_witness(const Formula& f, const Clause& c);

struct MinimalityReport {
    bool minimal = false;
    std::vector<std::optional<uint32_t>> witnesses;  // per clause, in order
};

bool is_minimal(const Formula& f);
MinimalityReport minimality_report(const Formula& f);

// Replace each variable by b duplicates; duplicate j of variable v is
// v + j*n. Each clause expands to b^k clauses preserving polarities, so
// blowup(f, 1) is f itself.
Formula blowup(const Formula& f, int b);

bool is_simple(const Formula& f);      // at most one clause per k-set of variables
bool is_semisimple(const Formula& f);  // at most two, differing by one negation

// Projection of a semisimple formula to a k-PDG: one-clause k-sets become
// undirected edges, two-clause k-sets become edges directed at the variable
// where the pair differs.
Pdg type_of(const Formula& f);

// The canonical semisimple preimage: every edge yields its monotone clause,
// and a directed edge also yields the clause with the head negated.
Formula positive_instance(const Pdg& h);

struct PositiveInstanceReport {
    bool family_free = true;  // precondition; false when h carries a forbidden pattern
    uint64_t subformula_count = 0;
    uint64_t checked = 0;
    bool all_minimal = true;
    bool all_distinct = true;
    std::optional<Formula> nonminimal_example;
};

struct ForbiddenFamily;

// Iterates every simple subformula of positive_instance(h), checking
// minimality and pairwise distinctness of truth tables. `budget` bounds
// 2^{e_u} * 3^{e_d}. When `family` is given, the freeness precondition is
// verified and reported; a violation skips the sweep.
PositiveInstanceReport check_positive_instance_lemmas(const Pdg& h, uint64_t budget = 100000,
                                                      const ForbiddenFamily* family = nullptr);

// Confirms that blowup(seed, 2) is non-minimal.
bool check_blowup_nonminimality(const Formula& seed);

// Exact counts of distinct truth tables over all formulas / all unate
// formulas on (n, k). Requires 2^k * C(n,k) <= 26.
uint64_t count_functions(int n, int k);
uint64_t count_unate_functions(int n, int k);

struct LiteralCounts {
    std::vector<int> pos;  // m(x) per variable
    std::vector<int> neg;  // m(~x) per variable
};

LiteralCounts literal_counts(const Formula& f);
// Fewest clause deletions to make f unate: min over the 2^n polarity vectors
// of the number of clauses disagreeing with it. n <= 20.
int distance_to_unate(const Formula& f);
bool is_unate(const Formula& f);

// Text format: clauses comma separated, literal = variable index with an
// optional '~' prefix, e.g. "0 1, ~0 2". Round-trips bit-exactly.
std::string to_text(const Formula& f);
Formula parse_formula(const std::string& text, int n = -1);  // n = -1 infers max var + 1

}  // namespace pdgsat
