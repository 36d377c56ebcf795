#include "pdgsat/sat.hpp"

#include "pdgsat/forbidden.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace pdgsat {

Formula make_formula(int n, int k) {
    if (n < 0 || n > 30) throw std::invalid_argument("variable count out of range");
    if (k < 1) throw std::invalid_argument("clause width out of range");
    Formula f;
    f.n = n;
    f.k = k;
    return f;
}

Clause make_clause(int k, const std::vector<Literal>& lits) {
    Clause c;
    for (const Literal& l : lits) {
        if (l.var < 0 || l.var >= 30) throw std::invalid_argument("variable index out of range");
        uint32_t bit = uint32_t(1) << l.var;
        if ((c.pos | c.neg) & bit) throw std::invalid_argument("clause variables must be distinct");
        (l.positive ? c.pos : c.neg) |= bit;
    }
    if (std::popcount(c.pos | c.neg) != k)
        throw std::invalid_argument("clause must use exactly k variables");
    return c;
}

void add_clause(Formula& f, const Clause& c) {
    if (std::popcount(c.vars()) != f.k) throw std::invalid_argument("clause width mismatch");
    if (c.vars() >> f.n) throw std::invalid_argument("clause uses variables outside the formula");
    if (c.pos & c.neg) throw std::invalid_argument("clause with contradictory literals");
    auto it = std::lower_bound(f.clauses.begin(), f.clauses.end(), c);
    if (it != f.clauses.end() && *it == c) return;
    f.clauses.insert(it, c);
}

bool Formula::has_clause(const Clause& c) const {
    auto it = std::lower_bound(clauses.begin(), clauses.end(), c);
    return it != clauses.end() && *it == c;
}

bool evaluate(const Formula& f, uint32_t w) {
    for (const Clause& c : f.clauses)
        if (c.satisfied(w)) return true;
    return false;
}

TruthTable truth_table(const Formula& f) {
    if (f.n > 24) throw std::invalid_argument("truth table limited to n <= 24");
    TruthTable t;
    t.n = f.n;
    t.bits.assign(((size_t(1) << f.n) + 63) >> 6, 0);
    for (uint32_t w = 0; w < (uint32_t(1) << f.n); ++w)
        if (evaluate(f, w)) t.bits[w >> 6] |= uint64_t(1) << (w & 63);
    return t;
}

namespace {

// Witness search as constraint propagation: the target clause pins its k
// variables; every other clause needs at least one falsified literal. A
// clause whose literals are all true is a conflict; all-but-one true forces
// the last literal false.
struct WitnessSearch {
    const Formula* f;
    const Clause* target;
    std::vector<Clause> others;

    std::optional<uint32_t> run() {
        uint32_t val = target->pos;
        uint32_t dec = target->vars();
        if (!propagate(val, dec)) return std::nullopt;
        return dfs(val, dec);
    }

    // Returns false on conflict; val/dec updated with forced assignments.
    bool propagate(uint32_t& val, uint32_t& dec) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const Clause& c : others) {
                uint32_t decided = c.vars() & dec;
                uint32_t false_pos = c.pos & decided & ~val;
                uint32_t false_neg = c.neg & decided & val;
                if (false_pos | false_neg) continue;  // already killed
                uint32_t undecided = c.vars() & ~dec;
                if (undecided == 0) return false;
                if (std::popcount(undecided) == 1) {
                    dec |= undecided;
                    if (c.neg & undecided) val |= undecided;  // negative literal -> set true
                    changed = true;
                }
            }
        }
        return true;
    }

    std::optional<uint32_t> dfs(uint32_t val, uint32_t dec) {
        // pick an undecided variable from a live clause
        uint32_t branch = 0;
        bool all_killed = true;
        for (const Clause& c : others) {
            uint32_t decided = c.vars() & dec;
            if ((c.pos & decided & ~val) | (c.neg & decided & val)) continue;
            all_killed = false;
            uint32_t undecided = c.vars() & ~dec;
            branch = undecided & -undecided;
            break;
        }
        if (all_killed) return val;  // undecided variables default to 0
        for (int attempt = 0; attempt < 2; ++attempt) {
            uint32_t v = val;
            uint32_t d = dec | branch;
            // first try the value that falsifies the literal in that clause
            if (attempt == 1) v |= branch;
            if (!propagate(v, d)) continue;
            auto r = dfs(v, d);
            if (r) return r;
        }
        return std::nullopt;
    }
};

}  // namespace

std::optional<uint32_t> find_witness(const Formula& f, const Clause& c) {
    if (!f.has_clause(c)) throw std::invalid_argument("clause not in formula");
    WitnessSearch s;
    s.f = &f;
    s.target = &c;
    for (const Clause& o : f.clauses)
        if (!(o == c)) s.others.push_back(o);
    return s.run();
}

MinimalityReport minimality_report(const Formula& f) {
    MinimalityReport r;
    r.minimal = true;
    for (const Clause& c : f.clauses) {
        r.witnesses.push_back(find_witness(f, c));
        if (!r.witnesses.back()) r.minimal = false;
    }
    return r;
}

bool is_minimal(const Formula& f) {
    for (const Clause& c : f.clauses)
        if (!find_witness(f, c)) return false;
    return true;
}

Formula blowup(const Formula& f, int b) {
    if (b < 1) throw std::invalid_argument("blowup multiplicity must be >= 1");
    if (f.n * b > 30) throw std::invalid_argument("blowup variable count out of range");
    Formula g = make_formula(f.n * b, f.k);
    for (const Clause& c : f.clauses) {
        std::vector<int> vars;
        for (int v = 0; v < f.n; ++v)
            if (c.vars() >> v & 1) vars.push_back(v);
        std::vector<int> choice(vars.size(), 0);
        for (;;) {
            Clause nc;
            for (size_t i = 0; i < vars.size(); ++i) {
                int dup = vars[i] + choice[i] * f.n;
                if (c.pos >> vars[i] & 1) nc.pos |= uint32_t(1) << dup;
                else nc.neg |= uint32_t(1) << dup;
            }
            add_clause(g, nc);
            size_t i = 0;
            while (i < choice.size() && ++choice[i] == b) choice[i++] = 0;
            if (i == choice.size()) break;
        }
    }
    return g;
}

bool is_simple(const Formula& f) {
    for (size_t i = 1; i < f.clauses.size(); ++i)
        if (f.clauses[i].vars() == f.clauses[i - 1].vars()) return false;
    return true;
}

bool is_semisimple(const Formula& f) {
    for (size_t i = 0; i < f.clauses.size();) {
        size_t j = i;
        while (j < f.clauses.size() && f.clauses[j].vars() == f.clauses[i].vars()) ++j;
        size_t count = j - i;
        if (count > 2) return false;
        if (count == 2) {
            uint32_t diff = f.clauses[i].neg ^ f.clauses[i + 1].neg;
            if (std::popcount(diff) != 1) return false;
        }
        i = j;
    }
    return true;
}

Pdg type_of(const Formula& f) {
    if (!is_semisimple(f)) throw std::invalid_argument("type is defined for semisimple formulas");
    if (f.n > kMaxVertices) throw std::invalid_argument("too many variables for a PDG");
    Pdg g = make_pdg(f.n, f.k);
    for (size_t i = 0; i < f.clauses.size();) {
        size_t j = i;
        while (j < f.clauses.size() && f.clauses[j].vars() == f.clauses[i].vars()) ++j;
        uint16_t mask = uint16_t(f.clauses[i].vars());
        if (j - i == 1) {
            add_edge(g, make_edge(f.k, mask));
        } else {
            uint32_t diff = f.clauses[i].neg ^ f.clauses[i + 1].neg;
            add_edge(g, make_edge(f.k, mask, std::countr_zero(diff)));
        }
        i = j;
    }
    return g;
}

Formula positive_instance(const Pdg& h) {
    Formula f = make_formula(h.n, h.k);
    for (const Edge& e : h.edges) {
        Clause mono;
        mono.pos = e.vertices;
        add_clause(f, mono);
        if (e.directed()) {
            Clause flip;
            flip.pos = uint32_t(e.vertices) & ~(uint32_t(1) << e.head);
            flip.neg = uint32_t(1) << e.head;
            add_clause(f, flip);
        }
    }
    return f;
}

namespace {

struct TableHash {
    size_t operator()(const std::vector<uint64_t>& v) const {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (uint64_t x : v) {
            h ^= x;
            h *= 0x100000001b3ULL;
        }
        return size_t(h);
    }
};

}  // namespace

PositiveInstanceReport check_positive_instance_lemmas(const Pdg& h, uint64_t budget,
                                                      const ForbiddenFamily* family) {
    PositiveInstanceReport rep;
    if (family) {
        rep.family_free = is_family_free(h, *family);
        if (!rep.family_free) return rep;
    }
    uint64_t total = 1;
    for (const Edge& e : h.edges) {
        total *= e.directed() ? 3 : 2;
        if (total > budget) throw std::invalid_argument("subformula census exceeds budget");
    }
    rep.subformula_count = total;

    Formula base = make_formula(h.n, h.k);
    // per edge: the choices of clauses a simple subformula may take
    std::vector<std::vector<std::optional<Clause>>> choices;
    for (const Edge& e : h.edges) {
        Clause mono;
        mono.pos = e.vertices;
        std::vector<std::optional<Clause>> ch = {std::nullopt, mono};
        if (e.directed()) {
            Clause flip;
            flip.pos = uint32_t(e.vertices) & ~(uint32_t(1) << e.head);
            flip.neg = uint32_t(1) << e.head;
            ch.push_back(flip);
        }
        choices.push_back(std::move(ch));
    }

    std::unordered_set<std::vector<uint64_t>, TableHash> tables;
    std::vector<size_t> idx(choices.size(), 0);
    for (;;) {
        Formula sub = base;
        for (size_t i = 0; i < choices.size(); ++i)
            if (choices[i][idx[i]]) add_clause(sub, *choices[i][idx[i]]);
        rep.checked++;
        if (!is_minimal(sub)) {
            rep.all_minimal = false;
            if (!rep.nonminimal_example) rep.nonminimal_example = sub;
        }
        if (!tables.insert(truth_table(sub).bits).second) rep.all_distinct = false;
        size_t i = 0;
        while (i < idx.size() && ++idx[i] == choices[i].size()) idx[i++] = 0;
        if (i == idx.size()) break;
    }
    return rep;
}

bool check_blowup_nonminimality(const Formula& seed) {
    return !is_minimal(blowup(seed, 2));
}

namespace {

std::vector<Clause> all_clauses(int n, int k) {
    std::vector<Clause> out;
    for (uint32_t vars = 0; vars < (uint32_t(1) << n); ++vars) {
        if (std::popcount(vars) != k) continue;
        // every subset of vars may be the negative part
        for (uint32_t negsub = vars;; negsub = (negsub - 1) & vars) {
            Clause c;
            c.neg = negsub;
            c.pos = vars & ~negsub;
            out.push_back(c);
            if (negsub == 0) break;
        }
    }
    return out;
}

void check_count_budget(int n, int k) {
    long long slots = binomial(n, k);
    if ((1LL << k) * slots > 26)
        throw std::invalid_argument("function census requires 2^k * C(n,k) <= 26");
}

// Walks the inclusion tree over the clause list, keeping per-assignment
// counts of satisfied clauses so each node costs O(2^n).
void census_dfs(const std::vector<Clause>& clauses, size_t i, std::vector<uint8_t>& sat_count,
                std::unordered_set<std::vector<uint64_t>, TableHash>& tables, int n) {
    if (i == clauses.size()) {
        std::vector<uint64_t> bits(((size_t(1) << n) + 63) >> 6, 0);
        for (uint32_t w = 0; w < (uint32_t(1) << n); ++w)
            if (sat_count[w]) bits[w >> 6] |= uint64_t(1) << (w & 63);
        tables.insert(std::move(bits));
        return;
    }
    census_dfs(clauses, i + 1, sat_count, tables, n);
    for (uint32_t w = 0; w < (uint32_t(1) << n); ++w)
        if (clauses[i].satisfied(w)) sat_count[w]++;
    census_dfs(clauses, i + 1, sat_count, tables, n);
    for (uint32_t w = 0; w < (uint32_t(1) << n); ++w)
        if (clauses[i].satisfied(w)) sat_count[w]--;
}

}  // namespace

uint64_t count_functions(int n, int k) {
    check_count_budget(n, k);
    auto clauses = all_clauses(n, k);
    std::unordered_set<std::vector<uint64_t>, TableHash> tables;
    std::vector<uint8_t> sat_count(size_t(1) << n, 0);
    census_dfs(clauses, 0, sat_count, tables, n);
    return tables.size();
}

uint64_t count_unate_functions(int n, int k) {
    check_count_budget(n, k);
    // Sweep each polarity vector separately: a unate formula agreeing with
    // sigma uses only the C(n,k) clauses whose literals match sigma.
    std::unordered_set<std::vector<uint64_t>, TableHash> tables;
    for (uint32_t sigma = 0; sigma < (uint32_t(1) << n); ++sigma) {
        std::vector<Clause> clauses;
        for (uint32_t vars = 0; vars < (uint32_t(1) << n); ++vars) {
            if (std::popcount(vars) != k) continue;
            Clause c;
            c.neg = vars & sigma;
            c.pos = vars & ~sigma;
            clauses.push_back(c);
        }
        std::vector<uint8_t> sat_count(size_t(1) << n, 0);
        census_dfs(clauses, 0, sat_count, tables, n);
    }
    return tables.size();
}

LiteralCounts literal_counts(const Formula& f) {
    LiteralCounts lc;
    lc.pos.assign(f.n, 0);
    lc.neg.assign(f.n, 0);
    for (const Clause& c : f.clauses)
        for (int v = 0; v < f.n; ++v) {
            if (c.pos >> v & 1) lc.pos[v]++;
            if (c.neg >> v & 1) lc.neg[v]++;
        }
    return lc;
}

int distance_to_unate(const Formula& f) {
    if (f.n > 20) throw std::invalid_argument("unate distance limited to n <= 20");
    int best = int(f.clauses.size());
    for (uint32_t sigma = 0; sigma < (uint32_t(1) << f.n); ++sigma) {
        // sigma bit set = variable should appear negated
        int bad = 0;
        for (const Clause& c : f.clauses)
            if ((c.pos & sigma) | (c.neg & ~sigma)) bad++;
        best = std::min(best, bad);
    }
    return best;
}

bool is_unate(const Formula& f) {
    auto lc = literal_counts(f);
    for (int v = 0; v < f.n; ++v)
        if (lc.pos[v] > 0 && lc.neg[v] > 0) return false;
    return true;
}

std::string to_text(const Formula& f) {
    std::ostringstream os;
    bool first_clause = true;
    for (const Clause& c : f.clauses) {
        if (!first_clause) os << ", ";
        first_clause = false;
        bool first_lit = true;
        for (int v = 0; v < f.n; ++v) {
            if (!(c.vars() >> v & 1)) continue;
            if (!first_lit) os << ' ';
            first_lit = false;
            if (c.neg >> v & 1) os << '~';
            os << v;
        }
    }
    return os.str();
}

Formula parse_formula(const std::string& text, int n) {
    std::vector<std::vector<Literal>> parsed;
    std::vector<Literal> cur;
    std::istringstream is(text);
    std::string tok;
    int max_var = -1;
    auto flush = [&]() {
        if (!cur.empty()) parsed.push_back(cur);
        cur.clear();
    };
    std::string piece;
    while (std::getline(is, piece, ',')) {
        std::istringstream ps(piece);
        while (ps >> tok) {
            Literal l;
            if (!tok.empty() && tok[0] == '~') {
                l.positive = false;
                tok = tok.substr(1);
            }
            l.var = std::stoi(tok);
            max_var = std::max(max_var, l.var);
            cur.push_back(l);
        }
        flush();
    }
    if (parsed.empty()) throw std::invalid_argument("empty formula text");
    size_t k = parsed[0].size();
    for (const auto& lits : parsed)
        if (lits.size() != k) throw std::invalid_argument("clauses must share one width");
    Formula f = make_formula(n < 0 ? max_var + 1 : n, int(k));
    for (const auto& lits : parsed) add_clause(f, make_clause(int(k), lits));
    return f;
}

}  // namespace pdgsat
