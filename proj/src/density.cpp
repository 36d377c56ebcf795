#include "pdgsat/density.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace pdgsat {

namespace {

// Objective at y with the smallest admissible x; -1 if no x in [0, 1-y] meets
// the constraint.
double fm_value_at(double y, double rho) {
    if (y < 0 || y > 1) return -1;
    double need = rho - 2 * y * (1 - y);
    double x = 0;
    if (need > 0) {
        x = std::sqrt(need);
        if (x > 1 - y + 1e-15) return -1;
        if (x > 1 - y) x = 1 - y;
    }
    return 2 * y * (1 - x - y);
}

}  // namespace

double fm_density(double rho) {
    if (rho < 0 || rho > 1) throw std::invalid_argument("rho must lie in [0,1]");
    // coarse scan, then golden-section refinement around the best bracket
    const int grid = 200000;
    double best = -1, besty = 0;
    for (int i = 0; i <= grid; ++i) {
        double y = double(i) / grid;
        double v = fm_value_at(y, rho);
        if (v > best) { best = v; besty = y; }
    }
    double lo = std::max(0.0, besty - 2.0 / grid);
    double hi = std::min(1.0, besty + 2.0 / grid);
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
    double fc = fm_value_at(c, rho), fd = fm_value_at(d, rho);
    while (hi - lo > 1e-13) {
        if (fc > fd) {
            hi = d; d = c; fd = fc;
            c = hi - invphi * (hi - lo);
            fc = fm_value_at(c, rho);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + invphi * (hi - lo);
            fd = fm_value_at(d, rho);
        }
    }
    return std::max(best, std::max(fc, fd));
}

namespace {

// Exact inner allocation for fixed (x,y,z): with budget S = x^2+2xy+2yz and
// cap P = 2yz, putting b = min(P,S), c = S-b, a = 0 dominates every other
// (a,b,c) in both inequalities whenever phi > 1, so the min margin at this
// grid point is exact.
struct GridPoint {
    Rat m1, m2;
    Rat b, c;
};

GridPoint margins_at(const Rat& x, const Rat& y, const Rat& phi) {
    Rat z = Rat(1) - x - y;
    Rat S = x * x + Rat(2) * x * y + Rat(2) * y * z;
    Rat P = Rat(2) * y * z;
    Rat b = P < S ? P : S;
    Rat c = S - b;
    GridPoint g;
    g.b = b;
    g.c = c;
    g.m1 = (Rat(3) * phi - Rat(1)) / Rat(2) * b + c - Rat(1);
    g.m2 = phi * (b + c) - Rat(1);
    return g;
}

}  // namespace

FeasibilityVerdict check_system(const Rat& phi, const Rat& resolution) {
    if (!(resolution > Rat(0))) throw std::invalid_argument("resolution must be positive");
    FeasibilityVerdict verdict;
    verdict.resolution = resolution.to_double();

    long long steps = resolution.den / resolution.num;  // 1/res rounded down
    if (steps < 1) steps = 1;
    if (steps > 4000) steps = 4000;

    bool have = false;
    Rat best_margin;
    Rat bx, by;
    for (long long i = 0; i <= steps; ++i) {
        Rat x(i, steps);
        for (long long j = 0; i + j <= steps; ++j) {
            Rat y(j, steps);
            GridPoint g = margins_at(x, y, phi);
            Rat mm = g.m1 < g.m2 ? g.m1 : g.m2;
            if (!have || best_margin < mm) {
                have = true;
                best_margin = mm;
                bx = x;
                by = y;
            }
        }
    }

    verdict.max_min_margin = best_margin.to_double();
    if (best_margin > Rat(0)) {
        GridPoint g = margins_at(bx, by, phi);
        FeasiblePoint p;
        p.x = bx;
        p.y = by;
        p.z = Rat(1) - bx - by;
        p.a = Rat(0);
        p.b = g.b;
        p.c = g.c;
        // exact re-verification of every constraint
        Rat S = p.x * p.x + Rat(2) * p.x * p.y + Rat(2) * p.y * p.z;
        bool ok = p.a + (Rat(3) * phi - Rat(1)) / Rat(2) * p.b + p.c > Rat(1) &&
                  p.a + phi * (p.b + p.c) > Rat(1) && p.x + p.y + p.z == Rat(1) &&
                  S >= p.a + p.b + p.c && Rat(2) * p.y * p.z >= p.b && p.x >= Rat(0) &&
                  p.y >= Rat(0) && p.z >= Rat(0) && p.a >= Rat(0) && p.b >= Rat(0) && p.c >= Rat(0);
        if (!ok) throw std::runtime_error("feasible point failed exact re-verification");
        verdict.feasible = true;
        verdict.point = p;
    }
    return verdict;
}

Hypergraph parse_hypergraph(const std::string& text) {
    Hypergraph h;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::vector<int> edge;
        int v;
        while (ls >> v) edge.push_back(v);
        if (edge.empty()) continue;
        std::sort(edge.begin(), edge.end());
        if (std::adjacent_find(edge.begin(), edge.end()) != edge.end())
            throw std::invalid_argument("edge with repeated vertex");
        if (h.k == 0) h.k = int(edge.size());
        if (int(edge.size()) != h.k) throw std::invalid_argument("edges must share one size");
        for (int u : edge) h.n = std::max(h.n, u + 1);
        h.edges.push_back(edge);
    }
    return h;
}

std::string to_text(const Hypergraph& h) {
    std::ostringstream os;
    for (const auto& e : h.edges) {
        for (size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
        os << "\n";
    }
    return os.str();
}

uint64_t count_simplices(const Hypergraph& h) {
    if (h.n > 63) throw std::invalid_argument("simplex counting limited to n <= 63");
    std::vector<uint64_t> edge_masks;
    for (const auto& e : h.edges) {
        uint64_t m = 0;
        for (int v : e) m |= uint64_t(1) << v;
        edge_masks.push_back(m);
    }
    std::sort(edge_masks.begin(), edge_masks.end());
    auto has_edge = [&](uint64_t m) {
        return std::binary_search(edge_masks.begin(), edge_masks.end(), m);
    };

    uint64_t count = 0;
    // enumerate (k+1)-subsets and check that all their k-subsets are edges
    std::vector<int> stack;
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == h.k + 1) {
            uint64_t full = 0;
            for (int v : stack) full |= uint64_t(1) << v;
            for (int v : stack)
                if (!has_edge(full & ~(uint64_t(1) << v))) return;
            count++;
            return;
        }
        for (int v = start; v < h.n; ++v) {
            stack.push_back(v);
            rec(v + 1, depth + 1);
            stack.pop_back();
        }
    };
    rec(0, 0);
    return count;
}

namespace {

unsigned long long factorial(int x) {
    unsigned long long f = 1;
    for (int i = 2; i <= x; ++i) f *= (unsigned long long)(i);
    return f;
}

}  // namespace

KkReport kruskal_katona_check(const Hypergraph& h) {
    KkReport rep;
    rep.simplices = count_simplices(h);
    // ((k+1)!)^k * s^k <= (k! * e)^{k+1} in exact integers
    const int k = h.k;
    unsigned __int128 lhs = 1, rhs = 1;
    unsigned long long fk1 = factorial(k + 1);
    unsigned long long fke = factorial(k) * (unsigned long long)(h.edges.size());
    for (int i = 0; i < k; ++i) lhs *= fk1 * rep.simplices;
    for (int i = 0; i < k + 1; ++i) rhs *= fke;
    rep.holds = lhs <= rhs;
    return rep;
}

namespace {

// Kuhn's augmenting-path matching on the edge/(k-1)-subset incidence graph.
struct Matching {
    int left_size;                           // edges of h
    std::vector<std::vector<int>> adj;       // left -> right slots
    std::vector<int> match_right;            // right slot -> left or -1
    std::vector<char> visited;

    bool augment(int u) {
        for (int r : adj[u]) {
            if (visited[r]) continue;
            visited[r] = 1;
            if (match_right[r] < 0 || augment(match_right[r])) {
                match_right[r] = u;
                return true;
            }
        }
        return false;
    }
};

}  // namespace

Orientation orient_hypergraph(const Hypergraph& h) {
    const int k = h.k;
    if (k < 2) throw std::invalid_argument("orientation requires k >= 2");
    const unsigned long long e = h.edges.size();

    // L = smallest integer with L^k * (k!)^{k-1} >= ((k-1)!)^k * e
    unsigned __int128 rhs = 1;
    for (int i = 0; i < k; ++i) rhs *= factorial(k - 1);
    rhs *= e;
    int L = 0;
    for (;;) {
        ++L;
        unsigned __int128 lhs = 1;
        for (int i = 0; i < k; ++i) lhs *= (unsigned long long)(L);
        for (int i = 0; i < k - 1; ++i) lhs *= factorial(k);
        if (lhs >= rhs) break;
    }

    Orientation o;
    o.codegree_bound = L;
    if (h.edges.empty()) return o;

    // right side: L copies of every (k-1)-subset of some edge
    std::vector<std::vector<int>> subsets;  // distinct (k-1)-subsets
    std::vector<std::vector<int>> subset_of_edge(h.edges.size());
    {
        std::vector<std::vector<int>> seen;
        auto subset_id = [&](std::vector<int> s) {
            auto it = std::find(seen.begin(), seen.end(), s);
            if (it != seen.end()) return int(it - seen.begin());
            seen.push_back(s);
            return int(seen.size()) - 1;
        };
        for (size_t ei = 0; ei < h.edges.size(); ++ei)
            for (int drop = 0; drop < k; ++drop) {
                std::vector<int> s = h.edges[ei];
                s.erase(s.begin() + drop);
                subset_of_edge[ei].push_back(subset_id(s));
            }
        subsets = seen;
    }

    Matching m;
    m.left_size = int(h.edges.size());
    m.adj.resize(h.edges.size());
    for (size_t ei = 0; ei < h.edges.size(); ++ei)
        for (int sid : subset_of_edge[ei])
            for (int copy = 0; copy < L; ++copy) m.adj[ei].push_back(sid * L + copy);
    m.match_right.assign(subsets.size() * L, -1);
    for (int u = 0; u < m.left_size; ++u) {
        m.visited.assign(subsets.size() * L, 0);
        if (!m.augment(u))
            throw std::runtime_error("orientation matching failed; bound violated by a bug");
    }

    // edge matched to subset S means: head = the vertex of the edge outside S
    std::vector<int> edge_subset(h.edges.size(), -1);
    for (size_t r = 0; r < m.match_right.size(); ++r)
        if (m.match_right[r] >= 0) edge_subset[m.match_right[r]] = int(r) / L;
    o.heads.resize(h.edges.size());
    for (size_t ei = 0; ei < h.edges.size(); ++ei) {
        const std::vector<int>& s = subsets[edge_subset[ei]];
        for (int v : h.edges[ei])
            if (std::find(s.begin(), s.end(), v) == s.end()) o.heads[ei] = v;
    }
    return o;
}

bool orientation_respects_bound(const Hypergraph& h, const Orientation& o) {
    if (o.heads.size() != h.edges.size()) return false;
    // codegree audit: count, per (k-1)-subset, edges through it pointed outside
    std::vector<std::pair<std::vector<int>, int>> counts;
    for (size_t ei = 0; ei < h.edges.size(); ++ei) {
        int head = o.heads[ei];
        if (std::find(h.edges[ei].begin(), h.edges[ei].end(), head) == h.edges[ei].end()) return false;
        std::vector<int> s;
        for (int v : h.edges[ei])
            if (v != head) s.push_back(v);
        bool found = false;
        for (auto& [key, c] : counts)
            if (key == s) { c++; found = true; break; }
        if (!found) counts.push_back({s, 1});
    }
    for (const auto& [key, c] : counts)
        if (c > o.codegree_bound) return false;
    return true;
}

}  // namespace pdgsat
