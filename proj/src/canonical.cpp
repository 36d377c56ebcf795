#include "pdgsat/canonical.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace pdgsat {

namespace {

constexpr int kCanonicalMaxN = 13;

inline uint64_t mix64(uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

inline uint64_t combine(uint64_t seed, uint64_t v) {
    return mix64(seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

struct DegreeProfile {
    int ud = 0;   // undirected edges through v
    int out = 0;  // directed edges through v pointed elsewhere
    int hin = 0;  // directed edges pointed at v
};

std::vector<DegreeProfile> degree_profiles(const Pdg& g) {
    std::vector<DegreeProfile> prof(g.n);
    for (const Edge& e : g.edges)
        for (int v = 0; v < g.n; ++v) {
            if (!(e.vertices >> v & 1)) continue;
            if (!e.directed()) prof[v].ud++;
            else if (e.head == v) prof[v].hin++;
            else prof[v].out++;
        }
    return prof;
}

}  // namespace

std::vector<uint64_t> vertex_signatures(const Pdg& g) {
    auto prof = degree_profiles(g);
    std::vector<uint64_t> base(g.n);
    for (int v = 0; v < g.n; ++v) {
        uint64_t h = 0x243f6a8885a308d3ULL;
        h = combine(h, prof[v].ud);
        h = combine(h, prof[v].out);
        h = combine(h, prof[v].hin);
        base[v] = h;
    }
    // One aggregation round: fold in, per incident edge, the vertex's role and
    // the sorted base signatures of the edge's other vertices. Sums keep the
    // result order-independent.
    std::vector<uint64_t> sig(g.n);
    for (int v = 0; v < g.n; ++v) sig[v] = base[v];
    std::vector<uint64_t> others;
    for (const Edge& e : g.edges) {
        for (int v = 0; v < g.n; ++v) {
            if (!(e.vertices >> v & 1)) continue;
            others.clear();
            for (int u = 0; u < g.n; ++u)
                if (u != v && (e.vertices >> u & 1)) others.push_back(base[u]);
            std::sort(others.begin(), others.end());
            int role = !e.directed() ? 0 : (e.head == v ? 2 : 1);
            uint64_t h = combine(0x452821e638d01377ULL, role);
            for (uint64_t o : others) h = combine(h, o);
            if (e.directed() && e.head != v) h = combine(h, base[e.head]);
            sig[v] += h;  // commutative accumulation across edges
        }
    }
    for (int v = 0; v < g.n; ++v) sig[v] = mix64(sig[v]);
    return sig;
}

uint64_t vertex_signature(const Pdg& g, int v) {
    if (v < 0 || v >= g.n) throw std::invalid_argument("vertex out of range");
    return vertex_signatures(g)[v];
}

uint64_t graph_hash(const Pdg& g) {
    auto sig = vertex_signatures(g);
    std::sort(sig.begin(), sig.end());
    uint64_t h = 0x13198a2e03707344ULL;
    h = combine(h, g.n);
    h = combine(h, g.k);
    h = combine(h, g.undirected_count());
    h = combine(h, g.directed_count());
    for (uint64_t s : sig) h = combine(h, s);
    return h;
}

Pdg relabel(const Pdg& g, const std::vector<int>& perm) {
    Pdg h = make_pdg(g.n, g.k);
    for (const Edge& e : g.edges) {
        Edge ne;
        for (int v = 0; v < g.n; ++v)
            if (e.vertices >> v & 1) ne.vertices |= uint16_t(1) << perm[v];
        if (e.directed()) ne.head = static_cast<uint8_t>(perm[e.head]);
        add_edge(h, ne);
    }
    return h;
}

namespace {

// Branch-and-bound search for the minimal relabeling. Vertices get new labels
// 0,1,2,... in DFS order. Edges become fully placed in nondecreasing packed
// code order (a new edge always contains the newest, largest label), so the
// candidate's sorted edge list grows append-only and can be compared against
// the incumbent prefix as it grows.
struct CanonSearch {
    const Pdg* g;
    std::vector<std::vector<int>> edge_verts;  // per edge, member vertices
    std::vector<int> new_label;                // old vertex -> new label, -1 unset
    std::vector<int> placed;                   // position -> old vertex
    std::vector<int> pending;                  // per edge, count of unplaced vertices
    std::vector<uint32_t> best;                // incumbent sorted edge codes
    bool have_best = false;
    std::vector<int> rank;                     // signature rank, branch ordering only

    std::vector<uint32_t> cur;                 // placed edge codes so far
    int cmp = 0;                               // cur vs best prefix: -1 lt, 0 eq (while eq)
    long long generation = 0;                  // bumped whenever best is replaced

    uint32_t edge_code_placed(int ei) const {
        const Edge& e = g->edges[ei];
        uint32_t mask = 0;
        for (int v : edge_verts[ei]) mask |= uint32_t(1) << new_label[v];
        uint32_t head = e.directed() ? uint32_t(new_label[e.head]) + 1 : 0;
        return (mask << 5) | head;
    }

    void run() {
        dfs(0);
    }

    void dfs(size_t pos) {
        if (pos == size_t(g->n)) {
            if (!have_best || cmp < 0) {
                best = cur;
                have_best = true;
                ++generation;
            }
            return;
        }
        // Candidate order: signature rank, then index. Any order is sound.
        std::vector<int> cands;
        for (int v = 0; v < g->n; ++v)
            if (new_label[v] < 0) cands.push_back(v);
        std::sort(cands.begin(), cands.end(), [&](int a, int b) {
            if (rank[a] != rank[b]) return rank[a] < rank[b];
            return a < b;
        });
        for (int v : cands) {
            new_label[v] = static_cast<int>(pos);
            size_t cur_size = cur.size();
            int saved_cmp = cmp;
            long long saved_gen = generation;
            std::vector<int> completed;
            for (size_t ei = 0; ei < g->edges.size(); ++ei) {
                if (!(g->edges[ei].vertices >> v & 1)) continue;
                if (--pending[ei] == 0) completed.push_back(static_cast<int>(ei));
            }
            bool pruned = false;
            if (!completed.empty()) {
                std::vector<uint32_t> codes;
                codes.reserve(completed.size());
                for (int ei : completed) codes.push_back(edge_code_placed(ei));
                std::sort(codes.begin(), codes.end());
                for (uint32_t c : codes) {
                    if (have_best && cmp == 0) {
                        if (cur.size() >= best.size() || c > best[cur.size()]) { pruned = true; break; }
                        if (c < best[cur.size()]) cmp = -1;
                    }
                    cur.push_back(c);
                }
            }
            if (!pruned && have_best && cmp == 0 && cur.size() < best.size()) {
                // Every future edge contains a vertex labeled > pos, so its
                // code is at least (1 << (pos+1+5)). If the incumbent's next
                // edge is smaller, this branch can no longer match it.
                uint32_t floor_code = uint32_t(1) << (pos + 1 + 5);
                if (best[cur.size()] < floor_code) pruned = true;
            }
            if (!pruned) dfs(pos + 1);
            cur.resize(cur_size);
            // A replacement inside this subtree extends the current prefix,
            // so relative to the new incumbent the prefix compares equal.
            cmp = generation != saved_gen ? 0 : saved_cmp;
            for (size_t ei = 0; ei < g->edges.size(); ++ei)
                if (g->edges[ei].vertices >> v & 1) pending[ei]++;
            new_label[v] = -1;
        }
    }
};

}  // namespace

CanonicalForm canonical_form(const Pdg& g) {
    if (g.n > kCanonicalMaxN)
        throw std::invalid_argument("canonical form supports at most 13 vertices");
    CanonSearch s;
    s.g = &g;
    s.edge_verts.resize(g.edges.size());
    s.pending.resize(g.edges.size());
    for (size_t ei = 0; ei < g.edges.size(); ++ei) {
        for (int v = 0; v < g.n; ++v)
            if (g.edges[ei].vertices >> v & 1) s.edge_verts[ei].push_back(v);
        s.pending[ei] = static_cast<int>(s.edge_verts[ei].size());
    }
    s.new_label.assign(g.n, -1);

    auto sig = vertex_signatures(g);
    std::vector<uint64_t> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    s.rank.resize(g.n);
    for (int v = 0; v < g.n; ++v)
        s.rank[v] = int(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());

    s.run();

    CanonicalForm form;
    form.words.reserve(3 + s.best.size());
    form.words.push_back(uint32_t(g.n));
    form.words.push_back(uint32_t(g.k));
    form.words.push_back(uint32_t(g.edges.size()));
    for (uint32_t c : s.best) form.words.push_back(c);
    return form;
}

Pdg CanonicalForm::to_pdg() const {
    if (words.size() < 3) throw std::invalid_argument("empty canonical form");
    Pdg g = make_pdg(int(words[0]), int(words[1]));
    for (size_t i = 3; i < words.size(); ++i) {
        Edge e;
        e.vertices = uint16_t(words[i] >> 5);
        uint32_t h = words[i] & 31u;
        e.head = h == 0 ? kNoHead : uint8_t(h - 1);
        add_edge(g, e);
    }
    return g;
}

std::string CanonicalForm::to_text() const { return pdgsat::to_text(to_pdg()); }

bool is_isomorphic(const Pdg& a, const Pdg& b) {
    if (a.n != b.n || a.k != b.k) throw std::invalid_argument("parameter mismatch");
    if (a.edges.size() != b.edges.size()) return false;
    if (a.undirected_count() != b.undirected_count()) return false;
    return canonical_form(a) == canonical_form(b);
}

}  // namespace pdgsat
