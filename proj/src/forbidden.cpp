#include "pdgsat/forbidden.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pdgsat {

Pdg make_Tk(int k) {
    if (k < 2) throw std::invalid_argument("T_k requires k >= 2");
    if (k + 1 > kMaxVertices) throw std::invalid_argument("T_k vertex count out of range");
    Pdg g = make_pdg(k + 1, k);
    uint16_t core = uint16_t((1 << (k - 2)) - 1);  // vertices 0..k-3
    int a = k - 2, b = k - 1, c = k;
    add_edge(g, make_edge(k, uint16_t(core | 1 << a | 1 << b)));
    add_edge(g, make_edge(k, uint16_t(core | 1 << a | 1 << c), c));
    add_edge(g, make_edge(k, uint16_t(core | 1 << b | 1 << c)));
    return g;
}

namespace {

std::string edge_text(const Edge& e) {
    std::ostringstream os;
    bool first = true;
    for (int v = 0; v < kMaxVertices; ++v)
        if (e.vertices >> v & 1) {
            if (!first) os << ' ';
            first = false;
            os << v;
        }
    if (e.directed()) os << '>' << int(e.head);
    return os.str();
}

struct Candidate {
    Pdg g;
    std::string trace;
};

// Enumerates all nonincreasing part lists summing to j with at most max_parts
// parts. Used to pick, up to the symmetry of S, how many extension edges
// exclude each S-vertex.
void partitions(int j, int max_parts, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (j == 0) { out.push_back(cur); return; }
    if (max_parts == 0) return;
    for (int p = std::min(j, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions(j - p, max_parts - 1, p, cur, out);
        cur.pop_back();
    }
}

void subsets_of(uint16_t pool, int size, uint16_t cur, int min_bit, std::vector<uint16_t>& out) {
    if (size == 0) { out.push_back(cur); return; }
    for (int b = min_bit; b < kMaxVertices; ++b)
        if (pool >> b & 1) subsets_of(pool, size - 1, uint16_t(cur | 1 << b), b + 1, out);
}

std::vector<uint16_t> k_subsets(uint16_t pool, int size) {
    std::vector<uint16_t> out;
    uint16_t cur = 0;
    subsets_of(pool, size, cur, 0, out);
    return out;
}

void emit_closures(const Pdg& base, uint16_t t_mask, uint16_t s_mask, int n_base, int k,
                   bool directed_init, const std::string& prefix, std::vector<Candidate>& out) {
    // Closure (a): a new undirected edge inside T. After a directed start the
    // closure edge must keep contact with the unpointed initial vertices.
    for (uint16_t m : k_subsets(t_mask, k)) {
        if (base.edge_on(m)) continue;
        if (directed_init && (m & s_mask) == 0) continue;
        Candidate c;
        c.g = base;
        Edge e = make_edge(k, m);
        add_edge(c.g, e);
        c.trace = prefix + "; close=a " + edge_text(e);
        out.push_back(c);
    }
    // Closure (b): an edge directed at a fresh vertex, its other k-1 vertices
    // in T with at least one outside S.
    int w0 = n_base;
    if (w0 + 1 <= kMaxVertices) {
        for (uint16_t b : k_subsets(t_mask, k - 1)) {
            if ((b & ~s_mask) == 0) continue;
            Candidate c;
            c.g = base;
            c.g.n = n_base + 1;
            Edge e = make_edge(k, uint16_t(b | 1 << w0), w0);
            add_edge(c.g, e);
            c.trace = prefix + "; close=b " + edge_text(e);
            out.push_back(c);
        }
    }
}

std::vector<Candidate> generate_candidates(int k) {
    std::vector<Candidate> out;

    // Undirected initialization: e0 on S = {0..k-1}. Extension edges each
    // exclude one S-vertex; up to relabeling S only the multiset of excluded
    // vertices matters, so excluded vertices are assigned 0,1,... with the
    // multiplicities of a partition of j.
    for (int j = 0; j <= k; ++j) {
        std::vector<std::vector<int>> parts;
        std::vector<int> cur;
        partitions(j, k, j, cur, parts);
        for (const auto& part : parts) {
            // Extension edges must pairwise share an unpointed vertex. Two
            // bases S\{x}, S\{y} meet unless k = 2 and x != y, so this only
            // binds at k = 2, where all extensions share the one base vertex.
            if (k == 2 && part.size() > 1) continue;
            uint16_t s_mask = uint16_t((1 << k) - 1);
            Pdg base = make_pdg(k + j, k);
            add_edge(base, make_edge(k, s_mask));
            std::ostringstream trace;
            trace << "init=u " << edge_text(base.edges[0]) << "; ext=";
            int w = k;
            bool first = true;
            for (size_t cls = 0; cls < part.size(); ++cls) {
                uint16_t rest = uint16_t(s_mask & ~(1 << cls));
                for (int rep = 0; rep < part[cls]; ++rep, ++w) {
                    Edge e = make_edge(k, uint16_t(rest | 1 << w), w);
                    add_edge(base, e);
                    trace << (first ? "" : ", ") << edge_text(e);
                    first = false;
                }
            }
            if (first) trace << "-";
            uint16_t t_mask = uint16_t((1 << (k + j)) - 1);
            emit_closures(base, t_mask, s_mask, k + j, k, false, trace.str(), out);
        }
    }

    // Directed initialization: e0 = S + {v0} pointed at v0 = k-1, with
    // S = {0..k-2}. Every extension edge must use all of S, so only the
    // number of extensions matters.
    for (int j = 0; j <= k; ++j) {
        uint16_t s_mask = uint16_t((1 << (k - 1)) - 1);
        Pdg base = make_pdg(k + j, k);
        add_edge(base, make_edge(k, uint16_t(s_mask | 1 << (k - 1)), k - 1));
        std::ostringstream trace;
        trace << "init=d " << edge_text(base.edges[0]) << "; ext=";
        bool first = true;
        for (int i = 0; i < j; ++i) {
            int w = k + i;
            Edge e = make_edge(k, uint16_t(s_mask | 1 << w), w);
            add_edge(base, e);
            trace << (first ? "" : ", ") << edge_text(e);
            first = false;
        }
        if (first) trace << "-";
        uint16_t t_mask = uint16_t((1 << (k + j)) - 1);
        emit_closures(base, t_mask, s_mask, k + j, k, true, trace.str(), out);
    }

    return out;
}

}  // namespace

namespace {

// Direction-exact embedding: H sits inside G after edge deletions alone, with
// no forgotten directions.
bool contains_exact(const Pdg& host, const Pdg& pattern) {
    if (pattern.n > host.n || pattern.edges.size() > host.edges.size()) return false;
    // reuse the generic matcher by encoding exactness: every pattern edge
    // must find a host edge with an identical direction state
    std::vector<int> assign(pattern.n, -1);
    uint16_t used = 0;
    std::function<bool(size_t)> rec = [&](size_t depth) -> bool {
        if (depth == size_t(pattern.n)) return true;
        for (int hv = 0; hv < host.n; ++hv) {
            if (used >> hv & 1) continue;
            assign[depth] = hv;
            used |= uint16_t(1) << hv;
            bool ok = true;
            for (const Edge& pe : pattern.edges) {
                if (!(pe.vertices >> depth & 1)) continue;
                uint16_t image = 0;
                bool complete = true;
                for (int u = 0; u < pattern.n && complete; ++u) {
                    if (!(pe.vertices >> u & 1)) continue;
                    if (assign[u] < 0) complete = false;
                    else image |= uint16_t(1) << assign[u];
                }
                if (!complete) continue;
                const Edge* he = host.edge_on(image);
                if (!he) { ok = false; break; }
                if (pe.directed() != he->directed()) { ok = false; break; }
                if (pe.directed() && he->head != assign[pe.head]) { ok = false; break; }
            }
            if (ok && rec(depth + 1)) return true;
            assign[depth] = -1;
            used &= ~(uint16_t(1) << hv);
        }
        return false;
    };
    return rec(0);
}

// All canonical forms reachable from g by forgetting a nonempty set of edge
// directions (spanning: same vertices, same edge count).
std::set<CanonicalForm> forgotten_forms(const Pdg& g) {
    std::set<CanonicalForm> out;
    std::vector<size_t> directed_idx;
    for (size_t i = 0; i < g.edges.size(); ++i)
        if (g.edges[i].directed()) directed_idx.push_back(i);
    for (uint32_t subset = 1; subset < (uint32_t(1) << directed_idx.size()); ++subset) {
        Pdg forgotten = g;
        for (size_t b = 0; b < directed_idx.size(); ++b)
            if (subset >> b & 1) forgotten.edges[directed_idx[b]].head = kNoHead;
        out.insert(canonical_form(forgotten));
    }
    return out;
}

}  // namespace

ForbiddenFamily generate_Fk(int k) {
    if (k < 2 || k > 6) throw std::invalid_argument("F_k generation supports 2 <= k <= 6");

    std::map<CanonicalForm, std::string> classes;
    for (Candidate& c : generate_candidates(k)) {
        CanonicalForm form = canonical_form(c.g);
        classes.emplace(form, c.trace);  // first trace wins; any witness works
    }

    // Non-redundancy: drop every class that contains a different producible
    // class. For k = 2 any subgraph embedding counts; for k >= 3 redundancy
    // means either a forgotten-directions copy (same edge set) or a
    // direction-exact sub-copy (deleted edges), matching the published
    // families, which keep members that contain one another only through
    // combined forget-and-delete embeddings.
    struct Entry {
        CanonicalForm form;
        Pdg rep;
        std::string trace;
        int ed;
        std::set<CanonicalForm> forgotten;
        bool forgotten_ready = false;
    };
    std::vector<Entry> entries;
    for (const auto& [form, trace] : classes) {
        Pdg rep = form.to_pdg();
        int ed = rep.directed_count();
        entries.push_back({form, std::move(rep), trace, ed, {}, false});
    }

    // Forgetting directions never changes the underlying edge sets, so only
    // entries whose fully-forgotten graphs are isomorphic can be related by
    // forgetting. Forgotten-form sets are computed lazily and only inside
    // those groups.
    std::vector<char> redundant(entries.size(), 0);
    if (k >= 3) {
        std::map<CanonicalForm, std::vector<size_t>> shape_groups;
        for (size_t i = 0; i < entries.size(); ++i) {
            Pdg bare = entries[i].rep;
            for (Edge& e : bare.edges) e.head = kNoHead;
            shape_groups[canonical_form(bare)].push_back(i);
        }
        auto forget_related = [&](size_t i, size_t j) {
            if (entries[i].ed <= entries[j].ed) return false;
            if (!entries[i].forgotten_ready) {
                entries[i].forgotten = forgotten_forms(entries[i].rep);
                entries[i].forgotten_ready = true;
            }
            return entries[i].forgotten.count(entries[j].form) > 0;
        };
        for (const auto& [shape, group] : shape_groups) {
            if (group.size() < 2) continue;
            for (size_t i : group)
                for (size_t j : group)
                    if (i != j && !redundant[i] && forget_related(i, j)) redundant[i] = 1;
        }
    }

    ForbiddenFamily fam;
    fam.k = k;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (redundant[i]) continue;
        for (size_t j = 0; j < entries.size(); ++j) {
            if (i == j) continue;
            if (entries[j].rep.edges.size() > entries[i].rep.edges.size()) continue;
            if (entries[j].rep.n > entries[i].rep.n) continue;
            if (entries[j].ed > entries[i].ed) continue;
            if (k == 2) {
                if (contains_subgraph(entries[i].rep, entries[j].rep)) {
                    redundant[i] = 1;
                    break;
                }
            } else if (contains_exact(entries[i].rep, entries[j].rep)) {
                redundant[i] = 1;
                break;
            }
        }
    }
    for (size_t i = 0; i < entries.size(); ++i) {
        if (redundant[i]) continue;
        fam.members.push_back(entries[i].rep);
        fam.traces.push_back(entries[i].trace);
    }
    return fam;
}

ForbiddenFamily single_family(const Pdg& pattern) {
    ForbiddenFamily fam;
    fam.k = pattern.k;
    fam.members.push_back(pattern);
    fam.traces.push_back("");
    return fam;
}

bool is_family_free(const Pdg& g, const ForbiddenFamily& fam) {
    if (g.k != fam.k) throw std::invalid_argument("uniformity mismatch");
    for (const Pdg& m : fam.members)
        if (m.n <= g.n && m.edges.size() <= g.edges.size() && contains_subgraph(g, m))
            return false;
    return true;
}

}  // namespace pdgsat
