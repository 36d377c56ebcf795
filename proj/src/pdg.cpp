#include "pdgsat/pdg.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace pdgsat {

int Pdg::undirected_count() const {
    int c = 0;
    for (const Edge& e : edges) c += !e.directed();
    return c;
}

int Pdg::directed_count() const {
    int c = 0;
    for (const Edge& e : edges) c += e.directed();
    return c;
}

const Edge* Pdg::edge_on(uint16_t mask) const {
    for (const Edge& e : edges)
        if (e.vertices == mask) return &e;
    return nullptr;
}

Edge make_edge(int k, uint16_t vertices, std::optional<int> head) {
    if (std::popcount(vertices) != k)
        throw std::invalid_argument("edge must use exactly k distinct vertices");
    Edge e;
    e.vertices = vertices;
    if (head) {
        if (*head < 0 || *head >= kMaxVertices || !(vertices >> *head & 1))
            throw std::invalid_argument("head must be one of the edge's vertices");
        e.head = static_cast<uint8_t>(*head);
    }
    return e;
}

Edge make_edge(int k, const std::vector<int>& vertices, std::optional<int> head) {
    uint16_t mask = 0;
    for (int v : vertices) {
        if (v < 0 || v >= kMaxVertices) throw std::invalid_argument("vertex index out of range");
        mask |= uint16_t(1) << v;
    }
    if (std::popcount(mask) != static_cast<int>(vertices.size()))
        throw std::invalid_argument("edge vertices must be distinct");
    return make_edge(k, mask, head);
}

Pdg make_pdg(int n, int k) {
    if (n < 0 || n > kMaxVertices) throw std::invalid_argument("vertex count out of range");
    if (k < 1 || k > kMaxVertices) throw std::invalid_argument("uniformity out of range");
    Pdg g;
    g.n = n;
    g.k = k;
    return g;
}

void add_edge(Pdg& g, const Edge& e) {
    if (std::popcount(e.vertices) != g.k)
        throw std::invalid_argument("edge uniformity does not match graph");
    if (e.vertices >> g.n)
        throw std::invalid_argument("edge uses vertices outside the graph");
    auto it = std::lower_bound(g.edges.begin(), g.edges.end(), e);
    if (it != g.edges.end() && it->vertices == e.vertices)
        throw std::invalid_argument("a k-subset may support at most one edge");
    // Sorted by code = (mask, head); equal masks are adjacent in that order.
    if (it != g.edges.begin() && std::prev(it)->vertices == e.vertices)
        throw std::invalid_argument("a k-subset may support at most one edge");
    g.edges.insert(it, e);
}

Pdg with_edge(const Pdg& g, const Edge& e) {
    Pdg h = g;
    add_edge(h, e);
    return h;
}

Densities densities(const Pdg& g) {
    long long slots = g.slot_count();
    if (slots == 0) return {Rat(0), Rat(0)};
    return {Rat(g.undirected_count(), slots), Rat(g.directed_count(), slots)};
}

namespace {

struct EmbedState {
    const Pdg* host;
    const Pdg* pattern;
    std::vector<int> assign;      // pattern vertex -> host vertex, -1 unset
    uint16_t used = 0;            // host vertices taken
    std::vector<int> order;       // pattern vertices, most constrained first
    // degree profiles for pruning
    std::vector<int> pat_any, pat_head, host_any, host_head;
};

bool edge_compatible(const Pdg& host, uint16_t image_mask, const Edge& pat_edge, const std::vector<int>& assign) {
    const Edge* he = host.edge_on(image_mask);
    if (!he) return false;
    if (!pat_edge.directed()) return true;  // host direction may be forgotten
    return he->directed() && he->head == assign[pat_edge.head];
}

bool extend(EmbedState& st, size_t depth) {
    const Pdg& host = *st.host;
    const Pdg& pat = *st.pattern;
    if (depth == st.order.size()) return true;
    int pv = st.order[depth];
    for (int hv = 0; hv < host.n; ++hv) {
        if (st.used >> hv & 1) continue;
        if (st.host_any[hv] < st.pat_any[pv] || st.host_head[hv] < st.pat_head[pv]) continue;
        st.assign[pv] = hv;
        st.used |= uint16_t(1) << hv;
        bool ok = true;
        for (const Edge& pe : pat.edges) {
            if (!(pe.vertices >> pv & 1)) continue;
            uint16_t image = 0;
            bool complete = true;
            for (int u = 0; u < pat.n && complete; ++u) {
                if (!(pe.vertices >> u & 1)) continue;
                if (st.assign[u] < 0) complete = false;
                else image |= uint16_t(1) << st.assign[u];
            }
            if (complete && !edge_compatible(host, image, pe, st.assign)) { ok = false; break; }
        }
        if (ok && extend(st, depth + 1)) return true;
        st.assign[pv] = -1;
        st.used &= ~(uint16_t(1) << hv);
    }
    return false;
}

}  // namespace

bool contains_subgraph(const Pdg& host, const Pdg& pattern, std::vector<int>* map) {
    if (host.k != pattern.k) throw std::invalid_argument("uniformity mismatch");
    if (pattern.n > host.n) return false;
    if (pattern.edges.size() > host.edges.size()) return false;

    EmbedState st;
    st.host = &host;
    st.pattern = &pattern;
    st.assign.assign(pattern.n, -1);
    st.pat_any.assign(pattern.n, 0);
    st.pat_head.assign(pattern.n, 0);
    st.host_any.assign(host.n, 0);
    st.host_head.assign(host.n, 0);
    for (const Edge& e : pattern.edges)
        for (int v = 0; v < pattern.n; ++v)
            if (e.vertices >> v & 1) {
                st.pat_any[v]++;
                if (e.directed() && e.head == v) st.pat_head[v]++;
            }
    for (const Edge& e : host.edges)
        for (int v = 0; v < host.n; ++v)
            if (e.vertices >> v & 1) {
                st.host_any[v]++;
                if (e.directed() && e.head == v) st.host_head[v]++;
            }
    st.order.resize(pattern.n);
    for (int v = 0; v < pattern.n; ++v) st.order[v] = v;
    std::sort(st.order.begin(), st.order.end(), [&](int a, int b) {
        if (st.pat_any[a] != st.pat_any[b]) return st.pat_any[a] > st.pat_any[b];
        return a < b;
    });

    if (!extend(st, 0)) return false;
    if (map) *map = st.assign;
    return true;
}

Pdg link(const Pdg& g, int v) {
    if (v < 0 || v >= g.n) throw std::invalid_argument("link vertex out of range");
    if (g.k < 2) throw std::invalid_argument("link requires k >= 2");
    Pdg h = make_pdg(g.n - 1, g.k - 1);
    for (const Edge& e : g.edges) {
        if (!(e.vertices >> v & 1)) continue;
        uint16_t rest = e.vertices & ~(uint16_t(1) << v);
        // shift indices above v down by one
        uint16_t low = rest & ((uint16_t(1) << v) - 1);
        uint16_t mask = low | uint16_t((rest >> (v + 1)) << v);
        Edge ne;
        ne.vertices = mask;
        if (e.directed() && e.head != v) ne.head = e.head > v ? e.head - 1 : e.head;
        add_edge(h, ne);
    }
    return h;
}

LinkDecomposition link_decomposition(const Pdg& g, int v) {
    if (g.k != 3) throw std::invalid_argument("link decomposition is defined for k = 3");
    if (v < 0 || v >= g.n) throw std::invalid_argument("vertex out of range");
    long long denom = binomial(g.n - 1, 2);
    int a = 0, b = 0, c = 0;
    for (const Edge& e : g.edges) {
        if (!(e.vertices >> v & 1)) continue;
        if (!e.directed()) a++;
        else if (e.head == v) c++;
        else b++;
    }
    return {Rat(a, denom), Rat(b, denom), Rat(c, denom)};
}

Pdg square_graph(const Pdg& g) {
    if (g.k != 2) throw std::invalid_argument("square graph requires k = 2");
    for (const Edge& e : g.edges)
        if (e.directed()) throw std::invalid_argument("square graph requires an undirected graph");
    std::vector<uint16_t> adj(g.n, 0);
    for (const Edge& e : g.edges) {
        int bits[2], t = 0;
        for (int v = 0; v < g.n; ++v)
            if (e.vertices >> v & 1) bits[t++] = v;
        adj[bits[0]] |= uint16_t(1) << bits[1];
        adj[bits[1]] |= uint16_t(1) << bits[0];
    }
    Pdg sq = make_pdg(g.n, 2);
    for (int x = 0; x < g.n; ++x)
        for (int y = x + 1; y < g.n; ++y)
            if (adj[x] & adj[y]) {
                Edge e;
                e.vertices = uint16_t((1 << x) | (1 << y));
                add_edge(sq, e);
            }
    return sq;
}

int non_triangular_edges(const Pdg& g) {
    if (g.k != 2) throw std::invalid_argument("triangular edge count requires k = 2");
    std::vector<uint16_t> adj(g.n, 0);
    for (const Edge& e : g.edges) {
        int bits[2], t = 0;
        for (int v = 0; v < g.n; ++v)
            if (e.vertices >> v & 1) bits[t++] = v;
        adj[bits[0]] |= uint16_t(1) << bits[1];
        adj[bits[1]] |= uint16_t(1) << bits[0];
    }
    int count = 0;
    for (const Edge& e : g.edges) {
        int bits[2], t = 0;
        for (int v = 0; v < g.n; ++v)
            if (e.vertices >> v & 1) bits[t++] = v;
        if (!(adj[bits[0]] & adj[bits[1]])) count++;
    }
    return count;
}

std::string to_text(const Pdg& g) {
    std::ostringstream os;
    os << g.n << ' ' << g.k << " ;";
    bool first = true;
    for (const Edge& e : g.edges) {
        os << (first ? " " : " , ");
        first = false;
        bool fv = true;
        for (int v = 0; v < g.n; ++v)
            if (e.vertices >> v & 1) {
                if (!fv) os << ' ';
                fv = false;
                os << v;
            }
        if (e.directed()) os << '>' << int(e.head);
    }
    return os.str();
}

Pdg parse_pdg(const std::string& text) {
    std::istringstream is(text);
    int n, k;
    std::string sep;
    if (!(is >> n >> k >> sep) || sep != ";")
        throw std::invalid_argument("bad pdg text: expected 'n k ;'");
    Pdg g = make_pdg(n, k);
    std::string tail;
    std::getline(is, tail);
    std::istringstream es(tail);
    std::string tok;
    std::vector<int> verts;
    std::optional<int> head;
    auto flush = [&]() {
        if (verts.empty() && !head) return;
        add_edge(g, make_edge(k, verts, head));
        verts.clear();
        head.reset();
    };
    while (es >> tok) {
        if (tok == ",") { flush(); continue; }
        auto gt = tok.find('>');
        if (gt == std::string::npos) {
            verts.push_back(std::stoi(tok));
        } else {
            if (gt > 0) verts.push_back(std::stoi(tok.substr(0, gt)));
            head = std::stoi(tok.substr(gt + 1));
        }
    }
    flush();
    return g;
}

}  // namespace pdgsat
