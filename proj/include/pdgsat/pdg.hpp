#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdgsat/rational.hpp"

namespace pdgsat {

// A partially directed k-uniform hypergraph on vertices 0..n-1. Each edge is
// a k-subset of vertices, stored as a bitmask, optionally directed at one of
// its vertices (the head). At most one edge per k-subset. Supports n <= 16.

constexpr int kMaxVertices = 16;
constexpr uint8_t kNoHead = 0xFF;

struct Edge {
    uint16_t vertices = 0;  // bitmask of the k member vertices
    uint8_t head = kNoHead; // kNoHead for undirected, else a vertex in the mask

    bool directed() const { return head != kNoHead; }
    // Packed code used for sorting and canonical encodings: (mask, head+1).
    uint32_t code() const { return (uint32_t(vertices) << 5) | uint32_t(directed() ? head + 1 : 0); }
    friend bool operator==(const Edge& a, const Edge& b) { return a.vertices == b.vertices && a.head == b.head; }
    friend bool operator<(const Edge& a, const Edge& b) { return a.code() < b.code(); }
};

struct Pdg {
    int n = 0;
    int k = 0;
    std::vector<Edge> edges;  // kept sorted by Edge::code, unique vertex masks

    long long slot_count() const { return binomial(n, k); }
    int undirected_count() const;
    int directed_count() const;
    const Edge* edge_on(uint16_t mask) const;  // nullptr if no edge uses this k-set
    bool operator==(const Pdg& o) const { return n == o.n && k == o.k && edges == o.edges; }
};

struct Densities {
    Rat alpha;  // undirected edge density e_u / C(n,k)
    Rat beta;   // directed edge density e_d / C(n,k)
};

// Validates cardinality and head membership; throws std::invalid_argument.
Edge make_edge(int k, uint16_t vertices, std::optional<int> head = std::nullopt);
Edge make_edge(int k, const std::vector<int>& vertices, std::optional<int> head = std::nullopt);

Pdg make_pdg(int n, int k);
// Throws if e is invalid for (n,k) or its vertex set already supports an edge.
void add_edge(Pdg& g, const Edge& e);
Pdg with_edge(const Pdg& g, const Edge& e);

Densities densities(const Pdg& g);

// True iff pattern embeds into host by an injective vertex map phi such that
// every pattern edge on S has a host edge on phi(S), and a pattern edge
// directed at v requires the host edge to be directed at phi(v). Host
// directions may be forgotten to match undirected pattern edges. If `map` is
// non-null and the result is true, *map receives phi (pattern vertex -> host
// vertex).
bool contains_subgraph(const Pdg& host, const Pdg& pattern, std::vector<int>* map = nullptr);

// Link of v: the (k-1)-PDG on the remaining n-1 vertices (indices above v
// shift down by one). Edges through v keep their heads except those directed
// at v, which become undirected.
Pdg link(const Pdg& g, int v);

struct LinkDecomposition {
    Rat a;  // undirected edges through v, over C(n-1,2)
    Rat b;  // edges through v directed at a vertex != v, over C(n-1,2)
    Rat c;  // edges directed at v, over C(n-1,2)
};

// k = 3 only.
LinkDecomposition link_decomposition(const Pdg& g, int v);

// For a simple undirected graph (k=2, no directions): G^2 has edge xy iff
// some z has xz, yz in E.
Pdg square_graph(const Pdg& g);

// Number of edges lying in no triangle (k=2).
int non_triangular_edges(const Pdg& g);

// Canonical text encoding: "n k ; 0 1 2 5>5 , 0 1 3 5>5". Edges sorted by
// (mask, head), vertex indices ascending, ">h" suffix marks the head.
// Round-trips bit-exactly through parse_pdg.
std::string to_text(const Pdg& g);
Pdg parse_pdg(const std::string& text);

}  // namespace pdgsat
