#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdgsat/pdg.hpp"

namespace pdgsat {

// Total-order-comparable encoding of a PDG under its lexicographically
// minimal vertex relabeling. Equal across all relabelings of the same graph;
// unequal for non-isomorphic graphs.
struct CanonicalForm {
    std::vector<uint32_t> words;  // n, k, m, then sorted packed edge codes

    auto operator<=>(const CanonicalForm&) const = default;
    bool operator==(const CanonicalForm&) const = default;

    Pdg to_pdg() const;
    std::string to_text() const;  // pdg text encoding of the canonical relabeling
};

// Permutation-equivariant per-vertex hash of (undirected degree,
// out-participation count, head in-degree) plus one round of neighbor
// aggregation. Relabeling a graph permutes its signatures identically.
uint64_t vertex_signature(const Pdg& g, int v);
std::vector<uint64_t> vertex_signatures(const Pdg& g);

// Exact minimum of the packed edge encoding over all n! relabelings, found by
// a branch-and-bound search; signature classes only order the branches, so
// correctness does not depend on the refinement separating orbits.
// Supports n <= 13 (the search is pruned; beyond that it is not worth it).
CanonicalForm canonical_form(const Pdg& g);

// Applies the permutation perm (old vertex -> new vertex) to g.
Pdg relabel(const Pdg& g, const std::vector<int>& perm);

bool is_isomorphic(const Pdg& a, const Pdg& b);

// Isomorphism-invariant 64-bit hash; collisions allowed (equal hashes are a
// cue to compare canonical forms, not a proof). Constants are fixed so values
// are reproducible across runs.
uint64_t graph_hash(const Pdg& g);

}  // namespace pdgsat
