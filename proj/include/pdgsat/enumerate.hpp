#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdgsat/canonical.hpp"
#include "pdgsat/forbidden.hpp"
#include "pdgsat/pdg.hpp"
#include "pdgsat/rational.hpp"

namespace pdgsat {

// One level of the search tree: the family-free graphs on `level` vertices,
// keyed by canonical form (one representative per isomorphism class).
struct LevelSet {
    int level = 0;
    int k = 0;
    std::map<CanonicalForm, Pdg> graphs;

    static LevelSet seed(int k);  // the single empty graph on k-1 vertices
};

struct ThetaResult {
    Rat theta;
    Pdg witness;                        // graph attaining (1-alpha)/beta = theta
    std::vector<uint64_t> level_counts; // per level k-1..n; see EnumerateOptions
    uint64_t final_count = 0;           // classes (final dedup) or raw free graphs
};

struct EnumerateOptions {
    int threads = 1;          // 0 = hardware concurrency
    bool final_dedup = true;  // canonical dedup at the last level
    int batches = 1;          // partition of the last level's base graphs
    int batch_index = -1;     // -1 = run all batches and merge
    std::string checkpoint_dir;
    uint64_t max_expansions_per_level = 2'000'000'000ULL;  // budget guard
};

struct BudgetExceeded : std::runtime_error {
    std::string checkpoint_path;
    explicit BudgetExceeded(const std::string& path)
        : std::runtime_error("enumeration budget exceeded"), checkpoint_path(path) {}
};

// Partial result of one batch of the final level; merging is associative and
// commutative, so any grouping of batches reproduces the full scan.
struct BatchResult {
    int n = 0, k = 0;
    int batches = 1, batch_index = 0;
    uint64_t free_count = 0;
    std::optional<Rat> theta;
    std::optional<Pdg> witness;
};

BatchResult merge_batches(const std::vector<BatchResult>& parts);

// All family-free one-vertex extensions of every base graph, adding edge sets
// that touch the new vertex. With dedup, the result is isomorphism-reduced.
LevelSet grow_level(const LevelSet& prev, const ForbiddenFamily& family, bool dedup, int threads = 1);

// Exact theta_max(n,k): the largest theta with alpha + theta*beta <= 1 over
// all family-free graphs on n vertices, i.e. min (1-alpha)/beta over graphs
// with a directed edge. The witness ties are broken by canonical form, so the
// result is independent of thread count and batching.
ThetaResult theta_max(int n, int k, const ForbiddenFamily& family, const EnumerateOptions& opts = {});

// Single batch of the final level, for distributed runs.
BatchResult theta_max_batch(int n, int k, const ForbiddenFamily& family, int batches, int batch_index,
                            const EnumerateOptions& opts = {});

// ((k-1)*theta + 1) / k, the averaging lift; requires k >= 3.
Rat lift_theta(const Rat& theta, int k);

// True iff host + e contains the k-triangle via an embedding that uses e.
// `slot` maps each k-subset mask to 0 (none), 1 (undirected) or 2+h (head h)
// and must already include e.
bool tk_created_by(const std::vector<uint8_t>& slot, int n, int k, const Edge& e);

// Same question for an arbitrary pattern.
bool pattern_created_by(const std::vector<uint8_t>& slot, int n, const Pdg& pattern, const Edge& e);

}  // namespace pdgsat
