#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdgsat/rational.hpp"

namespace pdgsat {

// Numerical verification companions: the minimum-triangular-edge density
// curve, a feasibility search for the phi polynomial system, the simplex
// counting bound, and low-codegree hypergraph orientation.

// f(rho) = max { 2yz : x+y+z = 1, x^2 + 2xy + 2yz >= rho, x,y,z >= 0 },
// computed to about 1e-9 absolute accuracy. With z eliminated the constraint
// reads x^2 + 2y(1-y) >= rho, so for each y the smallest admissible x is
// closed-form and the problem is a one-dimensional scan plus golden-section
// refinement.
double fm_density(double rho);

struct FeasiblePoint {
    // exact rational coordinates; re-verified against every constraint
    Rat x, y, z, a, b, c;
};

struct FeasibilityVerdict {
    bool feasible = false;
    std::optional<FeasiblePoint> point;
    double resolution = 0;
    double max_min_margin = 0;  // best min(margin1, margin2) seen on the grid
};

// Searches the system
//   a + (3 phi - 1)/2 * b + c > 1
//   a + phi (b + c) > 1
//   x + y + z = 1,  x^2 + 2xy + 2yz >= a + b + c,  2yz >= b,  all >= 0
// on a grid over (x, y) with the inner (a,b,c) allocation solved exactly per
// grid point. A feasible verdict carries a rational point that re-verifies
// exactly; a negative verdict is evidence at the stated resolution, not a
// proof (the grid cannot exclude off-grid solutions).
FeasibilityVerdict check_system(const Rat& phi, const Rat& resolution);

struct Hypergraph {
    int n = 0;
    int k = 0;
    std::vector<std::vector<int>> edges;
};

Hypergraph parse_hypergraph(const std::string& text);  // one edge per line
std::string to_text(const Hypergraph& h);

// Counts (k+1)-cliques ("simplices") exactly and checks
//   #simplices <= beta^{(k+1)/k} n^{k+1} / (k+1)!   with beta = k! e / n^k.
// The n powers cancel, so the check is the exact integer inequality
//   ((k+1)!)^k * s^k <= (k! * e)^{k+1}.
struct KkReport {
    uint64_t simplices = 0;
    bool holds = false;
};
KkReport kruskal_katona_check(const Hypergraph& h);
uint64_t count_simplices(const Hypergraph& h);

// Assigns each edge a head so that every (k-1)-subset has at most
//   L = ceil( (k-1)! / (k!)^{(k-1)/k} * e^{1/k} )
// edges through it directed at an outside vertex, via bipartite matching
// between edges and L copies of each (k-1)-subset. Existence is guaranteed;
// failure throws.
struct Orientation {
    int codegree_bound = 0;       // L
    std::vector<int> heads;       // per edge, the chosen head vertex
};
Orientation orient_hypergraph(const Hypergraph& h);

// Recomputes the codegree profile of an orientation from scratch; true iff
// every (k-1)-subset respects the bound.
bool orientation_respects_bound(const Hypergraph& h, const Orientation& o);

}  // namespace pdgsat
