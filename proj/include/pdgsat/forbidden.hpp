#pragma once

#include <string>
#include <vector>

#include "pdgsat/canonical.hpp"
#include "pdgsat/pdg.hpp"

namespace pdgsat {

// The forbidden family F_k: all k-PDGs producible by the init/extend/close
// procedure, one canonical representative per isomorphism class, pruned so no
// retained graph contains a different producible graph as a subgraph.
struct ForbiddenFamily {
    int k = 0;
    std::vector<Pdg> members;          // canonical representatives, sorted by canonical form
    std::vector<std::string> traces;   // one witness construction trace per member
};

// The partially directed k-triangle on k+1 vertices: with common core
// C = {0..k-3}, edges C+{k-2,k-1}, C+{k-2,k} directed at k, C+{k-1,k}.
// For k=3 this is {012, 01>3, 023}.
Pdg make_Tk(int k);

// Generates F_k for 2 <= k <= 6. Deduplicates candidates up to isomorphism
// and then removes every candidate that contains a different candidate as a
// subgraph.
ForbiddenFamily generate_Fk(int k);

ForbiddenFamily single_family(const Pdg& pattern);  // e.g. {T_k}

// True iff no member of fam embeds into g.
bool is_family_free(const Pdg& g, const ForbiddenFamily& fam);

}  // namespace pdgsat
