#pragma once

#include "clopen/system.hpp"

#include <vector>

namespace clopen {

enum class ChainMode { existential, universal };

// delta-relation digraph on atoms. existential: edge A->B iff dmin(pi(A), B) <= delta
// (a chain step by some points exists); universal: dmax(pi(A), B) <= delta (every
// point realization steps within delta).
struct ChainGraph {
    Rational delta;
    ChainMode mode = ChainMode::existential;
    int n = 0;
    std::vector<std::vector<int>> adj;  // sorted ascending
};

ChainGraph build_chain_graph(const SystemLevel& sys, const Rational& delta, ChainMode mode);

// Atoms lying on at least one directed cycle.
std::vector<int> chain_recurrent_atoms(const ChainGraph& graph);

// Strongly connected components of the graph restricted to chain-recurrent atoms,
// ordered by smallest member id, members sorted.
std::vector<std::vector<int>> chain_components(const ChainGraph& graph);

struct CyclicComponent {
    std::vector<int> atoms;
    Integer period;                       // gcd of cycle lengths, via potentials
    std::vector<std::vector<int>> parts;  // D_0..D_{m-1}, advanced cyclically
};

// Potential labeling from the component's lowest atom; parts are potential
// classes mod the gcd of |pot(A)+1-pot(B)| over edges. Aperiodic components get
// a single part.
CyclicComponent cyclic_decomposition(const ChainGraph& graph, const std::vector<int>& component);

struct CyclicDecomposition {
    Rational delta;
    std::vector<CyclicComponent> components;
};

// Existential-mode decomposition of the whole chain-recurrent set.
CyclicDecomposition full_cyclic_decomposition(const SystemLevel& sys, const Rational& delta);

struct CyclicPropertyReport {
    bool d1_clopen_parts = true;     // parts are atom unions partitioning the component
    bool d2_advances = true;         // pi maps each part into the next, cyclically
    bool d3_connects = true;         // same-part atoms joined by chains of length = 0 mod m
    std::vector<std::string> violations;
};

CyclicPropertyReport verify_cyclic_properties(const CyclicDecomposition& decomp,
                                              const SystemLevel& sys, const Rational& delta);

// Max over all cyclic parts of the part diameter (dmax over pairs inside the
// part, a sound upper bound). Zero when nothing is chain recurrent.
Rational r_delta(const SystemLevel& sys, const Rational& delta);

}  // namespace clopen
