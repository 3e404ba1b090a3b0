#pragma once

#include "clopen/system.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace clopen {

// A homeomorphism acting on binary cylinder atoms by per-cylinder XOR masks.
// Unlisted cylinders are fixed. The single-pair construction is an involution;
// the two-step route through an intermediate tuple composes to 3-cycles, which
// this layer also represents (is_involution records which case applies).
struct SwapInvolution {
    int depth = 0;
    std::vector<std::pair<std::vector<uint8_t>, std::vector<uint8_t>>> masked_cylinders;
    bool is_involution = true;

    int apply_atom(const FiniteModel& model, int atom) const;
    std::vector<int> atom_permutation(const FiniteModel& model) const;
};

struct SwapBuildResult {
    SwapInvolution phi;
    Rational distance_upper;  // certified D(phi, id) upper bound via dmax
    bool used_two_step = false;
    std::vector<int> theta;  // intermediate tuple, two-step case only
};

enum class SwapErrorKind { precondition, not_proper, refinement_request, unsupported_model };

struct SwapError : std::runtime_error {
    SwapErrorKind kind;
    int suggested_depth;
    SwapError(SwapErrorKind k, const std::string& what, int depth_hint = 0)
        : std::runtime_error(what), kind(k), suggested_depth(depth_hint) {}
};

// d_n on atom tuples via dmax (sound for the closeness precondition).
Rational tuple_distance(const FiniteModel& model, const std::vector<int>& zeta,
                        const std::vector<int>& eta);

// Builds phi with phi(zeta_i) = eta_i componentwise and D(phi, id) < delta,
// certified via dmax bounds. Componentwise-equal tuples short-circuit to the
// identity. Requires a complete binary cylinder model.
SwapBuildResult swap_homeomorphism(const FiniteModel& model, const std::vector<int>& zeta,
                                   const std::vector<int>& eta, const Rational& delta);

}  // namespace clopen
