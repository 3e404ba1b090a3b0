#pragma once

#include "clopen/chain.hpp"
#include "clopen/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace clopen {

enum class VerdictKind { certified, refuted, inconclusive };

std::string verdict_name(VerdictKind v);

struct TrackerOptions {
    size_t state_cap = size_t(1) << 18;
    long residue_cap = 1L << 20;  // bound on lcm of period bases tracked mod L
};

// Refutation witness: a concrete pseudo-orbit (stem, then cycle forever) such
// that every atom either fails dmin-separation tracking at a recorded time or,
// for periodic variants, carries no compatible period content. Standalone
// verifiable against the model tables.
struct ShadowingWitness {
    std::vector<int> stem;   // atoms A_0..A_d (the separation happens by step d)
    std::vector<int> cycle;  // continuation closing a loop, making the orbit infinite
    struct Kill {
        int atom;
        long time;        // -1: period-incompatible instead of separated
        std::string why;  // human-readable reason
    };
    std::vector<Kill> kills;
};

// Certificate for a certified verdict: the closed family of reachable tracking
// states; replay verifies initialization, closure and nonemptiness.
struct TrackState {
    int start = -1;  // cycle base atom for periodic variants; -1 for plain shadowing
    int atom = 0;
    long residue = 0;  // length mod L for the strict variant; 0 otherwise
    std::vector<int> survivors;
};

struct ShadowingVerdict {
    Rational epsilon, delta;
    VerdictKind result = VerdictKind::inconclusive;
    std::optional<ShadowingWitness> witness;
    std::vector<TrackState> certificate;
    std::string note;  // cap exceeded, resolution limited, ...
};

// Decides whether every infinite pseudo-orbit in the existential delta-graph is
// eps-shadowed by some atom's exact orbit. Certification tracks dmax-closeness;
// refutation requires dmin-separation of every candidate. Complete at atom level
// up to the state cap.
ShadowingVerdict check_shadowing(const SystemLevel& sys, const Rational& eps, const Rational& delta,
                                 const TrackerOptions& opts = {});

struct FindDeltaResult {
    bool any_certified = false;
    Rational delta;
    std::vector<std::pair<Rational, VerdictKind>> trace;  // descending scan
};

// Largest grid delta with certified shadowing at eps.
FindDeltaResult find_delta(const SystemLevel& sys, const Rational& eps,
                           const TrackerOptions& opts = {});

enum class PeriodicVariant { periodic, strict, pseudo };

std::string variant_name(PeriodicVariant v);

// Decides whether every delta-cycle admits a shadow per the variant:
//   strict:   an atom with certified point period dividing the cycle length;
//   periodic: an atom certified to contain periodic points;
//   pseudo:   any tracking atom.
ShadowingVerdict check_periodic_shadowing(const SystemLevel& sys, const Rational& eps,
                                          const Rational& delta, PeriodicVariant variant,
                                          const TrackerOptions& opts = {});

struct EquicontinuityResult {
    VerdictKind result = VerdictKind::inconclusive;
    Rational epsilon;
    Rational delta;       // certified modulus
    int level_used = 0;   // level whose non-rigid mesh is <= eps
    Rational soft_mesh;   // max non-rigid atom diameter at that level
    // refutation: two atoms whose iterates separate
    int pair_a = -1, pair_b = -1, pair_level = 0;
    long separate_time = 0;
    Rational pair_dmax, separation;
    std::string note;
};

// Certificate route: exact level preservation makes same-atom points travel
// together, so any level whose non-rigid atoms are below eps yields a modulus
// just under that level's min gap. Rigid (exact-period) atoms preserve in-atom
// distances and never constrain the level choice.
EquicontinuityResult equicontinuity_modulus(const SystemFamily& family, const Rational& eps);

struct ContinuousShadowingResult {
    VerdictKind result = VerdictKind::inconclusive;
    Rational epsilon, gamma, delta;
    // replayable pair walks (pseudo-atom, orbit atom of the rule r(x) = x0)
    std::vector<std::array<int, 3>> forward_states;   // (start, pseudo, orbit)
    std::vector<std::array<int, 3>> backward_states;
    std::string note;
};

// Lemma-style construction: gamma from the equicontinuity modulus at eps/2, delta
// from gamma-shadowing, then the tracking rule r(x) = x0 verified over every
// pseudo-orbit path, in both time directions.
ContinuousShadowingResult continuous_shadowing_construct(const SystemFamily& family,
                                                         const Rational& eps,
                                                         const TrackerOptions& opts = {});

struct OrbitClosureClass {
    enum class Kind { periodic, odometer_like };
    Kind kind = Kind::periodic;
    Integer period;               // periodic: the (certified or evident) period
    std::vector<Integer> chain;   // cycle length of the ancestor at each level
    bool level_limited = false;   // finite-level evidence only
};

OrbitClosureClass classify_orbit_closure(const SystemFamily& family, int atom);

}  // namespace clopen
