#pragma once

#include "clopen/chain.hpp"
#include "clopen/shadowing.hpp"
#include "clopen/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace clopen {

// Atom-level conjugating map h. The realized map sends every point of an atom to
// the representative (leftmost) point of the target atom, except for the pure
// identity table which realizes as the identity.
struct SemiConjugacy {
    enum class Realization { identity_map, part_collapse };
    std::vector<int> h;
    Realization realization = Realization::part_collapse;
    Rational d_h_id_bound;
    bool surjective = false;
    bool equation_verified = false;
};

SemiConjugacy verify_semiconjugacy(const SystemLevel& f, const SystemLevel& g,
                                   std::vector<int> h, SemiConjugacy::Realization realization);

struct ConjugacyError : std::runtime_error {
    explicit ConjugacyError(const std::string& what) : std::runtime_error(what) {}
};

struct ConjugacyConstruction {
    int analysis_level = 1;
    Rational epsilon, delta, gamma, beta;
    bool gamma_by_r_bound = false;  // true when r(gamma) < delta held; otherwise the
                                    // representative cycles were verified directly
    Rational r_gamma;
    CyclicDecomposition decomposition;
    std::vector<int> shadow_atoms;      // P_i per component
    std::vector<Integer> periods;       // m_i per component
    SemiConjugacy h;                    // at the analysis level, against f itself
    std::vector<std::string> notes;
};

// Follows the constructive stability recipe: a strict-shadowing delta below eps,
// a decomposition scale gamma, periodic shadow atoms per component, the collapse
// map h, and the perturbation admission bound beta (min gap between distinct
// parts). Throws ConjugacyError naming the missing certificate.
ConjugacyConstruction build_conjugating_map(const SystemFamily& family, const Rational& eps,
                                            int analysis_level = 0,  // 0: top
                                            const TrackerOptions& opts = {});

// h pushed to a deeper level of the same family: each deep atom maps to the deep
// atom holding the representative point of its part's target.
std::vector<int> deepen_conjugacy(const SystemFamily& family, const ConjugacyConstruction& con,
                                  int deep_level);

struct PerturbationCheck {
    std::vector<std::pair<int, int>> swaps;  // disjoint transpositions at the deep level
    Rational distance_upper;
    bool equation_holds = false;
};

struct StabilityReport {
    enum class Mode { constructive, refuted_by_necessary_condition };
    Mode mode = Mode::constructive;
    Rational epsilon;
    // refuted route
    Rational refuting_epsilon;
    std::vector<std::pair<Rational, VerdictKind>> strict_scan;  // per grid delta
    std::optional<ShadowingWitness> witness;                    // at the largest grid delta
    // constructive route
    std::optional<ConjugacyConstruction> construction;
    int perturb_level = 0;
    long exhaustive_single_swaps = 0;
    long sampled_multi_swaps = 0;
    long failures = 0;
    std::vector<PerturbationCheck> checks;
    std::string note;
};

struct ProbeOptions {
    uint64_t seed = 1;
    int samples = 50;
    int analysis_level = 0;  // 0: top
    int perturb_level = 0;   // 0: top
    bool keep_checks = false;
};

// Necessary-condition route: strict periodic shadowing refuted at every grid
// delta for some grid eps' <= eps. Otherwise runs the constructive recipe and
// verifies h o g = f o h exactly for every admitted single-swap perturbation and
// for seeded multi-swap samples.
StabilityReport stability_probe(const SystemFamily& family, const Rational& eps,
                                const ProbeOptions& popts = {}, const TrackerOptions& opts = {});

}  // namespace clopen
