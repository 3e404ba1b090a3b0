#pragma once

#include "clopen/model.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace clopen {

// Certified least point-periods inside an atom. This is constructor-supplied
// knowledge about the underlying space; the atom permutation alone cannot decide
// pointwise periodicity (an atom cycle of length c only gives f^c(P) = P setwise).
//  - none:    the atom contains no periodic point (odometer residue classes).
//  - exact:   every point is periodic with this least period, and the dynamics is
//             a rigid translation on the atom's orbit (Cantor pieces, identity).
//  - tail:    least periods present are exactly { base * 2^t : t >= 0 } alongside
//             aperiodic points (interval atoms of the bundled example).
//  - unknown: no certificate either way (perturbed systems).
struct PeriodSet {
    enum class Kind { none, exact, tail, unknown };
    Kind kind = Kind::unknown;
    Integer value;  // exact: the least period; tail: the base

    static PeriodSet make_none() { return {Kind::none, Integer(0)}; }
    static PeriodSet make_exact(Integer c) { return {Kind::exact, std::move(c)}; }
    static PeriodSet make_tail(Integer base) { return {Kind::tail, std::move(base)}; }
    static PeriodSet make_unknown() { return {Kind::unknown, Integer(0)}; }

    // Certified existence of a point of period dividing m (sound for certificates).
    bool must_divide(const Integer& m) const;
    // Possible existence (sound for refutations: false means provably none).
    bool may_divide(const Integer& m) const;
    bool must_any() const { return kind == Kind::exact || kind == Kind::tail; }
    bool may_any() const { return kind != Kind::none; }

    // Period content under f^n, n != 0.
    PeriodSet power(long n) const;
};

// Dynamics at one resolution level: an exact permutation of atom ids. The
// exactness contract (f maps each atom's point set onto the image atom's point
// set) is the constructors' responsibility.
struct SystemLevel {
    ModelPtr model;
    std::vector<int> pi, pi_inv;
    std::vector<PeriodSet> periods;

    int size() const { return model->size(); }
    int forward(int atom, long steps = 1) const;

    // Length of the permutation cycle through the atom.
    Integer cycle_length(int atom) const;
};

// The same homeomorphism seen at resolutions 1..K. parent[k] maps atoms of
// levels[k + 1] onto atoms of levels[k]; refinement commutes with the dynamics.
struct SystemFamily {
    std::vector<SystemLevel> levels;
    std::vector<std::vector<int>> parent;

    int depth() const { return static_cast<int>(levels.size()); }
    const SystemLevel& level(int k) const { return levels.at(static_cast<size_t>(k) - 1); }
    const SystemLevel& top() const { return levels.back(); }

    // Ancestor of a level-`from` atom at level `to` <= `from`.
    int ancestor(int from, int atom, int to) const;
};

// Odometer over a strictly increasing divisibility chain m1 | m2 | ...; level-k
// atoms are the m_k residue classes, the permutation is +1 mod m_k.
SystemFamily build_odometer(const std::vector<Integer>& chain, int K);

// The binary odometer carried onto ternary intervals: level-K residue l maps to
// the interval indexed by the little-endian binary digits of l.
SystemFamily embed_binary_odometer(int K);

// The bundled modified odometer on a Cantan subset of [0,1]: interval atoms
// advancing cyclically plus rigid 3*2^j-cycles of scaled Cantor pieces occupying
// the middle gaps. Requires K >= 2.
SystemFamily build_modified_odometer(int K);

SystemLevel build_identity(ModelPtr model);

// Identity system on n disjoint equal intervals in [0,1].
SystemFamily build_identity_intervals(int atoms);

SystemLevel level_power(const SystemLevel& sys, long n);
SystemFamily family_power(const SystemFamily& sys, long n);

// Composes an atom permutation tau on top: pi' = tau o pi. Period metadata of the
// result is unknown unless tau is the identity.
SystemLevel perturb(const SystemLevel& sys, const std::vector<int>& tau);

struct DistanceBounds {
    Rational lower, upper;
};

struct SystemDistance {
    DistanceBounds forward, backward, total;  // d_C0(f,g), d_C0(f^-1,g^-1), D(f,g)
};

SystemDistance system_distance(const SystemLevel& f, const SystemLevel& g);

bool models_equal(const FiniteModel& a, const FiniteModel& b);

// Verifies permutation well-formedness per level, refinement commutation and
// geometric containment. Throws std::runtime_error on violation.
void check_family_invariants(const SystemFamily& family);

bool family_is_level_preserving(const SystemFamily& family);

}  // namespace clopen
