#pragma once

#include "clopen/rational.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace clopen {

// One clopen piece of the space, in one of three shapes:
//  - CylinderWord: the set of digit sequences extending a finite word, under the
//    ultrametric d(x,y) = 2^-(first differing index). Digits are binary unless the
//    owning model declares larger radixes (used by odometers over general chains).
//  - Interval: a closed subinterval of [0,1] under |x-y|. The atom's point set is
//    the carrier intersected with the interval; both endpoints belong to it by
//    construction in every bundled model, so endpoint arithmetic is exact.
//  - ScaledCantor: offset + scale * D for D the Cantor ternary set in [0,1].
struct CylinderWord {
    std::vector<uint8_t> digits;
};

struct Interval {
    Rational lo, hi;
};

struct ScaledCantor {
    Rational offset, scale;
};

using Geometry = std::variant<CylinderWord, Interval, ScaledCantor>;

enum class MetricKind { cylinder_sup, interval };

Rational geometry_diameter(const Geometry& g);

// Hull endpoints for the interval-kind geometries. Throws on cylinders.
Rational hull_lo(const Geometry& g);
Rational hull_hi(const Geometry& g);

// Leftmost point: lower endpoint / offset / all-zeros tail. Display only, never
// used by verdicts.
Rational representative_point(const Geometry& g);

std::string geometry_brief(const Geometry& g);

struct Atom {
    int id = 0;
    Geometry geometry;
    Rational diameter;
};

struct MetricBounds {
    Rational dmin, dmax;
};

// Exact bounds on the metric between the two atoms' point sets:
//   dmin = inf d(x,y), dmax = sup d(x,y).
// Cylinders use the first-difference rule; interval kinds use hull endpoints.
MetricBounds atom_metric(const Atom& a, const Atom& b, MetricKind kind);

}  // namespace clopen
