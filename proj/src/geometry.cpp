#include "clopen/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace clopen {

namespace {

const Interval* as_interval(const Geometry& g) { return std::get_if<Interval>(&g); }
const ScaledCantor* as_cantor(const Geometry& g) { return std::get_if<ScaledCantor>(&g); }
const CylinderWord* as_word(const Geometry& g) { return std::get_if<CylinderWord>(&g); }

}  // namespace

Rational geometry_diameter(const Geometry& g) {
    if (const auto* w = as_word(g)) return pow2(-(static_cast<int>(w->digits.size()) + 1));
    if (const auto* iv = as_interval(g)) return iv->hi - iv->lo;
    return as_cantor(g)->scale;
}

Rational hull_lo(const Geometry& g) {
    if (const auto* iv = as_interval(g)) return iv->lo;
    if (const auto* sc = as_cantor(g)) return sc->offset;
    throw std::logic_error("hull_lo on a cylinder geometry");
}

Rational hull_hi(const Geometry& g) {
    if (const auto* iv = as_interval(g)) return iv->hi;
    if (const auto* sc = as_cantor(g)) return sc->offset + sc->scale;
    throw std::logic_error("hull_hi on a cylinder geometry");
}

Rational representative_point(const Geometry& g) {
    if (as_word(g)) return 0;  // the all-zeros tail of the word; displayed as 0
    return hull_lo(g);
}

std::string geometry_brief(const Geometry& g) {
    if (const auto* w = as_word(g)) {
        std::string s = "[";
        for (uint8_t d : w->digits) s += static_cast<char>('0' + d);
        return s + "]";
    }
    if (const auto* iv = as_interval(g))
        return "[" + format_rational(iv->lo) + "," + format_rational(iv->hi) + "]";
    const auto* sc = as_cantor(g);
    return format_rational(sc->offset) + "+" + format_rational(sc->scale) + "*D";
}

MetricBounds atom_metric(const Atom& a, const Atom& b, MetricKind kind) {
    if (kind == MetricKind::cylinder_sup) {
        const auto* wa = as_word(a.geometry);
        const auto* wb = as_word(b.geometry);
        if (!wa || !wb) throw std::logic_error("cylinder metric on non-cylinder atoms");
        if (wa->digits.size() != wb->digits.size())
            throw std::logic_error("cylinder words of unequal length in one model");
        for (size_t i = 0; i < wa->digits.size(); ++i) {
            if (wa->digits[i] != wb->digits[i]) {
                Rational d = pow2(-static_cast<int>(i + 1));
                return {d, d};
            }
        }
        return {Rational(0), a.diameter};
    }
    const Rational alo = hull_lo(a.geometry), ahi = hull_hi(a.geometry);
    const Rational blo = hull_lo(b.geometry), bhi = hull_hi(b.geometry);
    Rational dmin = std::max(std::max(Rational(blo - ahi), Rational(alo - bhi)), Rational(0));
    Rational dmax = std::max(Rational(bhi - alo), Rational(ahi - blo));
    return {dmin, dmax};
}

}  // namespace clopen
