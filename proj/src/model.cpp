#include "clopen/model.hpp"

#include <map>
#include <stdexcept>

namespace clopen {

namespace {

bool is_complete_cylinder(const FiniteModel& m) {
    if (m.metric_kind != MetricKind::cylinder_sup) return false;
    size_t expect = 1;
    for (unsigned r : m.radix) expect *= r;
    if (m.atoms.size() != expect) return false;
    std::map<std::vector<uint8_t>, int> seen;
    for (const Atom& a : m.atoms) {
        const auto* w = std::get_if<CylinderWord>(&a.geometry);
        if (!w || w->digits.size() != m.radix.size()) return false;
        for (size_t i = 0; i < w->digits.size(); ++i)
            if (w->digits[i] >= m.radix[i]) return false;
        if (++seen[w->digits] > 1) return false;
    }
    return true;
}

}  // namespace

Rational FiniteModel::dmin(int i, int j) const {
    if (has_tables) return tmin[static_cast<size_t>(i) * atoms.size() + j];
    return atom_metric(atoms[i], atoms[j], metric_kind).dmin;
}

Rational FiniteModel::dmax(int i, int j) const {
    if (has_tables) return tmax[static_cast<size_t>(i) * atoms.size() + j];
    return atom_metric(atoms[i], atoms[j], metric_kind).dmax;
}

Rational FiniteModel::space_diameter() const {
    if (!has_tables && metric_kind == MetricKind::cylinder_sup) {
        return size() > 1 ? pow2(-1) : mesh;
    }
    Rational best(0);
    for (int i = 0; i < size(); ++i)
        for (int j = i; j < size(); ++j) best = std::max(best, dmax(i, j));
    return best;
}

ModelPtr make_model(int level, MetricKind kind, std::vector<Atom> atoms,
                    std::vector<unsigned> radix) {
    auto m = std::make_shared<FiniteModel>();
    m->level = level;
    m->metric_kind = kind;
    m->radix = std::move(radix);
    m->atoms = std::move(atoms);
    for (size_t i = 0; i < m->atoms.size(); ++i) {
        if (m->atoms[i].id != static_cast<int>(i))
            throw std::invalid_argument("atom ids must equal their indices");
    }
    if (m->atoms.empty()) throw std::invalid_argument("model with no atoms");

    if (is_complete_cylinder(*m)) {
        m->has_tables = false;
        const int K = static_cast<int>(m->radix.size());
        m->mesh = pow2(-(K + 1));
        m->min_gap = m->atoms.size() > 1 ? pow2(-K) : m->mesh;
    } else {
        m->has_tables = true;
        build_tables_parallel(m->atoms, kind, m->tmin, m->tmax);
        Rational mesh(0);
        for (const Atom& a : m->atoms) mesh = std::max(mesh, a.diameter);
        m->mesh = mesh;
        if (m->size() == 1) {
            m->min_gap = m->atoms[0].diameter;
        } else {
            bool first = true;
            Rational gap(0);
            for (int i = 0; i < m->size(); ++i)
                for (int j = i + 1; j < m->size(); ++j) {
                    Rational d = m->dmin(i, j);
                    if (first || d < gap) {
                        gap = d;
                        first = false;
                    }
                }
            m->min_gap = gap;
        }
    }
    return m;
}

ValidationReport validate_partition(const FiniteModel& model) {
    ValidationReport rep;
    auto issue = [&rep](std::string rule, std::string detail) {
        rep.issues.push_back({std::move(rule), std::move(detail)});
    };
    const int n = model.size();

    for (int i = 0; i < n; ++i) {
        const Atom& a = model.atoms[i];
        if (a.id != i) issue("id", "atom at index " + std::to_string(i) + " has id " + std::to_string(a.id));
        if (geometry_diameter(a.geometry) != a.diameter)
            issue("diameter", "atom " + std::to_string(i) + ": declared diameter differs from geometry");
        if (const auto* w = std::get_if<CylinderWord>(&a.geometry)) {
            if (model.metric_kind != MetricKind::cylinder_sup)
                issue("geometry", "cylinder atom in an interval-metric model");
            else {
                if (w->digits.size() != model.radix.size())
                    issue("geometry", "atom " + std::to_string(i) + ": word length differs from model level");
                for (size_t k = 0; k < w->digits.size() && k < model.radix.size(); ++k)
                    if (w->digits[k] >= model.radix[k])
                        issue("geometry", "atom " + std::to_string(i) + ": digit out of radix");
            }
        } else {
            if (model.metric_kind != MetricKind::interval)
                issue("geometry", "interval-kind atom in a cylinder-metric model");
            if (const auto* iv = std::get_if<Interval>(&a.geometry)) {
                if (!(iv->lo < iv->hi))
                    issue("geometry", "atom " + std::to_string(i) + ": interval needs lo < hi");
            } else if (const auto* sc = std::get_if<ScaledCantor>(&a.geometry)) {
                if (!(sc->scale > 0))
                    issue("geometry", "atom " + std::to_string(i) + ": Cantor scale must be positive");
            }
            if (hull_lo(a.geometry) < 0 || hull_hi(a.geometry) > 1)
                issue("coverage", "atom " + std::to_string(i) + " leaves the unit interval");
        }
    }

    // Disjointness. Same-length cylinder words are disjoint iff distinct; interval
    // kinds are compared by hulls (exact for every bundled construction, whose
    // atoms carry their hull endpoints).
    if (model.metric_kind == MetricKind::cylinder_sup) {
        std::map<std::vector<uint8_t>, int> seen;
        for (int i = 0; i < n; ++i)
            if (const auto* w = std::get_if<CylinderWord>(&model.atoms[i].geometry)) {
                auto [it, fresh] = seen.emplace(w->digits, i);
                if (!fresh)
                    issue("disjointness", "atoms " + std::to_string(it->second) + " and " +
                                              std::to_string(i) + " share a word");
            }
        size_t expect = 1;
        for (unsigned r : model.radix) expect *= r;
        if (seen.size() != expect)
            issue("coverage", "model carries " + std::to_string(seen.size()) + " of " +
                                  std::to_string(expect) + " words");
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const Geometry& gi = model.atoms[i].geometry;
                const Geometry& gj = model.atoms[j].geometry;
                if (std::get_if<CylinderWord>(&gi) || std::get_if<CylinderWord>(&gj)) continue;
                if (!(hull_hi(gi) < hull_lo(gj) || hull_hi(gj) < hull_lo(gi)))
                    issue("disjointness",
                          "atoms " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
            }
    }

    if (model.has_tables) {
        if (model.tmin.size() != static_cast<size_t>(n) * n ||
            model.tmax.size() != static_cast<size_t>(n) * n) {
            issue("symmetry", "table size mismatch");
            return rep;
        }
        for (int i = 0; i < n; ++i) {
            if (model.tmin[static_cast<size_t>(i) * n + i] != 0)
                issue("bound-order", "dmin(A,A) != 0 at atom " + std::to_string(i));
            if (model.tmax[static_cast<size_t>(i) * n + i] != model.atoms[i].diameter)
                issue("bound-order", "dmax(A,A) != diameter at atom " + std::to_string(i));
            for (int j = 0; j < n; ++j) {
                const Rational& lo = model.tmin[static_cast<size_t>(i) * n + j];
                const Rational& hi = model.tmax[static_cast<size_t>(i) * n + j];
                if (lo > hi)
                    issue("bound-order",
                          "dmin > dmax at pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
                if (lo != model.tmin[static_cast<size_t>(j) * n + i] ||
                    hi != model.tmax[static_cast<size_t>(j) * n + i])
                    issue("symmetry",
                          "asymmetric entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    return rep;
}

std::vector<Rational> threshold_grid(const FiniteModel& model) {
    std::vector<Rational> vals;
    const int n = model.size();
    if (!model.has_tables && model.metric_kind == MetricKind::cylinder_sup) {
        const int K = static_cast<int>(model.radix.size());
        vals.push_back(Rational(0));
        vals.push_back(pow2(-(K + 1)));
        for (int j = K; j >= 1; --j)
            if (n > 1) vals.push_back(pow2(-j));
    } else {
        vals.reserve(static_cast<size_t>(n) * (n + 1));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                vals.push_back(model.dmin(i, j));
                vals.push_back(model.dmax(i, j));
            }
    }
    std::vector<Rational> grid = sorted_unique(std::move(vals));
    std::vector<Rational> out;
    out.reserve(grid.size() * 2);
    for (size_t i = 0; i < grid.size(); ++i) {
        out.push_back(grid[i]);
        if (i + 1 < grid.size()) out.push_back((grid[i] + grid[i + 1]) / 2);
    }
    return out;
}

}  // namespace clopen
