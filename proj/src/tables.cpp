#include "clopen/model.hpp"

namespace clopen {

void build_tables_serial(const std::vector<Atom>& atoms, MetricKind kind,
                         std::vector<Rational>& tmin, std::vector<Rational>& tmax) {
    const int n = static_cast<int>(atoms.size());
    tmin.assign(static_cast<size_t>(n) * n, Rational(0));
    tmax.assign(static_cast<size_t>(n) * n, Rational(0));
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            MetricBounds b = atom_metric(atoms[i], atoms[j], kind);
            tmin[static_cast<size_t>(i) * n + j] = b.dmin;
            tmin[static_cast<size_t>(j) * n + i] = b.dmin;
            tmax[static_cast<size_t>(i) * n + j] = b.dmax;
            tmax[static_cast<size_t>(j) * n + i] = b.dmax;
        }
    }
}

void build_tables_parallel(const std::vector<Atom>& atoms, MetricKind kind,
                           std::vector<Rational>& tmin, std::vector<Rational>& tmax) {
    const int n = static_cast<int>(atoms.size());
    tmin.assign(static_cast<size_t>(n) * n, Rational(0));
    tmax.assign(static_cast<size_t>(n) * n, Rational(0));
    // Each (i, j) slot is written by exactly one iteration; GMP allocations are
    // malloc-backed and thread-safe.
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            MetricBounds b = atom_metric(atoms[i], atoms[j], kind);
            tmin[static_cast<size_t>(i) * n + j] = b.dmin;
            tmax[static_cast<size_t>(i) * n + j] = b.dmax;
        }
    }
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            tmin[static_cast<size_t>(i) * n + j] = tmin[static_cast<size_t>(j) * n + i];
            tmax[static_cast<size_t>(i) * n + j] = tmax[static_cast<size_t>(j) * n + i];
        }
    }
}

}  // namespace clopen
