#pragma once

#include "clopen/geometry.hpp"

#include <memory>
#include <string>
#include <vector>

namespace clopen {

// Clopen partition of the space at one resolution level, with exact pairwise
// distance bounds. Immutable after construction.
struct FiniteModel {
    int level = 1;
    MetricKind metric_kind = MetricKind::interval;
    std::vector<unsigned> radix;  // cylinder models: per-position digit radix
    std::vector<Atom> atoms;

    // Symmetric n x n tables, flattened row-major. Complete cylinder models skip
    // materialization and answer from the word rule.
    bool has_tables = false;
    std::vector<Rational> tmin, tmax;

    Rational mesh;     // max atom diameter
    Rational min_gap;  // min dmin over distinct pairs; diameter of the single atom when n == 1

    int size() const { return static_cast<int>(atoms.size()); }
    Rational dmin(int i, int j) const;
    Rational dmax(int i, int j) const;
    // Largest dmax over all pairs: the observable diameter of the carrier.
    Rational space_diameter() const;
};

using ModelPtr = std::shared_ptr<const FiniteModel>;

// Builds tables (parallel kernel), mesh and min_gap. Atom ids must equal indices.
ModelPtr make_model(int level, MetricKind kind, std::vector<Atom> atoms,
                    std::vector<unsigned> radix = {});

struct ValidationIssue {
    std::string rule;  // "disjointness", "coverage", "bound-order", "symmetry", "diameter", "id"
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool valid() const { return issues.empty(); }
};

// Confirms disjointness, coverage (exact for cylinder models), table symmetry and
// bound order, diameter consistency. Returns a report, never throws on violations.
ValidationReport validate_partition(const FiniteModel& model);

// Sorted, deduplicated list of all dmin/dmax entries plus midpoints between
// consecutive distinct values. Every qualitative verdict is constant between
// consecutive grid values, so scanning the grid is exhaustive over all deltas.
std::vector<Rational> threshold_grid(const FiniteModel& model);

// Kernels behind make_model; the parallel one is the production path, the serial
// one is the reference kept for testing and benchmarking.
void build_tables_serial(const std::vector<Atom>& atoms, MetricKind kind,
                         std::vector<Rational>& tmin, std::vector<Rational>& tmax);
void build_tables_parallel(const std::vector<Atom>& atoms, MetricKind kind,
                           std::vector<Rational>& tmin, std::vector<Rational>& tmax);

}  // namespace clopen
