// Test-only oracles and generators, independent of the production search paths.
// The verdict oracles run a recursive DFS over definitional states with plain
// bitmask survivor sets; the pure lasso enumerator checks small instances with
// no memoization at all.

#pragma once

#include "clopen/chain.hpp"
#include "clopen/shadowing.hpp"
#include "clopen/system.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace clopen::testing {

inline long draw(std::mt19937_64& rng, long bound) {
    return static_cast<long>(rng() % static_cast<uint64_t>(bound));
}

// ---------------------------------------------------------------------------
// generators

inline ModelPtr random_small_interval_model(std::mt19937_64& rng, int atoms) {
    const int slots = 3 * atoms;
    std::set<long> chosen;
    while (static_cast<int>(chosen.size()) < atoms) chosen.insert(draw(rng, slots));
    std::vector<Atom> list;
    int id = 0;
    for (long s : chosen) {
        // diameter varies per atom; gaps may be smaller than diameters
        Rational lo(2 * s, 2L * 3 * atoms);
        Rational width(1 + draw(rng, 2), 2L * 3 * atoms * (1 + draw(rng, 3)));
        lo.canonicalize();
        width.canonicalize();
        Atom a;
        a.id = id++;
        a.geometry = Interval{lo, lo + width};
        a.diameter = width;
        list.push_back(std::move(a));
    }
    return make_model(1, MetricKind::interval, std::move(list));
}

inline ModelPtr complete_binary_model(int level) {
    std::vector<Atom> atoms;
    for (long l = 0; l < (1L << level); ++l) {
        CylinderWord w;
        for (int i = 0; i < level; ++i) w.digits.push_back(static_cast<uint8_t>((l >> i) & 1));
        Atom a;
        a.id = static_cast<int>(l);
        a.diameter = pow2(-(level + 1));
        a.geometry = std::move(w);
        atoms.push_back(std::move(a));
    }
    return make_model(level, MetricKind::cylinder_sup, std::move(atoms),
                      std::vector<unsigned>(static_cast<size_t>(level), 2));
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
    std::vector<int> pi(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pi[static_cast<size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) std::swap(pi[static_cast<size_t>(i)], pi[static_cast<size_t>(draw(rng, i + 1))]);
    return pi;
}

// Random exact permutation system with per-cycle period declarations.
inline SystemLevel random_system(std::mt19937_64& rng, int max_atoms = 10) {
    ModelPtr model;
    if (draw(rng, 3) == 0) {
        model = complete_binary_model(2 + static_cast<int>(draw(rng, 2)));  // 4 or 8 atoms
    } else {
        model = random_small_interval_model(rng, 2 + static_cast<int>(draw(rng, max_atoms - 1)));
    }
    SystemLevel sys;
    sys.pi = random_permutation(rng, model->size());
    sys.pi_inv.assign(sys.pi.size(), 0);
    for (size_t i = 0; i < sys.pi.size(); ++i) sys.pi_inv[static_cast<size_t>(sys.pi[i])] = static_cast<int>(i);
    sys.periods.assign(sys.pi.size(), PeriodSet::make_unknown());
    sys.model = std::move(model);

    std::vector<bool> seen(sys.pi.size(), false);
    for (int a = 0; a < sys.size(); ++a) {
        if (seen[static_cast<size_t>(a)]) continue;
        std::vector<int> cycle;
        for (int x = a; !seen[static_cast<size_t>(x)]; x = sys.pi[static_cast<size_t>(x)]) {
            seen[static_cast<size_t>(x)] = true;
            cycle.push_back(x);
        }
        const long len = static_cast<long>(cycle.size());
        PeriodSet ps;
        switch (draw(rng, 10)) {
            case 0: case 1: case 2:
                ps = PeriodSet::make_none();
                break;
            case 3:
                ps = PeriodSet::make_unknown();
                break;
            case 4:
                ps = PeriodSet::make_tail(Integer(len * (1 + draw(rng, 2))));
                break;
            default:
                ps = PeriodSet::make_exact(Integer(len * (1 + draw(rng, 2))));
                break;
        }
        for (int x : cycle) sys.periods[static_cast<size_t>(x)] = ps;
    }
    return sys;
}

// ---------------------------------------------------------------------------
// metric helpers

// Exact distance of two sampled points given by finite digit words (cylinder
// metric) at equal depth.
inline Rational word_point_distance(const std::vector<uint8_t>& x, const std::vector<uint8_t>& y) {
    Rational best(0);
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] != y[i]) {
            long diff = std::abs(static_cast<long>(x[i]) - static_cast<long>(y[i]));
            best = std::max(best, Rational(Rational(diff) * pow2(-static_cast<int>(i + 1))));
        }
    }
    return best;
}

// A sampled point of an interval-kind atom: rational point inside the hull (for
// ScaledCantor: an exact Cantor-set point via ternary digits in {0,2}).
inline Rational sample_point(std::mt19937_64& rng, const Geometry& g, int depth = 12) {
    if (const auto* iv = std::get_if<Interval>(&g)) {
        Rational t(draw(rng, 1 << depth), 1L << depth);
        t.canonicalize();
        return iv->lo + t * (iv->hi - iv->lo);
    }
    const auto* sc = std::get_if<ScaledCantor>(&g);
    Rational c(0);
    Rational scale(1);
    for (int i = 0; i < depth; ++i) {
        scale /= 3;
        if (draw(rng, 2)) c += 2 * scale;
    }
    return sc->offset + sc->scale * c;
}

// ---------------------------------------------------------------------------
// graph period oracle: enumerate simple cycles, gcd their lengths

inline Integer simple_cycle_gcd(const std::vector<std::vector<int>>& adj,
                                const std::vector<int>& component) {
    std::set<int> comp(component.begin(), component.end());
    Integer g(0);
    std::vector<int> stack;
    std::vector<bool> on_stack(adj.size(), false);
    std::function<void(int, int)> dfs = [&](int root, int v) {
        stack.push_back(v);
        on_stack[static_cast<size_t>(v)] = true;
        for (int w : adj[static_cast<size_t>(v)]) {
            if (!comp.count(w) || w < root) continue;
            if (w == root) {
                Integer len(static_cast<long>(stack.size()));
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), len.get_mpz_t());
            } else if (!on_stack[static_cast<size_t>(w)]) {
                dfs(root, w);
            }
        }
        stack.pop_back();
        on_stack[static_cast<size_t>(v)] = false;
    };
    for (int root : component) dfs(root, root);
    return g == 0 ? Integer(1) : g;
}

// ---------------------------------------------------------------------------
// verdict oracles: recursive DFS over (atom, survivor mask[, length residue])

struct OracleCell {
    const SystemLevel& sys;
    Rational eps, delta;
    std::vector<std::vector<int>> adj;
    std::vector<uint32_t> close_max, close_min;

    OracleCell(const SystemLevel& s, const Rational& e, const Rational& d) : sys(s), eps(e), delta(d) {
        const FiniteModel& m = *s.model;
        const int n = m.size();
        adj.assign(static_cast<size_t>(n), {});
        close_max.assign(static_cast<size_t>(n), 0);
        close_min.assign(static_cast<size_t>(n), 0);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (m.dmin(s.pi[static_cast<size_t>(a)], b) <= d) adj[static_cast<size_t>(a)].push_back(b);
                if (m.dmax(b, a) <= e) close_max[static_cast<size_t>(a)] |= uint32_t(1) << b;
                if (m.dmin(b, a) <= e) close_min[static_cast<size_t>(a)] |= uint32_t(1) << b;
            }
        }
    }

    uint32_t shift(uint32_t mask) const {
        uint32_t out = 0;
        for (int i = 0; i < sys.size(); ++i)
            if (mask & (uint32_t(1) << i)) out |= uint32_t(1) << sys.pi[static_cast<size_t>(i)];
        return out;
    }
};

inline VerdictKind oracle_shadowing(const SystemLevel& sys, const Rational& eps,
                                    const Rational& delta) {
    OracleCell cell(sys, eps, delta);
    auto death_reachable = [&](const std::vector<uint32_t>& close) {
        std::set<std::pair<int, uint32_t>> seen;
        bool dead = false;
        std::function<void(int, uint32_t)> dfs = [&](int a, uint32_t mask) {
            if (dead || !seen.emplace(a, mask).second) return;
            if (mask == 0) {
                dead = true;
                return;
            }
            uint32_t shifted = cell.shift(mask);
            for (int b : cell.adj[static_cast<size_t>(a)])
                dfs(b, shifted & close[static_cast<size_t>(b)]);
        };
        for (int a0 = 0; a0 < sys.size() && !dead; ++a0)
            dfs(a0, close[static_cast<size_t>(a0)]);
        return dead;
    };
    if (!death_reachable(cell.close_max)) return VerdictKind::certified;
    if (death_reachable(cell.close_min)) return VerdictKind::refuted;
    return VerdictKind::inconclusive;
}

inline VerdictKind oracle_periodic(const SystemLevel& sys, const Rational& eps,
                                   const Rational& delta, PeriodicVariant variant) {
    OracleCell cell(sys, eps, delta);
    long L = 1;
    if (variant == PeriodicVariant::strict) {
        Integer acc(1);
        for (const PeriodSet& p : sys.periods)
            if (p.kind == PeriodSet::Kind::exact || p.kind == PeriodSet::Kind::tail)
                acc = lcm(acc, p.value);
        L = acc.get_si();
    }
    auto candidate_ok = [&](int q, long r, bool certify) {
        const PeriodSet& p = sys.periods[static_cast<size_t>(q)];
        switch (variant) {
            case PeriodicVariant::pseudo: return true;
            case PeriodicVariant::periodic: return certify ? p.must_any() : p.may_any();
            case PeriodicVariant::strict:
                if (p.kind == PeriodSet::Kind::exact || p.kind == PeriodSet::Kind::tail)
                    return Integer(Integer(r) % p.value) == 0;
                return p.kind == PeriodSet::Kind::unknown && !certify;
        }
        return false;
    };
    auto violation = [&](const std::vector<uint32_t>& close, bool certify) {
        for (int a0 = 0; a0 < sys.size(); ++a0) {
            std::set<std::tuple<int, uint32_t, long>> seen;
            bool bad = false;
            std::function<void(int, uint32_t, long)> dfs = [&](int a, uint32_t mask, long r) {
                if (bad || !seen.emplace(a, mask, r).second) return;
                uint32_t shifted = cell.shift(mask);
                for (int b : cell.adj[static_cast<size_t>(a)]) {
                    uint32_t next = shifted & close[static_cast<size_t>(b)];
                    long nr = (r + 1) % L;
                    if (b == a0) {
                        bool ok = false;
                        for (int q = 0; q < sys.size() && !ok; ++q)
                            if ((next & (uint32_t(1) << q)) && candidate_ok(q, nr, certify)) ok = true;
                        if (!ok) {
                            bad = true;
                            return;
                        }
                    }
                    dfs(b, next, nr);
                }
            };
            dfs(a0, close[static_cast<size_t>(a0)], 0);
            if (bad) return true;
        }
        return false;
    };
    if (!violation(cell.close_max, true)) return VerdictKind::certified;
    if (violation(cell.close_min, false)) return VerdictKind::refuted;
    return VerdictKind::inconclusive;
}

// ---------------------------------------------------------------------------
// pure lasso enumeration (no memoization): sound one-way checks on small cells

struct LassoSummary {
    bool complete = false;        // enumeration finished within the budget
    bool all_dmax_shadowed = true;
    bool some_dmin_unshadowed = false;
    long lassos = 0;
};

inline LassoSummary enumerate_lassos(const SystemLevel& sys, const Rational& eps,
                                     const Rational& delta, long budget = 200000) {
    OracleCell cell(sys, eps, delta);
    const int n = sys.size();
    LassoSummary out;
    long spent = 0;

    auto check_lasso = [&](const std::vector<int>& stem, const std::vector<int>& cycle) {
        ++out.lassos;
        // simulate every candidate until its (lasso position, lift) pair repeats
        bool any_dmax = false, any_dmin = false;
        for (int p = 0; p < n && !(any_dmax && any_dmin); ++p) {
            bool max_ok = true, min_ok = true;
            int lift = p;
            std::set<std::pair<size_t, int>> states;
            size_t pos = 0;
            for (long step = 0; max_ok || min_ok; ++step) {
                int atom = pos < stem.size() ? stem[pos]
                                             : cycle[(pos - stem.size()) % cycle.size()];
                if (sys.model->dmax(lift, atom) > eps) max_ok = false;
                if (sys.model->dmin(lift, atom) > eps) min_ok = false;
                size_t canonical = pos < stem.size()
                                       ? pos
                                       : stem.size() + (pos - stem.size()) % cycle.size();
                if (!states.emplace(canonical, lift).second) break;
                lift = sys.pi[static_cast<size_t>(lift)];
                ++pos;
            }
            any_dmax = any_dmax || max_ok;
            any_dmin = any_dmin || min_ok;
        }
        if (!any_dmax) out.all_dmax_shadowed = false;
        if (!any_dmin) out.some_dmin_unshadowed = true;
    };

    // stems up to n, cycles up to n; the stem's last atom anchors the cycle, so
    // the checked sequence is stem-without-anchor followed by the cycle forever
    std::vector<int> stem;
    std::function<bool(int)> cycles_from = [&](int anchor) {
        std::vector<int> cycle{anchor};
        std::vector<int> prefix(stem.begin(), stem.end() - 1);
        std::function<bool()> extend = [&]() -> bool {
            if (++spent > budget) return false;
            int last = cycle.back();
            for (int b : cell.adj[static_cast<size_t>(last)]) {
                if (b == anchor) check_lasso(prefix, cycle);
                if (static_cast<int>(cycle.size()) < sys.size()) {
                    cycle.push_back(b);
                    if (!extend()) return false;
                    cycle.pop_back();
                }
            }
            return true;
        };
        return extend();
    };
    std::function<bool(int)> stems_from = [&](int a) -> bool {
        if (++spent > budget) return false;
        stem.push_back(a);
        if (!cycles_from(a)) return false;
        if (static_cast<int>(stem.size()) <= sys.size()) {
            for (int b : cell.adj[static_cast<size_t>(a)])
                if (!stems_from(b)) return false;
        }
        stem.pop_back();
        return true;
    };
    bool done = true;
    for (int a0 = 0; a0 < n && done; ++a0) {
        stem.clear();
        // anchor cycles at the path end; stem may be empty via anchor == start
        done = stems_from(a0);
    }
    out.complete = done;
    return out;
}

}  // namespace clopen::testing
