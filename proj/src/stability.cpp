#include "clopen/stability.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace clopen {

namespace {

// Deterministic bounded draw (avoids distribution implementation differences).
long draw(std::mt19937_64& rng, long bound) { return static_cast<long>(rng() % static_cast<uint64_t>(bound)); }

bool translate_compatible(const Atom& a, const Atom& b) {
    if (a.geometry.index() != b.geometry.index()) return false;
    if (std::get_if<CylinderWord>(&a.geometry)) return true;
    return a.diameter == b.diameter;
}

Rational swap_distance_upper(const SystemLevel& sys, const std::vector<std::pair<int, int>>& pairs) {
    // g = tau o f differs from f only where tau moves the image; the inverse pair
    // is (f^-1(a), f^-1(b)). Unmoved atoms agree pointwise.
    Rational best(0);
    const FiniteModel& m = *sys.model;
    for (auto [a, b] : pairs) {
        best = std::max(best, m.dmax(a, b));
        best = std::max(best, m.dmax(sys.pi_inv[static_cast<size_t>(a)],
                                     sys.pi_inv[static_cast<size_t>(b)]));
    }
    return best;
}

std::vector<int> transpositions(int n, const std::vector<std::pair<int, int>>& pairs) {
    std::vector<int> tau(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) tau[static_cast<size_t>(i)] = i;
    for (auto [a, b] : pairs) {
        tau[static_cast<size_t>(a)] = b;
        tau[static_cast<size_t>(b)] = a;
    }
    return tau;
}

}  // namespace

SemiConjugacy verify_semiconjugacy(const SystemLevel& f, const SystemLevel& g,
                                   std::vector<int> h, SemiConjugacy::Realization realization) {
    if (!models_equal(*f.model, *g.model))
        throw std::invalid_argument("semiconjugacy needs a shared model");
    const int n = f.size();
    if (static_cast<int>(h.size()) != n) throw std::invalid_argument("h table size mismatch");

    SemiConjugacy out;
    out.realization = realization;
    out.equation_verified = true;
    for (int a = 0; a < n; ++a) {
        if (h[static_cast<size_t>(g.pi[a])] != f.pi[static_cast<size_t>(h[static_cast<size_t>(a)])]) {
            out.equation_verified = false;
            break;
        }
    }
    bool identity = true;
    for (int a = 0; a < n; ++a)
        if (h[static_cast<size_t>(a)] != a) identity = false;
    if (realization == SemiConjugacy::Realization::identity_map && !identity)
        throw std::invalid_argument("identity realization requires the identity table");

    Rational bound(0);
    if (realization == SemiConjugacy::Realization::part_collapse) {
        for (int a = 0; a < n; ++a)
            bound = std::max(bound, f.model->dmax(a, h[static_cast<size_t>(a)]));
    }
    out.d_h_id_bound = bound;

    std::set<int> image(h.begin(), h.end());
    out.surjective = static_cast<int>(image.size()) == n;
    out.h = std::move(h);
    return out;
}

ConjugacyConstruction build_conjugating_map(const SystemFamily& family, const Rational& eps,
                                            int analysis_level, const TrackerOptions& opts) {
    ConjugacyConstruction con;
    const int A = analysis_level == 0 ? family.depth() : analysis_level;
    con.analysis_level = A;
    con.epsilon = eps;
    const SystemLevel& sys = family.level(A);
    const FiniteModel& model = *sys.model;

    EquicontinuityResult eq = equicontinuity_modulus(family, eps);
    if (eq.result != VerdictKind::certified)
        throw ConjugacyError("missing certificate: equicontinuity modulus at eps (" + eq.note + ")");

    // Largest grid delta below eps with certified strict periodic shadowing.
    std::vector<Rational> grid = threshold_grid(model);
    bool have_delta = false;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
        if (!(*it < eps)) continue;
        ShadowingVerdict v = check_periodic_shadowing(sys, eps, *it, PeriodicVariant::strict, opts);
        if (v.result == VerdictKind::certified) {
            con.delta = *it;
            have_delta = true;
            break;
        }
    }
    if (!have_delta)
        throw ConjugacyError("missing certificate: strict periodic shadowing below eps");

    // Decomposition scale: largest gamma whose parts are small against delta;
    // falling back to direct validation of the representative cycles.
    auto rep_cycles_valid = [&](const CyclicDecomposition& dec) {
        for (const auto& comp : dec.components) {
            std::vector<int> reps;
            for (const auto& part : comp.parts) reps.push_back(*std::min_element(part.begin(), part.end()));
            for (size_t j = 0; j < reps.size(); ++j) {
                int from = reps[j];
                int to = reps[(j + 1) % reps.size()];
                if (model.dmin(sys.pi[static_cast<size_t>(from)], to) > con.delta) return false;
            }
        }
        return true;
    };

    bool have_gamma = false;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
        Rational r = r_delta(sys, *it);
        if (r < con.delta) {
            con.gamma = *it;
            con.r_gamma = r;
            con.gamma_by_r_bound = true;
            have_gamma = true;
            break;
        }
    }
    if (!have_gamma) {
        for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
            CyclicDecomposition dec = full_cyclic_decomposition(sys, *it);
            if (rep_cycles_valid(dec)) {
                con.gamma = *it;
                con.r_gamma = r_delta(sys, *it);
                con.gamma_by_r_bound = false;
                con.notes.push_back("gamma selected by direct representative-cycle validation");
                have_gamma = true;
                break;
            }
        }
    }
    if (!have_gamma) throw ConjugacyError("no usable decomposition scale gamma");

    con.decomposition = full_cyclic_decomposition(sys, con.gamma);
    if (!rep_cycles_valid(con.decomposition))
        throw ConjugacyError("representative cycles are not delta-cycles at the chosen gamma");

    // Shadows per component, preferring rigid (exact-period) atoms so that the
    // representative point realizes the required periodicity.
    std::vector<int> h(static_cast<size_t>(model.size()), -1);
    for (const auto& comp : con.decomposition.components) {
        const Integer m(comp.parts.size());
        std::vector<int> reps;
        for (const auto& part : comp.parts) reps.push_back(*std::min_element(part.begin(), part.end()));

        auto tracks = [&](int P) {
            int lift = P;
            for (size_t t = 0; t <= reps.size(); ++t) {
                int target = reps[t % reps.size()];
                if (model.dmax(lift, target) > eps) return false;
                lift = sys.pi[static_cast<size_t>(lift)];
            }
            return true;
        };
        // Prefer the cycle's own base atom when rigid, then any rigid atom, then
        // tail-certified atoms (whose representative point realizes the period
        // only at finer levels).
        int shadow = -1;
        auto valid = [&](int P, PeriodSet::Kind kind) {
            const PeriodSet& ps = sys.periods[static_cast<size_t>(P)];
            return ps.kind == kind && ps.must_divide(m) && tracks(P);
        };
        if (valid(reps[0], PeriodSet::Kind::exact)) shadow = reps[0];
        for (int P = 0; P < model.size() && shadow == -1; ++P)
            if (valid(P, PeriodSet::Kind::exact)) shadow = P;
        if (shadow == -1 && valid(reps[0], PeriodSet::Kind::tail)) shadow = reps[0];
        for (int P = 0; P < model.size() && shadow == -1; ++P)
            if (valid(P, PeriodSet::Kind::tail)) shadow = P;
        if (shadow == -1)
            throw ConjugacyError("no strict shadow for a representative cycle despite the certificate");
        if (sys.forward(shadow, m.get_si()) != shadow)
            throw ConjugacyError("period metadata inconsistent with the atom cycle");
        if (sys.periods[static_cast<size_t>(shadow)].kind == PeriodSet::Kind::tail)
            con.notes.push_back("shadow atom " + std::to_string(shadow) +
                                " certifies the period via deep content; its representative point "
                                "realizes it only at finer levels");
        con.shadow_atoms.push_back(shadow);
        con.periods.push_back(m);

        int lift = shadow;
        for (size_t j = 0; j < comp.parts.size(); ++j) {
            for (int a : comp.parts[j]) h[static_cast<size_t>(a)] = lift;
            lift = sys.pi[static_cast<size_t>(lift)];
        }
    }
    for (int a = 0; a < model.size(); ++a)
        if (h[static_cast<size_t>(a)] == -1)
            throw ConjugacyError("atom outside the chain-recurrent decomposition");

    // Admission bound: min gap between distinct parts, across all components.
    struct PartRef {
        int comp, part;
    };
    std::vector<PartRef> part_of(static_cast<size_t>(model.size()), {-1, -1});
    for (size_t ci = 0; ci < con.decomposition.components.size(); ++ci)
        for (size_t pj = 0; pj < con.decomposition.components[ci].parts.size(); ++pj)
            for (int a : con.decomposition.components[ci].parts[pj])
                part_of[static_cast<size_t>(a)] = {static_cast<int>(ci), static_cast<int>(pj)};
    bool any_pair = false;
    Rational beta(0);
    for (int a = 0; a < model.size(); ++a)
        for (int b = a + 1; b < model.size(); ++b) {
            if (part_of[static_cast<size_t>(a)].comp == part_of[static_cast<size_t>(b)].comp &&
                part_of[static_cast<size_t>(a)].part == part_of[static_cast<size_t>(b)].part)
                continue;
            Rational d = model.dmin(a, b);
            if (!any_pair || d < beta) {
                beta = d;
                any_pair = true;
            }
        }
    if (!any_pair) {
        beta = model.space_diameter();
        con.notes.push_back("single part: every exact perturbation is admitted");
    }
    con.beta = beta;

    con.h = verify_semiconjugacy(sys, sys, h, SemiConjugacy::Realization::part_collapse);
    if (!con.h.equation_verified)
        throw ConjugacyError("constructed map fails its own conjugacy equation");
    return con;
}

std::vector<int> deepen_conjugacy(const SystemFamily& family, const ConjugacyConstruction& con,
                                  int deep_level) {
    const int A = con.analysis_level;
    if (deep_level < A) throw std::invalid_argument("deep level above the analysis level");
    // child lists per level
    std::vector<std::vector<std::vector<int>>> children;  // [k-1][atom at k] -> atoms at k+1
    for (int k = A; k < deep_level; ++k) {
        const std::vector<int>& par = family.parent[static_cast<size_t>(k) - 1];
        std::vector<std::vector<int>> ch(static_cast<size_t>(family.level(k).size()));
        for (size_t a = 0; a < par.size(); ++a) ch[static_cast<size_t>(par[a])].push_back(static_cast<int>(a));
        children.push_back(std::move(ch));
    }

    auto descend = [&](int atom_at_A) {
        int cur = atom_at_A;
        const Geometry& target_geom =
            family.level(A).model->atoms[static_cast<size_t>(atom_at_A)].geometry;
        for (int k = A; k < deep_level; ++k) {
            const auto& ch = children[static_cast<size_t>(k - A)][static_cast<size_t>(cur)];
            int next = -1;
            for (int c : ch) {
                const Geometry& g =
                    family.level(k + 1).model->atoms[static_cast<size_t>(c)].geometry;
                if (std::get_if<CylinderWord>(&g)) {
                    // leftmost point of a cylinder: the all-zeros extension
                    const auto& wc = std::get<CylinderWord>(g).digits;
                    const auto& wp = std::get<CylinderWord>(
                                         family.level(k).model->atoms[static_cast<size_t>(cur)].geometry)
                                         .digits;
                    bool zeros = true;
                    for (size_t i = wp.size(); i < wc.size(); ++i)
                        if (wc[i] != 0) zeros = false;
                    if (zeros) next = c;
                } else {
                    Rational p = hull_lo(target_geom);
                    if (!(p < hull_lo(g)) && !(hull_hi(g) < p)) next = c;
                }
                if (next != -1) break;
            }
            if (next == -1)
                throw std::runtime_error("no child contains the representative point");
            cur = next;
        }
        return cur;
    };

    const SystemLevel& deep = family.level(deep_level);
    std::vector<int> h_deep(static_cast<size_t>(deep.size()));
    std::vector<int> memo(static_cast<size_t>(family.level(A).size()), -1);
    for (int a = 0; a < deep.size(); ++a) {
        int anc = family.ancestor(deep_level, a, A);
        int target = con.h.h[static_cast<size_t>(anc)];
        if (memo[static_cast<size_t>(target)] == -1)
            memo[static_cast<size_t>(target)] = descend(target);
        h_deep[static_cast<size_t>(a)] = memo[static_cast<size_t>(target)];
    }
    return h_deep;
}

StabilityReport stability_probe(const SystemFamily& family, const Rational& eps,
                                const ProbeOptions& popts, const TrackerOptions& opts) {
    StabilityReport rep;
    rep.epsilon = eps;
    const int A = popts.analysis_level == 0 ? family.depth() : popts.analysis_level;
    const SystemLevel& sys = family.level(A);
    std::vector<Rational> grid = threshold_grid(*sys.model);

    // Necessary condition: strict periodic shadowing refuted at every grid delta
    // for some grid eps' <= eps.
    for (const Rational& eps_candidate : grid) {
        if (eps_candidate <= 0 || eps_candidate > eps) continue;
        bool all_refuted = true;
        std::vector<std::pair<Rational, VerdictKind>> scan;
        std::optional<ShadowingWitness> witness;
        for (const Rational& delta : grid) {
            ShadowingVerdict v =
                check_periodic_shadowing(sys, eps_candidate, delta, PeriodicVariant::strict, opts);
            scan.emplace_back(delta, v.result);
            if (v.result != VerdictKind::refuted) {
                all_refuted = false;
                break;
            }
            witness = v.witness;
        }
        if (all_refuted) {
            rep.mode = StabilityReport::Mode::refuted_by_necessary_condition;
            rep.refuting_epsilon = eps_candidate;
            rep.strict_scan = std::move(scan);
            rep.witness = std::move(witness);
            return rep;
        }
    }

    rep.mode = StabilityReport::Mode::constructive;
    ConjugacyConstruction con = build_conjugating_map(family, eps, A, opts);

    const int W = popts.perturb_level == 0 ? family.depth() : popts.perturb_level;
    rep.perturb_level = W;
    const SystemLevel& deep = family.level(W);
    std::vector<int> h_deep = W == A ? con.h.h : deepen_conjugacy(family, con, W);

    auto verify_equation = [&](const SystemLevel& g) {
        for (int x = 0; x < deep.size(); ++x)
            if (h_deep[static_cast<size_t>(g.pi[x])] !=
                deep.pi[static_cast<size_t>(h_deep[static_cast<size_t>(x)])])
                return false;
        return true;
    };

    // Exhaustive admitted single swaps at the perturbation level.
    std::vector<std::pair<int, int>> admitted;
    for (int a = 0; a < deep.size(); ++a)
        for (int b = a + 1; b < deep.size(); ++b) {
            if (!translate_compatible(deep.model->atoms[static_cast<size_t>(a)],
                                      deep.model->atoms[static_cast<size_t>(b)]))
                continue;
            if (swap_distance_upper(deep, {{a, b}}) < con.beta) admitted.emplace_back(a, b);
        }
    for (auto [a, b] : admitted) {
        PerturbationCheck chk;
        chk.swaps = {{a, b}};
        chk.distance_upper = swap_distance_upper(deep, chk.swaps);
        SystemLevel g = perturb(deep, transpositions(deep.size(), chk.swaps));
        chk.equation_holds = verify_equation(g);
        if (!chk.equation_holds) ++rep.failures;
        ++rep.exhaustive_single_swaps;
        if (popts.keep_checks || !chk.equation_holds) rep.checks.push_back(std::move(chk));
    }

    // Seeded multi-swap samples with disjoint support.
    std::mt19937_64 rng(popts.seed);
    if (!admitted.empty()) {
        for (int s = 0; s < popts.samples; ++s) {
            const long want = 2 + draw(rng, 4);
            std::set<int> used;
            PerturbationCheck chk;
            for (long tries = 0; tries < 64 && static_cast<long>(chk.swaps.size()) < want; ++tries) {
                auto [a, b] = admitted[static_cast<size_t>(draw(rng, static_cast<long>(admitted.size())))];
                if (used.count(a) || used.count(b)) continue;
                used.insert(a);
                used.insert(b);
                chk.swaps.emplace_back(a, b);
            }
            if (chk.swaps.empty()) continue;
            chk.distance_upper = swap_distance_upper(deep, chk.swaps);
            if (!(chk.distance_upper < con.beta)) continue;
            SystemLevel g = perturb(deep, transpositions(deep.size(), chk.swaps));
            chk.equation_holds = verify_equation(g);
            if (!chk.equation_holds) ++rep.failures;
            ++rep.sampled_multi_swaps;
            if (popts.keep_checks || !chk.equation_holds) rep.checks.push_back(std::move(chk));
        }
    } else {
        rep.note = "no admitted swap perturbations at this level; verification is vacuous";
    }

    rep.construction = std::move(con);
    return rep;
}

}  // namespace clopen
