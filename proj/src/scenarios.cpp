#include "clopen/scenarios.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace clopen {

namespace {

Rational grid_below(const FiniteModel& model, const Rational& bound) {
    Rational best(0);
    for (const Rational& g : threshold_grid(model))
        if (g < bound) best = g;
    return best;
}

Json named_verdict(const std::string& name, Json report) {
    Json out;
    out["name"] = name;
    out["report"] = std::move(report);
    return out;
}

}  // namespace

ModelPtr random_interval_model(uint64_t seed, int atoms) {
    std::mt19937_64 rng(seed);
    const int slots = 4 * atoms;
    std::set<long> chosen;
    while (static_cast<int>(chosen.size()) < atoms)
        chosen.insert(static_cast<long>(rng() % static_cast<uint64_t>(slots)));
    std::vector<Atom> list;
    int id = 0;
    for (long s : chosen) {
        Interval iv{Rational(s, 4L * atoms), Rational(s, 4L * atoms) + Rational(1, 16L * atoms)};
        iv.lo.canonicalize();
        iv.hi.canonicalize();
        Atom a;
        a.id = id++;
        a.diameter = iv.hi - iv.lo;
        a.geometry = iv;
        list.push_back(std::move(a));
    }
    return make_model(1, MetricKind::interval, std::move(list));
}

ScenarioOutcome run_verify_example(int level, const std::vector<Rational>& eps_list,
                                   const TrackerOptions& opts) {
    ScenarioOutcome out;
    SystemFamily family = build_modified_odometer(level);
    const Rational eps = eps_list.empty() ? rat(1, 8) : eps_list.front();

    Json report;
    report["format"] = "clopen-report/1";
    report["kind"] = "scenario";
    report["scenario"] = "verify-example";
    Json inputs;
    inputs["level"] = level;
    Json eps_json = Json::array();
    for (const Rational& e : eps_list.empty() ? std::vector<Rational>{eps} : eps_list)
        eps_json.push_back(rational_json(e));
    inputs["epsilon_grid"] = std::move(eps_json);
    report["inputs"] = std::move(inputs);
    Json verdicts = Json::array();
    bool pattern = true;

    // (1) periodic atoms are dense: below the top level, every atom either is
    // rigid-periodic or has a rigid-periodic child.
    {
        Json v;
        v["format"] = "clopen-report/1";
        v["kind"] = "dense-periodic-atoms";
        v["inputs"] = Json{{"system", family_json(family)}};
        bool ok = true;
        Json cert = Json::array();
        for (int k = 1; k < family.depth(); ++k) {
            const SystemLevel& lvl = family.level(k);
            const SystemLevel& fine = family.level(k + 1);
            const std::vector<int>& par = family.parent[static_cast<size_t>(k) - 1];
            for (int a = 0; a < lvl.size(); ++a) {
                int found = -1;
                if (lvl.periods[static_cast<size_t>(a)].kind == PeriodSet::Kind::exact) {
                    found = a;
                } else {
                    for (int c = 0; c < fine.size(); ++c)
                        if (par[static_cast<size_t>(c)] == a &&
                            fine.periods[static_cast<size_t>(c)].kind == PeriodSet::Kind::exact) {
                            found = c;
                            break;
                        }
                }
                if (found == -1) ok = false;
                Json w;
                w["level"] = k;
                w["atom"] = a;
                w["periodic_witness"] = found;
                cert.push_back(std::move(w));
            }
        }
        v["result"] = ok ? "certified" : "refuted";
        v["certificate"] = std::move(cert);
        pattern = pattern && ok;
        verdicts.push_back(named_verdict("dense-periodic-atoms", std::move(v)));
    }

    // (2) equicontinuity certificate
    {
        EquicontinuityResult eq = equicontinuity_modulus(family, eps);
        pattern = pattern && eq.result == VerdictKind::certified;
        verdicts.push_back(named_verdict("equicontinuity", equicontinuity_report(family, eq)));
    }

    const SystemLevel& sys = family.top();
    const Rational delta = grid_below(*sys.model, sys.model->min_gap);

    // (3) periodic shadowing certified
    {
        ShadowingVerdict v = check_periodic_shadowing(sys, eps, delta, PeriodicVariant::periodic, opts);
        pattern = pattern && v.result == VerdictKind::certified;
        verdicts.push_back(named_verdict(
            "periodic-shadowing",
            shadowing_report(family, level, v, "periodic-shadowing", "periodic", opts)));
    }

    // (4) strict refuted, witnessed by the interval 2^K-cycle with exhaustive
    // period evidence
    {
        ShadowingVerdict v = check_periodic_shadowing(sys, eps, delta, PeriodicVariant::strict, opts);
        bool ok = v.result == VerdictKind::refuted && v.witness.has_value();
        if (ok) {
            const std::vector<int>& cyc = v.witness->cycle;
            ok = static_cast<long>(cyc.size()) == (1L << level) + 1;
            for (size_t i = 0; ok && i < cyc.size(); ++i)
                if (cyc[i] >= (1 << level)) ok = false;  // stays on interval atoms
        }
        pattern = pattern && ok;
        verdicts.push_back(named_verdict(
            "strict-shadowing-refuted",
            shadowing_report(family, level, v, "periodic-shadowing", "strict", opts)));
    }

    // (5) the cube satisfies strict periodic shadowing
    {
        SystemFamily cube = family_power(family, 3);
        ShadowingVerdict v =
            check_periodic_shadowing(cube.top(), eps, delta, PeriodicVariant::strict, opts);
        pattern = pattern && v.result == VerdictKind::certified;
        verdicts.push_back(named_verdict(
            "cube-strict-shadowing",
            shadowing_report(cube, level, v, "periodic-shadowing", "strict", opts)));
    }

    report["verdicts"] = std::move(verdicts);
    report["expected_pattern"] = pattern;
    out.report = std::move(report);
    out.expected_pattern = pattern;
    return out;
}

ScenarioOutcome run_scenario(const std::string& name, uint64_t seed, const TrackerOptions& opts) {
    ScenarioOutcome out;
    Json report;
    report["format"] = "clopen-report/1";
    report["kind"] = "scenario";
    report["scenario"] = name;
    Json verdicts = Json::array();
    bool pattern = true;

    if (name == "corollary-1.1") {
        SystemFamily fam = build_odometer({2, 4, 8, 16, 32}, 5);
        report["inputs"] = Json{{"seed", seed}, {"level", 5}};
        ContinuousShadowingResult cs = continuous_shadowing_construct(fam, rat(1, 8), opts);
        pattern = pattern && cs.result == VerdictKind::certified;
        verdicts.push_back(named_verdict("continuous-shadowing", continuous_report(fam, cs)));
        ProbeOptions popts;
        popts.seed = seed;
        StabilityReport probe = stability_probe(fam, rat(1, 8), popts, opts);
        pattern = pattern && probe.mode == StabilityReport::Mode::refuted_by_necessary_condition;
        verdicts.push_back(
            named_verdict("stability-probe", stability_report_json(fam, probe, popts)));
    } else if (name == "corollary-1.3") {
        const int deep = 7, analysis = 4;
        report["inputs"] = Json{{"seed", seed}, {"level", deep}, {"analysis_level", analysis}};
        SystemFamily fam = build_modified_odometer(deep);
        ProbeOptions popts;
        popts.seed = seed;
        popts.analysis_level = analysis;
        popts.perturb_level = analysis;  // the refutation needs no perturbations
        StabilityReport fprobe = stability_probe(fam, rat(1, 8), popts, opts);
        pattern = pattern && fprobe.mode == StabilityReport::Mode::refuted_by_necessary_condition;
        verdicts.push_back(
            named_verdict("base-system-probe", stability_report_json(fam, fprobe, popts)));

        SystemFamily cube = family_power(fam, 3);
        ProbeOptions cpopts;
        cpopts.seed = seed;
        cpopts.samples = 50;
        cpopts.analysis_level = analysis;
        cpopts.perturb_level = deep;
        StabilityReport cprobe = stability_probe(cube, rat(1, 8), cpopts, opts);
        pattern = pattern && cprobe.mode == StabilityReport::Mode::constructive &&
                  cprobe.failures == 0 && cprobe.construction &&
                  cprobe.construction->beta > 0 &&
                  cprobe.construction->h.d_h_id_bound < rat(1, 4);
        verdicts.push_back(
            named_verdict("cube-system-probe", stability_report_json(cube, cprobe, cpopts)));
    } else if (name == "corollary-1.4") {
        report["inputs"] = Json{{"seed", seed}, {"models", 20}};
        std::mt19937_64 rng(seed);
        for (int i = 0; i < 20; ++i) {
            const int atoms = 2 + static_cast<int>(rng() % 31);
            ModelPtr model = random_interval_model(rng(), atoms);
            SystemFamily fam = family_of_level(build_identity(model));
            ProbeOptions popts;
            popts.seed = seed + static_cast<uint64_t>(i);
            StabilityReport probe = stability_probe(fam, model->min_gap, popts, opts);
            bool ok = probe.mode == StabilityReport::Mode::constructive && probe.failures == 0 &&
                      probe.construction && probe.construction->beta == model->min_gap;
            pattern = pattern && ok;
            verdicts.push_back(named_verdict("identity-" + std::to_string(i),
                                             stability_report_json(fam, probe, popts)));
        }
    } else if (name == "proposition-1.1") {
        // All points periodic: the rigid Cantor-piece bands alone.
        SystemFamily example = build_modified_odometer(4);
        const SystemLevel& src = example.top();
        std::vector<Atom> atoms;
        std::vector<int> pi;
        std::vector<PeriodSet> periods;
        const int jcount = 1 << 4;
        for (int a = jcount; a < src.size(); ++a) {
            Atom copy = src.model->atoms[static_cast<size_t>(a)];
            copy.id = a - jcount;
            atoms.push_back(std::move(copy));
            pi.push_back(src.pi[static_cast<size_t>(a)] - jcount);
            periods.push_back(src.periods[static_cast<size_t>(a)]);
        }
        SystemLevel lvl;
        lvl.model = make_model(1, MetricKind::interval, std::move(atoms));
        lvl.pi = std::move(pi);
        lvl.pi_inv.assign(lvl.pi.size(), -1);
        for (size_t i = 0; i < lvl.pi.size(); ++i)
            lvl.pi_inv[static_cast<size_t>(lvl.pi[i])] = static_cast<int>(i);
        lvl.periods = std::move(periods);
        SystemFamily fam = family_of_level(std::move(lvl));
        report["inputs"] = Json{{"seed", seed}};

        for (const Rational& eps : {rat(1, 8), rat(1, 100), rat(1, 10000)}) {
            EquicontinuityResult eq = equicontinuity_modulus(fam, eps);
            pattern = pattern && eq.result == VerdictKind::certified;
            verdicts.push_back(named_verdict("equicontinuity-" + format_rational(eps),
                                             equicontinuity_report(fam, eq)));
        }
        const SystemLevel& sys = fam.top();
        std::vector<Rational> grid = threshold_grid(*sys.model);
        Json strict_summary = Json::array();
        bool all_ok = true;
        for (const Rational& eps : grid) {
            if (eps < sys.model->mesh) continue;
            // ascending scan: the smallest positive delta certifies on the plain
            // orbit graph, which is also the cheapest cell to decide
            bool found = false;
            for (const Rational& delta : grid) {
                if (delta <= 0) continue;
                ShadowingVerdict v =
                    check_periodic_shadowing(sys, eps, delta, PeriodicVariant::strict, opts);
                if (v.result == VerdictKind::certified) {
                    Json e;
                    e["epsilon"] = rational_json(eps);
                    e["delta"] = rational_json(delta);
                    strict_summary.push_back(std::move(e));
                    found = true;
                }
                break;
            }
            all_ok = all_ok && found;
        }
        pattern = pattern && all_ok;
        Json sv;
        sv["format"] = "clopen-report/1";
        sv["kind"] = "strict-grid-summary";
        sv["inputs"] = Json{{"system", family_json(fam)}};
        sv["result"] = all_ok ? "certified" : "refuted";
        sv["certified_cells"] = std::move(strict_summary);
        verdicts.push_back(named_verdict("strict-at-every-eps", std::move(sv)));
    } else {
        throw std::invalid_argument("unknown scenario: " + name);
    }

    report["verdicts"] = std::move(verdicts);
    report["expected_pattern"] = pattern;
    out.report = std::move(report);
    out.expected_pattern = pattern;
    return out;
}

}  // namespace clopen
