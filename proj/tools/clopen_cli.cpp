// Command-line surface: exact finite-resolution models of zero-dimensional
// dynamics, chain analysis, shadowing certificates, stability probes, and an
// independent replay verifier. All reports are deterministic JSON documents.

#include "clopen/io.hpp"
#include "clopen/replay.hpp"
#include "clopen/scenarios.hpp"
#include "clopen/swap.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

namespace {

using namespace clopen;

constexpr int kExitCertified = 0;
constexpr int kExitRefuted = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitUsage = 64;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    ~Timer() {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        std::cerr << "[clopen] wall-time: " << ms << " ms\n";
    }
};

void emit(const Json& doc, const std::string& output) {
    if (output.empty())
        std::cout << doc.dump(1) << "\n";
    else
        save_json(output, doc);
}

int verdict_exit(VerdictKind v) {
    switch (v) {
        case VerdictKind::certified: return kExitCertified;
        case VerdictKind::refuted: return kExitRefuted;
        case VerdictKind::inconclusive: return kExitInconclusive;
    }
    return kExitInconclusive;
}

std::vector<Integer> parse_chain(const std::string& text) {
    std::vector<Integer> out;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(parse_integer(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

int pick_level(const SystemFamily& fam, int level) {
    if (level == 0) return fam.depth();
    if (level < 1 || level > fam.depth()) throw std::invalid_argument("level out of range");
    return level;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact dynamics on clopen partitions"};
    app.require_subcommand(1);

    std::string output;
    uint64_t seed = 1;
    size_t state_cap = size_t(1) << 18;
    app.add_option("--output", output, "write the report to this path instead of stdout");
    app.add_option("--seed", seed, "seed for randomized runs");
    app.add_option("--state-cap", state_cap, "subset-tracking state cap");

    // build
    auto* build = app.add_subcommand("build", "construct a system file");
    std::string system_kind, chain_text;
    int level = 0, atoms = 0;
    build->add_option("--system", system_kind,
                      "odometer | paper-example | identity | embed-binary-odometer")
        ->required();
    build->add_option("--m", chain_text, "odometer divisibility chain, e.g. 2,4,8");
    build->add_option("--level", level, "resolution level");
    build->add_option("--atoms", atoms, "atom count for identity models");

    // analyze chain
    auto* analyze = app.add_subcommand("analyze", "chain analysis");
    auto* analyze_chain = analyze->add_subcommand("chain", "delta-chain decomposition");
    std::string input, delta_text, mode_text = "existential";
    int at_level = 0;
    analyze_chain->add_option("--input", input, "system file")->required();
    analyze_chain->add_option("--delta", delta_text, "rational delta")->required();
    analyze_chain->add_option("--mode", mode_text, "existential | universal");
    analyze_chain->add_option("--level", at_level, "level (default: finest)");

    // check shadowing / periodic
    auto* check = app.add_subcommand("check", "shadowing checks");
    auto* check_sh = check->add_subcommand("shadowing", "plain shadowing verdict");
    auto* check_pd = check->add_subcommand("periodic", "periodic shadowing verdict");
    std::string eps_text;
    bool strict_flag = false, pseudo_flag = false;
    for (auto* sc : {check_sh, check_pd}) {
        sc->add_option("--input", input, "system file")->required();
        sc->add_option("--eps", eps_text, "rational epsilon")->required();
        sc->add_option("--delta", delta_text, "rational delta")->required();
        sc->add_option("--level", at_level, "level (default: finest)");
    }
    check_pd->add_flag("--strict", strict_flag, "strict variant");
    check_pd->add_flag("--pseudo", pseudo_flag, "pseudo variant");

    // stability
    auto* stability = app.add_subcommand("stability", "topological stability machinery");
    auto* probe = stability->add_subcommand("probe", "necessary-condition / constructive probe");
    int samples = 50, analysis_level = 0, perturb_level = 0;
    probe->add_option("--input", input, "system file")->required();
    probe->add_option("--eps", eps_text, "rational epsilon")->required();
    probe->add_option("--samples", samples, "multi-swap sample count");
    probe->add_option("--analysis-level", analysis_level, "decomposition level (default: finest)");
    probe->add_option("--perturb-level", perturb_level, "perturbation level (default: finest)");
    auto* conj = stability->add_subcommand("conjugacy", "verify a conjugating map");
    conj->set_help_flag("--help", "print help");  // frees -h/--h for the map file
    std::string f_path, g_path, h_path;
    conj->add_option("--f", f_path, "reference system file")->required();
    conj->add_option("--g", g_path, "perturbed system file")->required();
    conj->add_option("--h", h_path, "map file {h: [...], realization}")->required();

    // verify-example
    auto* vex = app.add_subcommand("verify-example", "run the bundled example construction");
    int vex_level = 4;
    std::vector<std::string> vex_eps;
    vex->add_option("--level", vex_level, "resolution level (default 4)");
    vex->add_option("--eps", vex_eps, "epsilon grid (rationals)");

    // scenarios
    auto* scen = app.add_subcommand("scenarios", "bundled scenario pipelines");
    std::string scenario_name;
    scen->add_option("--name", scenario_name,
                     "corollary-1.1 | corollary-1.3 | corollary-1.4 | proposition-1.1")
        ->required();

    // replay
    auto* rep = app.add_subcommand("replay", "independently verify a report document");
    std::string report_path;
    rep->add_option("report", report_path, "report file")->required();

    // global flags (--output, --seed, --state-cap) are accepted after any subcommand
    auto enable_fallthrough = [](CLI::App* a, auto&& self) -> void {
        for (CLI::App* sub : a->get_subcommands([](const CLI::App*) { return true; })) {
            sub->fallthrough();
            self(sub, self);
        }
    };
    enable_fallthrough(&app, enable_fallthrough);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    Timer timer;
    TrackerOptions opts;
    opts.state_cap = state_cap;

    try {
        if (build->parsed()) {
            SystemFamily fam;
            if (system_kind == "odometer") {
                std::vector<Integer> chain = parse_chain(chain_text);
                if (chain.empty()) throw std::invalid_argument("--m required for odometers");
                fam = build_odometer(chain, level == 0 ? static_cast<int>(chain.size()) : level);
            } else if (system_kind == "paper-example") {
                fam = build_modified_odometer(level == 0 ? 4 : level);
            } else if (system_kind == "embed-binary-odometer") {
                fam = embed_binary_odometer(level == 0 ? 3 : level);
            } else if (system_kind == "identity") {
                if (atoms <= 0) throw std::invalid_argument("--atoms required for identity models");
                fam = build_identity_intervals(atoms);
            } else {
                throw std::invalid_argument("unknown system kind: " + system_kind);
            }
            emit(family_json(fam), output);
            return kExitCertified;
        }

        if (analyze_chain->parsed()) {
            SystemFamily fam = family_from_json(load_json(input));
            const int lvl = pick_level(fam, at_level);
            const Rational delta = parse_rational(delta_text);
            ChainMode mode;
            if (mode_text == "existential")
                mode = ChainMode::existential;
            else if (mode_text == "universal")
                mode = ChainMode::universal;
            else
                throw std::invalid_argument("unknown mode: " + mode_text);
            const SystemLevel& sys = fam.level(lvl);
            ChainGraph g = build_chain_graph(sys, delta, mode);
            CyclicDecomposition dec;
            dec.delta = delta;
            for (const auto& comp : chain_components(g))
                dec.components.push_back(cyclic_decomposition(g, comp));
            emit(chain_report(fam, lvl, delta, mode, dec, r_delta(sys, delta)), output);
            return kExitCertified;
        }

        if (check_sh->parsed() || check_pd->parsed()) {
            SystemFamily fam = family_from_json(load_json(input));
            const int lvl = pick_level(fam, at_level);
            const Rational eps = parse_rational(eps_text);
            const Rational delta = parse_rational(delta_text);
            ShadowingVerdict v;
            Json doc;
            if (check_sh->parsed()) {
                v = check_shadowing(fam.level(lvl), eps, delta, opts);
                doc = shadowing_report(fam, lvl, v, "shadowing", "", opts);
            } else {
                if (strict_flag && pseudo_flag)
                    throw std::invalid_argument("--strict and --pseudo are exclusive");
                PeriodicVariant variant = strict_flag  ? PeriodicVariant::strict
                                          : pseudo_flag ? PeriodicVariant::pseudo
                                                        : PeriodicVariant::periodic;
                v = check_periodic_shadowing(fam.level(lvl), eps, delta, variant, opts);
                doc = shadowing_report(fam, lvl, v, "periodic-shadowing", variant_name(variant),
                                       opts);
            }
            emit(doc, output);
            return verdict_exit(v.result);
        }

        if (probe->parsed()) {
            SystemFamily fam = family_from_json(load_json(input));
            ProbeOptions popts;
            popts.seed = seed;
            popts.samples = samples;
            popts.analysis_level = analysis_level;
            popts.perturb_level = perturb_level;
            StabilityReport r = stability_probe(fam, parse_rational(eps_text), popts, opts);
            emit(stability_report_json(fam, r, popts), output);
            return r.mode == StabilityReport::Mode::constructive ? kExitCertified : kExitRefuted;
        }

        if (conj->parsed()) {
            SystemFamily f = family_from_json(load_json(f_path));
            SystemFamily g = family_from_json(load_json(g_path));
            Json hj = load_json(h_path);
            auto realization = hj.value("realization", std::string("part-collapse")) == "identity"
                                   ? SemiConjugacy::Realization::identity_map
                                   : SemiConjugacy::Realization::part_collapse;
            SemiConjugacy h = verify_semiconjugacy(f.top(), g.top(),
                                                   hj.at("h").get<std::vector<int>>(), realization);
            emit(conjugacy_report(f, g, h), output);
            return h.equation_verified ? kExitCertified : kExitRefuted;
        }

        if (vex->parsed()) {
            if (vex_level < 2) {
                std::cerr << "verify-example needs --level >= 2\n";
                return kExitUsage;
            }
            std::vector<Rational> eps_list;
            for (const std::string& e : vex_eps) eps_list.push_back(parse_rational(e));
            ScenarioOutcome outcome = run_verify_example(vex_level, eps_list, opts);
            emit(outcome.report, output);
            return outcome.expected_pattern ? kExitCertified : 1;
        }

        if (scen->parsed()) {
            ScenarioOutcome outcome = run_scenario(scenario_name, seed, opts);
            emit(outcome.report, output);
            return outcome.expected_pattern ? kExitCertified : 1;
        }

        if (rep->parsed()) {
            ReplayResult r = replay_report(load_json(report_path));
            Json doc;
            doc["format"] = "clopen-report/1";
            doc["kind"] = "replay";
            doc["ok"] = r.ok;
            doc["problems"] = r.problems;
            emit(doc, output);
            return r.ok ? kExitCertified : kExitRefuted;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
