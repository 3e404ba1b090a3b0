#include "clopen/io.hpp"

#include <fstream>
#include <stdexcept>

namespace clopen {

Json rational_json(const Rational& q) { return format_rational(q); }

Rational rational_from_json(const Json& j) { return parse_rational(j.get<std::string>()); }

Json geometry_json(const Geometry& g) {
    Json out;
    if (const auto* w = std::get_if<CylinderWord>(&g)) {
        out["kind"] = "cylinder";
        std::string word;
        for (uint8_t d : w->digits) word += static_cast<char>('0' + d);
        out["word"] = word;
    } else if (const auto* iv = std::get_if<Interval>(&g)) {
        out["kind"] = "interval";
        out["lo"] = rational_json(iv->lo);
        out["hi"] = rational_json(iv->hi);
    } else {
        const auto* sc = std::get_if<ScaledCantor>(&g);
        out["kind"] = "scaled-cantor";
        out["offset"] = rational_json(sc->offset);
        out["scale"] = rational_json(sc->scale);
    }
    return out;
}

Geometry geometry_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "cylinder") {
        CylinderWord w;
        for (char c : j.at("word").get<std::string>()) {
            if (c < '0' || c > '9') throw std::invalid_argument("bad cylinder digit");
            w.digits.push_back(static_cast<uint8_t>(c - '0'));
        }
        return w;
    }
    if (kind == "interval")
        return Interval{rational_from_json(j.at("lo")), rational_from_json(j.at("hi"))};
    if (kind == "scaled-cantor")
        return ScaledCantor{rational_from_json(j.at("offset")), rational_from_json(j.at("scale"))};
    throw std::invalid_argument("unknown geometry kind: " + kind);
}

Json periods_json(const PeriodSet& p) {
    Json out;
    switch (p.kind) {
        case PeriodSet::Kind::none: out["kind"] = "none"; break;
        case PeriodSet::Kind::exact:
            out["kind"] = "exact";
            out["period"] = p.value.get_str();
            break;
        case PeriodSet::Kind::tail:
            out["kind"] = "tail";
            out["base"] = p.value.get_str();
            break;
        case PeriodSet::Kind::unknown: out["kind"] = "unknown"; break;
    }
    return out;
}

PeriodSet periods_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "none") return PeriodSet::make_none();
    if (kind == "exact") return PeriodSet::make_exact(parse_integer(j.at("period").get<std::string>()));
    if (kind == "tail") return PeriodSet::make_tail(parse_integer(j.at("base").get<std::string>()));
    if (kind == "unknown") return PeriodSet::make_unknown();
    throw std::invalid_argument("unknown period kind: " + kind);
}

Json family_json(const SystemFamily& family) {
    Json out;
    out["format"] = "clopen-system/1";
    Json levels = Json::array();
    for (const SystemLevel& lvl : family.levels) {
        Json l;
        l["level"] = lvl.model->level;
        l["metric_kind"] =
            lvl.model->metric_kind == MetricKind::cylinder_sup ? "cylinder-sup" : "interval";
        if (!lvl.model->radix.empty()) l["radix"] = lvl.model->radix;
        Json atoms = Json::array();
        for (const Atom& a : lvl.model->atoms) {
            Json aj;
            aj["id"] = a.id;
            aj["geometry"] = geometry_json(a.geometry);
            aj["diameter"] = rational_json(a.diameter);
            aj["periods"] = periods_json(lvl.periods[static_cast<size_t>(a.id)]);
            atoms.push_back(std::move(aj));
        }
        l["atoms"] = std::move(atoms);
        l["permutation"] = lvl.pi;
        levels.push_back(std::move(l));
    }
    out["levels"] = std::move(levels);
    out["parents"] = family.parent;
    return out;
}

SystemFamily family_from_json(const Json& j) {
    if (j.at("format").get<std::string>() != "clopen-system/1")
        throw std::invalid_argument("unknown system format");
    SystemFamily fam;
    for (const Json& l : j.at("levels")) {
        const std::string mk = l.at("metric_kind").get<std::string>();
        MetricKind kind;
        if (mk == "cylinder-sup")
            kind = MetricKind::cylinder_sup;
        else if (mk == "interval")
            kind = MetricKind::interval;
        else
            throw std::invalid_argument("unknown metric kind: " + mk);
        std::vector<unsigned> radix;
        if (l.contains("radix")) radix = l.at("radix").get<std::vector<unsigned>>();
        std::vector<Atom> atoms;
        std::vector<PeriodSet> periods;
        for (const Json& aj : l.at("atoms")) {
            Atom a;
            a.id = aj.at("id").get<int>();
            a.geometry = geometry_from_json(aj.at("geometry"));
            a.diameter = rational_from_json(aj.at("diameter"));
            atoms.push_back(std::move(a));
            periods.push_back(aj.contains("periods") ? periods_from_json(aj.at("periods"))
                                                     : PeriodSet::make_unknown());
        }
        SystemLevel lvl;
        lvl.model = make_model(l.at("level").get<int>(), kind, std::move(atoms), std::move(radix));
        lvl.pi = l.at("permutation").get<std::vector<int>>();
        if (lvl.pi.size() != static_cast<size_t>(lvl.model->size()))
            throw std::invalid_argument("permutation size mismatch");
        lvl.pi_inv.assign(lvl.pi.size(), -1);
        for (size_t i = 0; i < lvl.pi.size(); ++i) {
            int img = lvl.pi[i];
            if (img < 0 || img >= static_cast<int>(lvl.pi.size()) || lvl.pi_inv[static_cast<size_t>(img)] != -1)
                throw std::invalid_argument("permutation is not a bijection");
            lvl.pi_inv[static_cast<size_t>(img)] = static_cast<int>(i);
        }
        lvl.periods = std::move(periods);
        fam.levels.push_back(std::move(lvl));
    }
    fam.parent = j.at("parents").get<std::vector<std::vector<int>>>();
    if (fam.parent.size() + 1 != fam.levels.size())
        throw std::invalid_argument("parents do not match level count");
    return fam;
}

SystemFamily family_of_level(SystemLevel level) {
    SystemFamily fam;
    fam.levels.push_back(std::move(level));
    return fam;
}

Json witness_json(const ShadowingWitness& w) {
    Json out;
    out["stem"] = w.stem;
    out["cycle"] = w.cycle;
    Json kills = Json::array();
    for (const auto& k : w.kills) {
        Json kj;
        kj["atom"] = k.atom;
        kj["time"] = k.time;
        kj["why"] = k.why;
        kills.push_back(std::move(kj));
    }
    out["kills"] = std::move(kills);
    return out;
}

ShadowingWitness witness_from_json(const Json& j) {
    ShadowingWitness w;
    w.stem = j.at("stem").get<std::vector<int>>();
    w.cycle = j.at("cycle").get<std::vector<int>>();
    for (const Json& kj : j.at("kills"))
        w.kills.push_back({kj.at("atom").get<int>(), kj.at("time").get<long>(),
                           kj.at("why").get<std::string>()});
    return w;
}

Json states_json(const std::vector<TrackState>& states) {
    Json out = Json::array();
    for (const TrackState& s : states) {
        Json sj;
        sj["start"] = s.start;
        sj["atom"] = s.atom;
        sj["residue"] = s.residue;
        sj["survivors"] = s.survivors;
        out.push_back(std::move(sj));
    }
    return out;
}

std::vector<TrackState> states_from_json(const Json& j) {
    std::vector<TrackState> out;
    for (const Json& sj : j) {
        TrackState s;
        s.start = sj.at("start").get<int>();
        s.atom = sj.at("atom").get<int>();
        s.residue = sj.at("residue").get<long>();
        s.survivors = sj.at("survivors").get<std::vector<int>>();
        out.push_back(std::move(s));
    }
    return out;
}

Json shadowing_report(const SystemFamily& family, int level, const ShadowingVerdict& v,
                      const char* kind, const std::string& variant, const TrackerOptions& opts) {
    Json out;
    out["format"] = "clopen-report/1";
    out["kind"] = kind;
    Json inputs;
    inputs["system"] = family_json(family);
    inputs["level"] = level;
    inputs["epsilon"] = rational_json(v.epsilon);
    inputs["delta"] = rational_json(v.delta);
    if (!variant.empty()) inputs["variant"] = variant;
    inputs["state_cap"] = opts.state_cap;
    out["inputs"] = std::move(inputs);
    out["result"] = verdict_name(v.result);
    if (v.witness) out["witness"] = witness_json(*v.witness);
    if (!v.certificate.empty()) out["certificate"] = states_json(v.certificate);
    if (!v.note.empty()) out["note"] = v.note;
    return out;
}

Json chain_report(const SystemFamily& family, int level, const Rational& delta, ChainMode mode,
                  const CyclicDecomposition& decomp, const Rational& r) {
    Json out;
    out["format"] = "clopen-report/1";
    out["kind"] = "chain-analysis";
    Json inputs;
    inputs["system"] = family_json(family);
    inputs["level"] = level;
    inputs["delta"] = rational_json(delta);
    inputs["mode"] = mode == ChainMode::existential ? "existential" : "universal";
    out["inputs"] = std::move(inputs);
    Json comps = Json::array();
    for (const auto& c : decomp.components) {
        Json cj;
        cj["atoms"] = c.atoms;
        cj["period"] = c.period.get_str();
        cj["parts"] = c.parts;
        comps.push_back(std::move(cj));
    }
    out["components"] = std::move(comps);
    out["r_delta"] = rational_json(r);
    return out;
}

Json equicontinuity_report(const SystemFamily& family, const EquicontinuityResult& r) {
    Json out;
    out["format"] = "clopen-report/1";
    out["kind"] = "equicontinuity";
    Json inputs;
    inputs["system"] = family_json(family);
    inputs["epsilon"] = rational_json(r.epsilon);
    out["inputs"] = std::move(inputs);
    out["result"] = verdict_name(r.result);
    if (r.result == VerdictKind::certified) {
        out["delta"] = rational_json(r.delta);
        out["level_used"] = r.level_used;
        out["soft_mesh"] = rational_json(r.soft_mesh);
    } else if (r.result == VerdictKind::refuted) {
        Json pj;
        pj["level"] = r.pair_level;
        pj["a"] = r.pair_a;
        pj["b"] = r.pair_b;
        pj["pair_dmax"] = rational_json(r.pair_dmax);
        pj["separate_time"] = r.separate_time;
        pj["separation"] = rational_json(r.separation);
        out["witness"] = std::move(pj);
    }
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

Json continuous_report(const SystemFamily& family, const ContinuousShadowingResult& r) {
    Json out;
    out["format"] = "clopen-report/1";
    out["kind"] = "continuous-shadowing";
    Json inputs;
    inputs["system"] = family_json(family);
    inputs["epsilon"] = rational_json(r.epsilon);
    out["inputs"] = std::move(inputs);
    out["result"] = verdict_name(r.result);
    if (r.result == VerdictKind::certified) {
        out["gamma"] = rational_json(r.gamma);
        out["delta"] = rational_json(r.delta);
        auto dump = [](const std::vector<std::array<int, 3>>& states) {
            Json arr = Json::array();
            for (const auto& s : states) arr.push_back(std::vector<int>{s[0], s[1], s[2]});
            return arr;
        };
        out["forward_states"] = dump(r.forward_states);
        out["backward_states"] = dump(r.backward_states);
    }
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

Json semiconjugacy_json(const SemiConjugacy& h) {
    Json out;
    out["h"] = h.h;
    out["realization"] =
        h.realization == SemiConjugacy::Realization::identity_map ? "identity" : "part-collapse";
    out["d_h_id_bound"] = rational_json(h.d_h_id_bound);
    out["surjective"] = h.surjective;
    out["equation_verified"] = h.equation_verified;
    return out;
}

Json conjugacy_report(const SystemFamily& f, const SystemFamily& g, const SemiConjugacy& h) {
    Json out;
    out["format"] = "clopen-report/1";
    out["kind"] = "semiconjugacy";
    Json inputs;
    inputs["f"] = family_json(f);
    inputs["g"] = family_json(g);
    out["inputs"] = std::move(inputs);
    out["result"] = h.equation_verified ? "certified" : "refuted";
    out["semiconjugacy"] = semiconjugacy_json(h);
    return out;
}

Json stability_report_json(const SystemFamily& family, const StabilityReport& rep,
                           const ProbeOptions& popts) {
    Json out;
    out["format"] = "clopen-report/1";
    out["kind"] = "stability-probe";
    Json inputs;
    inputs["system"] = family_json(family);
    inputs["epsilon"] = rational_json(rep.epsilon);
    inputs["seed"] = popts.seed;
    inputs["samples"] = popts.samples;
    inputs["analysis_level"] = popts.analysis_level;
    inputs["perturb_level"] = popts.perturb_level;
    out["inputs"] = std::move(inputs);
    out["mode"] = rep.mode == StabilityReport::Mode::constructive
                      ? "constructive"
                      : "refuted_by_necessary_condition";
    if (rep.mode == StabilityReport::Mode::refuted_by_necessary_condition) {
        out["refuting_epsilon"] = rational_json(rep.refuting_epsilon);
        Json scan = Json::array();
        for (const auto& [d, r] : rep.strict_scan) {
            Json sj;
            sj["delta"] = rational_json(d);
            sj["result"] = verdict_name(r);
            scan.push_back(std::move(sj));
        }
        out["strict_scan"] = std::move(scan);
        if (rep.witness) out["witness"] = witness_json(*rep.witness);
    } else if (rep.construction) {
        const ConjugacyConstruction& con = *rep.construction;
        Json cj;
        cj["analysis_level"] = con.analysis_level;
        cj["epsilon"] = rational_json(con.epsilon);
        cj["delta"] = rational_json(con.delta);
        cj["gamma"] = rational_json(con.gamma);
        cj["beta"] = rational_json(con.beta);
        cj["gamma_by_r_bound"] = con.gamma_by_r_bound;
        cj["r_gamma"] = rational_json(con.r_gamma);
        Json comps = Json::array();
        for (size_t i = 0; i < con.decomposition.components.size(); ++i) {
            Json c;
            c["atoms"] = con.decomposition.components[i].atoms;
            c["period"] = con.decomposition.components[i].period.get_str();
            c["parts"] = con.decomposition.components[i].parts;
            c["shadow"] = con.shadow_atoms[i];
            comps.push_back(std::move(c));
        }
        cj["components"] = std::move(comps);
        cj["h"] = semiconjugacy_json(con.h);
        cj["notes"] = con.notes;
        out["construction"] = std::move(cj);
        out["perturb_level"] = rep.perturb_level;
        out["exhaustive_single_swaps"] = rep.exhaustive_single_swaps;
        out["sampled_multi_swaps"] = rep.sampled_multi_swaps;
        out["failures"] = rep.failures;
        Json checks = Json::array();
        for (const auto& chk : rep.checks) {
            Json c;
            c["swaps"] = chk.swaps;
            c["distance_upper"] = rational_json(chk.distance_upper);
            c["equation_holds"] = chk.equation_holds;
            checks.push_back(std::move(c));
        }
        out["checks"] = std::move(checks);
    }
    if (!rep.note.empty()) out["note"] = rep.note;
    return out;
}

void save_json(const std::string& path, const Json& doc) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << doc.dump(1) << "\n";
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    Json doc;
    in >> doc;
    return doc;
}

}  // namespace clopen
