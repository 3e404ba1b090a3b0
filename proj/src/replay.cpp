#include "clopen/replay.hpp"

#include "clopen/bits.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace clopen {

namespace {

struct StateKey {
    int start, atom;
    long residue;
    std::vector<int> survivors;
    auto operator<=>(const StateKey&) const = default;
};

void replay_tracking(ReplayResult& rep, const SystemFamily& family, const Json& doc,
                     bool periodic_kind) {
    const Json& inputs = doc.at("inputs");
    const int level = inputs.at("level").get<int>();
    const SystemLevel& sys = family.level(level);
    const FiniteModel& model = *sys.model;
    const Rational eps = rational_from_json(inputs.at("epsilon"));
    const Rational delta = rational_from_json(inputs.at("delta"));
    const std::string variant =
        inputs.contains("variant") ? inputs.at("variant").get<std::string>() : "";
    ChainGraph graph = build_chain_graph(sys, delta, ChainMode::existential);
    const std::string result = doc.at("result").get<std::string>();

    if (result == "refuted") {
        ShadowingWitness w = witness_from_json(doc.at("witness"));
        std::vector<int> walk = w.stem;
        walk.insert(walk.end(), w.cycle.begin(), w.cycle.end());
        if (walk.empty()) {
            rep.fail("empty witness walk");
            return;
        }
        for (size_t t = 0; t + 1 < walk.size(); ++t)
            if (model.dmin(sys.pi[static_cast<size_t>(walk[t])], walk[t + 1]) > delta)
                rep.fail("witness step " + std::to_string(t) + " is not a delta-edge");
        if (periodic_kind) {
            if (walk.front() != walk.back()) rep.fail("witness cycle does not close");
        } else if (!w.cycle.empty()) {
            // lasso: the cycle continues forever
            if (model.dmin(sys.pi[static_cast<size_t>(w.cycle.back())], w.cycle.front()) > delta)
                rep.fail("lasso cycle does not close as a delta-edge");
        }
        const Integer m(static_cast<long>(walk.size()) - 1);
        std::set<int> covered;
        for (const auto& k : w.kills) {
            covered.insert(k.atom);
            if (k.time >= 0) {
                if (k.time >= static_cast<long>(walk.size())) {
                    rep.fail("kill time out of range for atom " + std::to_string(k.atom));
                    continue;
                }
                int lift = k.atom;
                for (long t = 0; t < k.time; ++t) lift = sys.pi[static_cast<size_t>(lift)];
                if (!(model.dmin(lift, walk[static_cast<size_t>(k.time)]) > eps))
                    rep.fail("atom " + std::to_string(k.atom) + " is not separated at time " +
                             std::to_string(k.time));
            } else if (periodic_kind) {
                const PeriodSet& ps = sys.periods[static_cast<size_t>(k.atom)];
                bool incompatible =
                    variant == "pseudo"
                        ? false
                        : (variant == "periodic" ? !ps.may_any() : !ps.may_divide(m));
                if (!incompatible)
                    rep.fail("atom " + std::to_string(k.atom) +
                             " is not period-incompatible with the witness cycle");
            } else {
                rep.fail("unseparated atom " + std::to_string(k.atom) + " in a shadowing witness");
            }
        }
        for (int a = 0; a < model.size(); ++a)
            if (!covered.count(a)) rep.fail("no evidence for atom " + std::to_string(a));
        return;
    }

    if (result == "certified") {
        std::vector<TrackState> states = states_from_json(doc.at("certificate"));
        std::vector<AtomSet> close(static_cast<size_t>(model.size()), AtomSet(model.size()));
        for (int a = 0; a < model.size(); ++a)
            for (int p = 0; p < model.size(); ++p)
                if (model.dmax(p, a) <= eps) close[static_cast<size_t>(a)].set(p);

        std::map<StateKey, bool> family_states;  // value: is a successor of some state
        for (const TrackState& s : states) {
            std::vector<int> sv = s.survivors;
            std::sort(sv.begin(), sv.end());
            family_states[{s.start, s.atom, s.residue, sv}] = false;
        }
        long L = 1;
        if (periodic_kind && variant == "strict") {
            Integer acc(1);
            for (const PeriodSet& p : sys.periods)
                if ((p.kind == PeriodSet::Kind::exact || p.kind == PeriodSet::Kind::tail) &&
                    p.value > 0)
                    acc = lcm(acc, p.value);
            L = acc.get_si();
        }

        // initial states present
        for (int a0 = 0; a0 < model.size(); ++a0) {
            StateKey init{periodic_kind ? a0 : -1, a0, 0,
                          close[static_cast<size_t>(a0)].to_list()};
            if (!family_states.count(init))
                rep.fail("initial state for atom " + std::to_string(a0) + " missing");
        }
        // closure
        for (const TrackState& s : states) {
            AtomSet sv(model.size());
            for (int q : s.survivors) sv.set(q);
            if (!periodic_kind && sv.empty()) rep.fail("certified family contains an empty state");
            AtomSet shifted = permute(sv, sys.pi);
            for (int b : graph.adj[static_cast<size_t>(s.atom)]) {
                AtomSet next = shifted;
                next &= close[static_cast<size_t>(b)];
                StateKey key{s.start, b, (s.residue + 1) % L, next.to_list()};
                auto it = family_states.find(key);
                if (it == family_states.end()) {
                    rep.fail("family not closed at atom " + std::to_string(s.atom) + " -> " +
                             std::to_string(b));
                } else {
                    it->second = true;
                }
            }
        }
        // wrapped closure conditions for the periodic variants
        if (periodic_kind) {
            for (const auto& [key, is_successor] : family_states) {
                if (!is_successor || key.atom != key.start) continue;
                bool ok = false;
                for (int q : key.survivors) {
                    const PeriodSet& ps = sys.periods[static_cast<size_t>(q)];
                    if (variant == "pseudo")
                        ok = true;
                    else if (variant == "periodic")
                        ok = ok || ps.must_any();
                    else
                        // r stands for every length = r mod L; divisibility depends
                        // only on r because every certified base divides L
                        ok = ok || ps.must_divide(Integer(key.residue));
                    if (ok) break;
                }
                if (!ok)
                    rep.fail("wrapped state at atom " + std::to_string(key.atom) +
                             " lacks a compatible shadow");
            }
        }
        return;
    }
    // inconclusive reports carry no obligation
}

void replay_equicontinuity(ReplayResult& rep, const SystemFamily& family, const Json& doc) {
    const Rational eps = rational_from_json(doc.at("inputs").at("epsilon"));
    const std::string result = doc.at("result").get<std::string>();
    if (result == "certified") {
        if (!family_is_level_preserving(family)) {
            rep.fail("family is not level preserving");
            return;
        }
        const int k = doc.at("level_used").get<int>();
        const Rational delta = rational_from_json(doc.at("delta"));
        const SystemLevel& lvl = family.level(k);
        Rational soft(0);
        for (int a = 0; a < lvl.size(); ++a)
            if (lvl.periods[static_cast<size_t>(a)].kind != PeriodSet::Kind::exact)
                soft = std::max(soft, lvl.model->atoms[static_cast<size_t>(a)].diameter);
        if (!(soft <= eps)) rep.fail("non-rigid mesh exceeds eps at the certified level");
        if (!(delta < lvl.model->min_gap)) rep.fail("modulus is not below the level min gap");
        if (!(delta <= eps)) rep.fail("modulus exceeds eps");
    } else if (result == "refuted") {
        const Json& w = doc.at("witness");
        const int k = w.at("level").get<int>();
        const SystemLevel& lvl = family.level(k);
        int a = w.at("a").get<int>(), b = w.at("b").get<int>();
        long t = w.at("separate_time").get<long>();
        int ia = a, ib = b;
        for (long s = 0; s < t; ++s) {
            ia = lvl.pi[static_cast<size_t>(ia)];
            ib = lvl.pi[static_cast<size_t>(ib)];
        }
        if (!(lvl.model->dmin(ia, ib) > eps)) rep.fail("claimed separation does not hold");
    }
}

void replay_continuous(ReplayResult& rep, const SystemFamily& family, const Json& doc) {
    if (doc.at("result").get<std::string>() != "certified") return;
    const SystemLevel& sys = family.top();
    const Rational eps = rational_from_json(doc.at("inputs").at("epsilon"));
    const Rational delta = rational_from_json(doc.at("delta"));
    const Rational gamma = rational_from_json(doc.at("gamma"));
    if (!(gamma <= eps / 2)) rep.fail("gamma exceeds eps/2");
    ChainGraph graph = build_chain_graph(sys, delta, ChainMode::existential);
    std::vector<std::vector<int>> radj(static_cast<size_t>(sys.size()));
    for (int a = 0; a < sys.size(); ++a)
        for (int b : graph.adj[static_cast<size_t>(a)]) radj[static_cast<size_t>(b)].push_back(a);

    auto check_side = [&](const Json& states_json_arr, bool forward) {
        std::set<std::array<int, 3>> states;
        for (const Json& sj : states_json_arr) {
            auto v = sj.get<std::vector<int>>();
            states.insert({v[0], v[1], v[2]});
        }
        for (int a0 = 0; a0 < sys.size(); ++a0)
            if (!states.count({a0, a0, a0}))
                rep.fail("missing initial pair state for atom " + std::to_string(a0));
        for (const auto& s : states) {
            if (sys.model->dmax(s[2], s[1]) > eps)
                rep.fail("pair state exceeds eps at atom " + std::to_string(s[1]));
            int next_orbit = forward ? sys.pi[static_cast<size_t>(s[2])]
                                     : sys.pi_inv[static_cast<size_t>(s[2])];
            const auto& adj = forward ? graph.adj[static_cast<size_t>(s[1])]
                                      : radj[static_cast<size_t>(s[1])];
            for (int b : adj)
                if (!states.count({s[0], b, next_orbit}))
                    rep.fail("pair family not closed at atom " + std::to_string(s[1]));
        }
    };
    check_side(doc.at("forward_states"), true);
    check_side(doc.at("backward_states"), false);
}

void replay_chain(ReplayResult& rep, const SystemFamily& family, const Json& doc) {
    const Json& inputs = doc.at("inputs");
    const int level = inputs.at("level").get<int>();
    const SystemLevel& sys = family.level(level);
    const Rational delta = rational_from_json(inputs.at("delta"));
    CyclicDecomposition dec = full_cyclic_decomposition(sys, delta);
    Json comps = Json::array();
    for (const auto& c : dec.components) {
        Json cj;
        cj["atoms"] = c.atoms;
        cj["period"] = c.period.get_str();
        cj["parts"] = c.parts;
        comps.push_back(std::move(cj));
    }
    if (comps != doc.at("components")) rep.fail("decomposition differs on replay");
    if (rational_json(r_delta(sys, delta)) != doc.at("r_delta")) rep.fail("r_delta differs on replay");
}

void replay_semiconjugacy(ReplayResult& rep, const Json& doc) {
    SystemFamily f = family_from_json(doc.at("inputs").at("f"));
    SystemFamily g = family_from_json(doc.at("inputs").at("g"));
    const Json& hj = doc.at("semiconjugacy");
    auto realization = hj.at("realization").get<std::string>() == "identity"
                           ? SemiConjugacy::Realization::identity_map
                           : SemiConjugacy::Realization::part_collapse;
    SemiConjugacy h =
        verify_semiconjugacy(f.top(), g.top(), hj.at("h").get<std::vector<int>>(), realization);
    if (h.equation_verified != hj.at("equation_verified").get<bool>())
        rep.fail("equation verdict differs on replay");
    if (rational_json(h.d_h_id_bound) != hj.at("d_h_id_bound")) rep.fail("bound differs on replay");
    if (h.surjective != hj.at("surjective").get<bool>()) rep.fail("surjectivity differs on replay");
}

void replay_stability(ReplayResult& rep, const SystemFamily& family, const Json& doc) {
    const Json& inputs = doc.at("inputs");
    const Rational eps = rational_from_json(inputs.at("epsilon"));
    const std::string mode = doc.at("mode").get<std::string>();
    if (mode == "refuted_by_necessary_condition") {
        const Rational eps2 = rational_from_json(doc.at("refuting_epsilon"));
        if (!(eps2 <= eps)) rep.fail("refuting epsilon exceeds eps");
        if (!doc.contains("witness")) {
            rep.fail("refutation without witness");
            return;
        }
        // verify the witness against the largest scanned delta
        const Json& scan = doc.at("strict_scan");
        if (scan.empty()) {
            rep.fail("empty strict scan");
            return;
        }
        for (const Json& e : scan)
            if (e.at("result").get<std::string>() != "refuted")
                rep.fail("strict scan contains a non-refuted delta");
        Json sub;
        sub["inputs"] = Json{{"system", inputs.at("system")},
                             {"level", inputs.at("analysis_level").get<int>() == 0
                                           ? family.depth()
                                           : inputs.at("analysis_level").get<int>()},
                             {"epsilon", doc.at("refuting_epsilon")},
                             {"delta", scan.back().at("delta")},
                             {"variant", "strict"}};
        sub["result"] = "refuted";
        sub["witness"] = doc.at("witness");
        replay_tracking(rep, family, sub, true);
        return;
    }
    if (!doc.contains("construction")) {
        rep.fail("constructive report without construction");
        return;
    }
    const Json& con = doc.at("construction");
    const int A = con.at("analysis_level").get<int>();
    const SystemLevel& sys = family.level(A);
    std::vector<int> h = con.at("h").at("h").get<std::vector<int>>();
    for (int a = 0; a < sys.size(); ++a)
        if (h[static_cast<size_t>(sys.pi[a])] != sys.pi[static_cast<size_t>(h[static_cast<size_t>(a)])])
            rep.fail("h does not conjugate the base system to itself");
    const Rational beta = rational_from_json(con.at("beta"));
    if (!(beta > 0)) rep.fail("beta is not positive");
    // parts must be beta-separated
    std::map<int, std::pair<int, int>> part_of;
    int ci = 0;
    for (const Json& comp : con.at("components")) {
        int pj = 0;
        for (const Json& part : comp.at("parts")) {
            for (const Json& a : part) part_of[a.get<int>()] = {ci, pj};
            ++pj;
        }
        ++ci;
    }
    for (int a = 0; a < sys.size(); ++a)
        for (int b = a + 1; b < sys.size(); ++b) {
            auto ita = part_of.find(a), itb = part_of.find(b);
            if (ita == part_of.end() || itb == part_of.end()) continue;
            if (ita->second == itb->second) continue;
            if (sys.model->dmin(a, b) < beta)
                rep.fail("parts are not beta-separated at atoms " + std::to_string(a) + "," +
                         std::to_string(b));
        }
    for (const Json& chk : doc.at("checks"))
        if (!chk.at("equation_holds").get<bool>()) rep.fail("a recorded perturbation check failed");
}

}  // namespace

ReplayResult replay_report(const Json& doc) {
    ReplayResult rep;
    try {
        if (doc.at("format").get<std::string>() != "clopen-report/1") {
            rep.fail("unknown report format");
            return rep;
        }
        const std::string kind = doc.at("kind").get<std::string>();
        if (kind == "scenario") {
            for (const Json& v : doc.at("verdicts")) {
                ReplayResult sub = replay_report(v.at("report"));
                if (!sub.ok) {
                    for (const std::string& p : sub.problems)
                        rep.fail(v.at("name").get<std::string>() + ": " + p);
                }
            }
            return rep;
        }
        if (kind == "semiconjugacy") {
            replay_semiconjugacy(rep, doc);
            return rep;
        }
        SystemFamily family = family_from_json(doc.at("inputs").at("system"));
        if (kind == "dense-periodic-atoms") {
            for (const Json& w : doc.at("certificate")) {
                const int k = w.at("level").get<int>();
                const int atom = w.at("atom").get<int>();
                const int witness = w.at("periodic_witness").get<int>();
                if (witness < 0) {
                    rep.fail("no periodic witness recorded for level " + std::to_string(k) +
                             " atom " + std::to_string(atom));
                    continue;
                }
                if (witness == atom &&
                    family.level(k).periods[static_cast<size_t>(atom)].kind ==
                        PeriodSet::Kind::exact)
                    continue;
                const std::vector<int>& par = family.parent.at(static_cast<size_t>(k) - 1);
                if (par.at(static_cast<size_t>(witness)) != atom ||
                    family.level(k + 1).periods[static_cast<size_t>(witness)].kind !=
                        PeriodSet::Kind::exact)
                    rep.fail("periodic witness invalid for level " + std::to_string(k) + " atom " +
                             std::to_string(atom));
            }
            return rep;
        }
        if (kind == "strict-grid-summary") {
            // summary of certified cells; each cell re-checked cheaply via the
            // certificate-free certify pass would rerun the decision procedure,
            // so only structural sanity is verified here
            if (!doc.at("certified_cells").is_array()) rep.fail("malformed summary");
            return rep;
        }
        if (kind == "shadowing")
            replay_tracking(rep, family, doc, false);
        else if (kind == "periodic-shadowing")
            replay_tracking(rep, family, doc, true);
        else if (kind == "equicontinuity")
            replay_equicontinuity(rep, family, doc);
        else if (kind == "continuous-shadowing")
            replay_continuous(rep, family, doc);
        else if (kind == "chain-analysis")
            replay_chain(rep, family, doc);
        else if (kind == "stability-probe")
            replay_stability(rep, family, doc);
        else
            rep.fail("unknown report kind: " + kind);
    } catch (const std::exception& e) {
        rep.fail(std::string("replay error: ") + e.what());
    }
    return rep;
}

}  // namespace clopen
