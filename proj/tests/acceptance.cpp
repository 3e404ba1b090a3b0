// Acceptance suite: runs every criterion at its stated tolerance and prints one
// pass/fail line each. Exact arithmetic throughout; zero tolerance unless a
// criterion states a runtime budget.

#include "clopen/io.hpp"
#include "clopen/replay.hpp"
#include "clopen/scenarios.hpp"
#include "clopen/stability.hpp"
#include "clopen/swap.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

using namespace clopen;
using namespace clopen::testing;

namespace {

int failures = 0;

void criterion(int number, const char* text, const std::function<bool(std::string&)>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  criterion %d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", number, text, secs,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

const Json* find_verdict(const Json& scenario, const std::string& name) {
    for (const Json& v : scenario.at("verdicts"))
        if (v.at("name").get<std::string>() == name) return &v.at("report");
    return nullptr;
}

}  // namespace

int main() {
    TrackerOptions opts;

    // ------------------------------------------------------------------ 1
    criterion(1, "level-4 example: properties 1,2,3,5 certified, 4 refuted with the 16-cycle",
              [&](std::string& detail) {
                  auto t0 = std::chrono::steady_clock::now();
                  ScenarioOutcome outcome = run_verify_example(4, {rat(1, 8)}, opts);
                  if (!outcome.expected_pattern) {
                      detail = "verdict pattern wrong";
                      return false;
                  }
                  SystemFamily fam = build_modified_odometer(4);
                  if (fam.top().size() != 58) {
                      detail = "atom count";
                      return false;
                  }
                  const Json* strict = find_verdict(outcome.report, "strict-shadowing-refuted");
                  if (!strict || (*strict)["result"] != "refuted") {
                      detail = "strict verdict missing";
                      return false;
                  }
                  const Json& witness = (*strict)["witness"];
                  if (witness["cycle"].size() != 17) {
                      detail = "witness is not the 16-cycle";
                      return false;
                  }
                  for (size_t i = 0; i < 16; ++i)
                      if (witness["cycle"][i].get<int>() != static_cast<int>(i)) {
                          detail = "witness leaves the interval atoms";
                          return false;
                      }
                  // exhaustive: every atom carries evidence, period-based for each
                  // atom whose certified content could otherwise return
                  if (witness["kills"].size() != 58) {
                      detail = "evidence does not cover all 58 atoms";
                      return false;
                  }
                  for (const Json& k : witness["kills"]) {
                      long t = k["time"].get<long>();
                      if (t < 0) continue;  // period incompatibility, replay-checked below
                  }
                  ReplayResult rr = replay_report(outcome.report);
                  if (!rr.ok) {
                      detail = "replay failed: " + rr.problems.front();
                      return false;
                  }
                  double secs =
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                  if (secs >= 60.0) {
                      detail = "over the 60 s budget";
                      return false;
                  }
                  return true;
              });

    // ------------------------------------------------------------------ 2
    criterion(2, "cube constructively stable at eps=1/8; base refuted; zero swap failures",
              [&](std::string& detail) {
                  ScenarioOutcome outcome = run_scenario("corollary-1.3", 20260810, opts);
                  const Json* base = find_verdict(outcome.report, "base-system-probe");
                  const Json* cube = find_verdict(outcome.report, "cube-system-probe");
                  if (!base || (*base)["mode"] != "refuted_by_necessary_condition") {
                      detail = "base system not refuted";
                      return false;
                  }
                  if (!cube || (*cube)["mode"] != "constructive") {
                      detail = "cube not constructive";
                      return false;
                  }
                  const Json& con = (*cube)["construction"];
                  if (!(parse_rational(con["beta"].get<std::string>()) > 0)) {
                      detail = "beta not positive";
                      return false;
                  }
                  if (!(parse_rational(con["h"]["d_h_id_bound"].get<std::string>()) < rat(1, 4))) {
                      detail = "h bound not below 2*eps";
                      return false;
                  }
                  if ((*cube)["exhaustive_single_swaps"].get<long>() <= 0) {
                      detail = "no admitted single swaps";
                      return false;
                  }
                  if ((*cube)["sampled_multi_swaps"].get<long>() != 50) {
                      detail = "expected 50 multi-swap samples";
                      return false;
                  }
                  if ((*cube)["failures"].get<long>() != 0) {
                      detail = "conjugacy failures";
                      return false;
                  }
                  detail = "single swaps: " + std::to_string((*cube)["exhaustive_single_swaps"].get<long>());
                  return outcome.expected_pattern;
              });

    // ------------------------------------------------------------------ 3
    criterion(3, "odometer 2^k, K=5: continuous shadowing certified, strict refuted at every delta",
              [&](std::string& detail) {
                  ScenarioOutcome outcome = run_scenario("corollary-1.1", 1, opts);
                  const Json* cs = find_verdict(outcome.report, "continuous-shadowing");
                  const Json* probe = find_verdict(outcome.report, "stability-probe");
                  if (!cs || (*cs)["result"] != "certified") {
                      detail = "continuous certificate missing";
                      return false;
                  }
                  if (!probe || (*probe)["mode"] != "refuted_by_necessary_condition") {
                      detail = "strict not refuted";
                      return false;
                  }
                  SystemFamily odo = build_odometer({2, 4, 8, 16, 32}, 5);
                  size_t grid_size = threshold_grid(*odo.top().model).size();
                  if ((*probe)["strict_scan"].size() != grid_size) {
                      detail = "scan does not cover the whole grid";
                      return false;
                  }
                  for (const Json& cell : (*probe)["strict_scan"])
                      if (cell["result"] != "refuted") {
                          detail = "a grid delta is not refuted";
                          return false;
                      }
                  ReplayResult rr = replay_report(outcome.report);
                  if (!rr.ok) {
                      detail = "replay failed";
                      return false;
                  }
                  return outcome.expected_pattern;
              });

    // ------------------------------------------------------------------ 4
    criterion(4, "identity on 20 random models: constructive with beta = min gap",
              [&](std::string& detail) {
                  ScenarioOutcome outcome = run_scenario("corollary-1.4", 404, opts);
                  if (!outcome.expected_pattern) {
                      detail = "some model failed";
                      return false;
                  }
                  long count = 0;
                  for (const Json& v : outcome.report.at("verdicts")) {
                      const Json& rep = v.at("report");
                      if (rep["mode"] != "constructive" || rep["failures"].get<long>() != 0)
                          return false;
                      ++count;
                  }
                  detail = std::to_string(count) + " models";
                  return count == 20;
              });

    // ------------------------------------------------------------------ 5
    criterion(5, "1000 random swap constructions at depth 10: involution, componentwise, below delta",
              [&](std::string& detail) {
                  auto model = complete_binary_model(10);
                  std::vector<Rational> grid = threshold_grid(*model);
                  std::vector<Rational> deltas;
                  for (const Rational& g : grid)
                      if (g > model->mesh) deltas.push_back(g);
                  std::mt19937_64 rng(5);
                  for (int trial = 0; trial < 1000; ++trial) {
                      const int n = 1 + static_cast<int>(draw(rng, 8));
                      const Rational delta =
                          deltas[static_cast<size_t>(draw(rng, static_cast<long>(deltas.size())))];
                      std::set<int> used;
                      std::vector<int> zeta;
                      while (static_cast<int>(zeta.size()) < n) {
                          int z = static_cast<int>(draw(rng, model->size()));
                          if (used.insert(z).second) zeta.push_back(z);
                      }
                      // eta: per component a random atom strictly inside the
                      // delta-ball, resampled until proper and involution-consistent
                      std::vector<int> eta;
                      for (int attempt = 0; attempt < 200 && eta.size() < zeta.size(); ++attempt) {
                          int base = zeta[eta.size()];
                          std::vector<int> ball;
                          for (int c = 0; c < model->size(); ++c)
                              if (model->dmax(base, c) < delta) ball.push_back(c);
                          int cand = ball[static_cast<size_t>(draw(rng, static_cast<long>(ball.size())))];
                          bool ok = std::find(eta.begin(), eta.end(), cand) == eta.end();
                          // involution consistency: cand may appear in zeta only as
                          // the mirror of the current component
                          for (size_t j = 0; ok && j < eta.size(); ++j)
                              if (zeta[j] == cand && eta[j] != base) ok = false;
                          for (size_t j = eta.size() + 1; ok && j < zeta.size(); ++j)
                              if (zeta[j] == cand) ok = false;
                          if (ok) eta.push_back(cand);
                      }
                      if (eta.size() != zeta.size()) {
                          detail = "sampler starved at trial " + std::to_string(trial);
                          return false;
                      }
                      SwapBuildResult r = swap_homeomorphism(*model, zeta, eta, delta);
                      if (!r.phi.is_involution) {
                          detail = "not an involution at trial " + std::to_string(trial);
                          return false;
                      }
                      std::vector<int> tau = r.phi.atom_permutation(*model);
                      for (int a = 0; a < model->size(); ++a)
                          if (tau[static_cast<size_t>(tau[static_cast<size_t>(a)])] != a) {
                              detail = "tau is not an involution";
                              return false;
                          }
                      for (size_t i = 0; i < zeta.size(); ++i)
                          if (tau[static_cast<size_t>(zeta[i])] != eta[i]) {
                              detail = "componentwise mapping failed";
                              return false;
                          }
                      if (!(r.distance_upper < delta)) {
                          detail = "distance bound not below delta";
                          return false;
                      }
                  }
                  return true;
              });

    // ------------------------------------------------------------------ 6
    criterion(6, "200 random strongly connected graphs: period and parts match brute force",
              [&](std::string& detail) {
                  std::mt19937_64 rng(6);
                  for (int trial = 0; trial < 200; ++trial) {
                      // union of random cycles through a shared vertex, <= 12 atoms
                      const int n = 2 + static_cast<int>(draw(rng, 11));
                      std::set<std::pair<int, int>> edges;
                      const int cycles = 1 + static_cast<int>(draw(rng, 3));
                      std::set<int> touched;
                      for (int c = 0; c < cycles; ++c) {
                          std::vector<int> nodes{0};
                          const int len = 1 + static_cast<int>(draw(rng, n));
                          for (int i = 1; i < len; ++i) nodes.push_back(static_cast<int>(draw(rng, n)));
                          for (size_t i = 0; i < nodes.size(); ++i) {
                              edges.emplace(nodes[i], nodes[(i + 1) % nodes.size()]);
                              touched.insert(nodes[i]);
                          }
                      }
                      std::map<int, int> rank;
                      for (int v : touched) rank.emplace(v, static_cast<int>(rank.size()));
                      ChainGraph g;
                      g.n = static_cast<int>(rank.size());
                      g.delta = rat(0);
                      g.adj.assign(static_cast<size_t>(g.n), {});
                      for (auto [a, b] : edges) g.adj[static_cast<size_t>(rank[a])].push_back(rank[b]);
                      for (auto& row : g.adj) std::sort(row.begin(), row.end());

                      auto comps = chain_components(g);
                      if (comps.size() != 1) {
                          detail = "generator produced a non-strongly-connected graph";
                          return false;
                      }
                      CyclicComponent dec = cyclic_decomposition(g, comps[0]);
                      if (dec.period != simple_cycle_gcd(g.adj, comps[0])) {
                          detail = "period mismatch at trial " + std::to_string(trial);
                          return false;
                      }
                      // D1: parts partition the component
                      std::vector<int> gathered;
                      for (const auto& part : dec.parts)
                          gathered.insert(gathered.end(), part.begin(), part.end());
                      std::sort(gathered.begin(), gathered.end());
                      if (gathered != dec.atoms) {
                          detail = "parts do not partition";
                          return false;
                      }
                      // D2 along edges: every edge advances the part index by one
                      const long m = dec.period.get_si();
                      std::vector<long> part_of(static_cast<size_t>(g.n), -1);
                      for (size_t j = 0; j < dec.parts.size(); ++j)
                          for (int a : dec.parts[j]) part_of[static_cast<size_t>(a)] = static_cast<long>(j);
                      for (int a = 0; a < g.n; ++a)
                          for (int b : g.adj[static_cast<size_t>(a)])
                              if (part_of[static_cast<size_t>(b)] !=
                                  (part_of[static_cast<size_t>(a)] + 1) % m) {
                                  detail = "an edge violates D2";
                                  return false;
                              }
                      // D3: same-part atoms joined by chains of length = 0 mod m
                      for (const auto& part : dec.parts)
                          for (int src : part) {
                              std::vector<char> seen(static_cast<size_t>(g.n) * static_cast<size_t>(m), 0);
                              std::vector<std::pair<int, long>> queue{{src, 0}};
                              seen[static_cast<size_t>(src) * m] = 1;
                              for (size_t qi = 0; qi < queue.size(); ++qi) {
                                  auto [v, r] = queue[qi];
                                  for (int w : g.adj[static_cast<size_t>(v)]) {
                                      long nr = (r + 1) % m;
                                      if (!seen[static_cast<size_t>(w) * m + nr]) {
                                          seen[static_cast<size_t>(w) * m + nr] = 1;
                                          queue.emplace_back(w, nr);
                                      }
                                  }
                              }
                              for (int dst : part)
                                  if (!seen[static_cast<size_t>(dst) * m]) {
                                      detail = "D3 connectivity missing";
                                      return false;
                                  }
                          }
                  }
                  return true;
              });

    // ------------------------------------------------------------------ 7
    criterion(7, "500 random systems, full grid: tracker equals the brute-force oracle",
              [&](std::string& detail) {
                  TrackerOptions wide;
                  wide.state_cap = size_t(1) << 22;
                  std::mt19937_64 rng(7);
                  long cells = 0;
                  for (int trial = 0; trial < 500; ++trial) {
                      SystemLevel sys = random_system(rng, 10);
                      // relations and graphs only change at table values, so the
                      // distinct values cover every grid point (midpoints included)
                      std::vector<Rational> values;
                      for (int i = 0; i < sys.size(); ++i)
                          for (int j = i; j < sys.size(); ++j) {
                              values.push_back(sys.model->dmin(i, j));
                              values.push_back(sys.model->dmax(i, j));
                          }
                      values = sorted_unique(std::move(values));
                      for (const Rational& delta : values)
                          for (const Rational& eps : values) {
                              ++cells;
                              if (check_shadowing(sys, eps, delta, wide).result !=
                                  oracle_shadowing(sys, eps, delta)) {
                                  detail = "shadowing mismatch at trial " + std::to_string(trial);
                                  return false;
                              }
                              for (PeriodicVariant variant :
                                   {PeriodicVariant::periodic, PeriodicVariant::strict,
                                    PeriodicVariant::pseudo}) {
                                  if (check_periodic_shadowing(sys, eps, delta, variant, wide)
                                          .result != oracle_periodic(sys, eps, delta, variant)) {
                                      detail = "variant mismatch at trial " + std::to_string(trial);
                                      return false;
                                  }
                              }
                          }
                  }
                  detail = std::to_string(cells) + " cells";
                  return true;
              });

    // ------------------------------------------------------------------ 8
    criterion(8, "variant ordering, monotonicity and the finite power law on bundled systems",
              [&](std::string& detail) {
                  std::vector<SystemLevel> bundled;
                  bundled.push_back(build_odometer({2, 4, 8}, 3).top());
                  bundled.push_back(embed_binary_odometer(3).top());
                  bundled.push_back(build_modified_odometer(2).top());
                  bundled.push_back(build_identity_intervals(6).top());
                  for (const SystemLevel& sys : bundled) {
                      std::vector<Rational> values;
                      for (int i = 0; i < sys.size(); ++i)
                          for (int j = i; j < sys.size(); ++j) {
                              values.push_back(sys.model->dmin(i, j));
                              values.push_back(sys.model->dmax(i, j));
                          }
                      values = sorted_unique(std::move(values));
                      const size_t nv = values.size();
                      std::vector<std::vector<VerdictKind>> shad(nv, std::vector<VerdictKind>(nv));
                      std::vector<std::vector<std::array<VerdictKind, 3>>> per(
                          nv, std::vector<std::array<VerdictKind, 3>>(nv));
                      for (size_t di = 0; di < nv; ++di)
                          for (size_t ei = 0; ei < nv; ++ei) {
                              shad[di][ei] = check_shadowing(sys, values[ei], values[di]).result;
                              per[di][ei] = {check_periodic_shadowing(sys, values[ei], values[di],
                                                                      PeriodicVariant::strict)
                                                 .result,
                                             check_periodic_shadowing(sys, values[ei], values[di],
                                                                      PeriodicVariant::periodic)
                                                 .result,
                                             check_periodic_shadowing(sys, values[ei], values[di],
                                                                      PeriodicVariant::pseudo)
                                                 .result};
                          }
                      for (size_t di = 0; di < nv; ++di)
                          for (size_t ei = 0; ei < nv; ++ei) {
                              if (shad[di][ei] == VerdictKind::certified) {
                                  for (size_t dj = 0; dj <= di; ++dj)
                                      if (shad[dj][ei] != VerdictKind::certified) {
                                          detail = "monotonicity in delta violated";
                                          return false;
                                      }
                                  for (size_t ej = ei; ej < nv; ++ej)
                                      if (shad[di][ej] != VerdictKind::certified) {
                                          detail = "monotonicity in eps violated";
                                          return false;
                                      }
                              }
                              if (per[di][ei][0] == VerdictKind::certified &&
                                  per[di][ei][1] != VerdictKind::certified) {
                                  detail = "strict => periodic violated";
                                  return false;
                              }
                              if (per[di][ei][1] == VerdictKind::certified &&
                                  per[di][ei][2] != VerdictKind::certified) {
                                  detail = "periodic => pseudo violated";
                                  return false;
                              }
                          }
                  }
                  // finite power law on the orbit-edge segment, n in {2, 3}
                  for (const SystemLevel& sys : bundled) {
                      const Rational delta = Rational(sys.model->min_gap / 2);
                      std::vector<Rational> values;
                      for (int i = 0; i < sys.size(); ++i)
                          for (int j = i; j < sys.size(); ++j) values.push_back(sys.model->dmax(i, j));
                      values = sorted_unique(std::move(values));
                      for (long n : {2L, 3L}) {
                          SystemLevel powered = level_power(sys, n);
                          for (const Rational& eps : values)
                              if (check_shadowing(sys, eps, delta).result !=
                                  check_shadowing(powered, eps, delta).result) {
                                  detail = "power law violated";
                                  return false;
                              }
                      }
                  }
                  return true;
              });

    std::printf("%s\n", failures == 0 ? "acceptance: all criteria passed"
                                      : "acceptance: FAILURES PRESENT");
    return failures == 0 ? 0 : 1;
}
