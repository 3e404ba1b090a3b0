#pragma once

#include "clopen/chain.hpp"
#include "clopen/shadowing.hpp"
#include "clopen/stability.hpp"
#include "clopen/system.hpp"

#include <json.hpp>

#include <string>

namespace clopen {

// Reports are deterministic: ordered keys, canonical "num/den" rationals,
// id-sorted lists, no floats anywhere.
using Json = nlohmann::ordered_json;

Json rational_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json geometry_json(const Geometry& g);
Geometry geometry_from_json(const Json& j);

Json periods_json(const PeriodSet& p);
PeriodSet periods_from_json(const Json& j);

Json family_json(const SystemFamily& family);
SystemFamily family_from_json(const Json& j);

SystemFamily family_of_level(SystemLevel level);

Json witness_json(const ShadowingWitness& w);
ShadowingWitness witness_from_json(const Json& j);

Json states_json(const std::vector<TrackState>& states);
std::vector<TrackState> states_from_json(const Json& j);

// Self-contained report documents (inputs embedded for standalone replay).
Json shadowing_report(const SystemFamily& family, int level, const ShadowingVerdict& v,
                      const char* kind, const std::string& variant, const TrackerOptions& opts);
Json chain_report(const SystemFamily& family, int level, const Rational& delta, ChainMode mode,
                  const CyclicDecomposition& decomp, const Rational& r);
Json equicontinuity_report(const SystemFamily& family, const EquicontinuityResult& r);
Json continuous_report(const SystemFamily& family, const ContinuousShadowingResult& r);
Json semiconjugacy_json(const SemiConjugacy& h);
Json conjugacy_report(const SystemFamily& f, const SystemFamily& g, const SemiConjugacy& h);
Json stability_report_json(const SystemFamily& family, const StabilityReport& rep,
                           const ProbeOptions& popts);

void save_json(const std::string& path, const Json& doc);
Json load_json(const std::string& path);

}  // namespace clopen
