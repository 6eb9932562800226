#pragma once

#include <string>

#include <json.hpp>

#include "holo/expansion.hpp"
#include "holo/hyperbolic.hpp"
#include "holo/resilience.hpp"

namespace holo {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

Json json_interval(const Interval& iv);
Json json_word(const Pseudogroup& pg, const Word& w);
Json json_certificate(const Pseudogroup& pg, const ContractionCertificate& c);
Json json_ping_pong(const Pseudogroup& pg, const PingPongCertificate& c);
Json json_resilience(const Pseudogroup& pg, const ResilienceCertificate& c);
Json json_profile(const Pseudogroup& pg, const ExpansionRecord& rec);
Json json_constants(const AnalysisConstants& k);
Json json_gauge(const GaugeRecord& g);
Json json_holonomy_report(const HolonomyReport& rep);

// Report envelope: {command, inputs, results, diagnostics, version,
// timestamp}. The timestamp is the only nondeterministic field.
Json make_report(const std::string& command, Json inputs, Json results,
                 Json diagnostics);

// CSV with a header row.
std::string profile_csv(const ExpansionRecord& rec);

}  // namespace holo
