#include "holo/report.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace holo {

Json json_interval(const Interval& iv) {
  if (iv.empty) return Json{{"empty", true}};
  return Json{{"component", iv.component},
              {"lo", iv.lo},
              {"hi", iv.hi},
              {"closed_lo", iv.closed_lo},
              {"closed_hi", iv.closed_hi}};
}

Json json_word(const Pseudogroup& pg, const Word& w) {
  Json letters = Json::array();
  for (int li : w.letters) letters.push_back(pg.generators[li].id);
  return Json{{"letters", letters},
              {"length", w.length()},
              {"basepoint", w.basepoint},
              {"endpoint", w.endpoint},
              {"end_component", w.end_component},
              {"base_domain", json_interval(w.base_domain)},
              {"log_deriv_sum", w.log_deriv_sum()}};
}

Json json_certificate(const Pseudogroup& pg, const ContractionCertificate& c) {
  Json j{{"word", json_word(pg, c.word)},
         {"J", json_interval(c.J)},
         {"I", json_interval(c.I)},
         {"sup_deriv", c.sup_deriv},
         {"chain_length", c.chain_length}};
  if (c.fixed_point) {
    j["fixed_point"] = *c.fixed_point;
    double u = *c.fixed_point;
    double img = letters_eval(pg, c.word.letters, u);
    j["fixed_point_residual"] = std::abs(img - u);
    j["deriv_at_fixed_point"] = letters_deriv(pg, c.word.letters, u);
  }
  return j;
}

Json json_ping_pong(const Pseudogroup& pg, const PingPongCertificate& c) {
  return Json{{"P", json_certificate(pg, c.P)},
              {"Q", json_certificate(pg, c.Q)},
              {"J", json_interval(c.J)},
              {"P_image", json_interval(c.P_image)},
              {"Q_image", json_interval(c.Q_image)},
              {"disjointness_gap", c.disjointness_gap},
              {"m1", c.m1},
              {"m2", c.m2}};
}

Json json_resilience(const Pseudogroup& pg, const ResilienceCertificate& c) {
  Json letters = Json::array();
  for (int li : c.R_letters) letters.push_back(pg.generators[li].id);
  return Json{{"x", c.x},
              {"y", c.y},
              {"R_letters", letters},
              {"trace", c.trace},
              {"distances", c.distances}};
}

Json json_profile(const Pseudogroup& pg, const ExpansionRecord& rec) {
  Json per_n = Json::array();
  for (const auto& e : rec.per_n) {
    Json row{{"n", e.n}, {"mu", e.mu}};
    row["lambda_over_n"] = e.n > 0 ? std::log(e.mu) / e.n : 0.0;
    row["witness"] = word_str(pg, e.witness);
    per_n.push_back(row);
  }
  return Json{{"point", rec.point},
              {"component", rec.component},
              {"depth", rec.depth},
              {"per_n", per_n},
              {"lambda_hat", rec.lambda_hat}};
}

Json json_constants(const AnalysisConstants& k) {
  return Json{{"epsilon0", k.epsilon0}, {"epsilon1", k.epsilon1},
              {"delta0", k.delta0},     {"C0", k.C0},
              {"a", k.a},               {"delta0_prime", k.delta0_prime()}};
}

Json json_gauge(const GaugeRecord& g) {
  return Json{{"point", g.point},
              {"epsilon", g.epsilon},
              {"value", g.value},
              {"truncation_depth", g.truncation_depth},
              {"tail_bound", g.tail_bound},
              {"growth_cap", g.growth_cap}};
}

Json json_holonomy_report(const HolonomyReport& rep) {
  Json entries = Json::array();
  for (const auto& e : rep.entries) {
    Json row{{"point", e.point},
             {"component", e.component},
             {"lambda_hat", e.lambda_hat},
             {"evidence", e.evidence},
             {"certificate_found", e.certificate_found},
             {"outcome", e.outcome}};
    if (e.fixed_point) row["fixed_point"] = *e.fixed_point;
    entries.push_back(row);
  }
  return Json{{"entries", entries},
              {"evidence_count", rep.evidence_count},
              {"certificate_count", rep.certificate_count}};
}

Json make_report(const std::string& command, Json inputs, Json results,
                 Json diagnostics) {
  auto now = std::chrono::system_clock::now().time_since_epoch();
  return Json{
      {"command", command},
      {"inputs", std::move(inputs)},
      {"results", std::move(results)},
      {"diagnostics", std::move(diagnostics)},
      {"version", kVersion},
      {"timestamp",
       std::chrono::duration_cast<std::chrono::milliseconds>(now).count()}};
}

std::string profile_csv(const ExpansionRecord& rec) {
  std::ostringstream os;
  os << "n,mu_n,lambda_n_over_n\n";
  for (const auto& e : rec.per_n) {
    double lam = e.n > 0 ? std::log(e.mu) / e.n : 0.0;
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", e.n, e.mu, lam);
    os << buf;
  }
  return os.str();
}

}  // namespace holo
