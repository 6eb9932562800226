#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "holo/builtin_examples.hpp"
#include "holo/config.hpp"
#include "holo/error.hpp"
#include "holo/pliss.hpp"
#include "holo/report.hpp"

namespace {

using holo::Json;

struct CommonOpts {
  std::string example;
  std::string config_path;
  double a = 0.5;
  double eps1 = 0.0;  // 0 = auto
  double mu = 0.5;
  double delta1 = 0.0;  // 0 = auto
  int depth = 12;
  std::int64_t budget = 10000;
  int seeds = 64;
  int workers = 1;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_pg = true) {
  auto* ex = cmd->add_option("--example", o.example, "builtin example name");
  auto* cf = cmd->add_option("--config", o.config_path, "pseudogroup config file");
  if (needs_pg) {
    ex->excludes(cf);
  }
  cmd->add_option("--a", o.a, "expansion threshold a");
  cmd->add_option("--eps1", o.eps1, "epsilon1 (default: min(eps0, a/100)/2)");
  cmd->add_option("--mu", o.mu, "target contraction factor in (0,1)");
  cmd->add_option("--delta1", o.delta1, "fixed-point locality (default delta0/16)");
  cmd->add_option("--depth", o.depth, "word depth N");
  cmd->add_option("--budget", o.budget, "composed-letter budget per search");
  cmd->add_option("--seeds", o.seeds, "seed grid density per component");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option("--seed", o.seed, "rng seed for randomized validations");
  cmd->add_option("--out", o.out, "write the JSON report to this path");
}

holo::Pseudogroup load_pg(const CommonOpts& o) {
  if (!o.example.empty()) return holo::build_example(o.example);
  if (!o.config_path.empty()) return holo::load_config_file(o.config_path);
  holo::fail(holo::ErrorKind::ValidationError,
             "one of --example/--config is required");
}

holo::AnalysisConstants make_constants(const holo::Pseudogroup& pg,
                                       const CommonOpts& o) {
  double cap = std::min(pg.transversal.epsilon0, o.a / 100.0);
  double eps1 = o.eps1 > 0 ? o.eps1 : 0.5 * cap;
  if (!(eps1 > 0 && eps1 < o.a / 100.0))
    holo::fail(holo::ErrorKind::ValidationError,
               "epsilon1 must satisfy 0 < epsilon1 < a/100");
  return holo::estimate_constants(pg, o.a, eps1, o.seed);
}

Json inputs_json(const CommonOpts& o) {
  Json j;
  if (!o.example.empty()) j["example"] = o.example;
  if (!o.config_path.empty()) j["config"] = o.config_path;
  j["a"] = o.a;
  j["eps1"] = o.eps1;
  j["mu"] = o.mu;
  j["delta1"] = o.delta1;
  j["depth"] = o.depth;
  j["budget"] = o.budget;
  j["seeds"] = o.seeds;
  j["workers"] = o.workers;
  j["seed"] = o.seed;
  return j;
}

void emit(const Json& report, const CommonOpts& o) {
  std::string text = report.dump(2);
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    f << text << "\n";
  } else {
    std::cout << text << "\n";
  }
}

int exit_code_for(holo::ErrorKind k) {
  switch (k) {
    case holo::ErrorKind::ParseError: return 2;
    case holo::ErrorKind::ValidationError: return 3;
    case holo::ErrorKind::BudgetExhausted: return 4;
    default: return 1;
  }
}

std::vector<double> read_csv_column(const std::string& path, int column) {
  std::ifstream in(path);
  if (!in) holo::fail(holo::ErrorKind::ParseError, "cannot open " + path);
  std::vector<double> vals;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int idx = 0;
    std::optional<double> got;
    while (std::getline(ss, cell, ',')) {
      if (idx == column) {
        char* end = nullptr;
        double d = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str()) {
          if (lineno == 1) break;  // header row
          holo::fail(holo::ErrorKind::ParseError,
                     "line " + std::to_string(lineno) + ": bad number");
        }
        got = d;
        break;
      }
      ++idx;
    }
    if (got) vals.push_back(*got);
  }
  return vals;
}

holo::FixedPointOptions fp_options(const CommonOpts& o) {
  holo::FixedPointOptions fp;
  fp.mu = o.mu;
  fp.delta1 = o.delta1;
  fp.budget = o.budget;
  fp.evidence_depth = o.depth;
  return fp;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holonomy: pseudogroup dynamics of codimension-one foliations"};
  app.require_subcommand(1);

  CommonOpts o;
  double point = 0.0;
  double epsilon = 1.0;
  double sep_eps = 0.01;
  int n_arg = 8;
  std::string csv_in, csv_out, gen_id, dump_name;
  int csv_column = 0;
  bool have_point = false;

  auto* describe = app.add_subcommand("describe", "pseudogroup summary");
  add_common(describe, o);

  auto* exponent = app.add_subcommand("exponent", "mu_n profile and lambda_hat");
  add_common(exponent, o);
  exponent->add_option("--point", point, "base point")->required();
  exponent->add_option("--csv", csv_out, "write (n, mu_n, lambda_n/n) CSV");

  auto* pliss = app.add_subcommand("pliss", "regular-index search on a ledger");
  add_common(pliss, o, false);
  pliss->add_option("--csv", csv_in, "CSV file with the lambda column")->required();
  pliss->add_option("--column", csv_column, "0-based CSV column");
  pliss->add_option("--csv-out", csv_out, "write per-index flags CSV");

  auto* contract = app.add_subcommand("contract",
                                      "extract + truncate + certify at a point");
  add_common(contract, o);
  contract->add_option("--point", point, "base point")->required();
  contract->add_option("--n", n_arg, "target expansion depth");

  auto* fixed = app.add_subcommand("fixed-point", "hyperbolic fixed point search");
  add_common(fixed, o);
  fixed->add_option("--point", point, "search only at this point")
      ->each([&](const std::string&) { have_point = true; });

  auto* pingpong = app.add_subcommand("ping-pong", "ping-pong game detection");
  add_common(pingpong, o);

  auto* resilient = app.add_subcommand("resilient", "resilient orbit certificate");
  add_common(resilient, o);

  auto* gauge = app.add_subcommand("gauge", "tempered gauge and eq-est4 check");
  add_common(gauge, o);
  gauge->add_option("--point", point, "base point")->required();
  gauge->add_option("--epsilon", epsilon, "gauge tempering epsilon");
  gauge->add_option("--generator", gen_id, "check the inequality across this generator");

  auto* entropy = app.add_subcommand("entropy", "separated-orbit growth estimate");
  add_common(entropy, o);
  entropy->add_option("--n", n_arg, "word depth n");
  entropy->add_option("--eps", sep_eps, "separation scale eps");

  auto* examples = app.add_subcommand("examples", "list or dump builtins");
  add_common(examples, o, false);
  examples->add_option("action", dump_name,
                       "'list' or the name of an example to dump");

  CLI11_PARSE(app, argc, argv);

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (examples->parsed()) {
      if (dump_name.empty() || dump_name == "list") {
        Json names = Json::array();
        for (const auto& n : holo::example_names()) names.push_back(n);
        emit(holo::make_report("examples", inputs_json(o), Json{{"names", names}},
                               Json::object()),
             o);
      } else {
        auto pg = holo::build_example(dump_name);
        std::string text = holo::dump_config(pg);
        if (!o.out.empty()) {
          std::ofstream f(o.out);
          f << text;
        } else {
          std::cout << text;
        }
      }
      return 0;
    }

    if (pliss->parsed()) {
      auto lambdas = read_csv_column(csv_in, csv_column);
      auto res = holo::find_regular_index(lambdas, o.a,
                                          o.eps1 > 0 ? o.eps1 : o.a / 2);
      double theta = o.eps1 > 0 ? o.eps1 : o.a / 2;
      auto flags = holo::regular_flags(lambdas, theta);
      Json jflags = Json::array();
      double run = 0;
      std::ostringstream csv;
      csv << "index,lambda,partial_sum,regular\n";
      for (size_t i = 0; i < lambdas.size(); ++i) {
        run += lambdas[i];
        jflags.push_back(Json{{"index", i + 1},
                              {"lambda", lambdas[i]},
                              {"partial_sum", run},
                              {"regular", static_cast<bool>(flags[i])}});
        csv << (i + 1) << "," << lambdas[i] << "," << run << ","
            << (flags[i] ? 1 : 0) << "\n";
      }
      if (!csv_out.empty()) {
        std::ofstream f(csv_out);
        f << csv.str();
      }
      Json results{{"q", res.q},
                   {"partial_sum", res.partial_sum},
                   {"checked", res.checked},
                   {"max_regular_index",
                    holo::max_regular_index(lambdas, theta)},
                   {"per_index", jflags}};
      emit(holo::make_report("pliss", inputs_json(o), results, Json::object()),
           o);
      return 0;
    }

    auto pg = load_pg(o);
    auto constants = make_constants(pg, o);
    Json diag{{"constants", holo::json_constants(constants)},
              {"epsilon0", pg.transversal.epsilon0}};

    if (describe->parsed()) {
      Json gens = Json::array();
      for (const auto& g : pg.generators) {
        gens.push_back(Json{{"id", g.id},
                            {"kind", g.expr.kind_name()},
                            {"component", g.source_component()},
                            {"target", g.target_component},
                            {"domain", holo::json_interval(g.domain)},
                            {"extended_domain",
                             holo::json_interval(g.extended_domain)},
                            {"inverse_of", g.inverse_id},
                            {"identity", g.is_identity}});
      }
      Json comps = Json::array();
      for (const auto& c : pg.transversal.components)
        comps.push_back(Json{{"core", holo::json_interval(c.core)},
                             {"extended", holo::json_interval(c.extended)}});
      emit(holo::make_report(
               "describe", inputs_json(o),
               Json{{"components", comps}, {"generators", gens}}, diag),
           o);
      return 0;
    }

    if (exponent->parsed()) {
      auto rec = holo::mu_profile(pg, point, o.depth, pg.sound_deriv_bound());
      if (!csv_out.empty()) {
        std::ofstream f(csv_out);
        f << holo::profile_csv(rec);
      }
      Json inputs = inputs_json(o);
      inputs["point"] = point;
      emit(holo::make_report("exponent", inputs, holo::json_profile(pg, rec),
                             diag),
           o);
      return 0;
    }

    if (contract->parsed()) {
      Json inputs = inputs_json(o);
      inputs["point"] = point;
      inputs["n"] = n_arg;
      auto w = holo::extract_expanding_word(pg, point, n_arg, constants);
      auto tr = holo::pliss_truncate(pg, w, constants);
      auto cert = holo::certify_contraction(pg, tr, point, constants);
      Json results{{"expanding_word", holo::json_word(pg, w)},
                   {"q", tr.q},
                   {"certificate", holo::json_certificate(pg, cert)},
                   {"honest_10x", holo::verify_certificate(pg, cert, 10)}};
      emit(holo::make_report("contract", inputs, results, diag), o);
      return 0;
    }

    if (fixed->parsed()) {
      Json inputs = inputs_json(o);
      auto fp = fp_options(o);
      std::optional<holo::FixedPointPair> found;
      std::string last_error = "";
      if (have_point) {
        inputs["point"] = point;
        found = holo::find_hyperbolic_fixed_point(pg, point, constants, fp);
      } else {
        auto seeds = holo::seed_grid(pg, o.seeds);
        for (double s : seeds) {
          try {
            found = holo::find_hyperbolic_fixed_point(pg, s, constants, fp);
            inputs["point"] = s;
            break;
          } catch (const holo::Error& e) {
            last_error = std::string(holo::error_kind_name(e.kind()));
          }
        }
      }
      Json results;
      if (found) {
        results["found"] = true;
        results["phi"] = holo::json_certificate(pg, found->phi);
        results["psi"] = holo::json_certificate(pg, found->psi);
      } else {
        results["found"] = false;
        results["last_error"] = last_error;
      }
      emit(holo::make_report("fixed-point", inputs, results, diag), o);
      return 0;
    }

    if (pingpong->parsed() || resilient->parsed()) {
      holo::PingPongOptions po;
      po.seeds_per_component = o.seeds;
      po.fp = fp_options(o);
      auto seeds = holo::seed_grid(pg, o.seeds);
      auto cert = holo::detect_ping_pong(pg, seeds, constants, po, o.workers);
      Json results;
      if (!cert) {
        results["found"] = false;
      } else {
        results["found"] = true;
        results["certificate"] = holo::json_ping_pong(pg, *cert);
        results["verified"] = holo::verify_ping_pong(pg, *cert);
        if (resilient->parsed()) {
          auto res = holo::ping_pong_to_resilient(pg, *cert);
          results["resilient"] = holo::json_resilience(pg, res);
        }
      }
      emit(holo::make_report(command, inputs_json(o), results, diag), o);
      return 0;
    }

    if (gauge->parsed()) {
      Json inputs = inputs_json(o);
      inputs["point"] = point;
      inputs["epsilon"] = epsilon;
      Json results;
      try {
        auto g = holo::tempered_gauge(pg, point, epsilon, o.depth);
        results["divergent"] = false;
        results["gauge"] = holo::json_gauge(g);
        if (!gen_id.empty()) {
          int gi = pg.generator_index(gen_id);
          auto chk =
              holo::gauge_inequality_check(pg, point, gi, epsilon, o.depth);
          results["inequality"] = Json{{"pass", chk.pass},
                                       {"lower", chk.lower},
                                       {"middle", chk.middle},
                                       {"upper", chk.upper},
                                       {"slack", chk.slack}};
        }
      } catch (const holo::Error& e) {
        if (e.kind() != holo::ErrorKind::Divergent) throw;
        results["divergent"] = true;
        results["detail"] = e.detail();
      }
      emit(holo::make_report("gauge", inputs, results, diag), o);
      return 0;
    }

    if (entropy->parsed()) {
      Json inputs = inputs_json(o);
      inputs["n"] = n_arg;
      inputs["eps"] = sep_eps;
      double est = holo::entropy_lower_estimate(pg, n_arg, sep_eps, o.seeds,
                                                512, o.workers);
      emit(holo::make_report("entropy", inputs, Json{{"estimate", est}}, diag),
           o);
      return 0;
    }
  } catch (const holo::Error& e) {
    Json err = holo::make_report(
        command, inputs_json(o), Json::object(),
        Json{{"error_kind", std::string(holo::error_kind_name(e.kind()))},
             {"detail", e.detail()}});
    emit(err, o);
    return exit_code_for(e.kind());
  }
  return 0;
}
