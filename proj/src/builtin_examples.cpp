#include "holo/builtin_examples.hpp"

#include <cmath>

#include "holo/error.hpp"

namespace holo {

namespace {

LocalMap make_map(std::string id, MapExpr expr, int comp, double dlo,
                  double dhi, double elo, double ehi, int target) {
  LocalMap m;
  m.id = std::move(id);
  m.expr = std::move(expr);
  m.domain = Interval::open(comp, dlo, dhi);
  m.extended_domain = Interval::open(comp, elo, ehi);
  m.target_component = target;
  return m;
}

Pseudogroup doubling() {
  Pseudogroup pg;
  pg.transversal.components.push_back(
      {Interval::open(0, -1.0, 1.0), Interval::open(0, -1.125, 1.125)});
  pg.generators.push_back(make_map("h", MapExpr::affine(2.0, 0.0), 0, -0.5,
                                   0.5, -0.5625, 0.5625, 0));
  pg.finalize();
  return pg;
}

Pseudogroup isometric_translation() {
  Pseudogroup pg;
  pg.transversal.components.push_back(
      {Interval::open(0, -1.0, 0.7), Interval::open(0, -1.1, 0.8)});
  pg.generators.push_back(make_map("t", MapExpr::affine(1.0, 0.3), 0, -1.0,
                                   0.4, -1.05, 0.45, 0));
  pg.finalize();
  return pg;
}

// Circle rotation on the chart (0,1): the shift piece plus the wrapped
// piece. alpha in (0,1).
void add_rotation(Pseudogroup& pg, const std::string& id, double alpha) {
  pg.generators.push_back(make_map(id + "a", MapExpr::affine(1.0, alpha), 0,
                                   0.0, 1.0 - alpha, -0.05, 1.0 - alpha + 0.05,
                                   0));
  pg.generators.push_back(make_map(id + "b", MapExpr::affine(1.0, alpha - 1.0),
                                   0, 1.0 - alpha, 1.0, 1.0 - alpha - 0.05,
                                   1.05, 0));
}

Pseudogroup isometric_rotation_pair() {
  Pseudogroup pg;
  pg.transversal.components.push_back(
      {Interval::open(0, 0.0, 1.0), Interval::open(0, -0.1, 1.1)});
  add_rotation(pg, "r", std::sqrt(2.0) - 1.0);
  add_rotation(pg, "s", std::sqrt(3.0) - 1.0);
  pg.finalize();
  return pg;
}

Pseudogroup ifs_ping_pong() {
  Pseudogroup pg;
  pg.transversal.components.push_back(
      {Interval::open(0, -1.25, 1.25), Interval::open(0, -1.375, 1.375)});
  pg.generators.push_back(make_map("p", MapExpr::affine(0.25, 0.0), 0, -1.0,
                                   1.0, -1.0625, 1.0625, 0));
  pg.generators.push_back(make_map("q", MapExpr::affine(0.25, 0.75), 0, -1.0,
                                   1.0, -1.0625, 1.0625, 0));
  pg.finalize();
  return pg;
}

Pseudogroup morse_smale_suspension() {
  Pseudogroup pg;
  pg.transversal.components.push_back({Interval::open(0, -0.0625, 1.0625),
                                       Interval::open(0, -0.125, 1.125)});
  // Circle diffeomorphism with repeller at 0 (mod 1), multiplier 2, and
  // attractor at 1/2, multiplier 1/2.
  std::vector<double> knots = {-0.5, 0.0, 0.5, 1.0, 1.5};
  std::vector<double> values = {-0.5, 0.0, 0.5, 1.0, 1.5};
  std::vector<double> derivs = {0.5, 2.0, 0.5, 2.0, 0.5};
  MapExpr f = MapExpr::hermite(knots, values, derivs);
  MapExpr finv = f.inverse();
  const double shrink = 1e-6;
  double core_lo = -0.0625, core_hi = 1.0625;
  double d_lo = finv.eval(core_lo + shrink);
  double d_hi = finv.eval(core_hi - shrink);
  double e_lo = finv.eval(-0.1);
  double e_hi = finv.eval(1.1);
  pg.generators.push_back(make_map("f", f, 0, d_lo, d_hi, e_lo, e_hi, 0));
  // Wrapped piece f + 1 covering the sliver below d_lo.
  std::vector<double> wvalues = {0.5, 1.0, 1.5, 2.0, 2.5};
  MapExpr fw = MapExpr::hermite(knots, wvalues, derivs);
  pg.generators.push_back(
      make_map("g", fw, 0, core_lo + shrink, d_lo, core_lo - 0.02, d_lo + 0.01, 0));
  // Rotation by an irrational angle, two chart pieces.
  const double gamma = 0.381966011250105;
  pg.generators.push_back(make_map("r", MapExpr::affine(1.0, gamma), 0,
                                   core_lo + shrink, core_hi - shrink - gamma,
                                   core_lo - 0.02, core_hi - gamma + 0.02, 0));
  pg.generators.push_back(make_map("s", MapExpr::affine(1.0, gamma - 1.0), 0,
                                   core_lo + shrink + 1.0 - gamma,
                                   core_hi - shrink, core_lo + 1.0 - gamma - 0.02,
                                   core_hi + 0.02, 0));
  pg.finalize();
  return pg;
}

Pseudogroup moebius_slow() {
  Pseudogroup pg;
  pg.transversal.components.push_back(
      {Interval::open(0, -0.05, 0.55), Interval::open(0, -0.1, 0.6)});
  // Parabolic germ x/(x+1) on a domain whose image stops short of 0.1, so
  // the inverse branch never reaches the probe point.
  pg.generators.push_back(make_map("m", MapExpr::moebius(1.0, 0.0, 1.0, 1.0),
                                   0, 0.0, 0.1, -0.01, 0.11, 0));
  pg.finalize();
  return pg;
}

}  // namespace

Pseudogroup build_example(const std::string& name) {
  if (name == "doubling") return doubling();
  if (name == "isometric_translation") return isometric_translation();
  if (name == "isometric_rotation_pair") return isometric_rotation_pair();
  if (name == "ifs_ping_pong") return ifs_ping_pong();
  if (name == "morse_smale_suspension") return morse_smale_suspension();
  if (name == "moebius_slow") return moebius_slow();
  fail(ErrorKind::UnknownExample, name);
}

std::vector<std::string> example_names() {
  return {"doubling",      "isometric_translation", "isometric_rotation_pair",
          "ifs_ping_pong", "morse_smale_suspension", "moebius_slow"};
}

std::vector<ExpectedQuantity> example_expectations(const std::string& name) {
  const double ln2 = std::log(2.0);
  if (name == "doubling")
    return {{"lambda_hat@0/N5", ln2, 1e-9}, {"mu_3@0", 8.0, 1e-9}};
  if (name == "isometric_translation" || name == "isometric_rotation_pair")
    return {{"lambda_hat@0.1/N6", 0.0, 0.0}};
  if (name == "ifs_ping_pong")
    return {{"lambda_hat@0/N3", std::log(4.0), 1e-9},
            {"ping_pong_u", 0.0, 1e-10},
            {"ping_pong_v", 1.0, 1e-10}};
  if (name == "morse_smale_suspension")
    return {{"fixed_point@grid", 0.5, 1e-6}};
  if (name == "moebius_slow")
    return {{"lambda_hat@0.1/N20", 0.0, 0.05}};
  fail(ErrorKind::UnknownExample, name);
}

}  // namespace holo
