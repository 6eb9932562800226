#include <doctest.h>

#include <cmath>
#include <random>

#include "holo/error.hpp"
#include "holo/local_map.hpp"

using namespace holo;

namespace {

LocalMap simple_map(MapExpr e, double dlo, double dhi, double elo, double ehi) {
  LocalMap m;
  m.id = "m";
  m.expr = std::move(e);
  m.domain = Interval::open(0, dlo, dhi);
  m.extended_domain = Interval::open(0, elo, ehi);
  m.target_component = 0;
  return m;
}

}  // namespace

TEST_CASE("affine evaluation and derivative") {
  MapExpr a = MapExpr::affine(2.0, 0.0);
  CHECK(a.eval(0.3) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(a.deriv(0.123) == doctest::Approx(2.0));
  CHECK(a.deriv(-5.0) == doctest::Approx(2.0));
}

TEST_CASE("moebius x/(x+1)") {
  MapExpr m = MapExpr::moebius(1, 0, 1, 1);
  CHECK(m.eval(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.deriv(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.deriv(1.0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("hermite interpolant through (0,0,1),(1,1,1)") {
  // Hand evaluation of the basis at t = 1/2: h00 = 1/2, h10 = 1/8,
  // h01 = 1/2, h11 = -1/8, so H(1/2) = 1/8 + 1/2 - 1/8 = 1/2.
  MapExpr h = MapExpr::hermite({0, 1}, {0, 1}, {1, 1});
  CHECK(h.eval(0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(h.eval(0.0) == doctest::Approx(0.0));
  CHECK(h.eval(1.0) == doctest::Approx(1.0));
  CHECK(h.deriv(0.0) == doctest::Approx(1.0));
}

TEST_CASE("affine inversion on an interval") {
  LocalMap m = simple_map(MapExpr::affine(2, 0), -0.5, 0.5, -0.6, 0.6);
  LocalMap inv = invert(m);
  CHECK(inv.domain.lo == doctest::Approx(-1.0));
  CHECK(inv.domain.hi == doctest::Approx(1.0));
  CHECK(inv.expr.eval(0.6) == doctest::Approx(0.3));
  CHECK(inv.expr.deriv(0.0) == doctest::Approx(0.5));
}

TEST_CASE("moebius inversion is x/(1-x)") {
  MapExpr m = MapExpr::moebius(1, 0, 1, 1);
  MapExpr inv = m.inverse();
  CHECK(inv.eval(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  for (double x : {0.05, 0.1, 0.2, 0.3}) {
    CHECK(inv.eval(m.eval(x)) == doctest::Approx(x).epsilon(1e-13));
  }
}

TEST_CASE("invert is an involution for random affine maps") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> us(0.2, 5.0), uo(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    double s = us(rng), off = uo(rng);
    LocalMap m = simple_map(MapExpr::affine(s, off), -0.5, 0.5, -0.6, 0.6);
    LocalMap mm = invert(invert(m));
    const auto* a = std::get_if<Affine>(&mm.expr.node());
    REQUIRE(a != nullptr);
    CHECK(a->slope == doctest::Approx(s).epsilon(1e-12));
    CHECK(a->offset == doctest::Approx(off).epsilon(1e-12));
    CHECK(mm.domain.lo == doctest::Approx(m.domain.lo).epsilon(1e-12));
    CHECK(mm.domain.hi == doctest::Approx(m.domain.hi).epsilon(1e-12));
  }
}

TEST_CASE("derivative positivity, inverse identity, finite differences") {
  std::vector<LocalMap> maps;
  maps.push_back(simple_map(MapExpr::affine(1.7, 0.2), -0.5, 0.5, -0.6, 0.6));
  maps.push_back(simple_map(MapExpr::moebius(2, 0, 1, 1), -0.3, 0.45, -0.4, 0.5));
  maps.push_back(simple_map(
      MapExpr::hermite({-1, 0, 1}, {-0.9, 0.05, 1.1}, {0.8, 1.3, 0.9}),
      -0.8, 0.8, -0.9, 0.9));
  Composite comp;
  comp.parts.push_back(MapExpr::affine(0.5, 0.1));
  comp.parts.push_back(MapExpr::moebius(1, 0, 1, 2));
  maps.push_back(simple_map(MapExpr(comp), -0.5, 0.5, -0.6, 0.6));

  for (const auto& m : maps) {
    LocalMap inv = invert(m);
    for (int k = 0; k <= 100; ++k) {
      double x = m.extended_domain.lo +
                 (m.extended_domain.hi - m.extended_domain.lo) * k / 100.0;
      double d = m.deriv(x);
      CHECK(d > 0.0);
      double y = m.eval(x);
      CHECK(std::abs(inv.expr.eval(y) - x) < 1e-10);
      CHECK(std::abs(inv.expr.deriv(y) * d - 1.0) < 1e-9);
      if (k > 0 && k < 100) {
        double h = 1e-6;
        double fd = (m.eval(x + h) - m.eval(x - h)) / (2 * h);
        CHECK(std::abs(fd - d) / d < 1e-5);
      }
    }
  }
}

TEST_CASE("hermite inverse solves to 1e-12") {
  MapExpr h = MapExpr::hermite({-1, 0, 1}, {-0.9, 0.05, 1.1}, {0.8, 1.3, 0.9});
  MapExpr hi = h.inverse();
  for (double x : {-0.9, -0.4, 0.0, 0.3, 0.77}) {
    double y = h.eval(x);
    CHECK(std::abs(h.eval(hi.eval(y)) - y) < 1e-12);
  }
}

TEST_CASE("monotonicity validation rejects bad hermite data") {
  // Large end slopes force the cubic to overshoot and turn back inside the
  // cell even though all knot derivatives are positive.
  MapExpr bad = MapExpr::hermite({0, 1}, {0, 0.1}, {6.0, 6.0});
  CHECK_THROWS_AS(bad.validate(0.0, 1.0), Error);
  MapExpr neg = MapExpr::affine(-1.0, 0.0);
  CHECK_THROWS_AS(neg.validate(-1.0, 1.0), Error);
  MapExpr degenerate = MapExpr::moebius(1, 2, 1, 2);  // ad - bc = 0
  CHECK_THROWS_AS(degenerate.validate(0.0, 1.0), Error);
}

TEST_CASE("eval outside the extended domain raises OutOfDomain") {
  LocalMap m = simple_map(MapExpr::affine(2, 0), -0.5, 0.5, -0.6, 0.6);
  CHECK_THROWS_AS(map_eval(m, 0.7), Error);
  try {
    map_eval(m, 0.7);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfDomain);
  }
  CHECK(map_eval(m, 0.55) == doctest::Approx(1.1));  // extended is legal
}

TEST_CASE("exact derivative bounds per family") {
  MapExpr m = MapExpr::moebius(1, 0, 1, 1);  // deriv 1/(1+x)^2, decreasing
  CHECK(m.deriv_sup(0.0, 1.0) == doctest::Approx(1.0));
  CHECK(m.deriv_inf(0.0, 1.0) == doctest::Approx(0.25));
  // Quadratic derivative with an interior dip: bounds must bracket samples.
  MapExpr h = MapExpr::hermite({0, 1}, {0, 1}, {2, 2});
  double lo = h.deriv_inf(0.0, 1.0), hi = h.deriv_sup(0.0, 1.0);
  for (int k = 0; k <= 64; ++k) {
    double d = h.deriv(k / 64.0);
    CHECK(d >= lo - 1e-12);
    CHECK(d <= hi + 1e-12);
  }
}
