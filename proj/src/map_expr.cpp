#include "holo/map_expr.hpp"

#include <algorithm>
#include <cmath>

#include "holo/error.hpp"
#include "holo/interval.hpp"

namespace holo {

namespace {

// Locates the Hermite cell for x; clamps to the outer cells so evaluation
// extends past the first/last knot with the boundary cubic.
size_t hermite_cell(const std::vector<double>& knots, double x) {
  if (knots.size() < 2) fail(ErrorKind::ValidationError, "hermite: < 2 knots");
  auto it = std::upper_bound(knots.begin(), knots.end(), x);
  size_t i = (it == knots.begin()) ? 0 : (it - knots.begin() - 1);
  return std::min(i, knots.size() - 2);
}

double hermite_value(const SmoothSample& s, double x) {
  size_t i = hermite_cell(s.knots, x);
  double h = s.knots[i + 1] - s.knots[i];
  double t = (x - s.knots[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1;
  double h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2;
  double h11 = t3 - t2;
  return h00 * s.values[i] + h10 * h * s.derivs[i] + h01 * s.values[i + 1] +
         h11 * h * s.derivs[i + 1];
}

double hermite_deriv(const SmoothSample& s, double x) {
  size_t i = hermite_cell(s.knots, x);
  double h = s.knots[i + 1] - s.knots[i];
  double t = (x - s.knots[i]) / h;
  double t2 = t * t;
  double d00 = 6 * t2 - 6 * t;
  double d10 = 3 * t2 - 4 * t + 1;
  double d01 = -6 * t2 + 6 * t;
  double d11 = 3 * t2 - 2 * t;
  return (d00 * s.values[i] + d01 * s.values[i + 1]) / h + d10 * s.derivs[i] +
         d11 * s.derivs[i + 1];
}

// Solves hermite_value(s, x) = y by bisection bracketing + Newton polish.
double hermite_solve(const SmoothSample& s, double y) {
  double a = s.knots.front(), b = s.knots.back();
  double fa = hermite_value(s, a), fb = hermite_value(s, b);
  // Evaluation is monotone increasing; extend the bracket linearly when y
  // falls outside the knot span (boundary cubic keeps extending).
  while (y < fa) {
    double step = std::max(1.0, b - a);
    a -= step;
    fa = hermite_value(s, a);
  }
  while (y > fb) {
    double step = std::max(1.0, b - a);
    b += step;
    fb = hermite_value(s, b);
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    double fm = hermite_value(s, mid);
    if (fm < y) a = mid; else b = mid;
    if (b - a < 1e-6) break;
  }
  double x = 0.5 * (a + b);
  for (int it = 0; it < 60; ++it) {
    double f = hermite_value(s, x) - y;
    double d = hermite_deriv(s, x);
    if (d <= 0) break;
    double nx = x - f / d;
    nx = std::clamp(nx, a, b);
    if (std::abs(nx - x) < 1e-15 * std::max(1.0, std::abs(x))) { x = nx; break; }
    x = nx;
  }
  // Final bisection fallback keeps 1e-12 no matter what Newton did.
  if (std::abs(hermite_value(s, x) - y) > 1e-12) {
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      double mid = 0.5 * (a + b);
      if (hermite_value(s, mid) < y) a = mid; else b = mid;
    }
    x = 0.5 * (a + b);
  }
  return x;
}

// Exact extrema of the derivative of one Hermite cell restricted to
// t in [t0, t1] (the derivative is quadratic in t).
void hermite_cell_deriv_range(const SmoothSample& s, size_t i, double t0,
                              double t1, double& dmin, double& dmax) {
  double h = s.knots[i + 1] - s.knots[i];
  // H'(t)/1 = A t^2 + B t + C with:
  double yi = s.values[i], yj = s.values[i + 1];
  double di = s.derivs[i], dj = s.derivs[i + 1];
  double A = (6 * yi - 6 * yj) / h + 3 * di + 3 * dj;
  double B = (-6 * yi + 6 * yj) / h - 4 * di - 2 * dj;
  double C = di;
  auto val = [&](double t) { return A * t * t + B * t + C; };
  dmin = std::min(val(t0), val(t1));
  dmax = std::max(val(t0), val(t1));
  if (A != 0.0) {
    double tv = -B / (2 * A);
    if (tv > t0 && tv < t1) {
      dmin = std::min(dmin, val(tv));
      dmax = std::max(dmax, val(tv));
    }
  }
}

void hermite_deriv_range(const SmoothSample& s, double lo, double hi,
                         double& dmin, double& dmax) {
  dmin = std::numeric_limits<double>::infinity();
  dmax = -dmin;
  size_t ci = hermite_cell(s.knots, lo);
  size_t cj = hermite_cell(s.knots, hi);
  for (size_t i = ci; i <= cj; ++i) {
    double h = s.knots[i + 1] - s.knots[i];
    double t0 = ((i == ci ? lo : s.knots[i]) - s.knots[i]) / h;
    double t1 = ((i == cj ? hi : s.knots[i + 1]) - s.knots[i]) / h;
    double a, b;
    hermite_cell_deriv_range(s, i, t0, t1, a, b);
    dmin = std::min(dmin, a);
    dmax = std::max(dmax, b);
  }
}

}  // namespace

double MapExpr::eval(double x) const {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return n.slope * x + n.offset;
        } else if constexpr (std::is_same_v<T, Moebius>) {
          return (n.a * x + n.b) / (n.c * x + n.d);
        } else if constexpr (std::is_same_v<T, SmoothSample>) {
          return n.inverted ? hermite_solve(n, x) : hermite_value(n, x);
        } else {
          double y = x;
          for (const auto& p : n.parts) y = p.eval(y);
          return y;
        }
      },
      *node_);
}

double MapExpr::deriv(double x) const {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return n.slope;
        } else if constexpr (std::is_same_v<T, Moebius>) {
          double den = n.c * x + n.d;
          return (n.a * n.d - n.b * n.c) / (den * den);
        } else if constexpr (std::is_same_v<T, SmoothSample>) {
          if (!n.inverted) return hermite_deriv(n, x);
          double pre = hermite_solve(n, x);
          return 1.0 / hermite_deriv(n, pre);
        } else {
          double y = x, d = 1.0;
          for (const auto& p : n.parts) {
            d *= p.deriv(y);
            y = p.eval(y);
          }
          return d;
        }
      },
      *node_);
}

MapExpr MapExpr::inverse() const {
  return std::visit(
      [&](const auto& n) -> MapExpr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return MapExpr::affine(1.0 / n.slope, -n.offset / n.slope);
        } else if constexpr (std::is_same_v<T, Moebius>) {
          return MapExpr::moebius(n.d, -n.b, -n.c, n.a);
        } else if constexpr (std::is_same_v<T, SmoothSample>) {
          SmoothSample inv = n;
          inv.inverted = !n.inverted;
          return MapExpr(inv);
        } else {
          Composite c;
          for (auto it = n.parts.rbegin(); it != n.parts.rend(); ++it)
            c.parts.push_back(it->inverse());
          return MapExpr(std::move(c));
        }
      },
      *node_);
}

double MapExpr::deriv_sup(double lo, double hi) const {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return n.slope;
        } else if constexpr (std::is_same_v<T, Moebius>) {
          // Derivative is monotone on an interval avoiding the pole, so the
          // extrema sit at the endpoints.
          return std::max(deriv(lo), deriv(hi));
        } else if constexpr (std::is_same_v<T, SmoothSample>) {
          if (!n.inverted) {
            double a, b;
            hermite_deriv_range(n, lo, hi, a, b);
            return b;
          }
          double plo = hermite_solve(n, lo), phi = hermite_solve(n, hi);
          double a, b;
          hermite_deriv_range(n, std::min(plo, phi), std::max(plo, phi), a, b);
          return 1.0 / a;
        } else {
          double s = 1.0, a = lo, b = hi;
          for (const auto& p : n.parts) {
            s *= p.deriv_sup(a, b);
            double na = p.eval(a), nb = p.eval(b);
            a = std::min(na, nb);
            b = std::max(na, nb);
          }
          return s;
        }
      },
      *node_);
}

double MapExpr::deriv_inf(double lo, double hi) const {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Affine>) {
          return n.slope;
        } else if constexpr (std::is_same_v<T, Moebius>) {
          return std::min(deriv(lo), deriv(hi));
        } else if constexpr (std::is_same_v<T, SmoothSample>) {
          if (!n.inverted) {
            double a, b;
            hermite_deriv_range(n, lo, hi, a, b);
            return a;
          }
          double plo = hermite_solve(n, lo), phi = hermite_solve(n, hi);
          double a, b;
          hermite_deriv_range(n, std::min(plo, phi), std::max(plo, phi), a, b);
          return 1.0 / b;
        } else {
          double s = 1.0, a = lo, b = hi;
          for (const auto& p : n.parts) {
            s *= p.deriv_inf(a, b);
            double na = p.eval(a), nb = p.eval(b);
            a = std::min(na, nb);
            b = std::max(na, nb);
          }
          return s;
        }
      },
      *node_);
}

void MapExpr::validate(double lo, double hi) const {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Affine>) {
          if (!(n.slope > 0))
            fail(ErrorKind::ValidationError, "orientation: affine slope <= 0");
        } else if constexpr (std::is_same_v<T, Moebius>) {
          if (!(n.a * n.d - n.b * n.c > 0))
            fail(ErrorKind::ValidationError, "orientation: moebius ad-bc <= 0");
          double pole_num = -n.d, pole_den = n.c;
          if (pole_den != 0.0) {
            double pole = pole_num / pole_den;
            if (pole >= lo - kEndpointTol && pole <= hi + kEndpointTol)
              fail(ErrorKind::ValidationError, "moebius pole inside domain");
          }
        } else if constexpr (std::is_same_v<T, SmoothSample>) {
          if (n.knots.size() < 2 || n.knots.size() != n.values.size() ||
              n.knots.size() != n.derivs.size())
            fail(ErrorKind::ValidationError, "hermite: inconsistent data");
          for (size_t i = 0; i + 1 < n.knots.size(); ++i)
            if (!(n.knots[i] < n.knots[i + 1]))
              fail(ErrorKind::ValidationError, "hermite: knots not increasing");
          for (double d : n.derivs)
            if (!(d > 0))
              fail(ErrorKind::ValidationError,
                   "orientation: hermite knot derivative <= 0");
          // Monotonicity on a 1e-3-spaced grid of the domain length; the
          // inverted flag shares the forward data so check the forward map.
          double a = n.inverted ? hermite_solve(n, lo) : lo;
          double b = n.inverted ? hermite_solve(n, hi) : hi;
          if (a > b) std::swap(a, b);
          double step = std::max((b - a) * 1e-3, 1e-9);
          for (double x = a; x <= b + step * 0.5; x += step) {
            if (!(hermite_deriv(n, std::min(x, b)) > 0))
              fail(ErrorKind::ValidationError,
                   "orientation: hermite derivative <= 0 on grid");
          }
        } else {
          double a = lo, b = hi;
          for (const auto& p : n.parts) {
            p.validate(a, b);
            double na = p.eval(a), nb = p.eval(b);
            a = std::min(na, nb);
            b = std::max(na, nb);
          }
        }
      },
      *node_);
}

std::string MapExpr::kind_name() const {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Affine>) return "affine";
        else if constexpr (std::is_same_v<T, Moebius>) return "moebius";
        else if constexpr (std::is_same_v<T, SmoothSample>)
          return n.inverted ? "hermite_inverse" : "hermite";
        else return "composite";
      },
      *node_);
}

}  // namespace holo
