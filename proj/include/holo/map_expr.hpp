#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace holo {

// One-dimensional orientation-preserving C^1 map families with exact value
// and derivative evaluation and robust inversion.
//
//   Affine:       x -> slope*x + offset, slope > 0
//   Moebius:      x -> (a*x + b)/(c*x + d), ad - bc > 0
//   SmoothSample: C^1 cubic Hermite interpolant through (knot, value, deriv)
//                 triples; inverted=true evaluates the functional inverse by
//                 bisection + Newton to 1e-12
//   Composite:    left-to-right composition of parts

struct Affine {
  double slope = 1.0;
  double offset = 0.0;
};

struct Moebius {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
};

struct SmoothSample {
  std::vector<double> knots;
  std::vector<double> values;
  std::vector<double> derivs;
  bool inverted = false;
};

class MapExpr;

struct Composite {
  std::vector<MapExpr> parts;  // applied first-to-last
};

class MapExpr {
 public:
  using Node = std::variant<Affine, Moebius, SmoothSample, Composite>;

  MapExpr() : node_(std::make_shared<Node>(Affine{})) {}
  explicit MapExpr(Affine a) : node_(std::make_shared<Node>(a)) {}
  explicit MapExpr(Moebius m) : node_(std::make_shared<Node>(m)) {}
  explicit MapExpr(SmoothSample s) : node_(std::make_shared<Node>(std::move(s))) {}
  explicit MapExpr(Composite c) : node_(std::make_shared<Node>(std::move(c))) {}

  static MapExpr affine(double slope, double offset) {
    return MapExpr(Affine{slope, offset});
  }
  static MapExpr moebius(double a, double b, double c, double d) {
    return MapExpr(Moebius{a, b, c, d});
  }
  static MapExpr hermite(std::vector<double> knots, std::vector<double> values,
                         std::vector<double> derivs) {
    return MapExpr(SmoothSample{std::move(knots), std::move(values),
                                std::move(derivs), false});
  }

  const Node& node() const { return *node_; }

  double eval(double x) const;
  double deriv(double x) const;
  MapExpr inverse() const;

  // Exact bounds for the derivative over [lo, hi] (closed-form per family;
  // composites multiply bounds, giving a sound over-estimate). Used for
  // sound branch-and-bound pruning.
  double deriv_sup(double lo, double hi) const;
  double deriv_inf(double lo, double hi) const;

  // Throws ValidationError when the family invariants fail (orientation,
  // Moebius determinant, Hermite monotonicity on a 1e-3-spaced grid over
  // [lo, hi]).
  void validate(double lo, double hi) const;

  std::string kind_name() const;

 private:
  std::shared_ptr<const Node> node_;
};

}  // namespace holo
