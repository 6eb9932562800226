#pragma once

#include <string>

#include "holo/interval.hpp"
#include "holo/map_expr.hpp"

namespace holo {

// A generator of the pseudogroup: a local orientation-preserving C^1
// diffeomorphism with its core domain, extended domain and target component.
// Evaluation is legal on the extended domain; word-domain tracking uses the
// core domain.
struct LocalMap {
  std::string id;
  MapExpr expr;
  Interval domain;           // core domain on the source component
  Interval extended_domain;  // superset of domain with uniform margin
  int target_component = 0;
  std::string inverse_id;
  bool is_identity = false;

  int source_component() const { return domain.component; }

  double eval(double x) const;
  double deriv(double x) const;

  // Image intervals under the (monotone increasing) map.
  Interval image(const Interval& iv) const;
};

// eval/deriv with the OutOfDomain precondition on the extended domain.
double map_eval(const LocalMap& m, double x);
double map_deriv(const LocalMap& m, double x);

// Exact inverse with domain = image(domain), extended = image(extended).
LocalMap invert(const LocalMap& m);

}  // namespace holo
