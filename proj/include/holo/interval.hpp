#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace holo {

// Absolute tolerance used for all endpoint comparisons.
inline constexpr double kEndpointTol = 1e-12;

// An oriented open/closed interval living on one transversal component.
// Components are disjoint spaces: two intervals on different components
// never intersect, whatever their numeric ranges.
struct Interval {
  int component = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool closed_lo = false;
  bool closed_hi = false;
  bool empty = true;

  Interval() = default;
  Interval(int comp, double a, double b, bool cl = false, bool ch = false)
      : component(comp), lo(a), hi(b), closed_lo(cl), closed_hi(ch),
        empty(!(a <= b)) {}

  static Interval open(int comp, double a, double b) {
    return Interval(comp, a, b, false, false);
  }
  static Interval closed(int comp, double a, double b) {
    return Interval(comp, a, b, true, true);
  }
  static Interval make_empty() { return Interval(); }

  double length() const { return empty ? 0.0 : hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }

  bool contains(double x, double tol = 0.0) const {
    if (empty) return false;
    bool above = closed_lo ? (x >= lo - tol) : (x > lo - tol);
    bool below = closed_hi ? (x <= hi + tol) : (x < hi + tol);
    return above && below;
  }

  // Strict interior containment with a safety tolerance.
  bool strictly_contains(double x, double tol = kEndpointTol) const {
    return !empty && x > lo + tol && x < hi - tol;
  }

  bool contains_interval(const Interval& other, double tol = kEndpointTol) const {
    if (other.empty) return true;
    if (empty || component != other.component) return false;
    return other.lo >= lo - tol && other.hi <= hi + tol;
  }

  Interval intersect(const Interval& other) const {
    if (empty || other.empty || component != other.component)
      return make_empty();
    double a = std::max(lo, other.lo);
    double b = std::min(hi, other.hi);
    if (!(a <= b)) return make_empty();
    bool cl = (lo > other.lo) ? closed_lo
                              : (lo < other.lo ? other.closed_lo
                                               : (closed_lo && other.closed_lo));
    bool ch = (hi < other.hi) ? closed_hi
                              : (hi > other.hi ? other.closed_hi
                                               : (closed_hi && other.closed_hi));
    return Interval(component, a, b, cl, ch);
  }

  // Gap to another interval on the same component; 0 if they touch or
  // overlap, +inf across components.
  double gap_to(const Interval& other) const {
    if (empty || other.empty || component != other.component)
      return std::numeric_limits<double>::infinity();
    if (other.lo > hi) return other.lo - hi;
    if (lo > other.hi) return lo - other.hi;
    return 0.0;
  }

  std::string str() const;
};

inline std::string Interval::str() const {
  if (empty) return "{}";
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%c%.17g, %.17g%c@%d", closed_lo ? '[' : '(',
                lo, hi, closed_hi ? ']' : ')', component);
  return buf;
}

}  // namespace holo
