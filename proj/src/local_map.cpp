#include "holo/local_map.hpp"

#include "holo/error.hpp"

namespace holo {

double LocalMap::eval(double x) const { return expr.eval(x); }
double LocalMap::deriv(double x) const { return expr.deriv(x); }

Interval LocalMap::image(const Interval& iv) const {
  if (iv.empty) return Interval::make_empty();
  Interval r(target_component, expr.eval(iv.lo), expr.eval(iv.hi),
             iv.closed_lo, iv.closed_hi);
  return r;
}

double map_eval(const LocalMap& m, double x) {
  if (!m.extended_domain.contains(x, kEndpointTol))
    fail(ErrorKind::OutOfDomain,
         m.id + ": " + std::to_string(x) + " outside extended domain " +
             m.extended_domain.str());
  return m.expr.eval(x);
}

double map_deriv(const LocalMap& m, double x) {
  if (!m.extended_domain.contains(x, kEndpointTol))
    fail(ErrorKind::OutOfDomain,
         m.id + ": " + std::to_string(x) + " outside extended domain " +
             m.extended_domain.str());
  return m.expr.deriv(x);
}

LocalMap invert(const LocalMap& m) {
  LocalMap inv;
  inv.id = m.inverse_id.empty() ? m.id + "^-1" : m.inverse_id;
  inv.expr = m.expr.inverse();
  inv.domain = m.image(m.domain);
  inv.extended_domain = m.image(m.extended_domain);
  inv.target_component = m.source_component();
  inv.inverse_id = m.id;
  inv.is_identity = m.is_identity;
  return inv;
}

}  // namespace holo
