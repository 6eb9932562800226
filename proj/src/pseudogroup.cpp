#include "holo/pseudogroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "holo/error.hpp"

namespace holo {

namespace {

double margin_lo(const Interval& inner, const Interval& outer) {
  return inner.lo - outer.lo;
}
double margin_hi(const Interval& inner, const Interval& outer) {
  return outer.hi - inner.hi;
}

}  // namespace

void Pseudogroup::finalize() {
  if (transversal.components.empty())
    fail(ErrorKind::ValidationError, "transversal has no components");

  // Component sanity: core strictly inside extended, extended ranges of
  // distinct components numerically disjoint (they model disjoint spaces).
  for (size_t i = 0; i < transversal.components.size(); ++i) {
    auto& c = transversal.components[i];
    c.core.component = static_cast<int>(i);
    c.extended.component = static_cast<int>(i);
    if (c.core.empty || c.extended.empty)
      fail(ErrorKind::ValidationError, "component " + std::to_string(i) + " empty");
    if (!(margin_lo(c.core, c.extended) > kEndpointTol &&
          margin_hi(c.core, c.extended) > kEndpointTol))
      fail(ErrorKind::ValidationError,
           "component containment: core not strictly inside extended");
    for (size_t j = 0; j < i; ++j) {
      const auto& d = transversal.components[j];
      if (!(c.extended.hi < d.extended.lo || d.extended.hi < c.extended.lo))
        fail(ErrorKind::ValidationError, "components overlap numerically");
    }
  }

  // Resolve ids, auto-add inverses, then per-component identities.
  std::map<std::string, int> by_id;
  for (size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].id.empty())
      fail(ErrorKind::ValidationError, "generator without id");
    if (!by_id.emplace(generators[i].id, static_cast<int>(i)).second)
      fail(ErrorKind::ValidationError, "duplicate generator id " + generators[i].id);
  }
  size_t explicit_count = generators.size();
  for (size_t i = 0; i < explicit_count; ++i) {
    LocalMap& g = generators[i];
    if (g.is_identity) continue;
    if (!g.inverse_id.empty() && by_id.count(g.inverse_id)) continue;
    LocalMap inv = invert(g);
    if (by_id.count(inv.id))
      fail(ErrorKind::ValidationError, "inverse id collision " + inv.id);
    g.inverse_id = inv.id;
    by_id.emplace(inv.id, static_cast<int>(generators.size()));
    generators.push_back(std::move(inv));
  }
  for (size_t ci = 0; ci < transversal.components.size(); ++ci) {
    bool found = false;
    for (const auto& g : generators)
      if (g.is_identity && g.source_component() == static_cast<int>(ci))
        found = true;
    if (!found) {
      LocalMap e;
      e.id = "id" + std::to_string(ci);
      e.expr = MapExpr::affine(1.0, 0.0);
      e.domain = transversal.components[ci].core;
      e.extended_domain = transversal.components[ci].extended;
      e.target_component = static_cast<int>(ci);
      e.inverse_id = e.id;
      e.is_identity = true;
      if (by_id.count(e.id))
        fail(ErrorKind::ValidationError, "identity id collision " + e.id);
      by_id.emplace(e.id, static_cast<int>(generators.size()));
      generators.push_back(std::move(e));
    }
  }

  // Per-generator validation.
  double eps0 = std::numeric_limits<double>::infinity();
  for (const auto& c : transversal.components) {
    eps0 = std::min(eps0, margin_lo(c.core, c.extended));
    eps0 = std::min(eps0, margin_hi(c.core, c.extended));
  }
  for (auto& g : generators) {
    int sc = g.source_component(), tc = g.target_component;
    if (sc < 0 || sc >= (int)transversal.components.size() || tc < 0 ||
        tc >= (int)transversal.components.size())
      fail(ErrorKind::ValidationError, g.id + ": bad component index");
    g.extended_domain.component = sc;
    if (g.domain.empty || g.extended_domain.empty)
      fail(ErrorKind::ValidationError, g.id + ": empty domain");
    double mlo = margin_lo(g.domain, g.extended_domain);
    double mhi = margin_hi(g.domain, g.extended_domain);
    if (!(mlo > kEndpointTol && mhi > kEndpointTol))
      fail(ErrorKind::ValidationError,
           "extension margin: " + g.id + " domain not strictly inside extended domain");
    eps0 = std::min(eps0, std::min(mlo, mhi));
    if (!transversal.components[sc].extended.contains_interval(g.extended_domain))
      fail(ErrorKind::ValidationError,
           g.id + ": extended domain leaves the component");
    g.expr.validate(g.extended_domain.lo, g.extended_domain.hi);
    Interval img_ext = g.image(g.extended_domain);
    if (!transversal.components[tc].extended.contains_interval(img_ext))
      fail(ErrorKind::ValidationError,
           "image containment: " + g.id + " extended image leaves target");
    Interval img_core = g.image(g.domain);
    if (!transversal.components[tc].core.contains_interval(img_core))
      fail(ErrorKind::ValidationError,
           "image containment: " + g.id + " core image leaves target core");
    if (g.is_identity) {
      for (int k = 0; k <= 16; ++k) {
        double x = g.domain.lo + (g.domain.hi - g.domain.lo) * k / 16.0;
        if (std::abs(g.deriv(x) - 1.0) > 1e-10 || std::abs(g.eval(x) - x) > 1e-10)
          fail(ErrorKind::ValidationError, "identity derivative: " + g.id);
      }
    }
  }

  // Inverse closure.
  inverse_index_.assign(generators.size(), -1);
  for (size_t i = 0; i < generators.size(); ++i) {
    const auto& g = generators[i];
    auto it = by_id.find(g.inverse_id);
    if (it == by_id.end())
      fail(ErrorKind::ValidationError, "inverse closure: " + g.id +
                                           " names missing inverse " + g.inverse_id);
    inverse_index_[i] = it->second;
    const auto& h = generators[it->second];
    for (int k = 1; k < 32; ++k) {
      double x = g.domain.lo + (g.domain.hi - g.domain.lo) * k / 32.0;
      double y = g.eval(x);
      if (!h.extended_domain.contains(y, 1e-9) ||
          std::abs(h.eval(y) - x) > 1e-9)
        fail(ErrorKind::ValidationError,
             "inverse closure: " + h.id + " is not the inverse of " + g.id);
    }
  }

  // Deterministic enumeration order over non-identity generators.
  enum_order_.clear();
  for (size_t i = 0; i < generators.size(); ++i)
    if (!generators[i].is_identity) enum_order_.push_back(static_cast<int>(i));
  std::sort(enum_order_.begin(), enum_order_.end(), [&](int a, int b) {
    return generators[a].id < generators[b].id;
  });

  sound_bound_ = 1.0;
  for (int gi : enum_order_) {
    const auto& g = generators[gi];
    double lo = g.extended_domain.lo, hi = g.extended_domain.hi;
    double s = g.expr.deriv_sup(lo, hi);
    double in = g.expr.deriv_inf(lo, hi);
    if (!(in > 0) || !std::isfinite(s))
      fail(ErrorKind::DegenerateGenerator, g.id + ": derivative not finite/positive");
    sound_bound_ = std::max(sound_bound_, std::max(s, 1.0 / in));
  }

  transversal.epsilon0 = eps0;
  finalized_ = true;
}

int Pseudogroup::locate(double x) const {
  for (size_t i = 0; i < transversal.components.size(); ++i)
    if (transversal.components[i].core.contains(x)) return static_cast<int>(i);
  fail(ErrorKind::OutOfDomain,
       std::to_string(x) + " not in any core component");
}

int Pseudogroup::generator_index(const std::string& id) const {
  for (size_t i = 0; i < generators.size(); ++i)
    if (generators[i].id == id) return static_cast<int>(i);
  fail(ErrorKind::ValidationError, "unknown generator id " + id);
}

Word identity_word_at(const Pseudogroup& pg, int component, double x) {
  Word w;
  w.basepoint = x;
  w.base_domain = pg.component(component).core;
  w.base_domain.closed_lo = w.base_domain.closed_hi = false;
  w.endpoint = x;
  w.end_component = component;
  w.dom_img_lo = w.base_domain.lo;
  w.dom_img_hi = w.base_domain.hi;
  return w;
}

Word identity_word(const Pseudogroup& pg, double x) {
  return identity_word_at(pg, pg.locate(x), x);
}

namespace {

// Evaluates the inverse of w at a point near its image interval edge.
double pullback(const Pseudogroup& pg, const Word& w, double y) {
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    const LocalMap& inv = pg.generators[pg.inverse_index(*it)];
    y = inv.expr.eval(y);
  }
  return y;
}

}  // namespace

Word compose(const Pseudogroup& pg, const Word& w, int gi, Tracking tracking) {
  const LocalMap& g = pg.generators.at(gi);
  const Interval& gdom =
      tracking == Tracking::core ? g.domain : g.extended_domain;
  if (g.source_component() != w.end_component)
    fail(ErrorKind::EmptyComposition,
         "generator " + g.id + " acts on a different component");
  if (!gdom.contains(w.endpoint))
    fail(ErrorKind::EmptyComposition,
         "endpoint " + std::to_string(w.endpoint) + " outside domain of " + g.id);

  Word r = w;
  double clo = std::max(w.dom_img_lo, gdom.lo);
  double chi = std::min(w.dom_img_hi, gdom.hi);
  if (!(clo < chi))
    fail(ErrorKind::EmptyComposition, "degenerate tracked domain");
  if (clo > w.dom_img_lo) r.base_domain.lo = pullback(pg, w, clo);
  if (chi < w.dom_img_hi) r.base_domain.hi = pullback(pg, w, chi);
  r.base_domain.closed_lo = r.base_domain.closed_hi = false;

  r.letters.push_back(gi);
  r.log_derivs.push_back(std::log(g.expr.deriv(w.endpoint)));
  r.endpoint = g.expr.eval(w.endpoint);
  r.end_component = g.target_component;
  r.dom_img_lo = g.expr.eval(clo);
  r.dom_img_hi = g.expr.eval(chi);
  return r;
}

double word_eval(const Pseudogroup& pg, const Word& w, double y) {
  if (!w.base_domain.contains(y, kEndpointTol))
    fail(ErrorKind::OutOfDomain, "point outside tracked word domain");
  for (int li : w.letters) y = map_eval(pg.generators[li], y);
  return y;
}

double word_deriv(const Pseudogroup& pg, const Word& w, double y) {
  if (!w.base_domain.contains(y, kEndpointTol))
    fail(ErrorKind::OutOfDomain, "point outside tracked word domain");
  double d = 1.0;
  for (int li : w.letters) {
    const auto& m = pg.generators[li];
    d *= map_deriv(m, y);
    y = m.expr.eval(y);
  }
  return d;
}

std::vector<int> inverse_letters(const Pseudogroup& pg,
                                 const std::vector<int>& letters) {
  std::vector<int> inv;
  inv.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it)
    inv.push_back(pg.inverse_index(*it));
  return inv;
}

Word word_from_letters(const Pseudogroup& pg, double x,
                       const std::vector<int>& letters, Tracking tracking) {
  Word w = identity_word(pg, x);
  for (int li : letters) w = compose(pg, w, li, tracking);
  return w;
}

std::string word_str(const Pseudogroup& pg, const Word& w) {
  if (w.letters.empty()) return "<id>";
  std::ostringstream os;
  for (size_t i = 0; i < w.letters.size(); ++i) {
    if (i) os << ".";
    os << pg.generators[w.letters[i]].id;
  }
  return os.str();
}

namespace {

bool visit_rec(const Pseudogroup& pg, const Word& w, int n,
               const std::function<bool(const Word&)>& visit) {
  if (!visit(w)) return false;
  if ((int)w.length() >= n) return true;
  int last_inv = w.letters.empty() ? -1 : pg.inverse_index(w.letters.back());
  for (int gi : pg.enumeration_order()) {
    if (gi == last_inv) continue;  // free reduction
    const auto& g = pg.generators[gi];
    if (g.source_component() != w.end_component) continue;
    if (!g.domain.contains(w.endpoint)) continue;
    if (!visit_rec(pg, compose(pg, w, gi), n, visit)) return false;
  }
  return true;
}

}  // namespace

void visit_words(const Pseudogroup& pg, double x, int n,
                 const std::function<bool(const Word&)>& visit) {
  visit_rec(pg, identity_word(pg, x), n, visit);
}

std::vector<Word> enumerate_words(const Pseudogroup& pg, double x, int n) {
  std::vector<Word> out;
  visit_words(pg, x, n, [&](const Word& w) {
    out.push_back(w);
    return true;
  });
  std::sort(out.begin(), out.end(), [&](const Word& a, const Word& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    for (size_t i = 0; i < a.length(); ++i) {
      const auto& ida = pg.generators[a.letters[i]].id;
      const auto& idb = pg.generators[b.letters[i]].id;
      if (ida != idb) return ida < idb;
    }
    return false;
  });
  return out;
}

std::vector<Point> orbit(const Pseudogroup& pg, double x, int n) {
  std::vector<Point> pts;
  visit_words(pg, x, n, [&](const Word& w) {
    pts.push_back({w.end_component, w.endpoint});
    return true;
  });
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    if (a.component != b.component) return a.component < b.component;
    return a.x < b.x;
  });
  std::vector<Point> out;
  for (const auto& p : pts) {
    if (!out.empty() && out.back().component == p.component &&
        std::abs(out.back().x - p.x) <= kOrbitDedupTol)
      continue;
    out.push_back(p);
  }
  return out;
}

}  // namespace holo
