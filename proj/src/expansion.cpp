#include "holo/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "holo/error.hpp"

namespace holo {

namespace {

// Shortlex-smaller comparison of letter id sequences, for deterministic
// witness tie-breaking.
bool word_less(const Pseudogroup& pg, const Word& a, const Word& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  for (size_t i = 0; i < a.length(); ++i) {
    const auto& ida = pg.generators[a.letters[i]].id;
    const auto& idb = pg.generators[b.letters[i]].id;
    if (ida != idb) return ida < idb;
  }
  return false;
}

struct ProfileState {
  std::vector<double> best;       // best derivative among words of length <= m
  std::vector<Word> witness;      // attaining word (shortest, then shortlex)
};

void profile_rec(const Pseudogroup& pg, const Word& w, double deriv, int depth,
                 std::optional<double> bound, ProfileState& st) {
  size_t len = w.length();
  for (size_t m = len; m <= static_cast<size_t>(depth); ++m) {
    if (deriv < st.best[m]) break;  // best[] is nondecreasing in m
    if (deriv > st.best[m]) {
      st.best[m] = deriv;
      st.witness[m] = w;
    } else if (word_less(pg, w, st.witness[m])) {
      st.witness[m] = w;
    }
  }
  if (len >= static_cast<size_t>(depth)) return;

  if (bound) {
    // Sound pruning: no descendant of w at length m can exceed
    // deriv * bound^(m-len); skip the subtree when none can beat the
    // incumbents.
    bool can_improve = false;
    double factor = 1.0;
    for (size_t m = len + 1; m <= static_cast<size_t>(depth); ++m) {
      factor *= *bound;
      if (deriv * factor > st.best[m]) {
        can_improve = true;
        break;
      }
    }
    if (!can_improve) return;
  }

  int last_inv = w.letters.empty() ? -1 : pg.inverse_index(w.letters.back());
  for (int gi : pg.enumeration_order()) {
    if (gi == last_inv) continue;
    const auto& g = pg.generators[gi];
    if (g.source_component() != w.end_component) continue;
    if (!g.domain.contains(w.endpoint)) continue;
    double step = g.expr.deriv(w.endpoint);
    profile_rec(pg, compose(pg, w, gi), deriv * step, depth, bound, st);
  }
}

// Greedy warm start: repeatedly follow the locally steepest applicable
// letter. Seeds the incumbents so the branch-and-bound can prune the
// derivative-neutral subtrees immediately; values are unaffected.
void greedy_warm_start(const Pseudogroup& pg, double x, int depth,
                       ProfileState& st) {
  Word w = identity_word(pg, x);
  double deriv = 1.0;
  for (int stepn = 1; stepn <= depth; ++stepn) {
    int last_inv = w.letters.empty() ? -1 : pg.inverse_index(w.letters.back());
    int pick = -1;
    double best_step = -1.0;
    for (int gi : pg.enumeration_order()) {
      if (gi == last_inv) continue;
      const auto& g = pg.generators[gi];
      if (g.source_component() != w.end_component) continue;
      if (!g.domain.contains(w.endpoint)) continue;
      double d = g.expr.deriv(w.endpoint);
      if (d > best_step) {
        best_step = d;
        pick = gi;
      }
    }
    if (pick < 0) break;
    w = compose(pg, w, pick);
    deriv *= best_step;
    for (size_t m = w.length(); m <= static_cast<size_t>(depth); ++m) {
      if (deriv <= st.best[m]) break;
      st.best[m] = deriv;
      st.witness[m] = w;
    }
  }
}

ExpansionRecord profile_impl(const Pseudogroup& pg, double x, int depth,
                             std::optional<double> bound) {
  if (depth < 0) fail(ErrorKind::PreconditionViolation, "depth < 0");
  ProfileState st;
  Word id = identity_word(pg, x);
  st.best.assign(depth + 1, 0.0);
  st.witness.assign(depth + 1, id);
  st.best[0] = 1.0;
  if (bound) greedy_warm_start(pg, x, depth, st);
  profile_rec(pg, id, 1.0, depth, bound, st);

  ExpansionRecord rec;
  rec.point = x;
  rec.component = id.end_component;
  rec.depth = depth;
  double running = 1.0;
  for (int n = 0; n <= depth; ++n) {
    running = std::max(running, st.best[n]);
    ExpansionEntry e;
    e.n = n;
    e.mu = running;
    e.witness = st.witness[n];
    rec.per_n.push_back(std::move(e));
  }
  rec.lambda_hat = 0.0;
  bool first = true;
  for (int n = 1; n <= depth; ++n) {
    double v = std::log(rec.per_n[n].mu) / n;
    if (first || v > rec.lambda_hat) rec.lambda_hat = v;
    first = false;
  }
  if (depth == 0) rec.lambda_hat = 0.0;
  return rec;
}

}  // namespace

ExpansionRecord mu_profile(const Pseudogroup& pg, double x, int depth,
                           std::optional<double> prune_bound) {
  return profile_impl(pg, x, depth, prune_bound);
}

ExpansionRecord mu_profile_exhaustive(const Pseudogroup& pg, double x,
                                      int depth) {
  return profile_impl(pg, x, depth, std::nullopt);
}

double lambda_hat(const Pseudogroup& pg, double x, int depth) {
  if (depth < 1) fail(ErrorKind::PreconditionViolation, "depth < 1");
  return mu_profile(pg, x, depth, pg.sound_deriv_bound()).lambda_hat;
}

SandwichCheck sandwich_check(const Pseudogroup& pg, double x, int gi, int n) {
  const auto& g = pg.generators.at(gi);
  if (!g.domain.contains(x))
    fail(ErrorKind::OutOfDomain, "x outside domain of " + g.id);
  if (n < 1) fail(ErrorKind::PreconditionViolation, "n < 1");
  double y = g.expr.eval(x);
  double gp = g.expr.deriv(x);
  auto px = mu_profile(pg, x, n + 1, pg.sound_deriv_bound());
  auto py = mu_profile(pg, y, n, pg.sound_deriv_bound());
  SandwichCheck c;
  c.mu_prev = px.at(n - 1).mu;
  c.middle = py.at(n).mu * gp;
  c.mu_next = px.at(n + 1).mu;
  const double rel = 1e-10;
  c.pass = c.mu_prev <= c.middle * (1 + rel) && c.middle <= c.mu_next * (1 + rel);
  return c;
}

AnalysisConstants estimate_constants(const Pseudogroup& pg, double a,
                                     double epsilon1, std::uint64_t seed) {
  AnalysisConstants k;
  k.epsilon0 = pg.transversal.epsilon0;
  k.a = a;
  k.epsilon1 = epsilon1;
  if (!(epsilon1 > 0 && epsilon1 <= k.epsilon0))
    fail(ErrorKind::PreconditionViolation, "epsilon1 not in (0, epsilon0]");

  // Thickened domain of a generator: core domain +- epsilon1, clipped to
  // the extended domain.
  auto thickened = [&](const LocalMap& g) {
    Interval t = g.domain;
    t.lo = std::max(g.domain.lo - epsilon1, g.extended_domain.lo);
    t.hi = std::min(g.domain.hi + epsilon1, g.extended_domain.hi);
    t.closed_lo = t.closed_hi = true;
    return t;
  };

  double worst_L = 0.0;
  double C0 = 1.0;
  for (int gi : pg.enumeration_order()) {
    const auto& g = pg.generators[gi];
    Interval t = thickened(g);
    double len = t.length();
    int cells = std::max(2, static_cast<int>(std::ceil(1.0 / 1e-3)));
    double step = len / cells;
    double prev_log = std::log(g.expr.deriv(t.lo));
    for (int i = 1; i <= cells; ++i) {
      double xx = t.lo + step * i;
      double d = g.expr.deriv(std::min(xx, t.hi));
      if (!(d > 0) || !std::isfinite(d))
        fail(ErrorKind::DegenerateGenerator,
             g.id + ": derivative not finite/positive on grid");
      double lg = std::log(d);
      worst_L = std::max(worst_L, std::abs(lg - prev_log) / step);
      prev_log = lg;
      C0 = std::max(C0, std::max(d, 1.0 / d));
    }
    C0 = std::max(C0, std::max(g.expr.deriv(t.lo), 1.0 / g.expr.deriv(t.lo)));
  }
  k.C0 = C0;
  k.delta0 = (worst_L > 0) ? std::min(epsilon1, 0.5 * epsilon1 / worst_L)
                           : epsilon1;

  // Validate the oscillation bound on random pairs; halve delta0 on
  // violation.
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 40; ++attempt) {
    bool ok = true;
    for (int trial = 0; trial < 10000 && ok; ++trial) {
      size_t pick = rng() % pg.enumeration_order().size();
      const auto& g = pg.generators[pg.enumeration_order()[pick]];
      Interval t = thickened(g);
      std::uniform_real_distribution<double> ux(t.lo, t.hi);
      double y = ux(rng);
      std::uniform_real_distribution<double> ud(-k.delta0, k.delta0);
      double z = std::clamp(y + ud(rng), t.lo, t.hi);
      double osc = std::abs(std::log(g.expr.deriv(y)) - std::log(g.expr.deriv(z)));
      if (osc > epsilon1) ok = false;
    }
    if (ok) break;
    k.delta0 *= 0.5;
  }
  return k;
}

GaugeRecord tempered_gauge(const Pseudogroup& pg, double x, double epsilon,
                           int depth) {
  if (!(epsilon > 0) || depth < 1)
    fail(ErrorKind::PreconditionViolation, "need epsilon > 0, depth >= 1");
  auto prof = mu_profile(pg, x, depth, pg.sound_deriv_bound());
  GaugeRecord r;
  r.point = x;
  r.epsilon = epsilon;
  r.truncation_depth = depth;
  double cap = 1.0;
  for (int n = 0; n < depth; ++n)
    cap = std::max(cap, prof.at(n + 1).mu / prof.at(n).mu);
  r.growth_cap = cap;
  double ratio = std::exp(-epsilon) * cap;
  if (ratio >= 1.0)
    fail(ErrorKind::Divergent,
         "ratio test failed: exp(-eps)*growth_cap = " + std::to_string(ratio));
  double value = 0.0;
  for (int n = 0; n <= depth; ++n)
    value += std::exp(-static_cast<double>(n) * epsilon) * prof.at(n).mu;
  r.value = value;
  // Geometric tail bound: mu_{depth+m} <= mu_depth * cap^m gives
  //   tail <= exp(-(depth+1) eps) mu_depth cap / (1 - exp(-eps) cap).
  r.tail_bound = std::exp(-(depth + 1.0) * epsilon) * prof.at(depth).mu * cap /
                 (1.0 - ratio);
  return r;
}

GaugeInequalityCheck gauge_inequality_check(const Pseudogroup& pg, double x,
                                            int gi, double epsilon,
                                            int depth) {
  const auto& g = pg.generators.at(gi);
  if (!g.domain.contains(x))
    fail(ErrorKind::OutOfDomain, "x outside domain of " + g.id);
  double y = g.expr.eval(x);
  double gp = g.expr.deriv(x);
  GaugeRecord gx = tempered_gauge(pg, x, epsilon, depth);
  GaugeRecord gy = tempered_gauge(pg, y, epsilon, depth);
  GaugeInequalityCheck c;
  c.lower = std::exp(-epsilon) * gx.value;
  c.middle = gy.value * gp;
  c.upper = std::exp(epsilon) * gx.value;
  c.slack = std::exp(epsilon) * gx.tail_bound + gy.tail_bound * gp + 1e-12;
  c.pass = c.lower <= c.middle + c.slack && c.middle <= c.upper + c.slack;
  return c;
}

}  // namespace holo
