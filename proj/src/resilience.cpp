#include "holo/resilience.hpp"

#include <algorithm>
#include <cmath>

#include "holo/error.hpp"
#include "holo/parallel.hpp"

namespace holo {

std::vector<double> seed_grid(const Pseudogroup& pg, int seeds_per_component) {
  std::vector<double> seeds;
  for (const auto& comp : pg.transversal.components) {
    double lo = comp.core.lo, hi = comp.core.hi;
    for (int i = 0; i <= seeds_per_component; ++i) {
      double x = lo + (hi - lo) * i / seeds_per_component;
      // Keep strictly inside the open core.
      if (i == 0) x = std::nextafter(lo, hi);
      if (i == seeds_per_component) x = std::nextafter(hi, lo);
      seeds.push_back(x);
    }
  }
  // Saturate with single-generator Banach limits: iterating a contracting
  // generator from a seed converges to its nearby fixed point, which is
  // where expansion-word endpoints accumulate.
  std::vector<double> extra;
  for (double s : seeds) {
    for (int gi : pg.enumeration_order()) {
      const auto& g = pg.generators[gi];
      double z = s;
      bool converged = false;
      for (int it = 0; it < 200; ++it) {
        if (!g.domain.contains(z)) break;
        double nz = g.expr.eval(z);
        if (std::abs(nz - z) < 1e-12) {
          z = nz;
          converged = true;
          break;
        }
        z = nz;
      }
      if (converged) {
        try {
          pg.locate(z);
          extra.push_back(z);
        } catch (const Error&) {
        }
      }
    }
  }
  seeds.insert(seeds.end(), extra.begin(), extra.end());
  std::sort(seeds.begin(), seeds.end());
  std::vector<double> out;
  for (double s : seeds)
    if (out.empty() || std::abs(s - out.back()) > 1e-9) out.push_back(s);
  return out;
}

namespace {

// Iterated image of J under the certificate word, validity-checked against
// the certificate domain.
std::optional<Interval> power_image(const Pseudogroup& pg,
                                    const ContractionCertificate& cert,
                                    const Interval& J, int power) {
  Interval cur = J;
  for (int k = 0; k < power; ++k) {
    if (!cert.J.contains_interval(cur, kEndpointTol)) return std::nullopt;
    try {
      cur = letters_image(pg, cert.word.letters, cur);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return cur;
}

}  // namespace

std::optional<PingPongCertificate> detect_ping_pong(
    const Pseudogroup& pg, const std::vector<double>& seeds,
    const AnalysisConstants& constants, const PingPongOptions& opts,
    int workers) {
  struct SeedResult {
    bool ok = false;
    FixedPointPair pair;
  };
  auto results = parallel_map<SeedResult>(
      seeds.size(), workers, [&](size_t i) {
        SeedResult r;
        try {
          r.pair = find_hyperbolic_fixed_point(pg, seeds[i], constants, opts.fp);
          r.ok = true;
        } catch (const Error&) {
        }
        return r;
      });

  // Distinct contraction centers in deterministic seed order, each with its
  // contraction domain grown to the largest validated interval.
  std::vector<ContractionCertificate> centers;
  for (const auto& r : results) {
    if (!r.ok || !r.pair.phi.fixed_point) continue;
    double u = *r.pair.phi.fixed_point;
    bool dup = false;
    for (const auto& c : centers)
      if (c.J.component == r.pair.phi.J.component &&
          std::abs(*c.fixed_point - u) <= opts.distinct_tol)
        dup = true;
    if (dup) continue;
    const auto& letters = r.pair.phi.word.letters;
    Interval grown = grow_contraction_domain(pg, letters, u, r.pair.phi.J);
    try {
      centers.push_back(make_contraction_certificate(
          pg, letters, u, grown, r.pair.phi.chain_length));
    } catch (const Error&) {
      centers.push_back(r.pair.phi);
    }
  }

  for (size_t i = 0; i < centers.size(); ++i) {
    for (size_t j = i + 1; j < centers.size(); ++j) {
      const auto& P = centers[i];
      const auto& Q = centers[j];
      if (P.J.component != Q.J.component) continue;
      double u = *P.fixed_point, v = *Q.fixed_point;
      if (std::abs(u - v) <= opts.distinct_tol) continue;
      Interval J = P.J.intersect(Q.J);
      if (J.empty || !(J.length() > 0)) continue;

      // Minimal powers with both images inside J and disjoint.
      for (int s = 2; s <= 2 * opts.max_power; ++s) {
        bool found = false;
        PingPongCertificate cert;
        for (int m1 = 1; m1 < s && !found; ++m1) {
          int m2 = s - m1;
          if (m2 < 1 || m1 > opts.max_power || m2 > opts.max_power) continue;
          auto A = power_image(pg, P, J, m1);
          auto B = power_image(pg, Q, J, m2);
          if (!A || !B) continue;
          if (!J.contains_interval(*A, kEndpointTol) ||
              !J.contains_interval(*B, kEndpointTol))
            continue;
          double gap = A->gap_to(*B);
          if (!(gap > 0)) continue;
          cert.P = P;
          cert.Q = Q;
          cert.J = J;
          cert.P_image = *A;
          cert.Q_image = *B;
          cert.disjointness_gap = gap;
          cert.m1 = m1;
          cert.m2 = m2;
          found = true;
        }
        if (found) return cert;
      }
    }
  }
  return std::nullopt;
}

ResilienceCertificate ping_pong_to_resilient(const Pseudogroup& pg,
                                             const PingPongCertificate& cert) {
  ResilienceCertificate r;
  if (!cert.P.fixed_point)
    fail(ErrorKind::PreconditionViolation, "P has no fixed point");
  r.x = *cert.P.fixed_point;
  r.R_letters = cert.Q.word.letters;
  double y;
  try {
    y = letters_eval(pg, r.R_letters, r.x);
  } catch (const Error&) {
    fail(ErrorKind::TraceEscaped, "Q is not defined at x");
  }
  r.y = y;
  double z = y;
  for (int it = 0; it < 100000; ++it) {
    double d = std::abs(z - r.x);
    r.trace.push_back(z);
    r.distances.push_back(d);
    if (d < 1e-8) return r;
    if (!cert.P.J.contains(z, kEndpointTol))
      fail(ErrorKind::TraceEscaped,
           "iterate " + std::to_string(z) + " left P's domain " +
               cert.P.J.str());
    try {
      z = letters_eval(pg, cert.P.word.letters, z);
    } catch (const Error&) {
      fail(ErrorKind::TraceEscaped, "iterate left the word's domain");
    }
  }
  fail(ErrorKind::TraceEscaped, "trace did not converge");
}

bool verify_ping_pong(const Pseudogroup& pg, const PingPongCertificate& cert,
                      int grid_points) {
  // Recompute both power-images pointwise on a fine grid and assert
  // containment and the recorded gap.
  auto sweep = [&](const ContractionCertificate& C, int power,
                   const Interval& expect) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i <= grid_points; ++i) {
      double z = cert.J.lo + (cert.J.hi - cert.J.lo) * i / grid_points;
      for (int k = 0; k < power; ++k) {
        try {
          z = letters_eval(pg, C.word.letters, z);
        } catch (const Error&) {
          return false;
        }
      }
      lo = std::min(lo, z);
      hi = std::max(hi, z);
      if (!cert.J.contains(z, 1e-9)) return false;
    }
    if (lo < expect.lo - 1e-9 || hi > expect.hi + 1e-9) return false;
    return true;
  };
  if (!sweep(cert.P, cert.m1, cert.P_image)) return false;
  if (!sweep(cert.Q, cert.m2, cert.Q_image)) return false;
  if (!(cert.P_image.gap_to(cert.Q_image) >= cert.disjointness_gap - 1e-9))
    return false;
  if (!(cert.P.sup_deriv < 1.0) || !(cert.Q.sup_deriv < 1.0)) return false;
  return true;
}

namespace {

// (n,eps)-separation of a candidate pair: DFS over freely reduced words
// applicable to both points, with early exit on the first separating word.
bool separated(const Pseudogroup& pg, int comp, double p, double q, int n,
               double eps) {
  struct Frame {
    double p, q;
    int comp;
    int last_inv;
    int depth;
  };
  std::vector<Frame> stack;
  stack.push_back({p, q, comp, -1, 0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (std::abs(f.p - f.q) >= eps) return true;
    if (f.depth >= n) continue;
    for (int gi : pg.enumeration_order()) {
      if (gi == f.last_inv) continue;
      const auto& g = pg.generators[gi];
      if (g.source_component() != f.comp) continue;
      if (!g.domain.contains(f.p) || !g.domain.contains(f.q)) continue;
      stack.push_back({g.expr.eval(f.p), g.expr.eval(f.q), g.target_component,
                       pg.inverse_index(gi), f.depth + 1});
    }
  }
  return false;
}

}  // namespace

double entropy_lower_estimate(const Pseudogroup& pg, int n, double eps,
                              int seeds_per_component, int window_points,
                              int workers) {
  if (n < 1 || !(eps > 0))
    fail(ErrorKind::PreconditionViolation, "need n >= 1, eps > 0");

  // Window centers: plain inclusive grid (no orbit saturation needed here).
  std::vector<std::pair<int, double>> centers;
  for (size_t ci = 0; ci < pg.transversal.components.size(); ++ci) {
    const auto& core = pg.component(static_cast<int>(ci)).core;
    for (int i = 0; i <= seeds_per_component; ++i)
      centers.push_back(
          {static_cast<int>(ci),
           core.lo + (core.hi - core.lo) * i / seeds_per_component});
  }

  auto counts = parallel_map<int>(centers.size(), workers, [&](size_t wi) {
    auto [comp, c] = centers[wi];
    const auto& core = pg.component(comp).core;
    double wlo = std::max(core.lo, c - eps / 2);
    double whi = std::min(core.hi, c + eps / 2);
    if (!(whi > wlo)) return 0;
    std::vector<double> kept;
    for (int k = 0; k < window_points; ++k) {
      double cand = wlo + (whi - wlo) * (k + 0.5) / window_points;
      bool ok = true;
      for (double p : kept) {
        if (!separated(pg, comp, p, cand, n, eps)) {
          ok = false;
          break;
        }
      }
      if (ok) kept.push_back(cand);
    }
    return static_cast<int>(kept.size());
  });

  int best = 0;
  for (int c : counts) best = std::max(best, c);
  if (best <= 0) return 0.0;
  return std::log(static_cast<double>(best)) / n;
}

}  // namespace holo
