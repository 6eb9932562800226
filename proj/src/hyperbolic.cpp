#include "holo/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holo/error.hpp"
#include "holo/parallel.hpp"
#include "holo/pliss.hpp"

namespace holo {

double letters_eval(const Pseudogroup& pg, const std::vector<int>& letters,
                    double y) {
  for (int li : letters) y = map_eval(pg.generators[li], y);
  return y;
}

double letters_deriv(const Pseudogroup& pg, const std::vector<int>& letters,
                     double y) {
  double d = 1.0;
  for (int li : letters) {
    const auto& m = pg.generators[li];
    d *= map_deriv(m, y);
    y = m.expr.eval(y);
  }
  return d;
}

Interval letters_image(const Pseudogroup& pg, const std::vector<int>& letters,
                       const Interval& iv) {
  if (iv.empty) return iv;
  Interval r = iv;
  double lo = letters_eval(pg, letters, iv.lo);
  double hi = letters_eval(pg, letters, iv.hi);
  r.lo = lo;
  r.hi = hi;
  if (!letters.empty())
    r.component = pg.generators[letters.back()].target_component;
  return r;
}

Interval letters_core_domain(const Pseudogroup& pg,
                             const std::vector<int>& letters) {
  if (letters.empty()) return Interval::make_empty();
  Interval img = pg.generators[letters[0]].domain;
  img.closed_lo = img.closed_hi = false;
  img = pg.generators[letters[0]].image(img);
  for (size_t j = 1; j < letters.size(); ++j) {
    const auto& g = pg.generators[letters[j]];
    img = img.intersect(g.domain);
    if (img.empty || !(img.length() > 0)) return Interval::make_empty();
    img = g.image(img);
  }
  // Pull the final image back through the whole word.
  std::vector<int> inv = inverse_letters(pg, letters);
  double lo = letters_eval(pg, inv, img.lo);
  double hi = letters_eval(pg, inv, img.hi);
  return Interval::open(pg.generators[letters[0]].source_component(), lo, hi);
}

Word extract_expanding_word(const Pseudogroup& pg, double x, int n,
                            const AnalysisConstants& constants,
                            int search_factor) {
  if (n < 1) fail(ErrorKind::PreconditionViolation, "n < 1");
  const double a = constants.a;
  int max_len = n * std::max(1, search_factor);

  // Witness reuse: the mu-profile witness often already satisfies the
  // bound at the requested length.
  auto prof = mu_profile(pg, x, n, pg.sound_deriv_bound());
  {
    const Word& w = prof.at(n).witness;
    double logd = kahan_sum(w.log_derivs);
    if (static_cast<int>(w.length()) >= n &&
        logd >= a * static_cast<double>(w.length()))
      return w;
  }

  // Shortlex scan of each level with sound target pruning: a subtree whose
  // best possible continuation cannot reach exp(a*level) is skipped.
  const double log_bound = std::log(pg.sound_deriv_bound());
  long nodes = 0;
  const long node_cap = 2000000;
  std::optional<Word> found;
  std::function<bool(const Word&, double, int)> scan =
      [&](const Word& w, double logd, int level) -> bool {
    if (++nodes > node_cap) return false;
    if (static_cast<int>(w.length()) == level) {
      if (kahan_sum(w.log_derivs) >= a * level) {
        found = w;
        return false;
      }
      return true;
    }
    int rem = level - static_cast<int>(w.length());
    if (logd + rem * log_bound < a * level) return true;
    int last_inv = w.letters.empty() ? -1 : pg.inverse_index(w.letters.back());
    for (int gi : pg.enumeration_order()) {
      if (gi == last_inv) continue;
      const auto& g = pg.generators[gi];
      if (g.source_component() != w.end_component) continue;
      if (!g.domain.contains(w.endpoint)) continue;
      double step = std::log(g.expr.deriv(w.endpoint));
      if (!scan(compose(pg, w, gi), logd + step, level)) return false;
    }
    return true;
  };
  for (int level = n; level <= max_len && !found; ++level) {
    scan(identity_word(pg, x), 0.0, level);
    if (nodes > node_cap) break;
  }
  if (found) return *found;
  fail(ErrorKind::NoExpansionFound,
       "no word of length in [" + std::to_string(n) + ", " +
           std::to_string(max_len) + "] with log-derivative >= a*length at " +
           std::to_string(x));
}

PlissTruncation pliss_truncate(const Pseudogroup& pg, const Word& word,
                               const AnalysisConstants& constants) {
  if (word.length() == 0)
    fail(ErrorKind::PreconditionViolation, "empty word");
  std::vector<double> lambdas(word.log_derivs.size());
  for (size_t j = 0; j < lambdas.size(); ++j) lambdas[j] = -word.log_derivs[j];
  PlissResult pr = find_regular_index(lambdas, constants.a, constants.epsilon1);
  PlissTruncation t;
  t.q = pr.q;
  t.original_length = word.length();
  std::vector<int> prefix(word.letters.begin(), word.letters.begin() + pr.q);
  t.truncated = word_from_letters(pg, word.basepoint, prefix);
  return t;
}

ContractionCertificate certify_contraction(const Pseudogroup& pg,
                                           const PlissTruncation& trunc,
                                           double x,
                                           const AnalysisConstants& constants) {
  const Word& w = trunc.truncated;
  const size_t q = w.length();
  const size_t ell = trunc.original_length;
  if (q == 0) fail(ErrorKind::CertificationFailed, "empty truncated word");
  const double d0p = constants.delta0_prime();
  const double bound =
      std::exp((-constants.a + 2 * constants.epsilon1) * static_cast<double>(ell));

  // Orbit points z_0 = x, .., z_q = y along the forward word.
  std::vector<double> z(q + 1);
  z[0] = x;
  for (size_t j = 0; j < q; ++j)
    z[j + 1] = pg.generators[w.letters[j]].expr.eval(z[j]);
  const double y = z[q];
  const int comp = w.end_component;

  Interval J = Interval::closed(comp, y - 4 * d0p, y + 4 * d0p);
  if (!pg.component(comp).extended.contains_interval(J))
    fail(ErrorKind::CertificationFailed, "J leaves the extended transversal");

  std::vector<int> g_letters = inverse_letters(pg, w.letters);

  // Downward induction: push J through the inverse letters, checking the
  // extended-domain containment and the 4*delta0' drift bound at each step.
  double lo = J.lo, hi = J.hi;
  for (size_t t = 0; t < q; ++t) {
    const auto& inv = pg.generators[g_letters[t]];
    if (!inv.extended_domain.contains(lo, kEndpointTol) ||
        !inv.extended_domain.contains(hi, kEndpointTol))
      fail(ErrorKind::CertificationFailed,
           "step " + std::to_string(t) + ": interval leaves extended domain of " +
               inv.id);
    lo = inv.expr.eval(lo);
    hi = inv.expr.eval(hi);
    double anchor = z[q - 1 - t];
    if (std::max(std::abs(lo - anchor), std::abs(hi - anchor)) >
        4 * d0p + 1e-12)
      fail(ErrorKind::CertificationFailed,
           "step " + std::to_string(t) + ": drift beyond 4*delta0'");
  }

  // Dense sampling of the inverse derivative over J.
  const int cells = 800;  // grid step = |J| / 800 = delta0'/100
  double sup = 0.0;
  double step = (J.hi - J.lo) / cells;
  for (int i = 0; i <= cells; ++i) {
    double s = (i == cells) ? J.hi : J.lo + step * i;
    double d = letters_deriv(pg, g_letters, s);
    if (d > bound) {
      std::ostringstream os;
      os << "sample " << s << " has derivative " << d << " > bound " << bound
         << " (epsilon1/delta0 too aggressive)";
      fail(ErrorKind::CertificationFailed, os.str());
    }
    sup = std::max(sup, d);
  }

  ContractionCertificate cert;
  cert.word = word_from_letters(pg, y, g_letters, Tracking::extended);
  cert.J = J;
  cert.I = Interval::closed(w.base_domain.component, lo, hi);
  cert.sup_deriv = sup * (1 + 1e-12);
  cert.chain_length = ell;
  return cert;
}

bool verify_certificate(const Pseudogroup& pg,
                        const ContractionCertificate& cert, int factor) {
  const int cells = 800 * std::max(1, factor);
  double step = (cert.J.hi - cert.J.lo) / cells;
  for (int i = 0; i <= cells; ++i) {
    double s = (i == cells) ? cert.J.hi : cert.J.lo + step * i;
    double d;
    try {
      d = letters_deriv(pg, cert.word.letters, s);
    } catch (const Error&) {
      return false;
    }
    if (d > cert.sup_deriv * (1 + 1e-6)) return false;
  }
  if (cert.fixed_point) {
    double u = *cert.fixed_point;
    double img = letters_eval(pg, cert.word.letters, u);
    if (std::abs(img - u) > 1e-10) return false;
    Interval JI = letters_image(pg, cert.word.letters, cert.J);
    if (!(JI.lo > cert.J.lo - kEndpointTol && JI.hi < cert.J.hi + kEndpointTol))
      return false;
  }
  return true;
}

namespace {

struct StageRecord {
  size_t q = 0;
  double y = 0.0;
  int component = 0;
  std::vector<int> h_letters;  // truncated forward word (length q)
  ContractionCertificate g_cert;
  double bound = 1.0;  // exp((-a + 2 eps1) * ell)
};

double sampled_sup(const Pseudogroup& pg, const std::vector<int>& letters,
                   const Interval& J, int cells) {
  double sup = 0.0;
  double step = (J.hi - J.lo) / cells;
  for (int i = 0; i <= cells; ++i) {
    double s = (i == cells) ? J.hi : J.lo + step * i;
    sup = std::max(sup, letters_deriv(pg, letters, s));
  }
  return sup;
}

// Banach iteration constrained to stay in `box`; returns nullopt when it
// escapes or fails to converge within the cap.
std::optional<double> banach(const Pseudogroup& pg,
                             const std::vector<int>& letters, double start,
                             const Interval& box) {
  double z = start;
  for (int it = 0; it < 10000; ++it) {
    if (!box.contains(z, kEndpointTol)) return std::nullopt;
    double nz = letters_eval(pg, letters, z);
    if (std::abs(nz - z) < 1e-12) return nz;
    z = nz;
  }
  return std::nullopt;
}

// Shortest closed contracting word at u with fixed point within 1e-9 of u;
// keeps certificates human-sized when a primitive loop exists. Fixed points
// can sit on the boundary of the open core domains, so the enumeration
// walks extended domains.
std::optional<std::vector<int>> minimize_closed_word(
    const Pseudogroup& pg, double u, const Interval& J, double mu,
    int max_depth) {
  int comp;
  try {
    comp = pg.locate(u);
  } catch (const Error&) {
    return std::nullopt;
  }
  struct Frame {
    std::vector<int> letters;
    double z;
    int comp;
  };
  for (int L = 1; L <= max_depth; ++L) {
    std::optional<std::vector<int>> found;
    std::function<void(const Frame&)> rec = [&](const Frame& f) {
      if (found) return;
      if (static_cast<int>(f.letters.size()) == L) {
        if (f.comp != comp || std::abs(f.z - u) > 1e-9) return;
        try {
          double sup = sampled_sup(pg, f.letters, J, 256);
          if (!(sup < mu)) return;
          Interval img = letters_image(pg, f.letters, J);
          if (!(img.lo > J.lo - kEndpointTol && img.hi < J.hi + kEndpointTol))
            return;
        } catch (const Error&) {
          return;
        }
        found = f.letters;
        return;
      }
      int last_inv =
          f.letters.empty() ? -1 : pg.inverse_index(f.letters.back());
      for (int gi : pg.enumeration_order()) {
        if (found) return;
        if (gi == last_inv) continue;
        const auto& g = pg.generators[gi];
        if (g.source_component() != f.comp) continue;
        if (!g.extended_domain.contains(f.z, kEndpointTol)) continue;
        Frame child = f;
        child.letters.push_back(gi);
        child.z = g.expr.eval(f.z);
        child.comp = g.target_component;
        rec(child);
      }
    };
    rec(Frame{{}, u, comp});
    if (found) return found;
  }
  return std::nullopt;
}

}  // namespace

Interval grow_contraction_domain(const Pseudogroup& pg,
                                 const std::vector<int>& letters, double u,
                                 const Interval& fallback) {
  Interval D = letters_core_domain(pg, letters);
  if (D.empty || !D.contains(u, kEndpointTol)) return fallback;
  for (double t : {1.0, 0.75, 0.5, 0.25}) {
    Interval J(D.component, u - t * (u - D.lo), u + t * (D.hi - u));
    J.closed_lo = J.closed_hi = false;
    if (!(J.length() > 0)) continue;
    double sup;
    try {
      sup = sampled_sup(pg, letters, J, 256);
    } catch (const Error&) {
      continue;
    }
    if (!(sup < 1.0 - 1e-12)) continue;
    Interval img = letters_image(pg, letters, J);
    if (img.lo > J.lo - kEndpointTol && img.hi < J.hi + kEndpointTol) return J;
  }
  return fallback;
}

ContractionCertificate make_contraction_certificate(
    const Pseudogroup& pg, const std::vector<int>& letters, double u,
    const Interval& J, size_t chain_length) {
  ContractionCertificate cert;
  cert.word = word_from_letters(pg, u, letters, Tracking::extended);
  cert.J = J;
  cert.I = letters_image(pg, letters, J);
  cert.fixed_point = u;
  cert.sup_deriv = sampled_sup(pg, letters, J, 800) * (1 + 1e-12);
  cert.chain_length = chain_length;
  return cert;
}

FixedPointPair find_hyperbolic_fixed_point(const Pseudogroup& pg, double x,
                                           const AnalysisConstants& constants,
                                           const FixedPointOptions& opts) {
  const double d0p = constants.delta0_prime();
  const double delta1 = opts.delta1 > 0 ? opts.delta1 : d0p / 2;
  if (!(delta1 < d0p))
    fail(ErrorKind::PreconditionViolation, "delta1 must be < delta0/8");
  if (!(opts.mu > 0 && opts.mu < 1))
    fail(ErrorKind::PreconditionViolation, "mu must be in (0,1)");
  const double dstar = std::min({1.0, d0p / 4, delta1 / 4});

  if (lambda_hat(pg, x, opts.evidence_depth) <= constants.a)
    fail(ErrorKind::NoExpansionFound,
         "no finite-depth expansion evidence at " + std::to_string(x));

  std::vector<StageRecord> stages;
  std::int64_t budget_used = 0;
  bool stream_alive = true;

  for (int n = 1; stream_alive; ++n) {
    Word w;
    try {
      w = extract_expanding_word(pg, x, n, constants);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NoExpansionFound) {
        if (stages.empty()) throw;
        stream_alive = false;
        break;
      }
      throw;
    }
    budget_used += static_cast<std::int64_t>(w.length());

    StageRecord rec;
    try {
      PlissTruncation tr = pliss_truncate(pg, w, constants);
      rec.g_cert = certify_contraction(pg, tr, x, constants);
      rec.q = tr.q;
      rec.h_letters = tr.truncated.letters;
      rec.y = tr.truncated.endpoint;
      rec.component = tr.truncated.end_component;
      rec.bound = std::exp((-constants.a + 2 * constants.epsilon1) *
                           static_cast<double>(tr.original_length));
      budget_used += 2 * static_cast<std::int64_t>(tr.q);
    } catch (const Error&) {
      if (budget_used > opts.budget)
        fail(ErrorKind::BudgetExhausted,
             "budget exhausted before a certificate pair formed");
      continue;
    }

    // Pair the new stage against every earlier one, earliest first.
    for (const StageRecord& prev : stages) {
      if (prev.component != rec.component) continue;
      if (std::abs(prev.y - rec.y) > dstar / 4) continue;
      if (prev.h_letters == rec.h_letters) continue;

      const StageRecord& m = prev;  // plays h_1
      const StageRecord& nn = rec;  // plays g_n
      // eq-last1 / eq-last2 thresholds.
      if (!(std::pow(constants.C0, static_cast<double>(m.q)) * nn.bound <
            std::min(opts.mu, 0.5)))
        continue;
      if (!(nn.bound < delta1 / 2)) continue;

      double ystar = m.y;
      Interval Jstar = Interval::closed(m.component, ystar - 3 * d0p,
                                        ystar + 3 * d0p);
      if (!m.g_cert.J.contains_interval(Jstar) ||
          !nn.g_cert.J.contains_interval(Jstar))
        continue;
      Interval gmJstar = letters_image(pg, m.g_cert.word.letters, Jstar);
      if (!(nn.g_cert.I.lo > gmJstar.lo && nn.g_cert.I.hi < gmJstar.hi))
        continue;

      // Phi = h_m o g_n.
      std::vector<int> phi_letters = nn.g_cert.word.letters;
      phi_letters.insert(phi_letters.end(), m.h_letters.begin(),
                         m.h_letters.end());
      auto u1 = banach(pg, phi_letters, nn.y, Jstar);
      budget_used += static_cast<std::int64_t>(phi_letters.size());
      if (!u1) continue;
      if (std::abs(letters_eval(pg, phi_letters, *u1) - *u1) > 1e-10) continue;

      Interval J1 = Interval::closed(m.component, *u1 - d0p, *u1 + d0p);
      if (!Jstar.contains_interval(J1)) continue;
      double supphi;
      try {
        supphi = sampled_sup(pg, phi_letters, J1, 800);
      } catch (const Error&) {
        continue;
      }
      if (!(supphi < opts.mu)) continue;
      Interval phiJ1 = letters_image(pg, phi_letters, J1);
      if (!(phiJ1.lo > J1.lo && phiJ1.hi < J1.hi)) continue;

      // Psi = g_n o h_m with fixed point v1 = g_n(u1).
      double v1 = letters_eval(pg, nn.g_cert.word.letters, *u1);
      if (std::abs(x - v1) >= delta1) continue;
      Interval K1 = letters_image(pg, nn.g_cert.word.letters, J1);
      if (!(K1.lo > x - delta1 && K1.hi < x + delta1)) continue;
      const auto& core = pg.component(pg.locate(x)).core;
      if (std::min(std::abs(v1 - core.lo), std::abs(core.hi - v1)) < 1e-9)
        continue;  // fixed point too close to a component boundary; re-search
      std::vector<int> psi_letters = m.h_letters;
      psi_letters.insert(psi_letters.end(), nn.g_cert.word.letters.begin(),
                         nn.g_cert.word.letters.end());
      if (std::abs(letters_eval(pg, psi_letters, v1) - v1) > 1e-10) continue;

      // Prefer the shortest closed contracting word at the fixed point.
      std::vector<int> phi_final = phi_letters;
      double u_final = *u1;
      if (auto shorter =
              minimize_closed_word(pg, *u1, J1, opts.mu, opts.minimize_depth)) {
        auto polished = banach(pg, *shorter, *u1, J1);
        if (polished &&
            std::abs(letters_eval(pg, *shorter, *polished) - *polished) <=
                1e-10) {
          phi_final = *shorter;
          u_final = *polished;
          J1 = Interval::closed(m.component, u_final - d0p, u_final + d0p);
        }
      }
      std::vector<int> psi_final = psi_letters;
      double v_final = v1;
      if (auto shorter = minimize_closed_word(pg, v1, K1, 1.0 - 1e-9,
                                              opts.minimize_depth)) {
        auto polished = banach(pg, *shorter, v1, K1);
        if (polished &&
            std::abs(letters_eval(pg, *shorter, *polished) - *polished) <=
                1e-10) {
          psi_final = *shorter;
          v_final = *polished;
        }
      }

      FixedPointPair pair;
      Interval K1v = Interval::closed(K1.component, K1.lo, K1.hi);
      pair.phi = make_contraction_certificate(pg, phi_final, u_final, J1,
                                              phi_final.size());
      pair.psi = make_contraction_certificate(pg, psi_final, v_final, K1v,
                                              psi_final.size());
      return pair;
    }

    stages.push_back(std::move(rec));
    if (budget_used > opts.budget)
      fail(ErrorKind::BudgetExhausted,
           "budget exhausted before a certificate pair formed");
  }

  fail(ErrorKind::BudgetExhausted,
       "expansion stream dried up with no endpoint cluster (" +
           std::to_string(stages.size()) + " stages)");
}

HolonomyReport check_no_hyperbolic_holonomy(const Pseudogroup& pg,
                                            const std::vector<double>& grid,
                                            const AnalysisConstants& constants,
                                            const FixedPointOptions& opts,
                                            int workers) {
  HolonomyReport rep;
  auto entries = parallel_map<HolonomyReportEntry>(
      grid.size(), workers, [&](size_t i) {
        HolonomyReportEntry e;
        e.point = grid[i];
        try {
          e.component = pg.locate(grid[i]);
        } catch (const Error&) {
          e.outcome = "outside-core";
          return e;
        }
        e.lambda_hat = lambda_hat(pg, grid[i], opts.evidence_depth);
        e.evidence = e.lambda_hat > constants.a;
        if (!e.evidence) {
          e.outcome = "no-evidence";
          return e;
        }
        try {
          FixedPointPair p =
              find_hyperbolic_fixed_point(pg, grid[i], constants, opts);
          e.certificate_found = true;
          e.fixed_point = p.phi.fixed_point;
          e.outcome = "ok";
        } catch (const Error& err) {
          e.outcome = std::string(error_kind_name(err.kind()));
        }
        return e;
      });
  rep.entries = std::move(entries);
  for (const auto& e : rep.entries) {
    if (e.evidence) ++rep.evidence_count;
    if (e.certificate_found) ++rep.certificate_count;
  }
  return rep;
}

}  // namespace holo
