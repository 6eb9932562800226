#pragma once

#include <optional>
#include <vector>

#include "holo/pseudogroup.hpp"

namespace holo {

// Expansion statistics of a point: the maximal n-expansion profile
// mu_n(x) = sup { w'(x) : words w of length <= n defined at x }, its
// log-profile, and the finite-depth exponent estimate
// lambda_hat = max_{1<=n<=N} log(mu_n)/n.

struct ExpansionEntry {
  int n = 0;
  double mu = 1.0;
  Word witness;  // word of length <= n attaining mu at the point
};

struct ExpansionRecord {
  double point = 0.0;
  int component = 0;
  int depth = 0;
  std::vector<ExpansionEntry> per_n;  // entries for n = 0..depth
  double lambda_hat = 0.0;

  const ExpansionEntry& at(int n) const { return per_n.at(n); }
};

// Uniform-continuity data of the generating set.
struct AnalysisConstants {
  double epsilon0 = 0.0;  // extension margin (from the transversal)
  double epsilon1 = 0.0;  // 0 < epsilon1 < min(epsilon0, a/100)
  double delta0 = 0.0;    // logarithmic modulus of continuity
  double C0 = 1.0;        // uniform derivative bound on thickened domains
  double a = 0.0;         // expansion threshold

  double delta0_prime() const { return delta0 / 8.0; }
};

struct GaugeRecord {
  double point = 0.0;
  double epsilon = 0.0;
  double value = 1.0;  // truncated sum of exp(-n*eps)*mu_n
  int truncation_depth = 0;
  double tail_bound = 0.0;
  double growth_cap = 1.0;  // sup of mu_{n+1}/mu_n over the computed range
};

// Profile computation. When `prune_bound` is set (a sound global bound on
// generator derivatives, e.g. Pseudogroup::sound_deriv_bound), subtrees that
// cannot beat the running incumbents are skipped; values are identical to
// the exhaustive enumeration.
ExpansionRecord mu_profile(const Pseudogroup& pg, double x, int depth,
                           std::optional<double> prune_bound = std::nullopt);

// Exhaustive-oracle variant (no pruning ever); for tests.
ExpansionRecord mu_profile_exhaustive(const Pseudogroup& pg, double x,
                                      int depth);

double lambda_hat(const Pseudogroup& pg, double x, int depth);

struct SandwichCheck {
  bool pass = false;
  double mu_prev = 1.0;   // mu_{n-1}(x)
  double middle = 1.0;    // mu_n(g(x)) * g'(x)
  double mu_next = 1.0;   // mu_{n+1}(x)
};

// Verifies mu_{n-1}(x) <= mu_n(g x) g'(x) <= mu_{n+1}(x) to relative 1e-10.
SandwichCheck sandwich_check(const Pseudogroup& pg, double x, int gi, int n);

// Grid-estimated constants: delta0 from Lipschitz constants of log g' on
// the epsilon1-thickened core domains (0.5 safety factor, capped at
// epsilon1), C0 as the max of g' and 1/g' there. The oscillation bound is
// validated on random pairs (seeded); delta0 is halved until it holds.
AnalysisConstants estimate_constants(const Pseudogroup& pg, double a,
                                     double epsilon1, std::uint64_t seed = 0);

// Truncated Lyapunov gauge sum with ratio-test divergence detection.
// Throws Divergent when exp(-eps) * growth_cap >= 1.
GaugeRecord tempered_gauge(const Pseudogroup& pg, double x, double epsilon,
                           int depth);

struct GaugeInequalityCheck {
  bool pass = false;
  double lower = 0.0;   // exp(-eps) * g_eps(x)
  double middle = 0.0;  // g_eps(g x) * g'(x)
  double upper = 0.0;   // exp(eps) * g_eps(x)
  double slack = 0.0;   // tolerance folded from the truncation tails
};

GaugeInequalityCheck gauge_inequality_check(const Pseudogroup& pg, double x,
                                            int gi, double epsilon, int depth);

}  // namespace holo
