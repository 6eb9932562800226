#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "holo/hyperbolic.hpp"

namespace holo {

// Two hyperbolic contractions with disjoint power-images inside a common
// domain: a ping-pong game.
struct PingPongCertificate {
  ContractionCertificate P;  // contraction with fixed point u
  ContractionCertificate Q;  // contraction with fixed point v != u
  Interval J;                // common domain
  Interval P_image;          // P^{m1}(J)
  Interval Q_image;          // Q^{m2}(J)
  double disjointness_gap = 0.0;
  int m1 = 0, m2 = 0;
};

struct ResilienceCertificate {
  double x = 0.0;               // fixed point of the contraction P
  double y = 0.0;               // = Q(x), distinct from x
  std::vector<int> R_letters;   // word from x to y (Q's word)
  std::vector<double> trace;    // iterates P^l(y)
  std::vector<double> distances;  // |P^l(y) - x|
};

struct PingPongOptions {
  int seeds_per_component = 64;
  FixedPointOptions fp;
  int max_power = 64;
  double distinct_tol = 1e-9;  // below this two centers are the same orbit
};

// Deterministic seed grid: seeds_per_component+1 inclusive points per core
// component, saturated with single-generator Banach limits (the orbit
// closure of the grid under contracting generators).
std::vector<double> seed_grid(const Pseudogroup& pg, int seeds_per_component);

// Runs the fixed-point search on every seed, collects contraction centers,
// and returns the first pair playing ping-pong in deterministic seed order;
// nullopt when none (absence is a valid answer).
std::optional<PingPongCertificate> detect_ping_pong(
    const Pseudogroup& pg, const std::vector<double>& seeds,
    const AnalysisConstants& constants, const PingPongOptions& opts,
    int workers = 1);

// Prop. "ping-pong iff resilient", constructive direction: x = fix(P),
// y = Q(x), trace P^l(y) -> x. Throws TraceEscaped if an iterate leaves
// P's domain.
ResilienceCertificate ping_pong_to_resilient(const Pseudogroup& pg,
                                             const PingPongCertificate& cert);

// Independent re-verification of a ping-pong certificate on a fine grid.
bool verify_ping_pong(const Pseudogroup& pg, const PingPongCertificate& cert,
                      int grid_points = 1000);

// Windowed separated-orbit growth estimate: over eps-wide windows centered
// at the seed grid, greedily builds a maximal set of candidates pairwise
// (n,eps)-separated (some word of length <= n maps them >= eps apart) and
// returns the max over windows of ln(count)/n. Deterministic.
double entropy_lower_estimate(const Pseudogroup& pg, int n, double eps,
                              int seeds_per_component = 64,
                              int window_points = 512, int workers = 1);

}  // namespace holo
