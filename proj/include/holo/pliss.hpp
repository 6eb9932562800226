#pragma once

#include <cstddef>
#include <vector>

#include <span>

namespace holo {

// epsilon-regular / epsilon-irregular indices of a log-derivative sequence.
// Indices are 1-based, matching the usual statement of the lemma.
//
// Index j is theta-regular when every trailing partial sum up to j beats a
// linear drift:  lambda_{j-i+1} + ... + lambda_j + i*theta < 0 for 1 <= i <= j.
// Index k is theta-irregular when
//   lambda_k + ... + lambda_m + (m-k+1)*theta >= 0.
// Ties at exactly zero count as irregular (strict < in the regular test).

struct PlissResult {
  size_t q = 0;            // selected regular index (1-based)
  double partial_sum = 0;  // lambda_1 + ... + lambda_q
  bool checked = false;    // regularity re-verified on output
};

bool is_regular(std::span<const double> lambdas, size_t j, double theta);
bool is_irregular(std::span<const double> lambdas, size_t k, double theta);

// Given sum(lambda) <= -a*m and 0 < epsilon1 < a, returns the constructive
// regular index of the lemma: m when no index is irregular, otherwise
// (least irregular index) - 1. O(m) via suffix sums with compensated
// summation. Throws PreconditionViolation.
PlissResult find_regular_index(std::span<const double> lambdas, double a,
                               double epsilon1);

// Largest theta-regular index, or 0 if none. O(m) via the recurrence
// M_j = lambda_j + theta + max(0, M_{j-1}); j is regular iff M_j < 0.
size_t max_regular_index(std::span<const double> lambdas, double theta);

// Per-index regularity flags in one pass (same recurrence).
std::vector<bool> regular_flags(std::span<const double> lambdas, double theta);

// Compensated sequential sum.
double kahan_sum(std::span<const double> xs);

}  // namespace holo
