#include "holo/pliss.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "holo/error.hpp"

namespace holo {

double kahan_sum(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

static void check_index(std::span<const double> lambdas, size_t j) {
  if (j < 1 || j > lambdas.size())
    fail(ErrorKind::IndexOutOfRange,
         "index " + std::to_string(j) + " of " + std::to_string(lambdas.size()));
}

bool is_regular(std::span<const double> lambdas, size_t j, double theta) {
  check_index(lambdas, j);
  // Running trailing sums from j downward; every one must stay below the
  // -i*theta line.
  double s = 0.0, c = 0.0;
  for (size_t i = 1; i <= j; ++i) {
    double x = lambdas[j - i];
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
    if (!(s + static_cast<double>(i) * theta < 0.0)) return false;
  }
  return true;
}

bool is_irregular(std::span<const double> lambdas, size_t k, double theta) {
  check_index(lambdas, k);
  size_t m = lambdas.size();
  double s = kahan_sum(lambdas.subspan(k - 1));
  return s + static_cast<double>(m - k + 1) * theta >= 0.0;
}

PlissResult find_regular_index(std::span<const double> lambdas, double a,
                               double epsilon1) {
  size_t m = lambdas.size();
  if (m == 0) fail(ErrorKind::PreconditionViolation, "empty sequence");
  if (!(epsilon1 > 0.0 && epsilon1 < a))
    fail(ErrorKind::PreconditionViolation, "epsilon1 not in (0, a)");
  double total = kahan_sum(lambdas);
  if (!(total <= -a * static_cast<double>(m)))
    fail(ErrorKind::PreconditionViolation,
         "sum " + std::to_string(total) + " > -a*m = " +
             std::to_string(-a * static_cast<double>(m)));

  // Least irregular index via one backward sweep of suffix sums.
  size_t least_irregular = 0;  // 0 = none
  double s = 0.0, c = 0.0;
  for (size_t k = m; k >= 1; --k) {
    double x = lambdas[k - 1];
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
    if (s + static_cast<double>(m - k + 1) * epsilon1 >= 0.0)
      least_irregular = k;
  }

  PlissResult r;
  r.q = (least_irregular == 0) ? m : least_irregular - 1;
  if (r.q == 0)
    fail(ErrorKind::PreconditionViolation,
         "index 1 irregular; hypothesis cannot hold");
  r.partial_sum = kahan_sum(lambdas.first(r.q));
  r.checked = is_regular(lambdas, r.q, epsilon1) &&
              r.partial_sum <= (-a + epsilon1) * static_cast<double>(m) + 1e-9;
  return r;
}

std::vector<bool> regular_flags(std::span<const double> lambdas, double theta) {
  std::vector<bool> flags(lambdas.size());
  double M = -std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < lambdas.size(); ++j) {
    M = lambdas[j] + theta + std::max(0.0, M);
    flags[j] = M < 0.0;
  }
  return flags;
}

size_t max_regular_index(std::span<const double> lambdas, double theta) {
  auto flags = regular_flags(lambdas, theta);
  for (size_t j = flags.size(); j >= 1; --j)
    if (flags[j - 1]) return j;
  return 0;
}

}  // namespace holo
