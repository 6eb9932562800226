#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "holo/error.hpp"
#include "holo/pliss.hpp"

using namespace holo;

namespace {

// O(m^2) reference checker for theta-regularity.
bool regular_oracle(const std::vector<double>& l, size_t j, double theta) {
  for (size_t i = 1; i <= j; ++i) {
    double s = 0;
    for (size_t t = j - i; t < j; ++t) s += l[t];
    if (!(s + i * theta < 0)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("regularity of hand-checked sequences") {
  std::vector<double> a = {-1, -1, -1};
  CHECK(is_regular(a, 3, 0.5));
  std::vector<double> b = {-3, 1, -1};
  CHECK_FALSE(is_regular(b, 3, 0.5));  // lambda2+lambda3+2*theta = 1 >= 0
  CHECK(is_regular(b, 1, 0.5));        // -3 + 0.5 < 0
}

TEST_CASE("irregularity of hand-checked sequences") {
  std::vector<double> b = {-3, 1, -1};
  CHECK(is_irregular(b, 2, 0.5));       // 1 - 1 + 2*0.5 = 1 >= 0
  CHECK_FALSE(is_irregular(b, 1, 0.5)); // -3 + 1.5 = -1.5 < 0
  std::vector<double> c = {-1, -1};
  CHECK_FALSE(is_irregular(c, 2, 0.5)); // -0.5 < 0
}

TEST_CASE("ties at zero count as irregular") {
  std::vector<double> l = {-0.5};
  CHECK_FALSE(is_regular(l, 1, 0.5));  // -0.5 + 0.5 = 0, strict < fails
  CHECK(is_irregular(l, 1, 0.5));
}

TEST_CASE("find_regular_index on the worked examples") {
  {
    std::vector<double> l = {-1, -1, -1};
    auto r = find_regular_index(l, 1.0, 0.5);
    CHECK(r.q == 3);
    CHECK(r.partial_sum == doctest::Approx(-3.0));
    CHECK(r.partial_sum <= (-1.0 + 0.5) * 3);
    CHECK(r.checked);
  }
  {
    std::vector<double> l = {-3, 1, -1};
    auto r = find_regular_index(l, 1.0, 0.5);
    CHECK(r.q == 1);  // least irregular index is 2
    CHECK(r.partial_sum == doctest::Approx(-3.0));
    CHECK(r.checked);
  }
  {
    std::vector<double> l = {-1, -2, 0, -2};
    auto r = find_regular_index(l, 1.0, 0.5);
    CHECK(r.q == 4);
    CHECK(r.partial_sum == doctest::Approx(-5.0));
    CHECK(r.partial_sum <= -2.0);
    CHECK(r.checked);
  }
  {
    std::vector<double> l = {1, 1};
    CHECK_THROWS_AS(find_regular_index(l, 1.0, 0.5), Error);
  }
}

TEST_CASE("oracle equivalence for short sequences") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> ua(0.2, 2.0);
  int done = 0;
  while (done < 4000) {
    size_t m = 1 + rng() % 12;
    double a = ua(rng);
    std::vector<double> l(m);
    double sum = 0;
    for (auto& v : l) {
      v = u(rng);
      sum += v;
    }
    double need = -a * m;
    if (sum > need) {
      double shift = (sum - need) / m + 1e-9;
      for (auto& v : l) v -= shift;
    }
    double eps1 = a * (0.05 + 0.9 * (rng() % 997) / 997.0);
    auto r = find_regular_index(l, a, eps1);
    CHECK(regular_oracle(l, r.q, eps1));
    CHECK(r.partial_sum <= (-a + eps1) * m + 1e-9);
    size_t qmax = max_regular_index(l, eps1);
    CHECK(qmax >= r.q);
    CHECK(regular_oracle(l, qmax, eps1));
    ++done;
  }
}

TEST_CASE("determinism") {
  std::vector<double> l = {-2.3, 0.7, -1.9, -0.1, -3.3};
  auto r1 = find_regular_index(l, 0.8, 0.3);
  auto r2 = find_regular_index(l, 0.8, 0.3);
  CHECK(r1.q == r2.q);
  CHECK(r1.partial_sum == r2.partial_sum);
}

TEST_CASE("regular_flags matches the oracle") {
  std::mt19937 rng(55);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    size_t m = 1 + rng() % 20;
    std::vector<double> l(m);
    for (auto& v : l) v = u(rng);
    double theta = 0.01 + (rng() % 100) / 50.0;
    auto flags = regular_flags(l, theta);
    for (size_t j = 1; j <= m; ++j)
      CHECK(static_cast<bool>(flags[j - 1]) == regular_oracle(l, j, theta));
  }
}

TEST_CASE("million-entry ledger in under a second") {
  const size_t m = 1000000;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.5, 0.5);
  std::vector<double> l(m);
  for (auto& v : l) v = u(rng);  // mean -1, hypothesis holds w.h.p.
  double sum = kahan_sum(l);
  double a = -sum / m * 0.99;
  REQUIRE(a > 0);
  auto t0 = std::chrono::steady_clock::now();
  auto r = find_regular_index(l, a, a / 2);
  auto t1 = std::chrono::steady_clock::now();
  CHECK(r.q >= 1);
  CHECK(std::chrono::duration<double>(t1 - t0).count() < 1.0);
}
