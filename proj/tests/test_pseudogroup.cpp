#include <doctest.h>

#include <cmath>
#include <random>

#include "holo/builtin_examples.hpp"
#include "holo/error.hpp"
#include "holo/pseudogroup.hpp"

using namespace holo;

namespace {

Word random_word(const Pseudogroup& pg, std::mt19937& rng, double x,
                 int target_len) {
  Word w = identity_word(pg, x);
  for (int step = 0; step < target_len; ++step) {
    std::vector<int> options;
    int last_inv = w.letters.empty() ? -1 : pg.inverse_index(w.letters.back());
    for (int gi : pg.enumeration_order()) {
      if (gi == last_inv) continue;
      const auto& g = pg.generators[gi];
      if (g.source_component() == w.end_component &&
          g.domain.contains(w.endpoint))
        options.push_back(gi);
    }
    if (options.empty()) break;
    w = compose(pg, w, options[rng() % options.size()]);
  }
  return w;
}

}  // namespace

TEST_CASE("compose tracks the connected domain of the doubling map") {
  auto pg = build_example("doubling");
  int h = pg.generator_index("h");

  Word w = identity_word(pg, 0.0);
  CHECK(w.base_domain.lo == doctest::Approx(-1.0));
  Word w1 = compose(pg, w, h);
  CHECK(w1.base_domain.lo == doctest::Approx(-0.5));
  CHECK(w1.base_domain.hi == doctest::Approx(0.5));
  REQUIRE(w1.log_derivs.size() == 1);
  CHECK(w1.log_derivs[0] == doctest::Approx(std::log(2.0)));

  Word w2 = compose(pg, w1, h);
  CHECK(w2.base_domain.lo == doctest::Approx(-0.25));
  CHECK(w2.base_domain.hi == doctest::Approx(0.25));
  CHECK(w2.log_derivs[1] == doctest::Approx(std::log(2.0)));

  Word v = compose(pg, identity_word(pg, 0.3), h);
  CHECK(v.endpoint == doctest::Approx(0.6));
  CHECK_THROWS_AS(compose(pg, v, h), Error);  // 0.6 outside (-0.5, 0.5)
}

TEST_CASE("word evaluation follows the cocycle") {
  auto pg = build_example("doubling");
  int h = pg.generator_index("h");
  int hinv = pg.inverse_index(h);

  Word w = compose(pg, compose(pg, identity_word(pg, 0.0), h), h);
  CHECK(word_eval(pg, w, 0.1) == doctest::Approx(0.4));
  CHECK(word_deriv(pg, w, 0.1) == doctest::Approx(4.0));

  Word id = identity_word(pg, 0.2);
  CHECK(word_eval(pg, id, 0.2) == doctest::Approx(0.2));
  CHECK(word_deriv(pg, id, 0.2) == doctest::Approx(1.0));

  Word pair = compose(pg, compose(pg, identity_word(pg, 0.2), h), hinv);
  CHECK(word_eval(pg, pair, 0.2) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(word_deriv(pg, pair, 0.2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enumerate_words yields each freely reduced word once") {
  auto pg = build_example("doubling");
  auto w1 = enumerate_words(pg, 0.0, 1);
  CHECK(w1.size() == 3);  // id, h, h^-1
  auto at_edge = enumerate_words(pg, 0.6, 1);
  CHECK(at_edge.size() == 2);  // id, h^-1 (h undefined at 0.6)
  auto w2 = enumerate_words(pg, 0.0, 2);
  CHECK(w2.size() == 5);  // id, h, h^2, h^-1, h^-2
  // shortlex order: lengths nondecreasing.
  for (size_t i = 1; i < w2.size(); ++i)
    CHECK(w2[i - 1].length() <= w2[i].length());
}

TEST_CASE("orbits of the builtin examples") {
  auto pg = build_example("doubling");
  auto o0 = orbit(pg, 0.0, 4);
  CHECK(o0.size() == 1);
  CHECK(o0[0].x == doctest::Approx(0.0));

  auto o1 = orbit(pg, 0.1, 2);
  REQUIRE(o1.size() == 5);
  CHECK(o1[0].x == doctest::Approx(0.025));
  CHECK(o1[1].x == doctest::Approx(0.05));
  CHECK(o1[2].x == doctest::Approx(0.1));
  CHECK(o1[3].x == doctest::Approx(0.2));
  CHECK(o1[4].x == doctest::Approx(0.4));

  auto pgt = build_example("isometric_translation");
  auto o2 = orbit(pgt, 0.0, 2);
  REQUIRE(o2.size() == 5);
  CHECK(o2[0].x == doctest::Approx(-0.6));
  CHECK(o2[1].x == doctest::Approx(-0.3));
  CHECK(o2[2].x == doctest::Approx(0.0));
  CHECK(o2[3].x == doctest::Approx(0.3));
  CHECK(o2[4].x == doctest::Approx(0.6));
}

TEST_CASE("domain monotonicity and basepoint containment") {
  std::mt19937 rng(11);
  for (const auto& name : example_names()) {
    auto pg = build_example(name);
    const auto& core = pg.component(0).core;
    for (int trial = 0; trial < 40; ++trial) {
      double x = core.lo + (core.hi - core.lo) * (0.05 + 0.9 * (rng() % 1000) / 1000.0);
      Word w = identity_word(pg, x);
      for (int step = 0; step < 6; ++step) {
        std::vector<int> options;
        int last_inv =
            w.letters.empty() ? -1 : pg.inverse_index(w.letters.back());
        for (int gi : pg.enumeration_order()) {
          if (gi == last_inv) continue;
          const auto& g = pg.generators[gi];
          if (g.source_component() == w.end_component &&
              g.domain.contains(w.endpoint))
            options.push_back(gi);
        }
        if (options.empty()) break;
        Word next = compose(pg, w, options[rng() % options.size()]);
        CHECK(next.base_domain.lo >= w.base_domain.lo - kEndpointTol);
        CHECK(next.base_domain.hi <= w.base_domain.hi + kEndpointTol);
        CHECK(next.base_domain.contains(next.basepoint, kEndpointTol));
        w = next;
      }
    }
  }
}

TEST_CASE("cocycle identity on random words across all examples") {
  std::mt19937 rng(23);
  for (const auto& name : example_names()) {
    auto pg = build_example(name);
    const auto& core = pg.component(0).core;
    for (int trial = 0; trial < 30; ++trial) {
      double x = core.lo + (core.hi - core.lo) * (0.1 + 0.8 * (rng() % 997) / 997.0);
      Word w = random_word(pg, rng, x, 1 + static_cast<int>(rng() % 8));
      if (w.length() == 0) continue;
      // Telescoping product of generator derivatives at the sampled point.
      double lo = w.base_domain.lo, hi = w.base_domain.hi;
      double y = lo + (hi - lo) * 0.37;
      double prod = 1.0, z = y;
      for (int li : w.letters) {
        prod *= pg.generators[li].expr.deriv(z);
        z = pg.generators[li].expr.eval(z);
      }
      double wd = word_deriv(pg, w, y);
      CHECK(std::abs(wd - prod) <= 1e-10 * prod);
      double h = 1e-6 * std::max(1.0, std::abs(y));
      if (w.base_domain.contains(y - h) && w.base_domain.contains(y + h)) {
        double fd = (word_eval(pg, w, y + h) - word_eval(pg, w, y - h)) / (2 * h);
        CHECK(std::abs(fd - wd) / wd < 1e-5);
      }
    }
  }
}

TEST_CASE("a word followed by its formal inverse acts as the identity") {
  std::mt19937 rng(5);
  for (const auto& name : {"doubling", "ifs_ping_pong", "moebius_slow"}) {
    auto pg = build_example(name);
    const auto& core = pg.component(0).core;
    for (int trial = 0; trial < 25; ++trial) {
      double x = core.lo + (core.hi - core.lo) * (0.2 + 0.6 * (rng() % 991) / 991.0);
      Word w = random_word(pg, rng, x, 4);
      if (w.length() == 0) continue;
      Word full = w;
      bool ok = true;
      for (int li : inverse_letters(pg, w.letters)) {
        try {
          full = compose(pg, full, li, Tracking::extended);
        } catch (const Error&) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      double y = x;
      CHECK(std::abs(word_eval(pg, full, y) - y) < 1e-10);
      CHECK(std::abs(word_deriv(pg, full, y) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("reduced-word cardinality bound") {
  // k non-identity generators admit at most k(k-1)^{n-1} words of length n.
  auto pg = build_example("ifs_ping_pong");
  size_t k = pg.enumeration_order().size();
  for (int n = 1; n <= 4; ++n) {
    auto words = enumerate_words(pg, 0.1, n);
    size_t bound = 1, level = 1;
    for (int j = 1; j <= n; ++j) {
      level = (j == 1) ? k : level * (k - 1);
      bound += level;
    }
    CHECK(words.size() <= bound);
  }
}

TEST_CASE("locate and component bookkeeping") {
  auto pg = build_example("doubling");
  CHECK(pg.locate(0.0) == 0);
  CHECK_THROWS_AS(pg.locate(5.0), Error);
  CHECK(pg.transversal.epsilon0 > 0.0);
}
