#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "holo/interval.hpp"
#include "holo/local_map.hpp"

namespace holo {

// A point of the disjoint-union transversal.
struct Point {
  int component = 0;
  double x = 0.0;
};

struct TransversalComponent {
  Interval core;      // X_alpha
  Interval extended;  // widetilde X_alpha, strict superset of core
};

struct Transversal {
  std::vector<TransversalComponent> components;
  double epsilon0 = 0.0;  // uniform extension margin, computed at finalize
};

// A word of the pseudogroup: a plaque chain with its connected tracked
// domain around the basepoint and the log-derivative ledger along the
// basepoint orbit. letters are generator indices; empty = identity.
struct Word {
  std::vector<int> letters;
  double basepoint = 0.0;
  Interval base_domain;            // connected, contains basepoint
  std::vector<double> log_derivs;  // log g'(z_{j-1}) per letter
  double endpoint = 0.0;           // image of basepoint
  int end_component = 0;
  double dom_img_lo = 0.0;  // image of base_domain under the word,
  double dom_img_hi = 0.0;  // maintained incrementally by compose()

  size_t length() const { return letters.size(); }
  double log_deriv_sum() const {
    double s = 0.0;
    for (double v : log_derivs) s += v;
    return s;
  }
};

enum class Tracking { core, extended };

class Pseudogroup {
 public:
  Transversal transversal;
  std::vector<LocalMap> generators;

  // Validates all invariants, adds missing inverses and per-component
  // identities, and computes the derived tables. Throws ValidationError.
  void finalize();

  int locate(double x) const;  // component whose core contains x
  const TransversalComponent& component(int idx) const {
    return transversal.components.at(idx);
  }

  int generator_index(const std::string& id) const;
  int inverse_index(int gi) const { return inverse_index_.at(gi); }
  const std::vector<int>& enumeration_order() const { return enum_order_; }

  // Sound global derivative bound: max over non-identity generators of
  // sup(g') and sup(1/g') over extended domains. Used for pruning.
  double sound_deriv_bound() const { return sound_bound_; }

  bool finalized() const { return finalized_; }

 private:
  std::vector<int> inverse_index_;
  std::vector<int> enum_order_;
  double sound_bound_ = 1.0;
  bool finalized_ = false;
};

// --- word operations -------------------------------------------------------

Word identity_word(const Pseudogroup& pg, double x);
Word identity_word_at(const Pseudogroup& pg, int component, double x);

// Extends w by generator gi. The tracked domain becomes the maximal
// connected subinterval of w.base_domain whose image lies in gi's domain
// (core or extended per `tracking`) and which contains the basepoint.
// Throws EmptyComposition when the endpoint is not in gi's domain.
Word compose(const Pseudogroup& pg, const Word& w, int gi,
             Tracking tracking = Tracking::core);

double word_eval(const Pseudogroup& pg, const Word& w, double y);
double word_deriv(const Pseudogroup& pg, const Word& w, double y);

// Inverse letters in reverse order; gives the inverse word as a letter list.
std::vector<int> inverse_letters(const Pseudogroup& pg,
                                 const std::vector<int>& letters);

// Builds a word from a letter list based at x (domain tracked along).
Word word_from_letters(const Pseudogroup& pg, double x,
                       const std::vector<int>& letters,
                       Tracking tracking = Tracking::core);

std::string word_str(const Pseudogroup& pg, const Word& w);

// --- enumeration -----------------------------------------------------------

// Visits every freely reduced word of length <= n whose tracked domain
// contains x, exactly once, in depth-first order with children ordered by
// generator id. Return false from the visitor to stop early.
void visit_words(const Pseudogroup& pg, double x, int n,
                 const std::function<bool(const Word&)>& visit);

// Deterministic shortlex-sorted collection of the same words.
std::vector<Word> enumerate_words(const Pseudogroup& pg, double x, int n);

// Images of x under all words of length <= n, deduplicated to 1e-10 and
// sorted by (component, value).
std::vector<Point> orbit(const Pseudogroup& pg, double x, int n);

inline constexpr double kOrbitDedupTol = 1e-10;

}  // namespace holo
