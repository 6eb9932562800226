#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holo/expansion.hpp"
#include "holo/pseudogroup.hpp"

namespace holo {

// A verified uniformly contracting word: the word, its interval of validity
// J, the image I = word(J), an optional fixed point, and the measured
// uniform derivative bound over J.
struct ContractionCertificate {
  Word word;                        // tracked on extended domains
  Interval J;                       // domain of validity (basepoint inside)
  Interval I;                       // image word(J)
  std::optional<double> fixed_point;
  double sup_deriv = 1.0;           // verified sup of word' over J
  size_t chain_length = 0;          // length of the originating chain
};

struct PlissTruncation {
  size_t q = 0;             // selected regular index
  Word truncated;           // first q letters, re-tracked from the basepoint
  size_t original_length = 0;
};

// Finds a word P at x of length l >= n with log word_deriv(P, x) >= l*a,
// scanning levels n..n*search_factor in shortlex order (the mu-profile
// witness is reused when it already qualifies).
// Throws NoExpansionFound.
Word extract_expanding_word(const Pseudogroup& pg, double x, int n,
                            const AnalysisConstants& constants,
                            int search_factor = 3);

// Applies the Pliss lemma to the negated log-derivative ledger of the word
// and returns the regular prefix. Throws PreconditionViolation when the
// expansion hypothesis fails.
PlissTruncation pliss_truncate(const Pseudogroup& pg, const Word& word,
                               const AnalysisConstants& constants);

// Certifies that the inverse of the truncated word contracts uniformly on
// J = [y - delta0/2, y + delta0/2] around y = word(x): inductive domain
// validity plus dense sampling against exp((-a + 2 eps1) * l).
// Throws CertificationFailed with the first violating sample.
ContractionCertificate certify_contraction(const Pseudogroup& pg,
                                           const PlissTruncation& trunc,
                                           double x,
                                           const AnalysisConstants& constants);

// Re-samples a certificate on a `factor` x finer grid; true when no sample
// exceeds sup_deriv * (1 + 1e-6) and the fixed-point residual (when
// present) stays below 1e-10 with word(J) inside J.
bool verify_certificate(const Pseudogroup& pg,
                        const ContractionCertificate& cert, int factor = 10);

struct FixedPointPair {
  ContractionCertificate phi;  // fixed point u1, domain J1
  ContractionCertificate psi;  // fixed point v1 with |x - v1| < delta1
};

struct FixedPointOptions {
  double mu = 0.5;
  double delta1 = 0.0;        // 0: defaults to delta0'/2
  std::int64_t budget = 10000;  // composed-letter budget per search
  int evidence_depth = 12;
  int minimize_depth = 6;     // closed-word minimization search depth
};

// Implements the accumulation argument: generates certificates for
// increasing n, clusters endpoints, composes h_m o g_n once two endpoints
// land within delta*/4, and Banach-iterates to the hyperbolic fixed point.
// Throws NoExpansionFound (no evidence / no expanding word) or
// BudgetExhausted (certificates exist but no admissible pair).
FixedPointPair find_hyperbolic_fixed_point(const Pseudogroup& pg, double x,
                                           const AnalysisConstants& constants,
                                           const FixedPointOptions& opts);

struct HolonomyReportEntry {
  double point = 0.0;
  int component = 0;
  double lambda_hat = 0.0;
  bool evidence = false;           // lambda_hat > a at the probe depth
  bool certificate_found = false;
  std::optional<double> fixed_point;
  std::string outcome;             // "ok", or the error kind on failure
};

struct HolonomyReport {
  std::vector<HolonomyReportEntry> entries;
  int evidence_count = 0;
  int certificate_count = 0;
};

// Diagnostic sweep: reports every grid point with finite-depth evidence
// together with the certificate-search outcome. Consistency report, not a
// proof.
HolonomyReport check_no_hyperbolic_holonomy(const Pseudogroup& pg,
                                            const std::vector<double>& grid,
                                            const AnalysisConstants& constants,
                                            const FixedPointOptions& opts,
                                            int workers = 1);

// Images of an interval under a letter list (monotone endpoint evaluation).
Interval letters_image(const Pseudogroup& pg, const std::vector<int>& letters,
                       const Interval& iv);
double letters_eval(const Pseudogroup& pg, const std::vector<int>& letters,
                    double y);
double letters_deriv(const Pseudogroup& pg, const std::vector<int>& letters,
                     double y);

// Maximal (basepoint-free) interval on which the letter sequence is defined
// with every step inside the core domains. May be empty.
Interval letters_core_domain(const Pseudogroup& pg,
                             const std::vector<int>& letters);

// Largest validated contraction interval around the fixed point u: scales
// the maximal core domain toward u until the word maps it inside itself
// with sampled derivative < 1. Falls back to `fallback`.
Interval grow_contraction_domain(const Pseudogroup& pg,
                                 const std::vector<int>& letters, double u,
                                 const Interval& fallback);

// Rebuilds a certificate for the given letters/fixed point on a (verified)
// domain J, measuring sup_deriv by dense sampling.
ContractionCertificate make_contraction_certificate(
    const Pseudogroup& pg, const std::vector<int>& letters, double u,
    const Interval& J, size_t chain_length);

}  // namespace holo
