#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "diagbound/network.hpp"
#include "diagbound/search.hpp"

namespace diagbound {

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

struct HypothesisPosterior {
  std::vector<DiseaseId> present;  // factored diseases are left unspecified
  double log_r = 0.0;
  double lbp = 0.0;
  double ubp = 1.0;
  double best = 0.0;      // examined-mass ratio clipped into [lbp, ubp]
  double best_raw = 0.0;  // examined-mass ratio as computed
};

struct MarginalPosterior {
  DiseaseId disease = 0;
  double prior = 0.0;
  double lbp = 0.0;
  double ubp = 1.0;
  double best = 0.0;
  double best_raw = 0.0;
  bool factored = false;
};

struct InferenceResult {
  std::vector<HypothesisPosterior> hypotheses;  // top-n by R, descending
  std::vector<MarginalPosterior> marginals;     // one per disease
  double log_evidence_lower = 0.0;              // bounds on log P(F)
  double log_evidence_upper = 0.0;
  double log_lbr_total = 0.0;  // includes the factored multiplier
  double log_ubr_total = 0.0;
  double total_error = 1.0;
  std::vector<TraceRow> trace;
  Termination termination = Termination::running;
  std::size_t expansions = 0;
  std::size_t nodes_created = 0;
  std::size_t settled = 0;
  std::size_t frontier = 0;
  std::size_t factored = 0;
  bool degraded = false;
};

/// Posterior bounds for a settled complete hypothesis with relative
/// probability exp(log_r): [R / UBR, R / LBR].
Interval hypothesis_posterior_bounds(const Search& search, double log_r);
Interval hypothesis_posterior_bounds(double log_r, double log_lbr, double log_ubr);

/// Marginal posterior bounds for one disease, aggregated over the settled
/// hypotheses and the frontier partition.
MarginalPosterior disease_marginal_bounds(const Search& search,
                                          DiseaseId disease);

/// All marginals in one pass over the frontier.
std::vector<MarginalPosterior> all_marginal_bounds(const Search& search);

/// Σ R over settled hypotheses matching `query` / Σ R over all settled.
double best_estimate(std::span<const SettledHypothesis> settled,
                     const std::function<bool(const SettledHypothesis&)>& query);

double total_error(const Search& search);

/// Bounds on log P(F) = log R(H₀) + log P(F|H̲₀) + log P(H̲₀).
Interval evidence_probability_bounds(const Search& search);

/// Posterior records for every settled hypothesis (not just the top n).
std::vector<HypothesisPosterior> settled_posteriors(const Search& search);

InferenceResult assemble(const Search& search);

}  // namespace diagbound
