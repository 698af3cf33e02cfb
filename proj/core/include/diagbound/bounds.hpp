#pragma once

#include <span>
#include <vector>

#include "diagbound/likelihood.hpp"
#include "diagbound/network.hpp"

namespace diagbound {

/// Bounds on R(HG), the relative probability mass of every complete
/// extension of a partial hypothesis. All values are natural logs.
struct NodeBounds {
  double log_r_complete = 0.0;  // R(H̲), also LB1
  double log_lb2 = 0.0;
  double log_ub1 = 0.0;
  double log_ub2 = 0.0;
  double log_lb = 0.0;
  double log_ub = 0.0;

  /// log(ub - lb); log(0) when the interval is closed.
  double log_max_err() const;
  /// ub - lb in linear space (may be +inf for astronomically wide nodes).
  double max_err() const;
};

/// Which bound forms are sound for the current case.
struct BoundPolicy {
  bool use_lb2 = true;
  bool use_ub1 = true;
};

/// Diseases linked to no observed finding. Their mass factors out of every
/// partial hypothesis as ∏(1 + O(d)) and their marginals equal their priors.
struct FactoredSet {
  DiseaseSet members;
  std::vector<DiseaseId> ids;
  double log_multiplier = 0.0;
};

FactoredSet factor_independents(const Network& network,
                                const Evidence& evidence);

/// log R(H̲) + Σ_{d ∈ candidates} log(1 + MEP(d, H)).
double ub1(const AbsorbedEvidence& absorbed, const NodeLikelihoodCache& cache,
           std::span<const DiseaseId> candidates);

/// log R(H̲) + Σ_{d ∈ candidates} log(1 + Õ(d)).
double lb2(const AbsorbedEvidence& absorbed, const NodeLikelihoodCache& cache,
           std::span<const DiseaseId> candidates);

/// Prior terms behind the likelihood-free upper bound. Priors are taken over
/// the non-factored diseases so the factored ones cancel exactly.
class PriorTerms {
 public:
  PriorTerms(const Network& network, const FactoredSet& factored,
             double log_evidence_baseline);

  double log_prior(DiseaseId d) const { return log_prior_[d]; }
  double log_not_prior(DiseaseId d) const { return log_not_prior_[d]; }
  /// -log(P(F | H̲₀) · P(H̲₀)) over the non-factored diseases.
  double log_scale() const { return log_scale_; }

  /// log P(HG) over the non-factored diseases.
  double log_partial_prior(const DiseaseSet& included,
                           const DiseaseSet& excluded) const;

 private:
  std::vector<double> log_prior_;
  std::vector<double> log_not_prior_;
  DiseaseSet factored_;
  double log_scale_ = 0.0;
};

/// log[ R(H̲) + (P(HG) - P(H̲)) / (P(F|H̲₀) P(H̲₀)) ].
///
/// `log_free_absent` is Σ log(1 - p) over the unassigned candidates, so that
/// P(H̲) = P(HG) · exp(log_free_absent).
double ub2(double log_r_complete, double log_partial_prior,
           double log_free_absent, double log_scale);

/// Convenience form computing every prior term from the node's sets.
double ub2(const PriorTerms& priors, const NodeLikelihoodCache& cache,
           const DiseaseSet& included, const DiseaseSet& excluded,
           std::span<const DiseaseId> candidates);

/// Tightest interval from the available forms. LB1 is always included.
NodeBounds combine(double log_r_complete, double log_lb2, double log_ub1,
                   double log_ub2, const BoundPolicy& policy);

}  // namespace diagbound
