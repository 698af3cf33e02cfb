#include "diagbound/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "diagbound/logmath.hpp"

namespace diagbound {

double NodeBounds::log_max_err() const { return log_sub(log_ub, log_lb); }

double NodeBounds::max_err() const {
  double e = log_max_err();
  return e == kLogZero ? 0.0 : std::exp(e);
}

FactoredSet factor_independents(const Network& network,
                                const Evidence& evidence) {
  const std::size_t n = network.disease_count();
  DiseaseSet linked(n);
  for (const auto* list : {&evidence.positive, &evidence.negative})
    for (FindingId f : *list)
      for (DiseaseId d : network.parents_of(f)) linked.insert(d);

  FactoredSet out;
  out.members = DiseaseSet(n);
  for (std::size_t d = 0; d < n; ++d) {
    if (linked.contains(static_cast<DiseaseId>(d))) continue;
    out.members.insert(static_cast<DiseaseId>(d));
    out.ids.push_back(static_cast<DiseaseId>(d));
    // 1 + O(d) = 1 / (1 - p)
    out.log_multiplier -= std::log1p(-network.diseases[d].prior);
  }
  return out;
}

double ub1(const AbsorbedEvidence& absorbed, const NodeLikelihoodCache& cache,
           std::span<const DiseaseId> candidates) {
  if (cache.log_r == kLogZero) {
    // noisy-OR zero mass persists through every extension; tabular tables
    // can recover, so no product bound exists there
    return absorbed.mode == GateMode::noisy_or_leaky
               ? kLogZero
               : std::numeric_limits<double>::infinity();
  }
  double sum = cache.log_r;
  for (DiseaseId d : candidates) sum += log1p_exp(log_mep(absorbed, cache, d));
  return sum;
}

double lb2(const AbsorbedEvidence& absorbed, const NodeLikelihoodCache& cache,
           std::span<const DiseaseId> candidates) {
  if (cache.log_r == kLogZero) return kLogZero;
  double sum = cache.log_r;
  for (DiseaseId d : candidates)
    sum += log1p_exp(absorbed.log_adjusted_odds[d]);
  return sum;
}

PriorTerms::PriorTerms(const Network& network, const FactoredSet& factored,
                       double log_evidence_baseline) {
  const std::size_t n = network.disease_count();
  log_prior_.resize(n);
  log_not_prior_.resize(n);
  double log_none = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    double p = network.diseases[d].prior;
    log_prior_[d] = std::log(p);
    log_not_prior_[d] = std::log1p(-p);
    if (!factored.members.contains(static_cast<DiseaseId>(d)))
      log_none += log_not_prior_[d];
  }
  factored_ = factored.members;
  log_scale_ = -(log_evidence_baseline + log_none);
}

double PriorTerms::log_partial_prior(const DiseaseSet& included,
                                     const DiseaseSet& excluded) const {
  double sum = 0.0;
  for (DiseaseId d : included.members()) sum += log_prior_[d];
  for (DiseaseId d : excluded.members())
    if (!factored_.contains(d)) sum += log_not_prior_[d];
  return sum;
}

double ub2(double log_r_complete, double log_partial_prior,
           double log_free_absent, double log_scale) {
  // P(HG) - P(H̲) = P(HG) · (1 - ∏_{free}(1 - p))
  double log_gap = log_free_absent == 0.0
                       ? kLogZero
                       : log_partial_prior + std::log(-std::expm1(log_free_absent));
  return log_add(log_r_complete, log_gap + log_scale);
}

double ub2(const PriorTerms& priors, const NodeLikelihoodCache& cache,
           const DiseaseSet& included, const DiseaseSet& excluded,
           std::span<const DiseaseId> candidates) {
  double free_absent = 0.0;
  for (DiseaseId d : candidates) free_absent += priors.log_not_prior(d);
  return ub2(cache.log_r, priors.log_partial_prior(included, excluded),
             free_absent, priors.log_scale());
}

NodeBounds combine(double log_r_complete, double log_lb2, double log_ub1,
                   double log_ub2, const BoundPolicy& policy) {
  NodeBounds b;
  b.log_r_complete = log_r_complete;
  b.log_lb2 = log_lb2;
  b.log_ub1 = log_ub1;
  b.log_ub2 = log_ub2;
  b.log_lb = policy.use_lb2 ? std::max(log_r_complete, log_lb2) : log_r_complete;
  b.log_ub = policy.use_ub1 ? std::min(log_ub1, log_ub2) : log_ub2;
  if (b.log_lb > b.log_ub) {
    // equal in exact arithmetic (e.g. a candidate with no residual links);
    // anything beyond rounding is a broken bound
    if (b.log_lb - b.log_ub > 1e-9)
      throw std::logic_error("node lower bound exceeds upper bound");
    b.log_lb = b.log_ub;
  }
  return b;
}

}  // namespace diagbound
