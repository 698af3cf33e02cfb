#pragma once

#include <cstdint>
#include <vector>

#include "diagbound/network.hpp"

namespace diagbound {

/// Probability that finding `f` takes its observed state given the complete
/// hypothesis `present` (listed diseases present, all others absent).
double finding_likelihood(const Network& network, FindingId f,
                          bool observed_present, const DiseaseSet& present);

/// Evidence prepared for relative-probability work.
///
/// In noisy-OR mode every negative finding factors per disease, so it is
/// folded into adjusted odds and only positive findings stay explicit
/// ("residual" findings). Tabular tables do not factor; with negatives present
/// the raw odds are kept and negatives stay residual (`absorbed` is false).
struct AbsorbedEvidence {
  struct ResidualLink {
    std::uint32_t slot = 0;   // index into residual findings
    double keep = 1.0;        // noisy-OR: 1 - q
    std::uint32_t bit = 0;    // tabular: parent bit in the finding's table
  };

  GateMode mode = GateMode::noisy_or_leaky;
  bool absorbed = true;
  std::size_t disease_count = 0;

  std::vector<double> log_prior_odds;      // log O(d)
  std::vector<double> log_adjusted_odds;   // log Õ(d)

  std::vector<FindingId> residual;         // explicit findings
  std::vector<bool> residual_present;      // observed state per residual slot
  std::vector<double> residual_leak_keep;  // noisy-OR: 1 - leak
  std::vector<std::vector<double>> residual_table;  // tabular tables
  std::vector<std::vector<ResidualLink>> links_by_disease;

  double log_residual_baseline = 0.0;  // Σ log P(residual obs | H̲₀)
  double log_evidence_baseline = 0.0;  // log P(F | H̲₀), all evidence

  bool has_negatives = false;
};

AbsorbedEvidence absorb(const Network& network, const Evidence& evidence);

/// Incremental likelihood state for one complete hypothesis H̲.
struct NodeLikelihoodCache {
  double log_r = 0.0;          // log R(H̲)
  double log_odds_sum = 0.0;   // Σ_{d∈h} log Õ(d)
  std::vector<double> absence;            // noisy-OR: (1-l)·∏_{d∈h}(1-q)
  std::vector<std::uint32_t> assignment;  // tabular: parent assignment index
};

NodeLikelihoodCache root_cache(const AbsorbedEvidence& absorbed);
NodeLikelihoodCache extend_cache(const AbsorbedEvidence& absorbed,
                                 const NodeLikelihoodCache& cache,
                                 DiseaseId disease);
NodeLikelihoodCache cache_for(const AbsorbedEvidence& absorbed,
                              const DiseaseSet& present);

/// log MEP(d, H) = log R(H̲ ∪ {d}) - log R(H̲), cost proportional to the
/// number of residual findings linked to d.
double log_mep(const AbsorbedEvidence& absorbed,
               const NodeLikelihoodCache& cache, DiseaseId disease);

/// log R(H̲) from adjusted odds and residual evidence. R(H̲₀) = 1.
double log_relative_probability(const AbsorbedEvidence& absorbed,
                                const DiseaseSet& present);

/// log R(H̲) straight from the network and the full evidence, no absorption.
double log_relative_probability_raw(const Network& network,
                                    const Evidence& evidence,
                                    const DiseaseSet& present);

}  // namespace diagbound
