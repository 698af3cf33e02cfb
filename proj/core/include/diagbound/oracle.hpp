#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "diagbound/network.hpp"

namespace diagbound {

inline constexpr std::size_t kDefaultOracleMaxDiseases = 24;
/// The declining-MEP checker visits every disjoint (x, y, z): 4^n triples.
inline constexpr std::size_t kDecliningMepMaxDiseases = 12;
inline constexpr std::size_t kMaxCheckedParents = 16;
inline constexpr std::size_t kMaxGeneralNpsParents = 10;

/// Oracle size limit; DIAGBOUND_ORACLE_MAX_DISEASES overrides the default
/// (capped at 30).
std::size_t oracle_max_diseases();

class OracleTooLarge : public InputError {
 public:
  using InputError::InputError;
};

/// Exhaustive joint enumeration over all 2^n complete hypotheses. Bit d of a
/// hypothesis mask is set iff disease d is present.
struct ExactResult {
  std::size_t disease_count = 0;
  double log_evidence_probability = 0.0;  // log P(F)
  double log_r_total = 0.0;               // log R(H₀) = log Σ R(S̲)
  std::vector<double> log_r;              // log R(S̲) per mask
  std::vector<double> marginal;           // P(d present | F)

  double evidence_probability() const;
  double posterior(std::uint32_t mask) const;
  double posterior(const DiseaseSet& present) const;
};

ExactResult enumerate_exact(const Network& network, const Evidence& evidence);

std::uint32_t to_mask(const DiseaseSet& set);

/// log Σ R(S̲) over complete hypotheses with included ⊆ S and S ∩ excluded = ∅.
double log_exact_partial_mass(const ExactResult& exact,
                              const DiseaseSet& included,
                              const DiseaseSet& excluded);
double exact_partial_mass(const ExactResult& exact, const DiseaseSet& included,
                          const DiseaseSet& excluded);
double exact_partial_mass(const Network& network, const Evidence& evidence,
                          const DiseaseSet& included,
                          const DiseaseSet& excluded);

struct CheckResult {
  bool passed = true;
  std::size_t cases_checked = 0;
  std::string witness;  // first counterexample, empty on pass
};

/// Strong positive influence: flipping any parent absent->present never
/// lowers P(f present), for every full parent assignment.
CheckResult check_positive_influence(const Network& network, FindingId f);

/// Two-cause negative product synergy for every parent pair (d, e) and every
/// assignment x of the other parents:
/// P(F|DEx)·P(F|D̄Ēx) <= P(F|D̄Ex)·P(F|DĒx).
CheckResult check_nps_pairwise(const Network& network, FindingId f);

/// n-cause negative product synergy over all disjoint parent subsets x, y, z:
/// P(F|XYZ)·P(F|Z) <= P(F|XZ)·P(F|YZ), where unmentioned parents are
/// marginalized with their priors.
CheckResult check_nps_general(const Network& network, FindingId f);

/// MEP(X, Z) >= MEP(X, YZ) for all disjoint disease sets, with
/// MEP(X, Z) = R(X̲∪Z) / R(Z̲) taken over complete hypotheses.
CheckResult check_declining_mep(const Network& network,
                                const Evidence& evidence);

}  // namespace diagbound
