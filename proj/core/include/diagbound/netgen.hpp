#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "diagbound/network.hpp"

namespace diagbound {

/// Parameters for synthetic sparse diagnostic networks. The defaults give
/// QMR-like profiles: rare diseases, moderate link strengths, small leaks.
struct GenSpec {
  std::uint64_t seed = 1;
  std::size_t n_diseases = 100;
  std::size_t n_findings = 200;
  double mean_links = 2.0;  // mean parents per finding, at least 1
  double prior_min = 0.001;  // priors are log-uniform
  double prior_max = 0.1;
  double strength_min = 0.2;
  double strength_max = 0.95;
  double leak_min = 0.005;
  double leak_max = 0.05;
  GateMode mode = GateMode::noisy_or_leaky;

  void validate() const;
};

/// Deterministic in (spec, seed). Tabular mode writes each finding's
/// noisy-OR as an explicit table.
Network generate(const GenSpec& spec);

struct SampledCase {
  Evidence evidence;
  std::vector<DiseaseId> true_diseases;
};

/// Forward-samples diseases from their priors and findings from their gates.
/// Evidence is every sampled-present finding (at most `max_positive` of them,
/// 0 meaning no cap) plus `n_negative` findings drawn uniformly from the
/// sampled-absent ones. Draws with no positive finding are redrawn.
SampledCase sample_case(const Network& network, std::uint64_t seed,
                        std::size_t n_negative, std::size_t max_positive = 0);

/// As sample_case, with the disease state fixed to `present`.
SampledCase sample_case_given(const Network& network, const DiseaseSet& present,
                              std::uint64_t seed, std::size_t n_negative,
                              std::size_t max_positive = 0);

/// Appends `count` diseases linked only to one new finding that the caller
/// leaves unobserved.
Network with_unlinked_diseases(const Network& network, std::size_t count,
                               std::uint64_t seed);

}  // namespace diagbound
