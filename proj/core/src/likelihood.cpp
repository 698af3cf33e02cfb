#include "diagbound/likelihood.hpp"

#include <cmath>

#include "diagbound/logmath.hpp"

namespace diagbound {

double finding_likelihood(const Network& network, FindingId f,
                          bool observed_present, const DiseaseSet& present) {
  double p = network.presence_probability(f, present);
  return observed_present ? p : 1.0 - p;
}

namespace {

double safe_log(double x) { return x > 0.0 ? std::log(x) : kLogZero; }

double slot_log_likelihood(const AbsorbedEvidence& a,
                           const NodeLikelihoodCache& c, std::size_t slot) {
  if (a.mode == GateMode::noisy_or_leaky) {
    // residual noisy-OR findings are always positive
    return std::log1p(-c.absence[slot]);
  }
  double p = a.residual_table[slot][c.assignment[slot]];
  return safe_log(a.residual_present[slot] ? p : 1.0 - p);
}

void refresh_log_r(const AbsorbedEvidence& a, NodeLikelihoodCache& c) {
  double sum = c.log_odds_sum;
  const std::size_t slots = a.residual.size();
  for (std::size_t s = 0; s < slots; ++s) sum += slot_log_likelihood(a, c, s);
  c.log_r = sum == kLogZero ? kLogZero : sum - a.log_residual_baseline;
}

}  // namespace

AbsorbedEvidence absorb(const Network& network, const Evidence& evidence) {
  AbsorbedEvidence a;
  a.mode = network.mode;
  a.disease_count = network.disease_count();
  a.has_negatives = !evidence.negative.empty();
  a.absorbed = network.mode == GateMode::noisy_or_leaky || !a.has_negatives;

  const std::size_t n = network.disease_count();
  a.log_prior_odds.resize(n);
  for (std::size_t d = 0; d < n; ++d) {
    double p = network.diseases[d].prior;
    a.log_prior_odds[d] = std::log(p) - std::log1p(-p);
  }
  a.log_adjusted_odds = a.log_prior_odds;
  a.links_by_disease.assign(n, {});

  const DiseaseSet none(n);
  double baseline = 0.0;
  for (FindingId f : evidence.positive)
    baseline += safe_log(finding_likelihood(network, f, true, none));
  for (FindingId f : evidence.negative)
    baseline += safe_log(finding_likelihood(network, f, false, none));
  a.log_evidence_baseline = baseline;

  auto add_residual = [&](FindingId f, bool present) {
    auto slot = static_cast<std::uint32_t>(a.residual.size());
    a.residual.push_back(f);
    a.residual_present.push_back(present);
    const Finding& finding = network.findings[f];
    if (network.mode == GateMode::noisy_or_leaky) {
      a.residual_leak_keep.push_back(1.0 - finding.leak);
      for (const Link& link : finding.links)
        a.links_by_disease[link.disease].push_back({slot, 1.0 - link.strength, 0});
      a.residual_table.emplace_back();
    } else {
      a.residual_leak_keep.push_back(1.0);
      a.residual_table.push_back(finding.table);
      for (std::size_t b = 0; b < finding.parents.size(); ++b)
        a.links_by_disease[finding.parents[b]].push_back(
            {slot, 1.0, static_cast<std::uint32_t>(b)});
    }
  };

  for (FindingId f : evidence.positive) add_residual(f, true);
  if (a.absorbed) {
    // noisy-OR absent finding: P(f absent | H̲) = (1-l)·∏_{d∈h}(1-q_df), so the
    // ratio against H̲₀ is a per-disease factor
    for (FindingId f : evidence.negative)
      for (const Link& link : network.findings[f].links)
        a.log_adjusted_odds[link.disease] += safe_log(1.0 - link.strength);
  } else {
    for (FindingId f : evidence.negative) add_residual(f, false);
  }

  // same float path as refresh_log_r, so R(H̲₀) comes out exactly 1
  const NodeLikelihoodCache root = root_cache(a);
  double residual_baseline = 0.0;
  for (std::size_t s = 0; s < a.residual.size(); ++s)
    residual_baseline += slot_log_likelihood(a, root, s);
  a.log_residual_baseline = residual_baseline;
  return a;
}

NodeLikelihoodCache root_cache(const AbsorbedEvidence& a) {
  NodeLikelihoodCache c;
  c.log_odds_sum = 0.0;
  if (a.mode == GateMode::noisy_or_leaky)
    c.absence = a.residual_leak_keep;
  else
    c.assignment.assign(a.residual.size(), 0);
  c.log_r = 0.0;
  return c;
}

NodeLikelihoodCache extend_cache(const AbsorbedEvidence& a,
                                 const NodeLikelihoodCache& cache,
                                 DiseaseId disease) {
  NodeLikelihoodCache next = cache;
  next.log_odds_sum += a.log_adjusted_odds[disease];
  if (a.mode == GateMode::noisy_or_leaky) {
    for (const auto& link : a.links_by_disease[disease])
      next.absence[link.slot] *= link.keep;
  } else {
    for (const auto& link : a.links_by_disease[disease])
      next.assignment[link.slot] |= std::uint32_t{1} << link.bit;
  }
  refresh_log_r(a, next);
  return next;
}

NodeLikelihoodCache cache_for(const AbsorbedEvidence& a,
                              const DiseaseSet& present) {
  NodeLikelihoodCache c = root_cache(a);
  for (DiseaseId d : present.members()) {
    c.log_odds_sum += a.log_adjusted_odds[d];
    for (const auto& link : a.links_by_disease[d]) {
      if (a.mode == GateMode::noisy_or_leaky)
        c.absence[link.slot] *= link.keep;
      else
        c.assignment[link.slot] |= std::uint32_t{1} << link.bit;
    }
  }
  refresh_log_r(a, c);
  return c;
}

double log_mep(const AbsorbedEvidence& a, const NodeLikelihoodCache& cache,
               DiseaseId disease) {
  double result = a.log_adjusted_odds[disease];
  if (result == kLogZero) return kLogZero;
  if (a.mode == GateMode::noisy_or_leaky) {
    for (const auto& link : a.links_by_disease[disease]) {
      double absence = cache.absence[link.slot];
      result += std::log1p(-absence * link.keep) - std::log1p(-absence);
    }
    return result;
  }
  for (const auto& link : a.links_by_disease[disease]) {
    const auto& table = a.residual_table[link.slot];
    std::uint32_t idx = cache.assignment[link.slot];
    double before = table[idx];
    double after = table[idx | (std::uint32_t{1} << link.bit)];
    if (!a.residual_present[link.slot]) {
      before = 1.0 - before;
      after = 1.0 - after;
    }
    if (before == after) continue;  // also covers 0/0, read as ratio 1
    if (before == 0.0) return std::numeric_limits<double>::infinity();
    result += safe_log(after) - std::log(before);
  }
  return result;
}

double log_relative_probability(const AbsorbedEvidence& a,
                                const DiseaseSet& present) {
  return cache_for(a, present).log_r;
}

double log_relative_probability_raw(const Network& network,
                                    const Evidence& evidence,
                                    const DiseaseSet& present) {
  const DiseaseSet none(network.disease_count());
  double sum = 0.0;
  for (DiseaseId d : present.members()) {
    double p = network.diseases[d].prior;
    sum += std::log(p) - std::log1p(-p);
  }
  auto term = [&](FindingId f, bool obs) {
    double num = safe_log(finding_likelihood(network, f, obs, present));
    double den = safe_log(finding_likelihood(network, f, obs, none));
    sum += num - den;
  };
  for (FindingId f : evidence.positive) term(f, true);
  for (FindingId f : evidence.negative) term(f, false);
  return std::isnan(sum) ? kLogZero : sum;
}

}  // namespace diagbound
