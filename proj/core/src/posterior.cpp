#include "diagbound/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "diagbound/logmath.hpp"

namespace diagbound {

namespace {

double clip(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

double ratio(double log_num, double log_den) {
  if (log_num == kLogZero) return 0.0;
  return std::min(1.0, std::exp(log_num - log_den));
}

}  // namespace

Interval hypothesis_posterior_bounds(double log_r, double log_lbr, double log_ubr) {
  return {ratio(log_r, log_ubr), ratio(log_r, log_lbr)};
}

Interval hypothesis_posterior_bounds(const Search& search, double log_r) {
  return hypothesis_posterior_bounds(log_r, search.log_lbr(), search.log_ubr());
}

double best_estimate(std::span<const SettledHypothesis> settled,
                     const std::function<bool(const SettledHypothesis&)>& query) {
  LogAccumulator match, all;
  for (const auto& s : settled) {
    all.add(s.log_r);
    if (query(s)) match.add(s.log_r);
  }
  return ratio(match.log_total(), all.log_total());
}

double total_error(const Search& search) { return search.total_error(); }

Interval evidence_probability_bounds(const Search& search) {
  const Network& network = search.network();
  double log_none = 0.0;
  for (const Disease& d : network.diseases) log_none += std::log1p(-d.prior);
  const double offset = search.factored().log_multiplier +
                        search.absorbed().log_evidence_baseline + log_none;
  return {search.log_lbr() + offset, search.log_ubr() + offset};
}

std::vector<MarginalPosterior> all_marginal_bounds(const Search& search) {
  const Network& network = search.network();
  const std::size_t n = network.disease_count();
  const FactoredSet& factored = search.factored();
  const AbsorbedEvidence& absorbed = search.absorbed();
  const BoundPolicy& policy = search.policy();

  // Per disease, sums of relative mass in linear space scaled by the largest
  // upper total so nothing overflows:
  //   settled_d   settled hypotheses containing d
  //   lower_d     frontier mass with d present, lower
  //   upper_d     frontier mass with d present, upper
  //   rest_lower  settled without d + frontier mass without d, lower
  //   rest_upper  settled without d + frontier mass without d, upper
  double shift = search.log_settled_total();
  search.for_each_frontier([&](const FrontierView& v) {
    shift = std::max(shift, v.log_ub);
  });

  std::vector<double> settled_d(n, 0.0), lower_d(n, 0.0), upper_d(n, 0.0),
      rest_lower(n, 0.0), rest_upper(n, 0.0);
  double settled_all = 0.0;
  std::vector<char> mark(n, 0);
  for (const auto& s : search.settled()) {
    const double r = std::exp(s.log_r - shift);
    settled_all += r;
    for (DiseaseId d : s.present) {
      settled_d[d] += r;
      mark[d] = 1;
    }
    for (std::size_t d = 0; d < n; ++d)
      if (!mark[d]) rest_lower[d] += r;
    for (DiseaseId d : s.present) mark[d] = 0;
  }
  rest_upper = rest_lower;

  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t tick = 0;
  search.for_each_frontier([&](const FrontierView& v) {
    ++tick;
    const double lb = v.log_lb == kLogZero ? 0.0 : std::exp(v.log_lb - shift);
    const double ub = v.log_ub == kLogZero ? 0.0 : std::exp(v.log_ub - shift);
    for (DiseaseId d : v.candidates) {
      stamp[d] = tick;
      // The extensions holding d are h+d with any subset of the other
      // candidates. Per subset S, R(h+S) lies between R(h)·∏Õ and R(h)·∏MEP,
      // so d's share of the LB2 and UB1 products bounds that part.
      const double log_mep_d = log_mep(absorbed, v.cache, d);
      double lo = v.cache.log_r + log_mep_d;  // R(h+d) itself
      if (policy.use_lb2)
        lo = std::max(lo, v.bounds.log_lb2 - log1p_exp(-absorbed.log_adjusted_odds[d]));
      double hi = v.log_ub;
      if (policy.use_ub1) hi = std::min(hi, v.bounds.log_ub1 - log1p_exp(-log_mep_d));
      lo = std::min(lo, hi);
      const double present_lo = lo == kLogZero ? 0.0 : std::exp(lo - shift);
      const double present_hi = hi == kLogZero ? 0.0 : std::exp(hi - shift);
      lower_d[d] += present_lo;
      upper_d[d] += present_hi;
      rest_lower[d] += std::max(0.0, lb - present_hi);
      rest_upper[d] += std::max(0.0, ub - present_lo);
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto d = static_cast<DiseaseId>(i);
      if (factored.members.contains(d) || stamp[d] == tick) continue;
      if (v.included.contains(d)) {
        lower_d[d] += lb;
        upper_d[d] += ub;
      } else {
        rest_lower[d] += lb;
        rest_upper[d] += ub;
      }
    }
  });

  std::vector<MarginalPosterior> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto d = static_cast<DiseaseId>(i);
    MarginalPosterior& m = out[i];
    m.disease = d;
    m.prior = network.diseases[i].prior;
    if (factored.members.contains(d)) {
      m.factored = true;
      m.lbp = m.ubp = m.best = m.best_raw = m.prior;
      continue;
    }
    const double low = settled_d[i] + lower_d[i];
    const double high = settled_d[i] + upper_d[i];
    m.ubp = high > 0.0 ? high / (high + rest_lower[i]) : 0.0;
    m.lbp = low > 0.0 ? low / (low + rest_upper[i]) : 0.0;
    m.ubp = std::min(m.ubp, 1.0);
    m.lbp = std::min(m.lbp, m.ubp);
    m.best_raw = settled_all > 0.0 ? settled_d[i] / settled_all : 0.0;
    m.best = clip(m.best_raw, m.lbp, m.ubp);
  }
  return out;
}

MarginalPosterior disease_marginal_bounds(const Search& search,
                                          DiseaseId disease) {
  return all_marginal_bounds(search).at(disease);
}

std::vector<HypothesisPosterior> settled_posteriors(const Search& search) {
  const double settled_total = search.log_settled_total();
  std::vector<HypothesisPosterior> out;
  out.reserve(search.settled().size());
  for (const auto& s : search.settled()) {
    HypothesisPosterior h;
    h.present = s.present;
    h.log_r = s.log_r;
    Interval b = hypothesis_posterior_bounds(search, s.log_r);
    h.lbp = b.lower;
    h.ubp = b.upper;
    h.best_raw = ratio(s.log_r, settled_total);
    h.best = clip(h.best_raw, h.lbp, h.ubp);
    out.push_back(std::move(h));
  }
  return out;
}

InferenceResult assemble(const Search& search) {
  InferenceResult result;
  std::vector<HypothesisPosterior> all = settled_posteriors(search);

  std::vector<std::size_t> idx(all.size());
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t keep = std::min(search.config().top_n, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + keep, idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (all[a].log_r != all[b].log_r)
                        return all[a].log_r > all[b].log_r;
                      return all[a].present < all[b].present;
                    });
  for (std::size_t i = 0; i < keep; ++i) result.hypotheses.push_back(all[idx[i]]);

  result.marginals = all_marginal_bounds(search);
  Interval evidence = evidence_probability_bounds(search);
  result.log_evidence_lower = evidence.lower;
  result.log_evidence_upper = evidence.upper;
  result.log_lbr_total = search.log_lbr() + search.factored().log_multiplier;
  result.log_ubr_total = search.log_ubr() + search.factored().log_multiplier;
  result.total_error = search.total_error();
  result.trace = search.trace();
  result.termination = search.termination();
  result.expansions = search.expansions();
  result.nodes_created = search.nodes_created();
  result.settled = search.settled().size();
  result.frontier = search.frontier_size();
  result.factored = search.factored().ids.size();
  result.degraded = search.degraded();
  return result;
}

}  // namespace diagbound
