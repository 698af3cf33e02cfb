#include "diagbound/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>

namespace diagbound {

namespace {

// mt19937_64 output is fixed by the standard; the distributions are not, so
// the mapping to floats and ranges is done here to keep files byte-identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n);
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<DiseaseId> draw_distinct(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<DiseaseId> out;
  while (out.size() < k) {
    auto d = static_cast<DiseaseId>(rng.below(n));
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SampledCase finish_case(const DiseaseSet& present,
                        std::vector<FindingId> positive,
                        std::vector<FindingId> absent, Rng& rng,
                        std::size_t n_negative, std::size_t max_positive) {
  auto take = [&](std::vector<FindingId>& pool, std::size_t k) {
    // partial Fisher-Yates
    k = std::min(k, pool.size());
    for (std::size_t i = 0; i < k; ++i)
      std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    pool.resize(k);
  };
  if (max_positive > 0 && positive.size() > max_positive)
    take(positive, max_positive);
  take(absent, n_negative);
  return SampledCase{make_evidence(std::move(positive), std::move(absent)),
                     present.members()};
}

std::optional<SampledCase> draw_case(const Network& network, const DiseaseSet& present,
                                     Rng& rng, std::size_t n_negative,
                                     std::size_t max_positive) {
  std::vector<FindingId> positive, absent;
  for (std::size_t f = 0; f < network.finding_count(); ++f) {
    auto id = static_cast<FindingId>(f);
    if (rng.uniform() < network.presence_probability(id, present))
      positive.push_back(id);
    else
      absent.push_back(id);
  }
  if (positive.empty()) return std::nullopt;
  return finish_case(present, std::move(positive), std::move(absent), rng, n_negative,
                     max_positive);
}

}  // namespace

void GenSpec::validate() const {
  if (n_diseases == 0) throw InputError("n_diseases must be positive");
  if (mean_links < 1.0) throw InputError("mean_links must be at least 1");
  if (static_cast<double>(n_diseases) < mean_links)
    throw InputError("infeasible generator settings: more parents per finding than diseases");
  if (!(prior_min > 0.0 && prior_min <= prior_max && prior_max < 1.0))
    throw InputError("prior range must lie inside (0,1)");
  if (!(strength_min > 0.0 && strength_min <= strength_max && strength_max <= 1.0))
    throw InputError("strength range must lie inside (0,1]");
  if (!(leak_min >= 0.0 && leak_min <= leak_max && leak_max < 1.0))
    throw InputError("leak range must lie inside [0,1)");
  if (mode == GateMode::tabular_nps &&
      std::round(2.0 * (mean_links - 1.0)) + 1.0 > kMaxTabularParents)
    throw InputError("infeasible generator settings: tabular findings exceed the parent cap");
}

Network generate(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  Network network;
  network.mode = spec.mode;

  const double log_lo = std::log(spec.prior_min);
  const double log_hi = std::log(spec.prior_max);
  for (std::size_t d = 0; d < spec.n_diseases; ++d)
    network.diseases.push_back(
        {"d" + std::to_string(d), std::exp(rng.uniform(log_lo, log_hi))});

  const auto extra_max =
      static_cast<std::size_t>(std::llround(2.0 * (spec.mean_links - 1.0)));
  for (std::size_t f = 0; f < spec.n_findings; ++f) {
    std::size_t k = 1 + rng.below(extra_max + 1);
    k = std::min(k, spec.n_diseases);
    std::vector<DiseaseId> parents = draw_distinct(rng, spec.n_diseases, k);

    Finding finding;
    finding.name = "f" + std::to_string(f);
    finding.leak = rng.uniform(spec.leak_min, spec.leak_max);
    for (DiseaseId d : parents)
      finding.links.push_back({d, rng.uniform(spec.strength_min, spec.strength_max)});

    if (spec.mode == GateMode::tabular_nps) {
      finding.parents = parents;
      finding.table.resize(std::size_t{1} << k);
      for (std::size_t a = 0; a < finding.table.size(); ++a) {
        double absence = 1.0 - finding.leak;
        for (std::size_t b = 0; b < k; ++b)
          if ((a >> b) & 1u) absence *= 1.0 - finding.links[b].strength;
        finding.table[a] = 1.0 - absence;
      }
      finding.links.clear();
      finding.leak = 0.0;
    }
    network.findings.push_back(std::move(finding));
  }
  return network;
}

SampledCase sample_case_given(const Network& network, const DiseaseSet& present,
                              std::uint64_t seed, std::size_t n_negative,
                              std::size_t max_positive) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    if (auto c = draw_case(network, present, rng, n_negative, max_positive)) return *c;
  }
  throw InputError("could not sample a case with a positive finding");
}

SampledCase sample_case(const Network& network, std::uint64_t seed,
                        std::size_t n_negative, std::size_t max_positive) {
  Rng rng(seed);
  const std::size_t n = network.disease_count();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    DiseaseSet present(n);
    for (std::size_t d = 0; d < n; ++d)
      if (rng.uniform() < network.diseases[d].prior)
        present.insert(static_cast<DiseaseId>(d));
    if (auto c = draw_case(network, present, rng, n_negative, max_positive)) return *c;
  }
  throw InputError("could not sample a case with a positive finding");
}

Network with_unlinked_diseases(const Network& network, std::size_t count,
                               std::uint64_t seed) {
  Rng rng(seed);
  Network out = network;
  Finding sink;
  sink.name = "unobserved-" + std::to_string(out.finding_count());
  std::vector<DiseaseId> added;
  for (std::size_t i = 0; i < count; ++i) {
    auto id = static_cast<DiseaseId>(out.disease_count());
    out.diseases.push_back({"extra" + std::to_string(i),
                            std::exp(rng.uniform(std::log(0.01), std::log(0.3)))});
    added.push_back(id);
  }
  if (out.mode == GateMode::noisy_or_leaky) {
    sink.leak = 0.01;
    for (DiseaseId d : added) sink.links.push_back({d, rng.uniform(0.3, 0.9)});
  } else {
    sink.parents = added;
    sink.table.resize(std::size_t{1} << added.size());
    for (std::size_t a = 0; a < sink.table.size(); ++a)
      sink.table[a] = a == 0 ? 0.01 : 0.5;
  }
  out.findings.push_back(std::move(sink));
  return out;
}

}  // namespace diagbound
