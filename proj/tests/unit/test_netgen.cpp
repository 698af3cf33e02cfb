#include <cmath>
#include <random>

#include "diagbound/bounds.hpp"
#include "diagbound/netgen.hpp"
#include "diagbound/network_io.hpp"
#include "diagbound/oracle.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace diagbound;

TEST_CASE("generation is deterministic") {
  GenSpec spec = fixtures::small_spec(42, 30, 60);
  CHECK(serialize_network(generate(spec)) == serialize_network(generate(spec)));
  GenSpec other = spec;
  other.seed = 43;
  CHECK(serialize_network(generate(spec)) != serialize_network(generate(other)));
}

TEST_CASE("defaults respect the stated ranges") {
  Network n = generate(GenSpec{});
  CHECK(validate(n).ok());
  CHECK(n.disease_count() == 100);
  CHECK(n.finding_count() == 200);
  for (const auto& d : n.diseases) {
    CHECK(d.prior >= 0.001);
    CHECK(d.prior <= 0.1);
  }
  for (const auto& f : n.findings) {
    CHECK(f.leak >= 0.005);
    CHECK(f.leak <= 0.05);
    CHECK(f.links.size() >= 1);
    CHECK(f.links.size() <= 3);
    for (const auto& l : f.links) {
      CHECK(l.strength >= 0.2);
      CHECK(l.strength <= 0.95);
    }
  }
}

TEST_CASE("576 x 4000 generates and validates") {
  GenSpec spec;
  spec.n_diseases = 576;
  spec.n_findings = 4000;
  Network n = generate(spec);
  CHECK(validate(n).ok());
}

TEST_CASE("tabular generation") {
  GenSpec spec = fixtures::small_spec(7, 12, 20);
  spec.mode = GateMode::tabular_nps;
  Network n = generate(spec);
  CHECK(validate(n).ok());
  for (FindingId f = 0; f < n.finding_count(); ++f) {
    CHECK(check_positive_influence(n, f).passed);
    CHECK(check_nps_pairwise(n, f).passed);
  }
}

TEST_CASE("generated noisy-OR networks pass the qualitative checkers") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenSpec spec = fixtures::small_spec(seed, 20, 40);
    spec.mean_links = 3.0;
    Network n = generate(spec);
    for (FindingId f = 0; f < n.finding_count(); ++f) {
      CHECK(check_positive_influence(n, f).passed);
      CHECK(check_nps_pairwise(n, f).passed);
      CHECK(check_nps_general(n, f).passed);
    }
  }
}

TEST_CASE("infeasible generator settingss") {
  GenSpec spec = fixtures::small_spec(1, 2, 5);
  spec.mean_links = 3.0;
  CHECK_THROWS_AS(generate(spec), InputError);
  spec = GenSpec{};
  spec.prior_max = 1.0;
  CHECK_THROWS_AS(generate(spec), InputError);
  spec = GenSpec{};
  spec.mode = GateMode::tabular_nps;
  spec.mean_links = 8.0;
  CHECK_THROWS_AS(generate(spec), InputError);
}

TEST_CASE("sampled cases") {
  Network n = generate(fixtures::small_spec(5, 15, 30));
  SampledCase a = sample_case(n, 77, 6);
  SampledCase b = sample_case(n, 77, 6);
  CHECK(a.evidence == b.evidence);
  CHECK(a.true_diseases == b.true_diseases);
  CHECK_FALSE(a.evidence.positive.empty());
  CHECK(validate_case(n, a.evidence).ok());
  CHECK(a.evidence.negative.size() == 6);

  SampledCase pos_only = sample_case(n, 78, 0);
  CHECK(pos_only.evidence.negative.empty());

  SampledCase capped = sample_case(n, 79, 3, 2);
  CHECK(capped.evidence.positive.size() <= 2);

  DiseaseSet fixed(15);
  fixed.insert(3);
  SampledCase given = sample_case_given(n, fixed, 5, 4);
  CHECK(given.true_diseases == std::vector<DiseaseId>{3});
}

TEST_CASE("default generator yields 5 to 15 positives on average") {
  Network n = generate(GenSpec{});
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed)
    total += static_cast<double>(sample_case(n, seed, 11).evidence.positive.size());
  double mean = total / 1000.0;
  CHECK(mean >= 5.0);
  CHECK(mean <= 15.0);
}

TEST_CASE("empirical finding frequency matches the marginal formula") {
  Network n = generate(fixtures::small_spec(8, 6, 6));
  // plain forward sampling, no zero-positive redraw
  const int draws = 20000;
  std::vector<double> seen(n.finding_count(), 0.0);
  std::mt19937_64 rng(1);
  for (int i = 0; i < draws; ++i) {
    DiseaseSet present(6);
    for (DiseaseId d = 0; d < 6; ++d)
      if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < n.diseases[d].prior) present.insert(d);
    for (FindingId f = 0; f < n.finding_count(); ++f)
      if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < n.presence_probability(f, present))
        seen[f] += 1.0;
  }
  for (FindingId f = 0; f < n.finding_count(); ++f) {
    double keep = 1.0 - n.findings[f].leak;
    for (const auto& l : n.findings[f].links) keep *= 1.0 - l.strength * n.diseases[l.disease].prior;
    double expect = 1.0 - keep;
    double sd = std::sqrt(expect * (1 - expect) / draws);
    CHECK(std::fabs(seen[f] / draws - expect) <= 5 * sd);
  }
}

TEST_CASE("unlinked diseases") {
  Network n = fixtures::n1();
  Network aug = with_unlinked_diseases(n, 3, 1);
  CHECK(aug.disease_count() == 5);
  CHECK(validate(aug).ok());
  FactoredSet w = factor_independents(aug, fixtures::e1());
  CHECK(w.ids == std::vector<DiseaseId>{2, 3, 4});
}
