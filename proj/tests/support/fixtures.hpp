#pragma once

#include <cmath>
#include <cstdint>

#include "diagbound/netgen.hpp"
#include "diagbound/network.hpp"

namespace fixtures {

using namespace diagbound;

// d1 p=0.1, d2 p=0.2; f1 leak 0.01 (q 0.8, 0.5); f2 leak 0.05 (q2 0.9)
inline Network n1() {
  Network n;
  n.diseases = {{"d1", 0.1}, {"d2", 0.2}};
  Finding f1{"f1", 0.01, {{0, 0.8}, {1, 0.5}}, {}, {}};
  Finding f2{"f2", 0.05, {{1, 0.9}}, {}, {}};
  n.findings = {f1, f2};
  return n;
}

// f1 present, f2 absent
inline Evidence e1() { return make_evidence({0}, {1}); }

// N1 plus d3 (p=0.3) linked only to an unobserved f3
inline Network n1_with_d3() {
  Network n = n1();
  n.diseases.push_back({"d3", 0.3});
  n.findings.push_back({"f3", 0.02, {{2, 0.7}}, {}, {}});
  return n;
}

inline DiseaseSet set_of(std::size_t n, std::initializer_list<DiseaseId> ids) {
  DiseaseSet s(n);
  for (DiseaseId d : ids) s.insert(d);
  return s;
}

// Single-finding tabular network over `parents` diseases with the given table.
inline Network tabular(std::vector<double> priors, std::vector<double> table) {
  Network n;
  n.mode = GateMode::tabular_nps;
  for (std::size_t i = 0; i < priors.size(); ++i)
    n.diseases.push_back({"d" + std::to_string(i + 1), priors[i]});
  Finding f;
  f.name = "f1";
  for (std::size_t i = 0; i < priors.size(); ++i) f.parents.push_back(static_cast<DiseaseId>(i));
  f.table = std::move(table);
  n.findings.push_back(f);
  return n;
}

inline GenSpec small_spec(std::uint64_t seed, std::size_t diseases, std::size_t findings) {
  GenSpec s;
  s.seed = seed;
  s.n_diseases = diseases;
  s.n_findings = findings;
  return s;
}

inline bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace fixtures
