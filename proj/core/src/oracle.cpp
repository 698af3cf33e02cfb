#include "diagbound/oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "diagbound/logmath.hpp"

namespace diagbound {

std::size_t oracle_max_diseases() {
  if (const char* env = std::getenv("DIAGBOUND_ORACLE_MAX_DISEASES")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return std::min<unsigned long>(v, 30);
  }
  return kDefaultOracleMaxDiseases;
}

namespace {

double safe_log(double x) { return x > 0.0 ? std::log(x) : kLogZero; }

// P(f present | parent assignment) where bit b of `local` is parent b.
double local_presence(const Network& network, const Finding& f,
                      std::uint32_t local) {
  if (network.mode == GateMode::tabular_nps) return f.table[local];
  double absence = 1.0 - f.leak;
  for (std::size_t b = 0; b < f.links.size(); ++b)
    if ((local >> b) & 1u) absence *= 1.0 - f.links[b].strength;
  return 1.0 - absence;
}

std::uint32_t local_assignment(const std::vector<DiseaseId>& parents,
                               std::uint32_t mask) {
  std::uint32_t local = 0;
  for (std::size_t b = 0; b < parents.size(); ++b)
    if ((mask >> parents[b]) & 1u) local |= std::uint32_t{1} << b;
  return local;
}

std::string set_text(std::uint32_t mask, const Network& network) {
  std::string out = "{";
  bool first = true;
  for (std::size_t d = 0; d < network.disease_count(); ++d)
    if ((mask >> d) & 1u) {
      if (!first) out += ",";
      out += network.diseases[d].name;
      first = false;
    }
  return out + "}";
}

std::string parent_set_text(std::uint32_t local,
                            const std::vector<DiseaseId>& parents,
                            const Network& network) {
  std::uint32_t mask = 0;
  for (std::size_t b = 0; b < parents.size(); ++b)
    if ((local >> b) & 1u) mask |= std::uint32_t{1} << parents[b];
  return set_text(mask, network);
}

void guard_size(std::size_t n, std::size_t limit, const char* what) {
  if (n > limit) {
    std::ostringstream msg;
    msg << "too large for oracle: " << what << " needs <= " << limit
        << " diseases, network has " << n;
    throw OracleTooLarge(msg.str());
  }
}

}  // namespace

std::uint32_t to_mask(const DiseaseSet& set) {
  std::uint32_t mask = 0;
  for (DiseaseId d : set.members()) {
    if (d >= 32) throw OracleTooLarge("too large for oracle: disease index >= 32");
    mask |= std::uint32_t{1} << d;
  }
  return mask;
}

double ExactResult::evidence_probability() const {
  return std::exp(log_evidence_probability);
}

double ExactResult::posterior(std::uint32_t mask) const {
  return std::exp(log_r.at(mask) - log_r_total);
}

double ExactResult::posterior(const DiseaseSet& present) const {
  return posterior(to_mask(present));
}

ExactResult enumerate_exact(const Network& network, const Evidence& evidence) {
  const std::size_t n = network.disease_count();
  guard_size(n, oracle_max_diseases(), "exact enumeration");

  struct Observed {
    const Finding* finding;
    std::vector<DiseaseId> parents;
    bool present;
  };
  std::vector<Observed> observed;
  for (FindingId f : evidence.positive)
    observed.push_back({&network.findings[f], network.parents_of(f), true});
  for (FindingId f : evidence.negative)
    observed.push_back({&network.findings[f], network.parents_of(f), false});

  std::vector<double> log_p(n), log_q(n);
  for (std::size_t d = 0; d < n; ++d) {
    log_p[d] = std::log(network.diseases[d].prior);
    log_q[d] = std::log1p(-network.diseases[d].prior);
  }

  const std::size_t total = std::size_t{1} << n;
  std::vector<double> log_joint(total);
  for (std::size_t m = 0; m < total; ++m) {
    auto mask = static_cast<std::uint32_t>(m);
    double lj = 0.0;
    for (std::size_t d = 0; d < n; ++d) lj += ((mask >> d) & 1u) ? log_p[d] : log_q[d];
    for (const Observed& o : observed) {
      double p = local_presence(network, *o.finding,
                                local_assignment(o.parents, mask));
      lj += safe_log(o.present ? p : 1.0 - p);
    }
    log_joint[m] = lj;
  }

  const double base = log_joint[0];
  if (base == kLogZero)
    throw InputError("evidence has zero probability under the no-disease hypothesis");

  ExactResult result;
  result.disease_count = n;
  result.log_r.resize(total);
  for (std::size_t m = 0; m < total; ++m) result.log_r[m] = log_joint[m] - base;
  result.log_r_total = log_sum_exp(result.log_r);
  result.log_evidence_probability = base + result.log_r_total;

  result.marginal.assign(n, 0.0);
  for (std::size_t m = 0; m < total; ++m) {
    double post = std::exp(result.log_r[m] - result.log_r_total);
    for (std::size_t d = 0; d < n; ++d)
      if ((m >> d) & 1u) result.marginal[d] += post;
  }
  return result;
}

double log_exact_partial_mass(const ExactResult& exact,
                              const DiseaseSet& included,
                              const DiseaseSet& excluded) {
  const std::uint32_t all =
      exact.disease_count == 32 ? ~std::uint32_t{0}
                                : (std::uint32_t{1} << exact.disease_count) - 1;
  const std::uint32_t h = to_mask(included);
  const std::uint32_t g = to_mask(excluded);
  if (h & g) return kLogZero;
  const std::uint32_t free = all & ~(h | g);

  std::vector<double> terms;
  for (std::uint32_t s = free;; s = (s - 1) & free) {
    terms.push_back(exact.log_r[h | s]);
    if (s == 0) break;
  }
  return log_sum_exp(terms);
}

double exact_partial_mass(const ExactResult& exact, const DiseaseSet& included,
                          const DiseaseSet& excluded) {
  return std::exp(log_exact_partial_mass(exact, included, excluded));
}

double exact_partial_mass(const Network& network, const Evidence& evidence,
                          const DiseaseSet& included,
                          const DiseaseSet& excluded) {
  return exact_partial_mass(enumerate_exact(network, evidence), included,
                            excluded);
}

CheckResult check_positive_influence(const Network& network, FindingId f) {
  const Finding& finding = network.findings.at(f);
  const std::vector<DiseaseId> parents = network.parents_of(f);
  const std::size_t k = parents.size();
  if (k > kMaxCheckedParents)
    throw OracleTooLarge("too large for oracle: finding '" + finding.name +
                         "' has more than 16 parents");

  CheckResult result;
  const std::uint32_t assignments = std::uint32_t{1} << k;
  for (std::uint32_t a = 0; a < assignments; ++a) {
    double base = local_presence(network, finding, a);
    for (std::size_t b = 0; b < k; ++b) {
      if ((a >> b) & 1u) continue;
      ++result.cases_checked;
      double flipped = local_presence(network, finding, a | (std::uint32_t{1} << b));
      if (flipped < base - 1e-12 && result.passed) {
        result.passed = false;
        std::ostringstream w;
        w << "finding '" << finding.name << "': adding "
          << network.diseases[parents[b]].name << " to "
          << parent_set_text(a, parents, network) << " lowers P(present) from "
          << base << " to " << flipped;
        result.witness = w.str();
      }
    }
  }
  return result;
}

CheckResult check_nps_pairwise(const Network& network, FindingId f) {
  const Finding& finding = network.findings.at(f);
  const std::vector<DiseaseId> parents = network.parents_of(f);
  const std::size_t k = parents.size();
  if (k > kMaxCheckedParents)
    throw OracleTooLarge("too large for oracle: finding '" + finding.name +
                         "' has more than 16 parents");

  CheckResult result;
  const std::uint32_t assignments = std::uint32_t{1} << k;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const std::uint32_t di = std::uint32_t{1} << i;
      const std::uint32_t ej = std::uint32_t{1} << j;
      for (std::uint32_t x = 0; x < assignments; ++x) {
        if (x & (di | ej)) continue;
        ++result.cases_checked;
        double both = local_presence(network, finding, x | di | ej);
        double none = local_presence(network, finding, x);
        double only_e = local_presence(network, finding, x | ej);
        double only_d = local_presence(network, finding, x | di);
        double lhs = both * none;
        double rhs = only_e * only_d;
        if (lhs > rhs + 1e-12 && result.passed) {
          result.passed = false;
          std::ostringstream w;
          w << "finding '" << finding.name << "': pair ("
            << network.diseases[parents[i]].name << ", "
            << network.diseases[parents[j]].name << ") given "
            << parent_set_text(x, parents, network) << ": P(F|DE)P(F|~D~E)="
            << lhs << " > P(F|~DE)P(F|D~E)=" << rhs;
          result.witness = w.str();
        }
      }
    }
  }
  return result;
}

CheckResult check_nps_general(const Network& network, FindingId f) {
  const Finding& finding = network.findings.at(f);
  const std::vector<DiseaseId> parents = network.parents_of(f);
  const std::size_t k = parents.size();
  if (k > kMaxGeneralNpsParents)
    throw OracleTooLarge("too large for oracle: general NPS check needs <= 10 parents");

  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  std::vector<double> p(k);
  for (std::size_t b = 0; b < k; ++b) p[b] = network.diseases[parents[b]].prior;

  // P(F | all of S present), other parents drawn from their priors
  std::vector<double> marginal(std::size_t{1} << k, 0.0);
  for (std::uint32_t s = 0; s <= full; ++s) {
    const std::uint32_t rest = full & ~s;
    double sum = 0.0;
    for (std::uint32_t t = rest;; t = (t - 1) & rest) {
      double w = 1.0;
      for (std::size_t b = 0; b < k; ++b)
        if ((rest >> b) & 1u) w *= ((t >> b) & 1u) ? p[b] : 1.0 - p[b];
      sum += w * local_presence(network, finding, s | t);
      if (t == 0) break;
    }
    marginal[s] = sum;
  }

  CheckResult result;
  for (std::uint32_t z = 0; z <= full; ++z) {
    const std::uint32_t rz = full & ~z;
    for (std::uint32_t x = rz;; x = (x - 1) & rz) {
      const std::uint32_t rxz = rz & ~x;
      for (std::uint32_t y = rxz;; y = (y - 1) & rxz) {
        ++result.cases_checked;
        double lhs = marginal[x | y | z] * marginal[z];
        double rhs = marginal[x | z] * marginal[y | z];
        if (lhs > rhs + 1e-12 && result.passed) {
          result.passed = false;
          std::ostringstream w;
          w << "finding '" << finding.name
            << "': x=" << parent_set_text(x, parents, network)
            << " y=" << parent_set_text(y, parents, network)
            << " z=" << parent_set_text(z, parents, network)
            << ": P(F|XYZ)P(F|Z)=" << lhs << " > P(F|XZ)P(F|YZ)=" << rhs;
          result.witness = w.str();
        }
        if (y == 0) break;
      }
      if (x == 0) break;
    }
  }
  return result;
}

CheckResult check_declining_mep(const Network& network,
                                const Evidence& evidence) {
  const std::size_t n = network.disease_count();
  guard_size(n, kDecliningMepMaxDiseases, "declining-MEP check");
  const ExactResult exact = enumerate_exact(network, evidence);
  const auto& lr = exact.log_r;
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;

  // MEP(X,Z) >= MEP(X,YZ)  <=>  R(XZ)·R(YZ) >= R(XYZ)·R(Z), compared in logs
  CheckResult result;
  for (std::uint32_t z = 0; z <= full; ++z) {
    const std::uint32_t rz = full & ~z;
    for (std::uint32_t x = rz;; x = (x - 1) & rz) {
      const std::uint32_t rxz = rz & ~x;
      for (std::uint32_t y = rxz;; y = (y - 1) & rxz) {
        ++result.cases_checked;
        double lhs = lr[x | z] + lr[y | z];
        double rhs = lr[x | y | z] + lr[z];
        bool ok = rhs == kLogZero || (lhs != kLogZero && lhs >= rhs - 1e-12);
        if (!ok && result.passed) {
          result.passed = false;
          std::ostringstream w;
          w << "x=" << set_text(x, network) << " y=" << set_text(y, network)
            << " z=" << set_text(z, network) << ": MEP(X,Z)="
            << std::exp(lr[x | z] - lr[z]) << " < MEP(X,YZ)="
            << std::exp(lr[x | y | z] - lr[y | z]);
          result.witness = w.str();
        }
        if (y == 0) break;
      }
      if (x == 0) break;
    }
  }
  return result;
}

}  // namespace diagbound
