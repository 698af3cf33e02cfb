#include "diagbound/network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

namespace diagbound {

DiseaseSet::DiseaseSet(std::size_t width)
    : width_(width), words_((width + 63) / 64, 0) {}

DiseaseSet::DiseaseSet(std::size_t width, std::span<const DiseaseId> members)
    : DiseaseSet(width) {
  for (DiseaseId d : members) {
    if (d >= width) throw std::out_of_range("disease index outside set width");
    insert(d);
  }
}

std::size_t DiseaseSet::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool DiseaseSet::intersects(const DiseaseSet& other) const {
  for (std::size_t i = 0; i < words_.size() && i < other.words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

bool DiseaseSet::is_subset_of(const DiseaseSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t theirs = i < other.words_.size() ? other.words_[i] : 0;
    if (words_[i] & ~theirs) return false;
  }
  return true;
}

std::vector<DiseaseId> DiseaseSet::members() const {
  std::vector<DiseaseId> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w) {
      int b = std::countr_zero(w);
      out.push_back(static_cast<DiseaseId>(i * 64 + b));
      w &= w - 1;
    }
  }
  return out;
}

std::strong_ordering operator<=>(const DiseaseSet& a, const DiseaseSet& b) {
  std::size_t n = std::max(a.words_.size(), b.words_.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t wa = i < a.words_.size() ? a.words_[i] : 0;
    std::uint64_t wb = i < b.words_.size() ? b.words_[i] : 0;
    if (std::uint64_t diff = wa ^ wb) {
      std::uint64_t lowest = diff & (~diff + 1);
      // the set lacking the first differing disease sorts first
      return (wa & lowest) ? std::strong_ordering::greater
                           : std::strong_ordering::less;
    }
  }
  return a.width_ <=> b.width_;
}

const char* to_string(GateMode mode) {
  return mode == GateMode::noisy_or_leaky ? "noisy-or-leaky" : "tabular-nps";
}

GateMode parse_gate_mode(const std::string& text) {
  if (text == "noisy-or-leaky") return GateMode::noisy_or_leaky;
  if (text == "tabular-nps") return GateMode::tabular_nps;
  throw InputError("unknown network mode '" + text + "'");
}

std::vector<DiseaseId> Network::parents_of(FindingId f) const {
  const Finding& finding = findings.at(f);
  if (mode == GateMode::tabular_nps) return finding.parents;
  std::vector<DiseaseId> out;
  out.reserve(finding.links.size());
  for (const Link& link : finding.links) out.push_back(link.disease);
  return out;
}

double Network::presence_probability(FindingId f,
                                     const DiseaseSet& present) const {
  const Finding& finding = findings.at(f);
  if (mode == GateMode::tabular_nps) {
    std::size_t index = 0;
    for (std::size_t b = 0; b < finding.parents.size(); ++b)
      if (present.contains(finding.parents[b])) index |= std::size_t{1} << b;
    return finding.table.at(index);
  }
  double absence = 1.0 - finding.leak;
  for (const Link& link : finding.links)
    if (present.contains(link.disease)) absence *= 1.0 - link.strength;
  return 1.0 - absence;
}

std::size_t Network::find_disease(const std::string& name) const {
  for (std::size_t i = 0; i < diseases.size(); ++i)
    if (diseases[i].name == name) return i;
  return npos;
}

std::size_t Network::find_finding(const std::string& name) const {
  for (std::size_t i = 0; i < findings.size(); ++i)
    if (findings[i].name == name) return i;
  return npos;
}

Evidence make_evidence(std::vector<FindingId> positive,
                       std::vector<FindingId> negative) {
  auto normalize = [](std::vector<FindingId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  normalize(positive);
  normalize(negative);
  return Evidence{std::move(positive), std::move(negative)};
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& issue : issues)
    out << issue.location << ": " << issue.message << '\n';
  return out.str();
}

void ValidationReport::raise_if_failed(const std::string& context) const {
  if (ok()) return;
  throw InputError(context + " failed validation:\n" + to_string());
}

namespace {

bool in_open_unit(double x) { return std::isfinite(x) && x > 0.0 && x < 1.0; }
bool in_closed_unit(double x) {
  return std::isfinite(x) && x >= 0.0 && x <= 1.0;
}

std::string disease_loc(std::size_t i, const Network& n) {
  return "disease[" + std::to_string(i) + "] '" + n.diseases[i].name + "'";
}

std::string finding_loc(std::size_t i, const Network& n) {
  return "finding[" + std::to_string(i) + "] '" + n.findings[i].name + "'";
}

}  // namespace

ValidationReport validate(const Network& network) {
  ValidationReport report;
  auto fail = [&](std::string where, std::string what) {
    report.issues.push_back({std::move(where), std::move(what)});
  };

  std::set<std::string> names;
  for (std::size_t i = 0; i < network.diseases.size(); ++i) {
    const Disease& d = network.diseases[i];
    if (!in_open_unit(d.prior))
      fail(disease_loc(i, network), "prior not in open interval (0,1)");
    if (d.name.empty()) fail(disease_loc(i, network), "empty name");
    if (!names.insert(d.name).second)
      fail(disease_loc(i, network), "duplicate disease name");
  }

  names.clear();
  const std::size_t n = network.diseases.size();
  for (std::size_t i = 0; i < network.findings.size(); ++i) {
    const Finding& f = network.findings[i];
    const std::string where = finding_loc(i, network);
    if (f.name.empty()) fail(where, "empty name");
    if (!names.insert(f.name).second) fail(where, "duplicate finding name");

    std::vector<DiseaseId> parents = network.parents_of(static_cast<FindingId>(i));
    std::set<DiseaseId> seen;
    for (DiseaseId d : parents) {
      if (d >= n)
        fail(where, "parent index " + std::to_string(d) + " out of range");
      else if (!seen.insert(d).second)
        fail(where, "duplicate parent index " + std::to_string(d));
    }

    if (network.mode == GateMode::noisy_or_leaky) {
      if (!(std::isfinite(f.leak) && f.leak >= 0.0 && f.leak < 1.0))
        fail(where, "leak not in [0,1)");
      for (const Link& link : f.links)
        if (!(std::isfinite(link.strength) && link.strength > 0.0 &&
              link.strength <= 1.0))
          fail(where, "link strength to disease " +
                          std::to_string(link.disease) + " not in (0,1]");
      if (!f.parents.empty() || !f.table.empty())
        fail(where, "tabular fields present in noisy-or network");
    } else {
      if (!f.links.empty())
        fail(where, "noisy-or links present in tabular network");
      if (f.parents.size() > kMaxTabularParents) {
        fail(where, "more than " + std::to_string(kMaxTabularParents) +
                        " parents");
        continue;
      }
      std::size_t expected = std::size_t{1} << f.parents.size();
      if (f.table.size() != expected)
        fail(where, "table length != 2^k (k=" +
                        std::to_string(f.parents.size()) + ", got " +
                        std::to_string(f.table.size()) + ")");
      for (std::size_t t = 0; t < f.table.size(); ++t)
        if (!in_closed_unit(f.table[t]))
          fail(where, "table entry " + std::to_string(t) + " not in [0,1]");
    }
  }
  return report;
}

ValidationReport validate_case(const Network& network,
                               const Evidence& evidence) {
  ValidationReport report;
  auto fail = [&](std::string where, std::string what) {
    report.issues.push_back({std::move(where), std::move(what)});
  };
  const std::size_t m = network.findings.size();

  auto check_indices = [&](const std::vector<FindingId>& ids,
                           const char* which) {
    bool good = true;
    for (FindingId f : ids)
      if (f >= m) {
        fail(std::string(which) + " evidence",
             "finding index " + std::to_string(f) + " out of range");
        good = false;
      }
    return good;
  };
  bool pos_ok = check_indices(evidence.positive, "positive");
  bool neg_ok = check_indices(evidence.negative, "negative");
  if (!pos_ok || !neg_ok) return report;

  std::set<FindingId> positive(evidence.positive.begin(),
                               evidence.positive.end());
  for (FindingId f : evidence.negative)
    if (positive.count(f))
      fail(finding_loc(f, network), "overlapping evidence (both positive and negative)");

  const DiseaseSet none(network.disease_count());
  for (FindingId f : evidence.positive) {
    if (network.presence_probability(f, none) <= 0.0)
      fail(finding_loc(f, network),
           "zero-leak positive finding (P(present | no disease) = 0)");
  }
  for (FindingId f : evidence.negative) {
    if (network.presence_probability(f, none) >= 1.0)
      fail(finding_loc(f, network),
           "negative finding certain to be present with no disease");
  }
  return report;
}

}  // namespace diagbound
