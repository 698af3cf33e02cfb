#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace diagbound {

using DiseaseId = std::uint32_t;
using FindingId = std::uint32_t;

/// Parent cap for explicit conditional tables; tables hold 2^k entries.
inline constexpr std::size_t kMaxTabularParents = 12;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-width set of diseases stored as a bit-vector.
///
/// Ordering is lexicographic over bits taken in disease order: the set whose
/// first differing disease is absent compares smaller. This is the tie-break
/// order the search uses for equal priorities.
class DiseaseSet {
 public:
  DiseaseSet() = default;
  explicit DiseaseSet(std::size_t width);
  DiseaseSet(std::size_t width, std::span<const DiseaseId> members);

  std::size_t width() const { return width_; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }

  bool contains(DiseaseId d) const {
    return (words_[d >> 6] >> (d & 63)) & 1u;
  }
  void insert(DiseaseId d) { words_[d >> 6] |= std::uint64_t{1} << (d & 63); }
  void erase(DiseaseId d) { words_[d >> 6] &= ~(std::uint64_t{1} << (d & 63)); }

  bool intersects(const DiseaseSet& other) const;
  bool is_subset_of(const DiseaseSet& other) const;
  std::vector<DiseaseId> members() const;

  friend bool operator==(const DiseaseSet&, const DiseaseSet&) = default;
  friend std::strong_ordering operator<=>(const DiseaseSet& a,
                                          const DiseaseSet& b);

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

enum class GateMode { noisy_or_leaky, tabular_nps };

const char* to_string(GateMode mode);
GateMode parse_gate_mode(const std::string& text);

struct Disease {
  std::string name;
  double prior = 0.0;

  friend bool operator==(const Disease&, const Disease&) = default;
};

struct Link {
  DiseaseId disease = 0;
  double strength = 0.0;

  friend bool operator==(const Link&, const Link&) = default;
};

/// A finding is either a leaky noisy-OR over `links`, or (tabular mode) an
/// explicit table of P(present | parent assignment). Table index bit b is set
/// iff parents[b] is present.
struct Finding {
  std::string name;
  double leak = 0.0;
  std::vector<Link> links;
  std::vector<DiseaseId> parents;
  std::vector<double> table;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct Network {
  GateMode mode = GateMode::noisy_or_leaky;
  std::vector<Disease> diseases;
  std::vector<Finding> findings;

  std::size_t disease_count() const { return diseases.size(); }
  std::size_t finding_count() const { return findings.size(); }

  /// Diseases with an arc into finding `f`, in declaration order.
  std::vector<DiseaseId> parents_of(FindingId f) const;

  /// P(f present | exactly the diseases in `present` are present).
  double presence_probability(FindingId f, const DiseaseSet& present) const;

  std::size_t find_disease(const std::string& name) const;
  std::size_t find_finding(const std::string& name) const;

  friend bool operator==(const Network&, const Network&) = default;
};

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// Observed findings: positive are present, negative are absent. Both lists
/// are kept sorted and free of duplicates.
struct Evidence {
  std::vector<FindingId> positive;
  std::vector<FindingId> negative;

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

Evidence make_evidence(std::vector<FindingId> positive,
                       std::vector<FindingId> negative);

/// Diseases listed present, every other disease absent.
struct CompleteHypothesis {
  DiseaseSet present;
};

/// Diseases in `included` present, `excluded` absent, the rest unspecified.
struct PartialHypothesis {
  DiseaseSet included;
  DiseaseSet excluded;
};

struct ValidationIssue {
  std::string location;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  std::string to_string() const;
  /// Throws InputError carrying every issue when not ok().
  void raise_if_failed(const std::string& context) const;
};

ValidationReport validate(const Network& network);
ValidationReport validate_case(const Network& network,
                               const Evidence& evidence);

}  // namespace diagbound
