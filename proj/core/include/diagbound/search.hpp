#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "diagbound/bounds.hpp"
#include "diagbound/likelihood.hpp"
#include "diagbound/logmath.hpp"
#include "diagbound/network.hpp"

namespace diagbound {

enum class StopRule {
  total_error,   // (UBR - LBR) / UBR < p_min
  largest_node,  // max frontier MaxErr < p_min · UBR
};

enum class Termination { running, converged, exact, node_cap };

const char* to_string(Termination t);
const char* to_string(StopRule r);

struct SearchConfig {
  double p_min = 1e-5;
  std::size_t max_hypotheses = 30000;
  std::size_t top_n = 10;
  std::size_t trace_every = 32;
  StopRule stop_rule = StopRule::total_error;

  void validate() const;
};

struct TraceRow {
  std::size_t expansions = 0;
  std::size_t nodes = 0;
  std::size_t settled = 0;
  double log_lbr_total = 0.0;
  double log_ubr_total = 0.0;
  double total_error = 1.0;
  double wall_ms = 0.0;
};

struct SettledHypothesis {
  std::vector<DiseaseId> present;  // sorted
  double log_r = 0.0;
};

/// What an observer sees for every node the search creates.
struct NodeView {
  const DiseaseSet& included;
  std::span<const DiseaseId> candidates;
  const NodeBounds& bounds;
  bool root = false;
  bool settled_on_creation = false;  // leaf with no candidates
  bool dropped = false;              // upper bound exactly zero
};

/// A frontier entry as seen by posterior assembly. The interval is the node's
/// contribution to the running totals (proper extensions only for the root).
struct FrontierView {
  const DiseaseSet& included;
  std::span<const DiseaseId> candidates;
  double log_lb = kLogZero;  // contribution to the totals
  double log_ub = kLogZero;
  const NodeLikelihoodCache& cache;
  const NodeBounds& bounds;
};

struct SearchSnapshot {
  double log_lbr = 0.0;  // non-factored subspace
  double log_ubr = 0.0;
  double total_error = 1.0;
  std::size_t expansions = 0;
  std::size_t nodes = 0;
  std::size_t settled = 0;
  std::size_t frontier = 0;
  Termination termination = Termination::running;
};

/// Best-first search over the set-enumeration tree of hypotheses.
///
/// Every complete hypothesis over the non-factored diseases lies either in
/// the settled list or in exactly one frontier node's extension set. A node
/// (h, g) expanded with candidates ordered d1..dk by descending MEP yields
/// children (h+di, g+{d1..d(i-1)}), which keeps the partition intact.
class Search {
 public:
  using NodeObserver = std::function<void(const NodeView&)>;

  Search(const Network& network, const Evidence& evidence,
         SearchConfig config = {}, NodeObserver observer = {});

  Search(const Search&) = delete;
  Search& operator=(const Search&) = delete;

  /// Pops the frontier node with the largest MaxErr and expands it.
  /// Returns false when the frontier is empty.
  bool expand();

  /// Expands until a stop condition holds; returns the reason.
  Termination run();

  SearchSnapshot snapshot() const;

  /// Stop condition that would hold right now, or running.
  Termination stop_condition() const;

  const Network& network() const { return network_; }
  const Evidence& evidence() const { return evidence_; }
  const SearchConfig& config() const { return config_; }
  const AbsorbedEvidence& absorbed() const { return absorbed_; }
  const FactoredSet& factored() const { return factored_; }
  const BoundPolicy& policy() const { return policy_; }
  bool degraded() const { return !policy_.use_lb2 || !policy_.use_ub1; }

  double log_lbr() const { return log_lbr_; }
  double log_ubr() const { return log_ubr_; }
  double total_error() const;
  double log_settled_total() const { return settled_total_.log_total(); }

  std::span<const SettledHypothesis> settled() const { return settled_; }
  std::size_t frontier_size() const { return frontier_.size(); }
  void for_each_frontier(const std::function<void(const FrontierView&)>& fn) const;

  const std::vector<TraceRow>& trace() const { return trace_; }
  std::size_t expansions() const { return expansions_; }
  std::size_t nodes_created() const { return nodes_created_; }
  Termination termination() const { return termination_; }
  double elapsed_ms() const;

  /// Diseases a node excludes: everything neither included, factored nor a
  /// remaining candidate.
  DiseaseSet excluded_of(const DiseaseSet& included,
                         std::span<const DiseaseId> candidates) const;

 private:
  struct Node {
    DiseaseSet included;
    std::shared_ptr<const std::vector<DiseaseId>> pool;
    std::size_t offset = 0;
    NodeLikelihoodCache cache;
    NodeBounds bounds;
    double log_partial_prior = 0.0;
    double log_lb = kLogZero;  // contribution to totals
    double log_ub = kLogZero;
    bool own_settled = false;

    std::span<const DiseaseId> candidates() const {
      return std::span<const DiseaseId>(*pool).subspan(offset);
    }
  };

  struct QueueEntry {
    double log_err;
    std::size_t slot;
  };
  struct QueueOrder {
    const std::vector<std::optional<Node>>* arena;
    bool operator()(const QueueEntry& a, const QueueEntry& b) const;
  };

  void settle(const DiseaseSet& present, double log_r);
  void push_frontier(Node node);
  void refresh_totals();
  void record_trace(bool force);
  void notify(const Node& node, bool root, bool leaf, bool dropped) const;

  const Network& network_;
  Evidence evidence_;
  SearchConfig config_;
  NodeObserver observer_;

  AbsorbedEvidence absorbed_;
  FactoredSet factored_;
  BoundPolicy policy_;
  std::optional<PriorTerms> priors_;

  std::vector<std::optional<Node>> arena_;
  std::vector<std::size_t> free_slots_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> frontier_;
  LogSumTree lb_tree_;
  LogSumTree ub_tree_;

  std::vector<SettledHypothesis> settled_;
  LogAccumulator settled_total_;
  double log_lbr_ = 0.0;
  double log_ubr_ = 0.0;

  std::size_t expansions_ = 0;
  std::size_t nodes_created_ = 0;
  Termination termination_ = Termination::running;
  std::vector<TraceRow> trace_;
  std::size_t last_traced_ = static_cast<std::size_t>(-1);
  std::chrono::steady_clock::time_point start_;
};

/// Bound forms that are sound for this case. Noisy-OR always gets all four;
/// tabular networks need the qualitative checks to pass.
BoundPolicy bound_policy_for(const Network& network, const Evidence& evidence);

}  // namespace diagbound
