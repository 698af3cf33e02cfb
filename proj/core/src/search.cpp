#include "diagbound/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diagbound/oracle.hpp"

namespace diagbound {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::running: return "running";
    case Termination::converged: return "pmin";
    case Termination::exact: return "exact";
    case Termination::node_cap: return "node cap";
  }
  return "unknown";
}

const char* to_string(StopRule r) {
  return r == StopRule::total_error ? "total" : "node";
}

void SearchConfig::validate() const {
  if (!(p_min > 0.0 && p_min <= 1.0))
    throw InputError("p_min must be in (0, 1]");
  if (max_hypotheses == 0) throw InputError("max_hypotheses must be positive");
  if (top_n == 0) throw InputError("top_n must be positive");
}

BoundPolicy bound_policy_for(const Network& network, const Evidence& evidence) {
  BoundPolicy policy;
  if (network.mode == GateMode::noisy_or_leaky) return policy;

  // LB2 needs positive influence and a positive-only residual; UB1 needs
  // declining MEP, which only an exhaustive check can certify for tables
  policy.use_lb2 = evidence.negative.empty();
  for (FindingId f : evidence.positive)
    if (policy.use_lb2 && !check_positive_influence(network, f).passed)
      policy.use_lb2 = false;
  policy.use_ub1 = network.disease_count() <= kDecliningMepMaxDiseases &&
                   check_declining_mep(network, evidence).passed;
  return policy;
}

bool Search::QueueOrder::operator()(const QueueEntry& a,
                                    const QueueEntry& b) const {
  if (a.log_err != b.log_err) return a.log_err < b.log_err;
  // equal priority: the lexicographically smaller included set wins
  return (*arena)[a.slot]->included > (*arena)[b.slot]->included;
}

Search::Search(const Network& network, const Evidence& evidence,
               SearchConfig config, NodeObserver observer)
    : network_(network),
      evidence_(evidence),
      config_(config),
      observer_(std::move(observer)),
      frontier_(QueueOrder{&arena_}) {
  config_.validate();
  validate(network_).raise_if_failed("network");
  validate_case(network_, evidence_).raise_if_failed("case");
  start_ = std::chrono::steady_clock::now();

  absorbed_ = absorb(network_, evidence_);
  factored_ = factor_independents(network_, evidence_);
  policy_ = bound_policy_for(network_, evidence_);
  priors_.emplace(network_, factored_, absorbed_.log_evidence_baseline);

  const std::size_t n = network_.disease_count();
  settle(DiseaseSet(n), 0.0);

  auto pool = std::make_shared<std::vector<DiseaseId>>();
  for (std::size_t d = 0; d < n; ++d)
    if (!factored_.members.contains(static_cast<DiseaseId>(d)))
      pool->push_back(static_cast<DiseaseId>(d));

  Node root;
  root.included = DiseaseSet(n);
  root.pool = std::move(pool);
  root.cache = root_cache(absorbed_);
  root.own_settled = true;
  {
    auto cands = root.candidates();
    double l2 = policy_.use_lb2 ? lb2(absorbed_, root.cache, cands) : kLogZero;
    double u1 = policy_.use_ub1 ? ub1(absorbed_, root.cache, cands)
                                : std::numeric_limits<double>::infinity();
    double free_absent = 0.0;
    for (DiseaseId d : cands) free_absent += priors_->log_not_prior(d);
    double u2 = ub2(0.0, 0.0, free_absent, priors_->log_scale());
    root.bounds = combine(0.0, l2, u1, u2, policy_);
  }
  ++nodes_created_;
  notify(root, true, false, false);

  if (!root.candidates().empty()) {
    // H̲₀ is already settled; the root stands for its proper extensions
    root.log_lb = log_sub(root.bounds.log_lb, 0.0);
    root.log_ub = log_sub(root.bounds.log_ub, 0.0);
    push_frontier(std::move(root));
  }

  log_lbr_ = log_add(settled_total_.log_total(), lb_tree_.log_total());
  log_ubr_ = log_add(settled_total_.log_total(), ub_tree_.log_total());
  record_trace(true);
}

void Search::settle(const DiseaseSet& present, double log_r) {
  settled_.push_back({present.members(), log_r});
  settled_total_.add(log_r);
}

void Search::push_frontier(Node node) {
  std::size_t slot;
  if (!free_slots_.empty()) {
    slot = free_slots_.back();
    free_slots_.pop_back();
  } else {
    slot = arena_.size();
    arena_.emplace_back();
  }
  lb_tree_.assign(slot, node.log_lb);
  ub_tree_.assign(slot, node.log_ub);
  double priority = node.bounds.log_max_err();
  arena_[slot] = std::move(node);
  frontier_.push({priority, slot});
}

void Search::notify(const Node& node, bool root, bool leaf, bool dropped) const {
  if (!observer_) return;
  observer_(NodeView{node.included, node.candidates(), node.bounds, root, leaf,
                     dropped});
}

bool Search::expand() {
  if (frontier_.empty()) return false;
  const QueueEntry top = frontier_.top();
  frontier_.pop();
  Node node = std::move(*arena_[top.slot]);
  arena_[top.slot].reset();
  free_slots_.push_back(top.slot);
  lb_tree_.clear(top.slot);
  ub_tree_.clear(top.slot);

  if (!node.own_settled) settle(node.included, node.cache.log_r);

  // candidates in descending MEP order, ties by disease index
  std::vector<std::pair<double, DiseaseId>> scored;
  for (DiseaseId d : node.candidates())
    scored.emplace_back(log_mep(absorbed_, node.cache, d), d);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  auto order = std::make_shared<std::vector<DiseaseId>>();
  order->reserve(scored.size());
  for (const auto& s : scored) order->push_back(s.second);

  double earlier_absent = 0.0;
  for (std::size_t i = 0; i < order->size(); ++i) {
    const DiseaseId d = (*order)[i];
    Node child;
    child.included = node.included;
    child.included.insert(d);
    child.pool = order;
    child.offset = i + 1;
    child.cache = extend_cache(absorbed_, node.cache, d);
    child.log_partial_prior =
        node.log_partial_prior + priors_->log_prior(d) + earlier_absent;
    earlier_absent += priors_->log_not_prior(d);

    auto cands = child.candidates();
    const double log_r = child.cache.log_r;
    double l2 = policy_.use_lb2 ? lb2(absorbed_, child.cache, cands) : kLogZero;
    double u1 = policy_.use_ub1 ? ub1(absorbed_, child.cache, cands)
                                : std::numeric_limits<double>::infinity();
    double free_absent = 0.0;
    for (DiseaseId c : cands) free_absent += priors_->log_not_prior(c);
    double u2 = ub2(log_r, child.log_partial_prior, free_absent,
                    priors_->log_scale());
    child.bounds = combine(log_r, l2, u1, u2, policy_);
    ++nodes_created_;

    if (cands.empty()) {
      notify(child, false, true, false);
      settle(child.included, log_r);
      continue;
    }
    if (child.bounds.log_ub == kLogZero) {
      notify(child, false, false, true);
      continue;
    }
    child.log_lb = child.bounds.log_lb;
    child.log_ub = child.bounds.log_ub;
    notify(child, false, false, false);
    push_frontier(std::move(child));
  }

  ++expansions_;
  refresh_totals();
  record_trace(false);
  return true;
}

void Search::refresh_totals() {
  const double settled = settled_total_.log_total();
  const double fresh_lb = log_add(settled, lb_tree_.log_total());
  const double fresh_ub = log_add(settled, ub_tree_.log_total());
  // both sums bound the same fixed total, so the running extremes stay valid
  // and absorb rounding jitter between successive sums
  log_lbr_ = std::max(log_lbr_, fresh_lb);
  log_ubr_ = std::min(log_ubr_, fresh_ub);
  if (log_lbr_ > log_ubr_) log_lbr_ = log_ubr_;
}

double Search::total_error() const {
  if (log_ubr_ == kLogZero || log_lbr_ >= log_ubr_) return 0.0;
  return -std::expm1(log_lbr_ - log_ubr_);
}

Termination Search::stop_condition() const {
  if (frontier_.empty()) return Termination::exact;
  if (config_.stop_rule == StopRule::total_error) {
    if (total_error() < config_.p_min) return Termination::converged;
  } else if (frontier_.top().log_err < std::log(config_.p_min) + log_ubr_) {
    return Termination::converged;
  }
  // the cap is never crossed: an expansion adds one node per candidate
  const std::size_t children = arena_[frontier_.top().slot]->candidates().size();
  if (nodes_created_ + children > config_.max_hypotheses) return Termination::node_cap;
  return Termination::running;
}

Termination Search::run() {
  Termination t;
  while ((t = stop_condition()) == Termination::running) expand();
  termination_ = t;
  record_trace(true);
  return t;
}

void Search::record_trace(bool force) {
  if (last_traced_ == expansions_) return;
  bool due = config_.trace_every > 0 && expansions_ % config_.trace_every == 0;
  if (!force && !due) return;
  TraceRow row;
  row.expansions = expansions_;
  row.nodes = nodes_created_;
  row.settled = settled_.size();
  row.log_lbr_total = log_lbr_ + factored_.log_multiplier;
  row.log_ubr_total = log_ubr_ + factored_.log_multiplier;
  row.total_error = total_error();
  row.wall_ms = elapsed_ms();
  trace_.push_back(row);
  last_traced_ = expansions_;
}

double Search::elapsed_ms() const {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start_)
      .count();
}

SearchSnapshot Search::snapshot() const {
  SearchSnapshot s;
  s.log_lbr = log_lbr_;
  s.log_ubr = log_ubr_;
  s.total_error = total_error();
  s.expansions = expansions_;
  s.nodes = nodes_created_;
  s.settled = settled_.size();
  s.frontier = frontier_.size();
  s.termination = termination_;
  return s;
}

void Search::for_each_frontier(
    const std::function<void(const FrontierView&)>& fn) const {
  for (const auto& slot : arena_)
    if (slot) fn(FrontierView{slot->included, slot->candidates(), slot->log_lb, slot->log_ub,
                       slot->cache, slot->bounds});
}

DiseaseSet Search::excluded_of(const DiseaseSet& included,
                               std::span<const DiseaseId> candidates) const {
  const std::size_t n = network_.disease_count();
  DiseaseSet open(n);
  for (DiseaseId d : candidates) open.insert(d);
  DiseaseSet excluded(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto d = static_cast<DiseaseId>(i);
    if (!included.contains(d) && !open.contains(d) && !factored_.members.contains(d))
      excluded.insert(d);
  }
  return excluded;
}

}  // namespace diagbound
