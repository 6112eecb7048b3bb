#ifndef NLCPS_AGENT_HPP
#define NLCPS_AGENT_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nlcps/common.hpp"
#include "nlcps/domain.hpp"
#include "nlcps/net.hpp"
#include "nlcps/rng.hpp"

namespace nlcps {

// Decision layer: UCB scoring over candidate nodes, selection-count
// bookkeeping, the learning update, and the three deterministic baseline
// strategies (HIGH-RES, LOW-LATENCY, RANDOM).

/// How selection counts k_i are keyed. Feature buckets treat nodes with
/// similar hardware/latency profiles as one arm (cpu value x memory value x
/// latency binned at a fixed width); action-index counts per position within
/// the current cluster.
enum class CounterStrategy { kFeatureBucket, kActionIndex };

inline std::string counter_strategy_name(CounterStrategy s) {
  return s == CounterStrategy::kFeatureBucket ? "feature-bucket" : "action-index";
}

inline CounterStrategy parse_counter_strategy(std::string_view name) {
  if (name == "feature-bucket") return CounterStrategy::kFeatureBucket;
  if (name == "action-index") return CounterStrategy::kActionIndex;
  throw ValidationError("unknown counter strategy: '" + std::string(name) +
                        "' (expected feature-bucket or action-index)");
}

struct SelectionCounter {
  CounterStrategy strategy = CounterStrategy::kFeatureBucket;
  double latency_bin_width_ms = 10.0;
  std::map<std::string, std::uint64_t> counts;

  /// Canonical count key for node `index` of `context`. Feature buckets use
  /// raw (un-normalized) features so the key is stable across cluster
  /// compositions.
  [[nodiscard]] std::string key_for(const ClusterContext& context, int index) const {
    if (index < 0 || index >= static_cast<int>(context.size())) {
      throw ValidationError("selection counter: node index out of range");
    }
    if (strategy == CounterStrategy::kActionIndex) {
      return std::to_string(index);
    }
    const NodeFeatures& f = context.node(static_cast<std::size_t>(index));
    const auto bin = static_cast<long long>(std::floor(f.avg_latency_ms / latency_bin_width_ms));
    return std::to_string(f.cpu_cores) + "|" + format_double(f.memory_gb) + "|" +
           std::to_string(bin);
  }

  [[nodiscard]] std::uint64_t count_for(const ClusterContext& context, int index) const {
    auto it = counts.find(key_for(context, index));
    return it == counts.end() ? 0 : it->second;
  }

  void increment(const ClusterContext& context, int index) {
    counts[key_for(context, index)] += 1;
  }
};

/// One node's score breakdown. total is exactly exploitation + exploration.
struct UcbScore {
  int node_index = 0;
  double exploitation = 0.0;
  double exploration = 0.0;
  double total = 0.0;
};

struct PlacementDecision {
  int chosen_index = 0;
  std::string chosen_node_id;
  std::vector<UcbScore> all_scores;
  std::string strategy_name;
};

/// Exploration bonus alpha / sqrt(k + 1); strictly positive and strictly
/// decreasing in k for alpha > 0.
inline double exploration_bonus(double alpha, std::uint64_t k) {
  return alpha / std::sqrt(static_cast<double>(k) + 1.0);
}

/// UCB score for every node: exploitation is the network's prediction on the
/// node's per-cluster normalized features, exploration the count-based bonus.
inline std::vector<UcbScore> score_all(const NetworkWeights& weights,
                                       const ClusterContext& context,
                                       const SelectionCounter& counter, double alpha) {
  if (!(alpha > 0.0)) {
    throw ValidationError("score_all: alpha must be positive");
  }
  const NormalizedFeatures norm = normalize(context);
  std::vector<UcbScore> scores;
  scores.reserve(context.size());
  for (std::size_t i = 0; i < context.size(); ++i) {
    UcbScore s;
    s.node_index = static_cast<int>(i);
    s.exploitation = forward(weights, norm.values[i]);
    s.exploration = exploration_bonus(alpha, counter.count_for(context, static_cast<int>(i)));
    s.total = s.exploitation + s.exploration;
    scores.push_back(s);
  }
  return scores;
}

/// Deployment-time scoring: pure exploitation, no bonus (exploration = 0 in
/// every emitted score).
inline std::vector<UcbScore> score_exploit(const NetworkWeights& weights,
                                           const ClusterContext& context) {
  const NormalizedFeatures norm = normalize(context);
  std::vector<UcbScore> scores;
  scores.reserve(context.size());
  for (std::size_t i = 0; i < context.size(); ++i) {
    UcbScore s;
    s.node_index = static_cast<int>(i);
    s.exploitation = forward(weights, norm.values[i]);
    s.exploration = 0.0;
    s.total = s.exploitation;
    scores.push_back(s);
  }
  return scores;
}

/// Argmax over total score; ties broken by lowest index.
inline int select_index(const std::vector<UcbScore>& scores) {
  if (scores.empty()) {
    throw ValidationError("select: empty score list");
  }
  int best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].total > scores[best].total) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

inline PlacementDecision select(const std::vector<UcbScore>& scores,
                                const ClusterContext& context,
                                std::string strategy_name = "NL-CPS") {
  if (scores.size() != context.size()) {
    throw ValidationError("select: score list does not match context size");
  }
  PlacementDecision d;
  d.chosen_index = select_index(scores);
  d.chosen_node_id = context.node_ids()[static_cast<std::size_t>(d.chosen_index)];
  d.all_scores = scores;
  d.strategy_name = std::move(strategy_name);
  return d;
}

/// Full mutable bandit state: reward network, its optimizer, the selection
/// counter, and the (fixed) exploration parameter.
struct AgentState {
  NetworkWeights net;
  AdamState adam;
  SelectionCounter counter;
  double alpha = 0.5;
};

inline AgentState make_agent(std::uint64_t seed, double alpha = 0.5, double learning_rate = 3e-4,
                             CounterStrategy strategy = CounterStrategy::kFeatureBucket,
                             const std::vector<int>& layer_sizes = reward_net_layers()) {
  if (!(alpha > 0.0)) {
    throw ValidationError("agent: alpha must be positive");
  }
  if (!(learning_rate > 0.0)) {
    throw ValidationError("agent: learning rate must be positive");
  }
  AgentState agent;
  agent.net = init_weights(seed, layer_sizes);
  agent.adam = make_adam(agent.net, learning_rate);
  agent.counter.strategy = strategy;
  agent.alpha = alpha;
  return agent;
}

inline PlacementDecision decide(const AgentState& agent, const ClusterContext& context) {
  return select(score_all(agent.net, context, agent.counter, agent.alpha), context);
}

/// Learning update for one observed (decision, reward): a single gradient
/// step on the chosen node's normalized features, plus a count increment for
/// the chosen node's key. Returns the squared-error loss before the update.
inline double update(AgentState& agent, const ClusterContext& context,
                     const PlacementDecision& decision, double reward) {
  if (!std::isfinite(reward)) {
    throw ValidationError("update: non-finite reward");
  }
  if (decision.chosen_index < 0 || decision.chosen_index >= static_cast<int>(context.size())) {
    throw ValidationError("update: decision index out of range for context");
  }
  const NormalizedFeatures norm = normalize(context);
  const double loss =
      train_step(agent.net, agent.adam, norm.values[static_cast<std::size_t>(decision.chosen_index)],
                 reward);
  agent.counter.increment(context, decision.chosen_index);
  return loss;
}

namespace detail {

inline PlacementDecision baseline_decision(const ClusterContext& context, int chosen,
                                           std::vector<UcbScore> audit_scores,
                                           std::string strategy_name) {
  PlacementDecision d;
  d.chosen_index = chosen;
  d.chosen_node_id = context.node_ids()[static_cast<std::size_t>(chosen)];
  d.all_scores = std::move(audit_scores);
  d.strategy_name = std::move(strategy_name);
  return d;
}

}  // namespace detail

/// Maximum compute: argmax over (cpu_cores, memory_gb) lexicographically,
/// cpu first; ties broken by lowest index. The audit score encodes the
/// ordering as cpu * 1e6 + memory so the decision is checkable from the
/// recorded scores alone.
inline PlacementDecision baseline_high_res(const ClusterContext& context) {
  std::vector<UcbScore> scores;
  scores.reserve(context.size());
  int best = 0;
  for (std::size_t i = 0; i < context.size(); ++i) {
    const NodeFeatures& f = context.node(i);
    UcbScore s;
    s.node_index = static_cast<int>(i);
    s.exploitation = static_cast<double>(f.cpu_cores) * 1e6 + f.memory_gb;
    s.total = s.exploitation;
    scores.push_back(s);
    const NodeFeatures& b = context.node(static_cast<std::size_t>(best));
    if (f.cpu_cores > b.cpu_cores ||
        (f.cpu_cores == b.cpu_cores && f.memory_gb > b.memory_gb)) {
      best = static_cast<int>(i);
    }
  }
  return detail::baseline_decision(context, best, std::move(scores), "HIGH-RES");
}

/// Minimum average network latency; ties broken by lowest index. Audit score
/// is the negated latency so argmax semantics still hold.
inline PlacementDecision baseline_low_latency(const ClusterContext& context) {
  std::vector<UcbScore> scores;
  scores.reserve(context.size());
  int best = 0;
  for (std::size_t i = 0; i < context.size(); ++i) {
    UcbScore s;
    s.node_index = static_cast<int>(i);
    s.exploitation = -context.node(i).avg_latency_ms;
    s.total = s.exploitation;
    scores.push_back(s);
    if (context.node(i).avg_latency_ms < context.node(static_cast<std::size_t>(best)).avg_latency_ms) {
      best = static_cast<int>(i);
    }
  }
  return detail::baseline_decision(context, best, std::move(scores), "LOW-LATENCY");
}

/// Uniform choice over node indices, seeded; no audit scores apply.
inline PlacementDecision baseline_random(const ClusterContext& context, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "baseline-random"));
  const int chosen = static_cast<int>(rng.uniform_index(context.size()));
  return detail::baseline_decision(context, chosen, {}, "RANDOM");
}

}  // namespace nlcps

#endif  // NLCPS_AGENT_HPP
