#ifndef NLCPS_TRAINING_HPP
#define NLCPS_TRAINING_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nlcps/agent.hpp"
#include "nlcps/common.hpp"
#include "nlcps/domain.hpp"
#include "nlcps/synth.hpp"

namespace nlcps {

// Training loop: repeatedly sample a cluster configuration, score and select
// a node, observe the noisy synthetic reward, update the agent, and log
// convergence statistics (trailing moving average, per-window variance) plus
// noiseless oracle accounting for regret.

/// Per-size trains a fresh agent for each cluster size; continual trains one
/// agent across configurations of every size.
enum class TrainingMode { kPerSize, kContinual };

inline std::string training_mode_name(TrainingMode m) {
  return m == TrainingMode::kPerSize ? "per-size" : "continual";
}

inline TrainingMode parse_training_mode(std::string_view name) {
  if (name == "per-size") return TrainingMode::kPerSize;
  if (name == "continual") return TrainingMode::kContinual;
  throw ValidationError("unknown training mode: '" + std::string(name) +
                        "' (expected per-size or continual)");
}

struct TrainingConfig {
  std::int64_t timesteps = 10000;
  double alpha = 0.5;
  double learning_rate = 3e-4;
  std::vector<int> cluster_sizes = {5, 8, 10, 12};
  std::string dataset_ref;  // informational: where the dataset came from
  std::uint64_t seed = 42;
  CounterStrategy counter_strategy = CounterStrategy::kFeatureBucket;
  std::int64_t moving_average_window = 100;
  TrainingMode mode = TrainingMode::kPerSize;
};

inline void validate(const TrainingConfig& config) {
  if (config.timesteps < 1) {
    throw ValidationError("training config: timesteps must be >= 1");
  }
  if (config.moving_average_window < 1) {
    throw ValidationError("training config: moving average window must be >= 1");
  }
  if (config.cluster_sizes.empty()) {
    throw ValidationError("training config: cluster sizes must be non-empty");
  }
  for (int s : config.cluster_sizes) {
    if (s < 2) {
      throw ValidationError("training config: cluster sizes must be >= 2");
    }
  }
  if (!(config.alpha > 0.0)) {
    throw ValidationError("training config: alpha must be positive");
  }
  if (!(config.learning_rate > 0.0)) {
    throw ValidationError("training config: learning rate must be positive");
  }
}

/// One logged timestep. reward is the noisy observation the agent learned
/// from; reward_noiseless / oracle_reward are the noise-free values used for
/// regret so environment noise never makes regret negative.
struct StepRecord {
  std::int64_t step = 0;  // 1-based
  std::string context_id;
  int action = 0;
  double reward = 0.0;
  double reward_noiseless = 0.0;
  int oracle_index = 0;
  double oracle_reward = 0.0;
  double moving_avg = 0.0;  // trailing min(step, window) noisy rewards
  double variance = 0.0;    // population variance over the same window
};

struct TraceSummary {
  double final_moving_avg = 0.0;
  double mean_regret = 0.0;        // noiseless, over the final summary_window steps
  std::int64_t summary_window = 0;  // min(1000, timesteps)
};

struct TrainingTrace {
  std::string run_id;  // "size-5", ..., or "continual"
  std::string mode;
  std::vector<int> cluster_sizes;
  std::uint64_t master_seed = 0;
  std::uint64_t run_seed = 0;
  std::string counter_strategy;
  std::int64_t moving_average_window = 100;
  std::vector<StepRecord> records;
  TraceSummary summary;
};

struct TrainingRun {
  std::string run_id;
  AgentState agent;
  TrainingTrace trace;
};

/// Mean of (oracle reward - achieved reward), both noiseless, over the final
/// `window` steps of the trace.
inline double compute_regret(const TrainingTrace& trace, std::int64_t window) {
  if (window < 1) {
    throw ValidationError("compute_regret: window must be >= 1");
  }
  if (static_cast<std::int64_t>(trace.records.size()) < window) {
    throw ValidationError("compute_regret: trace shorter than window");
  }
  double sum = 0.0;
  for (std::size_t i = trace.records.size() - static_cast<std::size_t>(window);
       i < trace.records.size(); ++i) {
    sum += trace.records[i].oracle_reward - trace.records[i].reward_noiseless;
  }
  return sum / static_cast<double>(window);
}

struct WindowStats {
  double mean = 0.0;
  double variance = 0.0;  // population variance
};

namespace detail {

inline WindowStats stats_over(const std::vector<StepRecord>& records, std::size_t begin,
                              std::size_t end) {
  WindowStats out;
  const double n = static_cast<double>(end - begin);
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    sum += records[i].reward;
  }
  out.mean = sum / n;
  double sq = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double d = records[i].reward - out.mean;
    sq += d * d;
  }
  out.variance = sq / n;
  return out;
}

}  // namespace detail

/// Noisy-reward statistics over the first `window` logged steps.
inline WindowStats initial_window_stats(const TrainingTrace& trace, std::int64_t window) {
  if (window < 1 || static_cast<std::int64_t>(trace.records.size()) < window) {
    throw ValidationError("window stats: trace shorter than window");
  }
  return detail::stats_over(trace.records, 0, static_cast<std::size_t>(window));
}

/// Noisy-reward statistics over the last `window` logged steps.
inline WindowStats final_window_stats(const TrainingTrace& trace, std::int64_t window) {
  if (window < 1 || static_cast<std::int64_t>(trace.records.size()) < window) {
    throw ValidationError("window stats: trace shorter than window");
  }
  return detail::stats_over(trace.records, trace.records.size() - static_cast<std::size_t>(window),
                            trace.records.size());
}

/// Train one agent on the dataset slice covering `sizes`. All randomness
/// (initialization, environment sampling, noise) derives from `run_seed`.
inline TrainingRun train_single(const TrainingConfig& config, const SyntheticDataset& dataset,
                                const std::vector<int>& sizes, std::uint64_t run_seed,
                                std::string run_id, const SynthModelParams& synth_params = {},
                                const RewardModelParams& reward_params = {}) {
  validate(config);
  validate(synth_params);
  validate(reward_params);
  if (sizes.empty()) {
    throw ValidationError("train: size slice must be non-empty");
  }

  // Build the sampling pool for the requested sizes.
  std::vector<const ClusterContext*> pool;
  std::vector<std::string> pool_ids;
  for (std::size_t i = 0; i < dataset.configurations.size(); ++i) {
    const int n = static_cast<int>(dataset.configurations[i].size());
    if (std::find(sizes.begin(), sizes.end(), n) != sizes.end()) {
      pool.push_back(&dataset.configurations[i]);
      pool_ids.push_back(dataset.ids[i]);
    }
  }
  for (int s : sizes) {
    bool found = false;
    for (const ClusterContext* c : pool) {
      if (static_cast<int>(c->size()) == s) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw ValidationError("train: dataset has no configurations of size " + std::to_string(s));
    }
  }

  // Noiseless per-node rewards and the oracle, precomputed once per pool
  // entry; used only for trace accounting, never shown to the agent.
  const SynthModelParams& synth = synth_params;
  std::vector<std::vector<double>> noiseless_rewards(pool.size());
  std::vector<std::pair<int, double>> oracles(pool.size());
  for (std::size_t p = 0; p < pool.size(); ++p) {
    const ClusterContext& ctx = *pool[p];
    noiseless_rewards[p].reserve(ctx.size());
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      noiseless_rewards[p].push_back(
          compute_reward(predict_profile(ctx.node(i), synth), reward_params));
    }
    oracles[p] = oracle_best(ctx, synth, reward_params);
  }
  std::unordered_map<const ClusterContext*, std::size_t> pool_index;
  for (std::size_t p = 0; p < pool.size(); ++p) {
    pool_index.emplace(pool[p], p);
  }

  TrainingRun run;
  run.run_id = run_id;
  run.agent = make_agent(derive_seed(run_seed, "agent"), config.alpha, config.learning_rate,
                         config.counter_strategy);
  Environment env(std::move(pool), std::move(pool_ids), synth, reward_params,
                  derive_seed(run_seed, "env"), /*noisy=*/true);

  TrainingTrace& trace = run.trace;
  trace.run_id = std::move(run_id);
  trace.mode = training_mode_name(config.mode);
  trace.cluster_sizes = sizes;
  trace.master_seed = config.seed;
  trace.run_seed = run_seed;
  trace.counter_strategy = counter_strategy_name(config.counter_strategy);
  trace.moving_average_window = config.moving_average_window;
  trace.records.reserve(static_cast<std::size_t>(config.timesteps));

  const auto window = static_cast<std::size_t>(config.moving_average_window);
  for (std::int64_t t = 1; t <= config.timesteps; ++t) {
    const ClusterContext& ctx = env.current();
    const std::size_t p = pool_index.at(&ctx);

    StepRecord rec;
    rec.step = t;
    rec.context_id = env.current_id();
    const PlacementDecision decision = decide(run.agent, ctx);
    rec.action = decision.chosen_index;
    const StepResult result = env.step(decision.chosen_index);
    rec.reward = result.reward;
    rec.reward_noiseless = noiseless_rewards[p][static_cast<std::size_t>(decision.chosen_index)];
    rec.oracle_index = oracles[p].first;
    rec.oracle_reward = oracles[p].second;
    update(run.agent, ctx, decision, result.reward);

    // Trailing-window statistics, recomputed from the raw records so a test
    // can reproduce them by summing the same values in the same order.
    trace.records.push_back(rec);
    const std::size_t n = std::min(trace.records.size(), window);
    const std::size_t begin = trace.records.size() - n;
    const WindowStats stats = detail::stats_over(trace.records, begin, trace.records.size());
    trace.records.back().moving_avg = stats.mean;
    trace.records.back().variance = stats.variance;
  }

  trace.summary.summary_window = std::min<std::int64_t>(1000, config.timesteps);
  trace.summary.final_moving_avg = trace.records.back().moving_avg;
  trace.summary.mean_regret = compute_regret(trace, trace.summary.summary_window);
  return run;
}

/// Full training per the configured mode: per-size yields one independent
/// run per cluster size (derived seeds), continual yields a single run over
/// every size.
inline std::vector<TrainingRun> train(const TrainingConfig& config,
                                      const SyntheticDataset& dataset,
                                      const SynthModelParams& synth_params = {},
                                      const RewardModelParams& reward_params = {}) {
  validate(config);
  std::vector<TrainingRun> runs;
  if (config.mode == TrainingMode::kContinual) {
    runs.push_back(train_single(config, dataset, config.cluster_sizes,
                                derive_seed(config.seed, "train-continual"), "continual",
                                synth_params, reward_params));
    return runs;
  }
  for (int s : config.cluster_sizes) {
    runs.push_back(train_single(config, dataset, {s},
                                derive_seed(config.seed, "train-size-" + std::to_string(s)),
                                "size-" + std::to_string(s), synth_params, reward_params));
  }
  return runs;
}

}  // namespace nlcps

#endif  // NLCPS_TRAINING_HPP
