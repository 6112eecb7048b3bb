#ifndef NLCPS_SYNTH_HPP
#define NLCPS_SYNTH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nlcps/common.hpp"
#include "nlcps/domain.hpp"
#include "nlcps/reward.hpp"
#include "nlcps/rng.hpp"

namespace nlcps {

/// Per-metric Gaussian noise scales applied on top of the deterministic
/// performance model. Metrics are clamped back into their legal ranges after
/// noise is added.
struct NoiseSigmas {
  double api_latency_ms = 1.2;
  double cpu_util_pct = 2.0;
  double mem_util_pct = 2.0;
  double pod_throughput_ppm = 5.0;
  double pod_latency_s = 0.10;
  double success_rate = 0.012;
};

/// Calibration of the synthetic performance model.
///
/// The model maps node features (cores c, memory m GB, mean peer latency
/// lambda ms) to the six operational metrics through a saturating resource
/// factor
///
///   g(c, m) = cpu_coeff * c/(c + cpu_saturation) + mem_coeff * m/(m + mem_saturation)
///
/// which increases in both dimensions and flattens out for large machines:
///
///   throughput  = base * g * clamp(1 - attenuation * (lambda - floor), 0, 1)
///   api latency = api_base / g + api_net_coeff * lambda
///   cpu util    = clamp(cpu_load_units / c, 0, 100)
///   mem util    = clamp(mem_load_units / m, 0, 100)
///   pod latency = pod_work / throughput
///   failure     = 0 above failure_floor_factor of g, otherwise interpolated
///                 linearly into failure_prob_range as g drops toward
///                 failure_min_factor
///
/// The load constants put 1-core / 1-GB machines above the reward model's
/// utilization thresholds and 4-core / 8-GB machines well below them, and the
/// attenuation makes the far end of the latency range cost roughly a third of
/// peak throughput.
struct SynthModelParams {
  double throughput_base_ppm = 350.0;
  double throughput_cpu_coeff = 0.5;
  double throughput_mem_coeff = 0.5;
  double cpu_saturation = 1.0;
  double mem_saturation = 3.0;
  double latency_attenuation = 0.0025;  // fractional throughput loss per ms
  double latency_floor_ms = 10.0;
  double api_latency_base_ms = 8.0;
  double api_latency_net_coeff = 0.06;
  double cpu_load_units = 95.0;  // work the control-plane must absorb
  double mem_load_units = 88.0;
  double pod_work_ppm_s = 240.0;  // throughput * pod latency product
  std::pair<double, double> failure_prob_range = {0.20, 0.60};
  double failure_floor_factor = 0.52;  // g above this never fails
  double failure_min_factor = 0.37;    // g at or below this fails at range max
  NoiseSigmas noise_sigmas;
  std::uint64_t seed = 0;
};

inline void validate(const SynthModelParams& p) {
  const double vals[] = {p.throughput_base_ppm, p.throughput_cpu_coeff, p.throughput_mem_coeff,
                         p.cpu_saturation,      p.mem_saturation,       p.latency_attenuation,
                         p.latency_floor_ms,    p.api_latency_base_ms,  p.api_latency_net_coeff,
                         p.cpu_load_units,      p.mem_load_units,       p.pod_work_ppm_s};
  for (double v : vals) {
    if (!std::isfinite(v)) {
      throw ValidationError("synth params: non-finite coefficient");
    }
  }
  const auto& s = p.noise_sigmas;
  const double sigs[] = {s.api_latency_ms, s.cpu_util_pct,  s.mem_util_pct,
                         s.pod_throughput_ppm, s.pod_latency_s, s.success_rate};
  for (double v : sigs) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("synth params: noise sigmas must be >= 0");
    }
  }
  if (p.failure_prob_range.first < 0.0 || p.failure_prob_range.second > 1.0 ||
      p.failure_prob_range.first > p.failure_prob_range.second) {
    throw ValidationError("synth params: failure range must be within [0, 1]");
  }
  if (!(p.failure_min_factor < p.failure_floor_factor)) {
    throw ValidationError("synth params: failure_min_factor must be below failure_floor_factor");
  }
}

inline double resource_factor(const NodeFeatures& f, const SynthModelParams& p) {
  const double c = static_cast<double>(f.cpu_cores);
  return p.throughput_cpu_coeff * c / (c + p.cpu_saturation) +
         p.throughput_mem_coeff * f.memory_gb / (f.memory_gb + p.mem_saturation);
}

inline double failure_probability(double g, const SynthModelParams& p) {
  if (g >= p.failure_floor_factor) {
    return 0.0;
  }
  const double t = std::min(1.0, (p.failure_floor_factor - g) /
                                     (p.failure_floor_factor - p.failure_min_factor));
  return p.failure_prob_range.first +
         t * (p.failure_prob_range.second - p.failure_prob_range.first);
}

/// Deterministic metrics for one node; with `noisy`, per-metric Gaussian
/// noise is added and the result clamped back into legal ranges. The
/// noiseless path never touches the RNG.
inline PerformanceProfile predict_profile(const NodeFeatures& node, const SynthModelParams& params,
                                          bool noisy, Rng& rng) {
  const double g = resource_factor(node, params);
  const double lat_factor = std::clamp(
      1.0 - params.latency_attenuation * (node.avg_latency_ms - params.latency_floor_ms), 0.0, 1.0);

  PerformanceProfile p;
  p.pod_throughput_ppm = params.throughput_base_ppm * g * lat_factor;
  p.api_latency_ms = params.api_latency_base_ms / g + params.api_latency_net_coeff * node.avg_latency_ms;
  p.cpu_util_pct = std::clamp(params.cpu_load_units / node.cpu_cores, 0.0, 100.0);
  p.mem_util_pct = std::clamp(params.mem_load_units / node.memory_gb, 0.0, 100.0);
  p.pod_latency_s = params.pod_work_ppm_s / std::max(p.pod_throughput_ppm, 1e-9);
  p.success_rate = 1.0 - failure_probability(g, params);

  if (noisy) {
    const auto& s = params.noise_sigmas;
    p.api_latency_ms = std::max(0.0, p.api_latency_ms + rng.normal(0.0, s.api_latency_ms));
    p.cpu_util_pct = std::clamp(p.cpu_util_pct + rng.normal(0.0, s.cpu_util_pct), 0.0, 100.0);
    p.mem_util_pct = std::clamp(p.mem_util_pct + rng.normal(0.0, s.mem_util_pct), 0.0, 100.0);
    p.pod_throughput_ppm =
        std::max(0.0, p.pod_throughput_ppm + rng.normal(0.0, s.pod_throughput_ppm));
    p.pod_latency_s = std::max(0.0, p.pod_latency_s + rng.normal(0.0, s.pod_latency_s));
    p.success_rate = std::clamp(p.success_rate + rng.normal(0.0, s.success_rate), 0.0, 1.0);
  }
  return p;
}

/// Noiseless convenience overload.
inline PerformanceProfile predict_profile(const NodeFeatures& node,
                                          const SynthModelParams& params) {
  Rng unused(0);
  return predict_profile(node, params, /*noisy=*/false, unused);
}

struct SyntheticDataset {
  std::vector<ClusterContext> configurations;
  std::vector<std::string> ids;  // parallel to configurations
  std::map<int, int> per_size_counts;
  std::vector<int> sizes;
  int per_size = 0;
  std::uint64_t seed = 0;
  std::string generator_version;
};

/// Samples `per_size` cluster configurations for each requested size. Feature
/// sampling is uniform: cores from {1,2,4}, memory from {1,2,4,8} GB, latency
/// from [10, 150] ms. Only uniform draws are used here, so the output is
/// byte-reproducible from the seed across platforms.
inline SyntheticDataset generate_dataset(const std::vector<int>& sizes, int per_size,
                                         std::uint64_t seed) {
  if (sizes.empty()) {
    throw ValidationError("generate_dataset: sizes must be non-empty");
  }
  if (per_size < 1) {
    throw ValidationError("generate_dataset: per_size must be >= 1");
  }
  for (int n : sizes) {
    if (n < 2) {
      throw ValidationError("generate_dataset: cluster sizes must be >= 2");
    }
  }
  static constexpr int kCpuChoices[] = {1, 2, 4};
  static constexpr double kMemChoices[] = {1.0, 2.0, 4.0, 8.0};

  Rng rng(derive_seed(seed, "dataset"));
  SyntheticDataset ds;
  ds.sizes = sizes;
  ds.per_size = per_size;
  ds.seed = seed;
  ds.generator_version = std::string(kGeneratorVersion);
  for (int n : sizes) {
    for (int k = 0; k < per_size; ++k) {
      std::vector<NodeFeatures> nodes;
      std::vector<std::string> ids;
      nodes.reserve(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        NodeFeatures f;
        f.cpu_cores = kCpuChoices[rng.uniform_index(3)];
        f.memory_gb = kMemChoices[rng.uniform_index(4)];
        f.avg_latency_ms = rng.uniform(10.0, 150.0);
        nodes.push_back(f);
        ids.push_back("n" + std::to_string(i + 1));
      }
      ds.configurations.emplace_back(std::move(nodes), std::move(ids));
      char buf[32];
      std::snprintf(buf, sizeof(buf), "s%d-%03d", n, k);
      ds.ids.emplace_back(buf);
      ds.per_size_counts[n] += 1;
    }
  }
  return ds;
}

/// Exhaustive noiseless argmax over every candidate node, ties to the lowest
/// index. This is the regret-accounting reference the learned policy is
/// measured against.
inline std::pair<int, double> oracle_best(const ClusterContext& context,
                                          const SynthModelParams& synth,
                                          const RewardModelParams& reward_params = {}) {
  int best = 0;
  double best_reward = 0.0;
  for (std::size_t i = 0; i < context.size(); ++i) {
    const double r = compute_reward(predict_profile(context.node(i), synth), reward_params);
    if (i == 0 || r > best_reward) {
      best = static_cast<int>(i);
      best_reward = r;
    }
  }
  return {best, best_reward};
}

struct StepResult {
  double reward = 0.0;
  PerformanceProfile profile;
};

/// Single-step episodic environment over a pool of contexts: observe the
/// current context, place the control-plane on one node, collect the (noisy)
/// reward, and the episode ends; the next context is sampled uniformly from
/// the pool. One instance owns one RNG stream and is single-consumer.
class Environment {
 public:
  Environment(std::vector<const ClusterContext*> pool, std::vector<std::string> pool_ids,
              SynthModelParams synth, RewardModelParams reward_params, std::uint64_t seed,
              bool noisy = true)
      : pool_(std::move(pool)),
        pool_ids_(std::move(pool_ids)),
        synth_(std::move(synth)),
        reward_params_(reward_params),
        rng_(seed),
        noisy_(noisy) {
    if (pool_.empty()) {
      throw ValidationError("environment: context pool must be non-empty");
    }
    if (pool_ids_.size() != pool_.size()) {
      throw ValidationError("environment: pool_ids length mismatch");
    }
    advance();
  }

  [[nodiscard]] const ClusterContext& current() const { return *pool_[current_]; }
  [[nodiscard]] const std::string& current_id() const { return pool_ids_[current_]; }
  [[nodiscard]] const SynthModelParams& synth_params() const { return synth_; }
  [[nodiscard]] const RewardModelParams& reward_params() const { return reward_params_; }

  StepResult step(int action) {
    if (action < 0 || static_cast<std::size_t>(action) >= current().size()) {
      throw ValidationError("environment: action " + std::to_string(action) +
                            " out of range for context of size " + std::to_string(current().size()));
    }
    StepResult result;
    result.profile = predict_profile(current().node(static_cast<std::size_t>(action)), synth_,
                                     noisy_, rng_);
    result.reward = compute_reward(result.profile, reward_params_);
    advance();
    return result;
  }

 private:
  void advance() { current_ = static_cast<std::size_t>(rng_.uniform_index(pool_.size())); }

  std::vector<const ClusterContext*> pool_;
  std::vector<std::string> pool_ids_;
  SynthModelParams synth_;
  RewardModelParams reward_params_;
  Rng rng_;
  bool noisy_;
  std::size_t current_ = 0;
};

}  // namespace nlcps

#endif  // NLCPS_SYNTH_HPP
