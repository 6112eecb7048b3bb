#ifndef NLCPS_REWARD_HPP
#define NLCPS_REWARD_HPP

#include <algorithm>
#include <cmath>

#include "nlcps/common.hpp"
#include "nlcps/domain.hpp"

namespace nlcps {

/// Penalty-bonus reward constants. Defaults are the operational-limit values
/// the placement score is built around; experiments can override any of them
/// through the experiment config without code changes.
struct RewardModelParams {
  double base_reward = 100.0;
  double api_latency_penalty_per_ms = 0.5;
  double pod_latency_penalty_per_s = 5.0;
  double cpu_threshold_pct = 85.0;
  double cpu_penalty_per_pct = 3.0;
  double mem_threshold_pct = 80.0;
  double mem_penalty_per_pct = 2.0;
  double throughput_baseline_ppm = 100.0;
  double throughput_bonus_per_ppm = 0.1;
  double failure_penalty_scale = 100.0;
};

inline void validate(const RewardModelParams& p) {
  const bool coeffs_ok = p.api_latency_penalty_per_ms >= 0.0 && p.pod_latency_penalty_per_s >= 0.0 &&
                         p.cpu_penalty_per_pct >= 0.0 && p.mem_penalty_per_pct >= 0.0 &&
                         p.throughput_bonus_per_ppm >= 0.0 && p.failure_penalty_scale >= 0.0 &&
                         p.throughput_baseline_ppm >= 0.0;
  const bool thresholds_ok = p.cpu_threshold_pct > 0.0 && p.cpu_threshold_pct < 100.0 &&
                             p.mem_threshold_pct > 0.0 && p.mem_threshold_pct < 100.0;
  if (!coeffs_ok || !thresholds_ok) {
    throw ValidationError("reward params: coefficients must be >= 0, thresholds in (0, 100)");
  }
}

/// Scalar placement reward for one measured profile. Latency terms are
/// penalized linearly from zero; CPU/memory only above their thresholds;
/// throughput earns a bonus only above the baseline; failures cost
/// failure_penalty_scale times the failure fraction. The result is
/// deliberately unclamped and can go far below zero.
inline double compute_reward(const PerformanceProfile& profile,
                             const RewardModelParams& params = {}) {
  const double fields[] = {profile.api_latency_ms,      profile.cpu_util_pct,
                           profile.mem_util_pct,        profile.pod_throughput_ppm,
                           profile.pod_latency_s,       profile.success_rate};
  for (double v : fields) {
    if (!std::isfinite(v)) {
      throw ValidationError("compute_reward: non-finite profile field");
    }
  }
  double r = params.base_reward;
  r -= profile.api_latency_ms * params.api_latency_penalty_per_ms;
  r -= profile.pod_latency_s * params.pod_latency_penalty_per_s;
  r -= std::max(0.0, profile.cpu_util_pct - params.cpu_threshold_pct) * params.cpu_penalty_per_pct;
  r -= std::max(0.0, profile.mem_util_pct - params.mem_threshold_pct) * params.mem_penalty_per_pct;
  r += std::max(0.0, profile.pod_throughput_ppm - params.throughput_baseline_ppm) *
       params.throughput_bonus_per_ppm;
  r -= params.failure_penalty_scale * (1.0 - profile.success_rate);
  return r;
}

}  // namespace nlcps

#endif  // NLCPS_REWARD_HPP
