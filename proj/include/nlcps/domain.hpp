#ifndef NLCPS_DOMAIN_HPP
#define NLCPS_DOMAIN_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nlcps/common.hpp"

namespace nlcps {

/// Per-node context triple: compute capacity plus mean round-trip latency to
/// the node's peers.
struct NodeFeatures {
  int cpu_cores = 0;
  double memory_gb = 0.0;
  double avg_latency_ms = 0.0;
};

inline void validate(const NodeFeatures& f, const std::string& where) {
  if (f.cpu_cores <= 0) {
    throw ValidationError(where + ": cpu_cores must be a positive integer");
  }
  if (!(f.memory_gb > 0.0) || !std::isfinite(f.memory_gb)) {
    throw ValidationError(where + ": memory_gb must be positive and finite");
  }
  if (!(f.avg_latency_ms > 0.0) || !std::isfinite(f.avg_latency_ms)) {
    throw ValidationError(where + ": avg_latency_ms must be positive and finite");
  }
}

/// An ordered node inventory. Node order is load order; action indices refer
/// to it. Single-node contexts are representable (the CLI accepts them with a
/// warning) but normalization and training require N >= 2.
class ClusterContext {
 public:
  ClusterContext(std::vector<NodeFeatures> nodes, std::vector<std::string> node_ids,
                 std::vector<std::string> regions = {})
      : nodes_(std::move(nodes)), node_ids_(std::move(node_ids)), regions_(std::move(regions)) {
    if (nodes_.empty()) {
      throw ValidationError("context: at least one node required");
    }
    if (node_ids_.size() != nodes_.size()) {
      throw ValidationError("context: node_ids length does not match nodes length");
    }
    if (!regions_.empty() && regions_.size() != nodes_.size()) {
      throw ValidationError("context: regions length does not match nodes length");
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : node_ids_) {
      if (!seen.insert(id).second) {
        throw ValidationError("context: duplicate node id '" + id + "'");
      }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      validate(nodes_[i], "node '" + node_ids_[i] + "'");
    }
  }

  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const std::vector<NodeFeatures>& nodes() const { return nodes_; }
  [[nodiscard]] const NodeFeatures& node(std::size_t i) const { return nodes_[i]; }
  [[nodiscard]] const std::vector<std::string>& node_ids() const { return node_ids_; }
  [[nodiscard]] const std::vector<std::string>& regions() const { return regions_; }

 private:
  std::vector<NodeFeatures> nodes_;
  std::vector<std::string> node_ids_;
  std::vector<std::string> regions_;
};

/// Column-wise min-max scaled features, one [0,1]^3 triple per node.
struct NormalizedFeatures {
  std::vector<std::array<double, 3>> values;
};

/// Six operational metrics for one candidate control-plane host.
struct PerformanceProfile {
  double api_latency_ms = 0.0;
  double cpu_util_pct = 0.0;
  double mem_util_pct = 0.0;
  double pod_throughput_ppm = 0.0;
  double pod_latency_s = 0.0;
  double success_rate = 1.0;
};

inline void validate(const PerformanceProfile& p) {
  const double fields[] = {p.api_latency_ms, p.cpu_util_pct,  p.mem_util_pct,
                           p.pod_throughput_ppm, p.pod_latency_s, p.success_rate};
  for (double v : fields) {
    if (!std::isfinite(v)) {
      throw ValidationError("performance profile: non-finite metric");
    }
  }
  if (p.api_latency_ms < 0.0 || p.pod_throughput_ppm < 0.0 || p.pod_latency_s < 0.0 ||
      p.cpu_util_pct < 0.0 || p.cpu_util_pct > 100.0 || p.mem_util_pct < 0.0 ||
      p.mem_util_pct > 100.0 || p.success_rate < 0.0 || p.success_rate > 1.0) {
    throw ValidationError("performance profile: metric out of range");
  }
}

/// Min-max scaling per feature column within this cluster instance. A column
/// where all nodes share one value maps to 0.5 so it stays finite without
/// carrying information. Needs two or more nodes; one node gives min-max
/// nothing to scale against.
inline NormalizedFeatures normalize(const ClusterContext& context) {
  if (context.size() < 2) {
    throw ValidationError("normalize: context must contain at least 2 nodes");
  }
  std::array<double, 3> lo{}, hi{};
  auto col = [](const NodeFeatures& f, std::size_t j) {
    return j == 0 ? static_cast<double>(f.cpu_cores) : j == 1 ? f.memory_gb : f.avg_latency_ms;
  };
  for (std::size_t j = 0; j < 3; ++j) {
    lo[j] = hi[j] = col(context.node(0), j);
    for (std::size_t i = 1; i < context.size(); ++i) {
      const double v = col(context.node(i), j);
      lo[j] = std::min(lo[j], v);
      hi[j] = std::max(hi[j], v);
    }
  }
  NormalizedFeatures out;
  out.values.resize(context.size());
  for (std::size_t i = 0; i < context.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      out.values[i][j] =
          hi[j] == lo[j] ? 0.5 : (col(context.node(i), j) - lo[j]) / (hi[j] - lo[j]);
    }
  }
  return out;
}

/// Row-major [c_1, m_1, lat_1, c_2, ...] vector of length 3N.
inline std::vector<double> flatten(const ClusterContext& context) {
  std::vector<double> out;
  out.reserve(context.size() * 3);
  for (const auto& f : context.nodes()) {
    out.push_back(static_cast<double>(f.cpu_cores));
    out.push_back(f.memory_gb);
    out.push_back(f.avg_latency_ms);
  }
  return out;
}

}  // namespace nlcps

#endif  // NLCPS_DOMAIN_HPP
