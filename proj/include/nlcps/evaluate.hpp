#ifndef NLCPS_EVALUATE_HPP
#define NLCPS_EVALUATE_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nlcps/agent.hpp"
#include "nlcps/common.hpp"
#include "nlcps/domain.hpp"
#include "nlcps/synth.hpp"

namespace nlcps {

// Held-out evaluation: apply a trained policy and the three baselines to a
// real node inventory, compute each choice's noiseless synthetic reward, and
// compare against expected selections where given.

/// Tri-state agreement against an expected selection.
enum class Agreement { kMatch, kMismatch, kNotSpecified };

inline std::string agreement_name(Agreement a) {
  switch (a) {
    case Agreement::kMatch:
      return "match";
    case Agreement::kMismatch:
      return "mismatch";
    default:
      return "not-specified";
  }
}

inline Agreement parse_agreement(std::string_view name) {
  if (name == "match") return Agreement::kMatch;
  if (name == "mismatch") return Agreement::kMismatch;
  if (name == "not-specified") return Agreement::kNotSpecified;
  throw ValidationError("unknown agreement value: '" + std::string(name) + "'");
}

struct StrategyResult {
  std::string strategy;  // NL-CPS, HIGH-RES, LOW-LATENCY, RANDOM
  PlacementDecision decision;
  double reward_noiseless = 0.0;
  std::string expected_id;  // empty when no expectation was supplied
  Agreement agreement = Agreement::kNotSpecified;
};

struct EvaluationReport {
  std::string profile_name;
  std::vector<StrategyResult> strategies;  // fixed order, each strategy once
  std::string notes;
};

/// Evaluate the trained policy plus all baselines on one inventory. The
/// policy runs in pure-exploitation mode: the exploration bonus exists for
/// training-time uncertainty, not deployment-time recommendation.
/// `expectations` maps strategy name to the node id it is expected to pick.
inline EvaluationReport evaluate_profile(const AgentState& agent, const ClusterContext& context,
                                         const std::map<std::string, std::string>& expectations = {},
                                         std::string profile_name = "",
                                         std::uint64_t random_seed = 0,
                                         const SynthModelParams& synth = {},
                                         const RewardModelParams& reward_params = {}) {
  validate(synth);
  validate(reward_params);

  EvaluationReport report;
  report.profile_name = std::move(profile_name);
  report.notes = "policy scored in pure-exploitation mode (exploration bonus suppressed)";

  std::vector<PlacementDecision> decisions;
  decisions.push_back(select(score_exploit(agent.net, context), context, "NL-CPS"));
  decisions.push_back(baseline_high_res(context));
  decisions.push_back(baseline_low_latency(context));
  decisions.push_back(baseline_random(context, random_seed));

  for (PlacementDecision& d : decisions) {
    StrategyResult result;
    result.strategy = d.strategy_name;
    result.reward_noiseless = compute_reward(
        predict_profile(context.node(static_cast<std::size_t>(d.chosen_index)), synth),
        reward_params);
    auto it = expectations.find(d.strategy_name);
    if (it != expectations.end()) {
      result.expected_id = it->second;
      result.agreement =
          (d.chosen_node_id == it->second) ? Agreement::kMatch : Agreement::kMismatch;
    }
    result.decision = std::move(d);
    report.strategies.push_back(std::move(result));
  }
  return report;
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                const std::vector<std::string>& allowed,
                                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const std::string& a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ValidationError(where + ": unknown field '" + key + "'");
    }
  }
}

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& where) {
  if (!obj.contains(key)) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  if (!obj.at(key).is_number()) {
    throw ValidationError(where + ": field '" + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

}  // namespace detail

/// Parse a node inventory file into a validated ClusterContext. Schema:
/// {"nodes": [{"id", "region"?, "cpu_cores", "memory_gb",
///             "avg_latency_ms" | "latencies_ms": [..]}]}.
/// A latencies_ms row is averaged into the node's mean latency. Errors carry
/// the 1-based row number and offending field or id.
inline ClusterContext load_inventory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open inventory file: " + path);
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("inventory " + path + ": invalid JSON: " + e.what());
  }

  if (!doc.is_object()) {
    throw ValidationError("inventory " + path + ": top level must be an object");
  }
  detail::reject_unknown_keys(doc, {"nodes"}, "inventory " + path);
  if (!doc.contains("nodes") || !doc.at("nodes").is_array() || doc.at("nodes").empty()) {
    throw ValidationError("inventory " + path + ": 'nodes' must be a non-empty array");
  }

  std::vector<NodeFeatures> nodes;
  std::vector<std::string> ids;
  std::vector<std::string> regions;
  bool any_region = false;
  int row = 0;
  for (const nlohmann::json& entry : doc.at("nodes")) {
    ++row;
    const std::string where = "inventory " + path + ", nodes row " + std::to_string(row);
    if (!entry.is_object()) {
      throw ValidationError(where + ": node entry must be an object");
    }
    detail::reject_unknown_keys(
        entry, {"id", "region", "cpu_cores", "memory_gb", "avg_latency_ms", "latencies_ms"},
        where);

    if (!entry.contains("id") || !entry.at("id").is_string()) {
      throw ValidationError(where + ": field 'id' must be a string");
    }
    const std::string id = entry.at("id").get<std::string>();
    for (const std::string& seen : ids) {
      if (seen == id) {
        throw ValidationError(where + ": duplicate node id '" + id + "'");
      }
    }

    NodeFeatures f;
    if (!entry.contains("cpu_cores") || !entry.at("cpu_cores").is_number_integer()) {
      throw ValidationError(where + ": field 'cpu_cores' must be an integer");
    }
    f.cpu_cores = entry.at("cpu_cores").get<int>();
    f.memory_gb = detail::require_number(entry, "memory_gb", where);

    const bool has_avg = entry.contains("avg_latency_ms");
    const bool has_rows = entry.contains("latencies_ms");
    if (has_avg == has_rows) {
      throw ValidationError(where +
                            ": exactly one of 'avg_latency_ms' or 'latencies_ms' is required");
    }
    if (has_avg) {
      f.avg_latency_ms = detail::require_number(entry, "avg_latency_ms", where);
    } else {
      const nlohmann::json& arr = entry.at("latencies_ms");
      if (!arr.is_array() || arr.empty()) {
        throw ValidationError(where + ": field 'latencies_ms' must be a non-empty array");
      }
      double sum = 0.0;
      for (const nlohmann::json& v : arr) {
        if (!v.is_number()) {
          throw ValidationError(where + ": field 'latencies_ms' must contain only numbers");
        }
        sum += v.get<double>();
      }
      f.avg_latency_ms = sum / static_cast<double>(arr.size());
    }

    validate(f, where + " (id '" + id + "')");
    nodes.push_back(f);
    ids.push_back(id);
    if (entry.contains("region")) {
      if (!entry.at("region").is_string()) {
        throw ValidationError(where + ": field 'region' must be a string");
      }
      regions.push_back(entry.at("region").get<std::string>());
      any_region = true;
    } else {
      regions.push_back("");
    }
  }
  if (!any_region) {
    regions.clear();
  }
  return ClusterContext(std::move(nodes), std::move(ids), std::move(regions));
}

/// Plain-text comparison table for terminal output. Rewards are rounded for
/// readability; the JSON report carries full precision.
inline std::string format_report_table(const EvaluationReport& report) {
  auto pad = [](std::ostringstream& out, const std::string& text, std::size_t width) {
    out << text;
    for (std::size_t i = text.size(); i < width; ++i) out << ' ';
  };
  std::ostringstream out;
  out << "profile: " << report.profile_name << "\n";
  out << "strategy      chosen      reward      expected    agreement\n";
  out << "------------  ----------  ----------  ----------  -------------\n";
  for (const StrategyResult& s : report.strategies) {
    pad(out, s.strategy, 14);
    pad(out, s.decision.chosen_node_id, 12);
    char reward[32];
    std::snprintf(reward, sizeof(reward), "%.4f", s.reward_noiseless);
    pad(out, reward, 12);
    pad(out, s.expected_id.empty() ? "-" : s.expected_id, 12);
    out << agreement_name(s.agreement) << "\n";
  }
  return out.str();
}

}  // namespace nlcps

#endif  // NLCPS_EVALUATE_HPP
