#ifndef NLCPS_IO_HPP
#define NLCPS_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nlcps/agent.hpp"
#include "nlcps/common.hpp"
#include "nlcps/domain.hpp"
#include "nlcps/evaluate.hpp"
#include "nlcps/net.hpp"
#include "nlcps/synth.hpp"
#include "nlcps/training.hpp"

namespace nlcps {

// Persistence formats. Every file is versioned and strictly parsed: unknown
// format versions and unknown fields are rejected, never coerced. JSON
// doubles use nlohmann's shortest round-trip encoding and CSV doubles use
// std::to_chars, so numeric round-trips are bit-exact and files are
// platform-stable.

inline constexpr int kDatasetVersion = 1;
inline constexpr int kCheckpointVersion = 1;
inline constexpr int kTraceVersion = 1;
inline constexpr int kSummaryVersion = 1;
inline constexpr int kReportVersion = 1;
inline constexpr int kConfigVersion = 1;
inline constexpr int kConvergenceVersion = 1;

// ---------------------------------------------------------------------------
// Low-level file helpers
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failed: " + path);
  }
  return buf.str();
}

/// Write-to-temp-then-rename so a crash or error never leaves a partial
/// file at the destination. Parent directories are created as needed.
inline void write_text_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + target.parent_path().string() + ": " +
                    ec.message());
    }
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write file: " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move temp file into place: " + path + ": " + ec.message());
  }
}

namespace detail {

inline nlohmann::json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
}

inline void expect_format(const nlohmann::json& doc, std::string_view format, int version,
                          const std::string& where) {
  if (!doc.is_object()) {
    throw ValidationError(where + ": top level must be an object");
  }
  if (!doc.contains("format") || !doc.at("format").is_string() ||
      doc.at("format").get<std::string>() != format) {
    throw ValidationError(where + ": expected format '" + std::string(format) + "'");
  }
  if (!doc.contains("version") || !doc.at("version").is_number_integer() ||
      doc.at("version").get<int>() != version) {
    throw ValidationError(where + ": unsupported " + std::string(format) + " version (expected " +
                          std::to_string(version) + ")");
  }
}

inline const nlohmann::json& require_field(const nlohmann::json& obj, const std::string& key,
                                           const std::string& where) {
  if (!obj.contains(key)) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

inline std::string require_string(const nlohmann::json& obj, const std::string& key,
                                  const std::string& where) {
  const nlohmann::json& v = require_field(obj, key, where);
  if (!v.is_string()) {
    throw ValidationError(where + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

inline std::int64_t require_int(const nlohmann::json& obj, const std::string& key,
                                const std::string& where) {
  const nlohmann::json& v = require_field(obj, key, where);
  if (!v.is_number_integer()) {
    throw ValidationError(where + ": field '" + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

inline std::uint64_t require_u64(const nlohmann::json& obj, const std::string& key,
                                 const std::string& where) {
  const nlohmann::json& v = require_field(obj, key, where);
  if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0))) {
    throw ValidationError(where + ": field '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline std::vector<double> require_double_array(const nlohmann::json& obj, const std::string& key,
                                                const std::string& where) {
  const nlohmann::json& v = require_field(obj, key, where);
  if (!v.is_array()) {
    throw ValidationError(where + ": field '" + key + "' must be an array");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const nlohmann::json& e : v) {
    if (!e.is_number()) {
      throw ValidationError(where + ": field '" + key + "' must contain only numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

inline std::vector<int> require_int_array(const nlohmann::json& obj, const std::string& key,
                                          const std::string& where) {
  const nlohmann::json& v = require_field(obj, key, where);
  if (!v.is_array()) {
    throw ValidationError(where + ": field '" + key + "' must be an array");
  }
  std::vector<int> out;
  out.reserve(v.size());
  for (const nlohmann::json& e : v) {
    if (!e.is_number_integer()) {
      throw ValidationError(where + ": field '" + key + "' must contain only integers");
    }
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

inline std::string serialize_dataset(const SyntheticDataset& dataset) {
  nlohmann::json doc;
  doc["format"] = "nlcps-dataset";
  doc["version"] = kDatasetVersion;
  doc["generator_version"] = dataset.generator_version;
  doc["seed"] = dataset.seed;
  doc["sizes"] = dataset.sizes;
  doc["per_size"] = dataset.per_size;
  nlohmann::json configs = nlohmann::json::array();
  for (std::size_t i = 0; i < dataset.configurations.size(); ++i) {
    const ClusterContext& ctx = dataset.configurations[i];
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t k = 0; k < ctx.size(); ++k) {
      const NodeFeatures& f = ctx.node(k);
      nodes.push_back({{"id", ctx.node_ids()[k]},
                       {"cpu_cores", f.cpu_cores},
                       {"memory_gb", f.memory_gb},
                       {"avg_latency_ms", f.avg_latency_ms}});
    }
    configs.push_back({{"id", dataset.ids[i]}, {"nodes", std::move(nodes)}});
  }
  doc["configurations"] = std::move(configs);
  return doc.dump(2) + "\n";
}

inline void write_dataset(const SyntheticDataset& dataset, const std::string& path) {
  write_text_atomic(path, serialize_dataset(dataset));
}

inline SyntheticDataset read_dataset(const std::string& path) {
  const nlohmann::json doc = detail::parse_json_file(path);
  detail::expect_format(doc, "nlcps-dataset", kDatasetVersion, path);
  detail::reject_unknown_keys(
      doc, {"format", "version", "generator_version", "seed", "sizes", "per_size", "configurations"},
      path);

  SyntheticDataset dataset;
  dataset.generator_version = detail::require_string(doc, "generator_version", path);
  dataset.seed = detail::require_u64(doc, "seed", path);
  dataset.sizes = detail::require_int_array(doc, "sizes", path);
  dataset.per_size = static_cast<int>(detail::require_int(doc, "per_size", path));

  const nlohmann::json& configs = detail::require_field(doc, "configurations", path);
  if (!configs.is_array() || configs.empty()) {
    throw ValidationError(path + ": 'configurations' must be a non-empty array");
  }
  int row = 0;
  for (const nlohmann::json& entry : configs) {
    ++row;
    const std::string where = path + ", configurations row " + std::to_string(row);
    if (!entry.is_object()) {
      throw ValidationError(where + ": entry must be an object");
    }
    detail::reject_unknown_keys(entry, {"id", "nodes"}, where);
    dataset.ids.push_back(detail::require_string(entry, "id", where));
    const nlohmann::json& nodes = detail::require_field(entry, "nodes", where);
    if (!nodes.is_array() || nodes.empty()) {
      throw ValidationError(where + ": 'nodes' must be a non-empty array");
    }
    std::vector<NodeFeatures> features;
    std::vector<std::string> ids;
    int node_row = 0;
    for (const nlohmann::json& n : nodes) {
      ++node_row;
      const std::string nwhere = where + ", nodes row " + std::to_string(node_row);
      if (!n.is_object()) {
        throw ValidationError(nwhere + ": node must be an object");
      }
      detail::reject_unknown_keys(n, {"id", "cpu_cores", "memory_gb", "avg_latency_ms"}, nwhere);
      NodeFeatures f;
      f.cpu_cores = static_cast<int>(detail::require_int(n, "cpu_cores", nwhere));
      f.memory_gb = detail::require_number(n, "memory_gb", nwhere);
      f.avg_latency_ms = detail::require_number(n, "avg_latency_ms", nwhere);
      features.push_back(f);
      ids.push_back(detail::require_string(n, "id", nwhere));
    }
    try {
      dataset.configurations.emplace_back(std::move(features), std::move(ids));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    dataset.per_size_counts[static_cast<int>(dataset.configurations.back().size())] += 1;
  }
  return dataset;
}

// ---------------------------------------------------------------------------
// Checkpoint
// ---------------------------------------------------------------------------

struct CheckpointMetadata {
  std::string run_id;
  std::string mode;
  std::vector<int> cluster_sizes;
  std::uint64_t master_seed = 0;
  std::uint64_t run_seed = 0;
  std::int64_t timesteps = 0;
  std::string generator_version = std::string(kGeneratorVersion);
};

struct Checkpoint {
  AgentState agent;
  CheckpointMetadata metadata;
};

namespace detail {

inline nlohmann::json param_block_json(const ParamBlock& block) {
  return {{"weights", block.weights}, {"biases", block.biases}};
}

inline ParamBlock param_block_from_json(const nlohmann::json& obj, const NetworkWeights& net,
                                        const std::string& where) {
  if (!obj.is_object()) {
    throw ValidationError(where + ": must be an object");
  }
  reject_unknown_keys(obj, {"weights", "biases"}, where);
  ParamBlock block;
  const nlohmann::json& w = require_field(obj, "weights", where);
  const nlohmann::json& b = require_field(obj, "biases", where);
  if (!w.is_array() || !b.is_array() || w.size() != net.layer_count() ||
      b.size() != net.layer_count()) {
    throw ValidationError(where + ": layer count mismatch");
  }
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    block.weights.push_back(w.at(l).get<std::vector<double>>());
    block.biases.push_back(b.at(l).get<std::vector<double>>());
    if (block.weights[l].size() != net.weights[l].size() ||
        block.biases[l].size() != net.biases[l].size()) {
      throw ValidationError(where + ": layer " + std::to_string(l) + " shape mismatch");
    }
  }
  return block;
}

}  // namespace detail

inline std::string serialize_checkpoint(const Checkpoint& checkpoint) {
  const AgentState& agent = checkpoint.agent;
  nlohmann::json doc;
  doc["format"] = "nlcps-checkpoint";
  doc["version"] = kCheckpointVersion;
  doc["alpha"] = agent.alpha;
  doc["layer_sizes"] = agent.net.layer_sizes;
  doc["weights"] = agent.net.weights;
  doc["biases"] = agent.net.biases;
  doc["adam"] = {{"learning_rate", agent.adam.learning_rate},
                 {"beta1", agent.adam.beta1},
                 {"beta2", agent.adam.beta2},
                 {"epsilon", agent.adam.epsilon},
                 {"timestep", agent.adam.timestep},
                 {"first_moment", detail::param_block_json(agent.adam.first_moment)},
                 {"second_moment", detail::param_block_json(agent.adam.second_moment)}};
  doc["counter"] = {{"strategy", counter_strategy_name(agent.counter.strategy)},
                    {"latency_bin_width_ms", agent.counter.latency_bin_width_ms},
                    {"counts", agent.counter.counts}};
  doc["metadata"] = {{"run_id", checkpoint.metadata.run_id},
                     {"mode", checkpoint.metadata.mode},
                     {"cluster_sizes", checkpoint.metadata.cluster_sizes},
                     {"master_seed", checkpoint.metadata.master_seed},
                     {"run_seed", checkpoint.metadata.run_seed},
                     {"timesteps", checkpoint.metadata.timesteps},
                     {"generator_version", checkpoint.metadata.generator_version}};
  // Compact dump: a trained checkpoint holds ~300k doubles and pretty
  // printing would triple the file size for no benefit.
  return doc.dump() + "\n";
}

inline void write_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  write_text_atomic(path, serialize_checkpoint(checkpoint));
}

inline Checkpoint read_checkpoint(const std::string& path) {
  const nlohmann::json doc = detail::parse_json_file(path);
  detail::expect_format(doc, "nlcps-checkpoint", kCheckpointVersion, path);
  detail::reject_unknown_keys(
      doc, {"format", "version", "alpha", "layer_sizes", "weights", "biases", "adam", "counter",
            "metadata"},
      path);

  Checkpoint checkpoint;
  AgentState& agent = checkpoint.agent;
  agent.alpha = detail::require_number(doc, "alpha", path);
  const std::vector<int> layer_sizes = detail::require_int_array(doc, "layer_sizes", path);
  agent.net = make_network(layer_sizes);

  const nlohmann::json& w = detail::require_field(doc, "weights", path);
  const nlohmann::json& b = detail::require_field(doc, "biases", path);
  if (!w.is_array() || !b.is_array() || w.size() != agent.net.layer_count() ||
      b.size() != agent.net.layer_count()) {
    throw ValidationError(path + ": weight/bias layer count mismatch");
  }
  for (std::size_t l = 0; l < agent.net.layer_count(); ++l) {
    std::vector<double> lw = w.at(l).get<std::vector<double>>();
    std::vector<double> lb = b.at(l).get<std::vector<double>>();
    if (lw.size() != agent.net.weights[l].size() || lb.size() != agent.net.biases[l].size()) {
      throw ValidationError(path + ": layer " + std::to_string(l) + " shape mismatch");
    }
    agent.net.weights[l] = std::move(lw);
    agent.net.biases[l] = std::move(lb);
  }

  const nlohmann::json& adam = detail::require_field(doc, "adam", path);
  const std::string adam_where = path + ", adam";
  detail::reject_unknown_keys(adam,
                              {"learning_rate", "beta1", "beta2", "epsilon", "timestep",
                               "first_moment", "second_moment"},
                              adam_where);
  agent.adam.learning_rate = detail::require_number(adam, "learning_rate", adam_where);
  agent.adam.beta1 = detail::require_number(adam, "beta1", adam_where);
  agent.adam.beta2 = detail::require_number(adam, "beta2", adam_where);
  agent.adam.epsilon = detail::require_number(adam, "epsilon", adam_where);
  agent.adam.timestep = detail::require_int(adam, "timestep", adam_where);
  agent.adam.first_moment = detail::param_block_from_json(
      detail::require_field(adam, "first_moment", adam_where), agent.net,
      adam_where + ".first_moment");
  agent.adam.second_moment = detail::param_block_from_json(
      detail::require_field(adam, "second_moment", adam_where), agent.net,
      adam_where + ".second_moment");

  const nlohmann::json& counter = detail::require_field(doc, "counter", path);
  const std::string counter_where = path + ", counter";
  detail::reject_unknown_keys(counter, {"strategy", "latency_bin_width_ms", "counts"},
                              counter_where);
  agent.counter.strategy =
      parse_counter_strategy(detail::require_string(counter, "strategy", counter_where));
  agent.counter.latency_bin_width_ms =
      detail::require_number(counter, "latency_bin_width_ms", counter_where);
  const nlohmann::json& counts = detail::require_field(counter, "counts", counter_where);
  if (!counts.is_object()) {
    throw ValidationError(counter_where + ": 'counts' must be an object");
  }
  for (const auto& [key, value] : counts.items()) {
    if (!(value.is_number_unsigned() || (value.is_number_integer() && value.get<std::int64_t>() >= 0))) {
      throw ValidationError(counter_where + ": count for '" + key +
                            "' must be a non-negative integer");
    }
    agent.counter.counts[key] = value.get<std::uint64_t>();
  }

  const nlohmann::json& meta = detail::require_field(doc, "metadata", path);
  const std::string meta_where = path + ", metadata";
  detail::reject_unknown_keys(meta,
                              {"run_id", "mode", "cluster_sizes", "master_seed", "run_seed",
                               "timesteps", "generator_version"},
                              meta_where);
  checkpoint.metadata.run_id = detail::require_string(meta, "run_id", meta_where);
  checkpoint.metadata.mode = detail::require_string(meta, "mode", meta_where);
  checkpoint.metadata.cluster_sizes = detail::require_int_array(meta, "cluster_sizes", meta_where);
  checkpoint.metadata.master_seed = detail::require_u64(meta, "master_seed", meta_where);
  checkpoint.metadata.run_seed = detail::require_u64(meta, "run_seed", meta_where);
  checkpoint.metadata.timesteps = detail::require_int(meta, "timesteps", meta_where);
  checkpoint.metadata.generator_version =
      detail::require_string(meta, "generator_version", meta_where);
  return checkpoint;
}

// ---------------------------------------------------------------------------
// Trace CSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view kTraceHeaderLine = "# nlcps-trace v1";
inline constexpr std::string_view kTraceColumns =
    "step,context_id,action,reward,reward_noiseless,oracle_index,oracle_reward,moving_avg,"
    "variance";

inline std::string serialize_trace_csv(const TrainingTrace& trace) {
  std::ostringstream out;
  out << kTraceHeaderLine << "\n" << kTraceColumns << "\n";
  for (const StepRecord& r : trace.records) {
    if (r.context_id.find_first_of(",\n\r") != std::string::npos) {
      throw ValidationError("trace: context id contains CSV delimiter: '" + r.context_id + "'");
    }
    out << r.step << ',' << r.context_id << ',' << r.action << ',' << format_double(r.reward)
        << ',' << format_double(r.reward_noiseless) << ',' << r.oracle_index << ','
        << format_double(r.oracle_reward) << ',' << format_double(r.moving_avg) << ','
        << format_double(r.variance) << "\n";
  }
  return out.str();
}

inline void write_trace_csv(const TrainingTrace& trace, const std::string& path) {
  write_text_atomic(path, serialize_trace_csv(trace));
}

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

inline std::int64_t parse_i64(std::string_view text, const std::string& where) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError(where + ": not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace detail

/// Parse a trace CSV back into step records. Only the per-step table lives
/// in the CSV; run metadata travels in the summary JSON.
inline std::vector<StepRecord> read_trace_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeaderLine) {
    throw ValidationError(path + ": missing or unsupported trace version line (expected '" +
                          std::string(kTraceHeaderLine) + "')");
  }
  if (!std::getline(in, line) || line != kTraceColumns) {
    throw ValidationError(path + ": unexpected trace column header");
  }
  std::vector<StepRecord> records;
  std::int64_t row = 2;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) {
      continue;
    }
    const std::string where = path + ", line " + std::to_string(row);
    const std::vector<std::string_view> f = detail::split_csv_line(line);
    if (f.size() != 9) {
      throw ValidationError(where + ": expected 9 fields, got " + std::to_string(f.size()));
    }
    StepRecord r;
    r.step = detail::parse_i64(f[0], where);
    r.context_id = std::string(f[1]);
    r.action = static_cast<int>(detail::parse_i64(f[2], where));
    r.reward = parse_double(f[3], where);
    r.reward_noiseless = parse_double(f[4], where);
    r.oracle_index = static_cast<int>(detail::parse_i64(f[5], where));
    r.oracle_reward = parse_double(f[6], where);
    r.moving_avg = parse_double(f[7], where);
    r.variance = parse_double(f[8], where);
    records.push_back(std::move(r));
  }
  if (records.empty()) {
    throw ValidationError(path + ": trace contains no step records");
  }
  return records;
}

// ---------------------------------------------------------------------------
// Run summary
// ---------------------------------------------------------------------------

struct RunSummary {
  std::string run_id;
  std::string mode;
  std::vector<int> cluster_sizes;
  std::uint64_t master_seed = 0;
  std::uint64_t run_seed = 0;
  std::string counter_strategy;
  std::int64_t moving_average_window = 0;
  std::int64_t timesteps = 0;
  TraceSummary summary;
  std::int64_t stats_window = 0;  // min(1000, timesteps)
  WindowStats initial_window;
  WindowStats final_window;
};

inline RunSummary make_run_summary(const TrainingTrace& trace) {
  RunSummary s;
  s.run_id = trace.run_id;
  s.mode = trace.mode;
  s.cluster_sizes = trace.cluster_sizes;
  s.master_seed = trace.master_seed;
  s.run_seed = trace.run_seed;
  s.counter_strategy = trace.counter_strategy;
  s.moving_average_window = trace.moving_average_window;
  s.timesteps = static_cast<std::int64_t>(trace.records.size());
  s.summary = trace.summary;
  s.stats_window = std::min<std::int64_t>(1000, s.timesteps);
  s.initial_window = initial_window_stats(trace, s.stats_window);
  s.final_window = final_window_stats(trace, s.stats_window);
  return s;
}

inline std::string serialize_run_summary(const RunSummary& s) {
  nlohmann::json doc;
  doc["format"] = "nlcps-summary";
  doc["version"] = kSummaryVersion;
  doc["run_id"] = s.run_id;
  doc["mode"] = s.mode;
  doc["cluster_sizes"] = s.cluster_sizes;
  doc["master_seed"] = s.master_seed;
  doc["run_seed"] = s.run_seed;
  doc["counter_strategy"] = s.counter_strategy;
  doc["moving_average_window"] = s.moving_average_window;
  doc["timesteps"] = s.timesteps;
  doc["final_moving_avg"] = s.summary.final_moving_avg;
  doc["mean_regret"] = s.summary.mean_regret;
  doc["summary_window"] = s.summary.summary_window;
  doc["stats_window"] = s.stats_window;
  doc["initial_window"] = {{"mean", s.initial_window.mean}, {"variance", s.initial_window.variance}};
  doc["final_window"] = {{"mean", s.final_window.mean}, {"variance", s.final_window.variance}};
  return doc.dump(2) + "\n";
}

inline void write_run_summary(const RunSummary& s, const std::string& path) {
  write_text_atomic(path, serialize_run_summary(s));
}

inline RunSummary read_run_summary(const std::string& path) {
  const nlohmann::json doc = detail::parse_json_file(path);
  detail::expect_format(doc, "nlcps-summary", kSummaryVersion, path);
  detail::reject_unknown_keys(
      doc, {"format", "version", "run_id", "mode", "cluster_sizes", "master_seed", "run_seed",
            "counter_strategy", "moving_average_window", "timesteps", "final_moving_avg",
            "mean_regret", "summary_window", "stats_window", "initial_window", "final_window"},
      path);
  RunSummary s;
  s.run_id = detail::require_string(doc, "run_id", path);
  s.mode = detail::require_string(doc, "mode", path);
  s.cluster_sizes = detail::require_int_array(doc, "cluster_sizes", path);
  s.master_seed = detail::require_u64(doc, "master_seed", path);
  s.run_seed = detail::require_u64(doc, "run_seed", path);
  s.counter_strategy = detail::require_string(doc, "counter_strategy", path);
  s.moving_average_window = detail::require_int(doc, "moving_average_window", path);
  s.timesteps = detail::require_int(doc, "timesteps", path);
  s.summary.final_moving_avg = detail::require_number(doc, "final_moving_avg", path);
  s.summary.mean_regret = detail::require_number(doc, "mean_regret", path);
  s.summary.summary_window = detail::require_int(doc, "summary_window", path);
  s.stats_window = detail::require_int(doc, "stats_window", path);
  for (auto [key, target] : {std::pair<const char*, WindowStats*>{"initial_window", &s.initial_window},
                             std::pair<const char*, WindowStats*>{"final_window", &s.final_window}}) {
    const nlohmann::json& w = detail::require_field(doc, key, path);
    const std::string where = path + ", " + key;
    detail::reject_unknown_keys(w, {"mean", "variance"}, where);
    target->mean = detail::require_number(w, "mean", where);
    target->variance = detail::require_number(w, "variance", where);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Evaluation report
// ---------------------------------------------------------------------------

inline std::string serialize_report(const EvaluationReport& report) {
  nlohmann::json doc;
  doc["format"] = "nlcps-report";
  doc["version"] = kReportVersion;
  doc["profile"] = report.profile_name;
  doc["notes"] = report.notes;
  nlohmann::json strategies = nlohmann::json::array();
  for (const StrategyResult& s : report.strategies) {
    nlohmann::json scores = nlohmann::json::array();
    for (const UcbScore& u : s.decision.all_scores) {
      scores.push_back({{"node_index", u.node_index},
                        {"exploitation", u.exploitation},
                        {"exploration", u.exploration},
                        {"total", u.total}});
    }
    strategies.push_back({{"strategy", s.strategy},
                          {"chosen_index", s.decision.chosen_index},
                          {"chosen_node_id", s.decision.chosen_node_id},
                          {"reward_noiseless", s.reward_noiseless},
                          {"expected_id", s.expected_id},
                          {"agreement", agreement_name(s.agreement)},
                          {"scores", std::move(scores)}});
  }
  doc["strategies"] = std::move(strategies);
  return doc.dump(2) + "\n";
}

inline void write_report(const EvaluationReport& report, const std::string& path) {
  write_text_atomic(path, serialize_report(report));
}

inline EvaluationReport read_report(const std::string& path) {
  const nlohmann::json doc = detail::parse_json_file(path);
  detail::expect_format(doc, "nlcps-report", kReportVersion, path);
  detail::reject_unknown_keys(doc, {"format", "version", "profile", "notes", "strategies"}, path);
  EvaluationReport report;
  report.profile_name = detail::require_string(doc, "profile", path);
  report.notes = detail::require_string(doc, "notes", path);
  const nlohmann::json& strategies = detail::require_field(doc, "strategies", path);
  if (!strategies.is_array() || strategies.empty()) {
    throw ValidationError(path + ": 'strategies' must be a non-empty array");
  }
  int row = 0;
  for (const nlohmann::json& entry : strategies) {
    ++row;
    const std::string where = path + ", strategies row " + std::to_string(row);
    detail::reject_unknown_keys(entry,
                                {"strategy", "chosen_index", "chosen_node_id", "reward_noiseless",
                                 "expected_id", "agreement", "scores"},
                                where);
    StrategyResult s;
    s.strategy = detail::require_string(entry, "strategy", where);
    s.decision.strategy_name = s.strategy;
    s.decision.chosen_index = static_cast<int>(detail::require_int(entry, "chosen_index", where));
    s.decision.chosen_node_id = detail::require_string(entry, "chosen_node_id", where);
    s.reward_noiseless = detail::require_number(entry, "reward_noiseless", where);
    s.expected_id = detail::require_string(entry, "expected_id", where);
    s.agreement = parse_agreement(detail::require_string(entry, "agreement", where));
    const nlohmann::json& scores = detail::require_field(entry, "scores", where);
    if (!scores.is_array()) {
      throw ValidationError(where + ": 'scores' must be an array");
    }
    for (const nlohmann::json& u : scores) {
      const std::string uwhere = where + ", scores";
      detail::reject_unknown_keys(u, {"node_index", "exploitation", "exploration", "total"},
                                  uwhere);
      UcbScore score;
      score.node_index = static_cast<int>(detail::require_int(u, "node_index", uwhere));
      score.exploitation = detail::require_number(u, "exploitation", uwhere);
      score.exploration = detail::require_number(u, "exploration", uwhere);
      score.total = detail::require_number(u, "total", uwhere);
      s.decision.all_scores.push_back(score);
    }
    report.strategies.push_back(std::move(s));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  TrainingConfig training;
  RewardModelParams reward_model;
  SynthModelParams synth_model;
  std::string output_dir = "out";
};

inline std::string serialize_config(const ExperimentConfig& config) {
  nlohmann::json doc;
  doc["format"] = "nlcps-config";
  doc["version"] = kConfigVersion;
  doc["output_dir"] = config.output_dir;
  doc["training"] = {{"timesteps", config.training.timesteps},
                     {"alpha", config.training.alpha},
                     {"learning_rate", config.training.learning_rate},
                     {"cluster_sizes", config.training.cluster_sizes},
                     {"dataset_ref", config.training.dataset_ref},
                     {"seed", config.training.seed},
                     {"counter_strategy", counter_strategy_name(config.training.counter_strategy)},
                     {"moving_average_window", config.training.moving_average_window},
                     {"mode", training_mode_name(config.training.mode)}};
  const RewardModelParams& r = config.reward_model;
  doc["reward_model"] = {{"base_reward", r.base_reward},
                         {"api_latency_penalty_per_ms", r.api_latency_penalty_per_ms},
                         {"pod_latency_penalty_per_s", r.pod_latency_penalty_per_s},
                         {"cpu_threshold_pct", r.cpu_threshold_pct},
                         {"cpu_penalty_per_pct", r.cpu_penalty_per_pct},
                         {"mem_threshold_pct", r.mem_threshold_pct},
                         {"mem_penalty_per_pct", r.mem_penalty_per_pct},
                         {"throughput_baseline_ppm", r.throughput_baseline_ppm},
                         {"throughput_bonus_per_ppm", r.throughput_bonus_per_ppm},
                         {"failure_penalty_scale", r.failure_penalty_scale}};
  const SynthModelParams& s = config.synth_model;
  doc["synth_model"] = {{"throughput_base_ppm", s.throughput_base_ppm},
                        {"throughput_cpu_coeff", s.throughput_cpu_coeff},
                        {"throughput_mem_coeff", s.throughput_mem_coeff},
                        {"cpu_saturation", s.cpu_saturation},
                        {"mem_saturation", s.mem_saturation},
                        {"latency_attenuation", s.latency_attenuation},
                        {"latency_floor_ms", s.latency_floor_ms},
                        {"api_latency_base_ms", s.api_latency_base_ms},
                        {"api_latency_net_coeff", s.api_latency_net_coeff},
                        {"cpu_load_units", s.cpu_load_units},
                        {"mem_load_units", s.mem_load_units},
                        {"pod_work_ppm_s", s.pod_work_ppm_s},
                        {"failure_prob_range",
                         {s.failure_prob_range.first, s.failure_prob_range.second}},
                        {"failure_floor_factor", s.failure_floor_factor},
                        {"failure_min_factor", s.failure_min_factor},
                        {"noise_sigmas",
                         {{"api_latency_ms", s.noise_sigmas.api_latency_ms},
                          {"cpu_util_pct", s.noise_sigmas.cpu_util_pct},
                          {"mem_util_pct", s.noise_sigmas.mem_util_pct},
                          {"pod_throughput_ppm", s.noise_sigmas.pod_throughput_ppm},
                          {"pod_latency_s", s.noise_sigmas.pod_latency_s},
                          {"success_rate", s.noise_sigmas.success_rate}}},
                        {"seed", s.seed}};
  return doc.dump(2) + "\n";
}

inline void write_config(const ExperimentConfig& config, const std::string& path) {
  write_text_atomic(path, serialize_config(config));
}

/// Strict but sparse: sections and fields may be omitted (defaults apply);
/// anything present must be known and well-typed.
inline ExperimentConfig read_config(const std::string& path) {
  const nlohmann::json doc = detail::parse_json_file(path);
  detail::expect_format(doc, "nlcps-config", kConfigVersion, path);
  detail::reject_unknown_keys(
      doc, {"format", "version", "output_dir", "training", "reward_model", "synth_model"}, path);

  ExperimentConfig config;
  if (doc.contains("output_dir")) {
    config.output_dir = detail::require_string(doc, "output_dir", path);
  }

  if (doc.contains("training")) {
    const nlohmann::json& t = doc.at("training");
    const std::string where = path + ", training";
    detail::reject_unknown_keys(t,
                                {"timesteps", "alpha", "learning_rate", "cluster_sizes",
                                 "dataset_ref", "seed", "counter_strategy",
                                 "moving_average_window", "mode"},
                                where);
    TrainingConfig& c = config.training;
    if (t.contains("timesteps")) c.timesteps = detail::require_int(t, "timesteps", where);
    if (t.contains("alpha")) c.alpha = detail::require_number(t, "alpha", where);
    if (t.contains("learning_rate")) c.learning_rate = detail::require_number(t, "learning_rate", where);
    if (t.contains("cluster_sizes")) c.cluster_sizes = detail::require_int_array(t, "cluster_sizes", where);
    if (t.contains("dataset_ref")) c.dataset_ref = detail::require_string(t, "dataset_ref", where);
    if (t.contains("seed")) c.seed = detail::require_u64(t, "seed", where);
    if (t.contains("counter_strategy")) {
      c.counter_strategy = parse_counter_strategy(detail::require_string(t, "counter_strategy", where));
    }
    if (t.contains("moving_average_window")) {
      c.moving_average_window = detail::require_int(t, "moving_average_window", where);
    }
    if (t.contains("mode")) c.mode = parse_training_mode(detail::require_string(t, "mode", where));
  }

  if (doc.contains("reward_model")) {
    const nlohmann::json& r = doc.at("reward_model");
    const std::string where = path + ", reward_model";
    detail::reject_unknown_keys(r,
                                {"base_reward", "api_latency_penalty_per_ms",
                                 "pod_latency_penalty_per_s", "cpu_threshold_pct",
                                 "cpu_penalty_per_pct", "mem_threshold_pct", "mem_penalty_per_pct",
                                 "throughput_baseline_ppm", "throughput_bonus_per_ppm",
                                 "failure_penalty_scale"},
                                where);
    RewardModelParams& p = config.reward_model;
    auto load = [&](const char* key, double& target) {
      if (r.contains(key)) target = detail::require_number(r, key, where);
    };
    load("base_reward", p.base_reward);
    load("api_latency_penalty_per_ms", p.api_latency_penalty_per_ms);
    load("pod_latency_penalty_per_s", p.pod_latency_penalty_per_s);
    load("cpu_threshold_pct", p.cpu_threshold_pct);
    load("cpu_penalty_per_pct", p.cpu_penalty_per_pct);
    load("mem_threshold_pct", p.mem_threshold_pct);
    load("mem_penalty_per_pct", p.mem_penalty_per_pct);
    load("throughput_baseline_ppm", p.throughput_baseline_ppm);
    load("throughput_bonus_per_ppm", p.throughput_bonus_per_ppm);
    load("failure_penalty_scale", p.failure_penalty_scale);
    validate(p);
  }

  if (doc.contains("synth_model")) {
    const nlohmann::json& s = doc.at("synth_model");
    const std::string where = path + ", synth_model";
    detail::reject_unknown_keys(s,
                                {"throughput_base_ppm", "throughput_cpu_coeff",
                                 "throughput_mem_coeff", "cpu_saturation", "mem_saturation",
                                 "latency_attenuation", "latency_floor_ms", "api_latency_base_ms",
                                 "api_latency_net_coeff", "cpu_load_units", "mem_load_units",
                                 "pod_work_ppm_s", "failure_prob_range", "failure_floor_factor",
                                 "failure_min_factor", "noise_sigmas", "seed"},
                                where);
    SynthModelParams& p = config.synth_model;
    auto load = [&](const char* key, double& target) {
      if (s.contains(key)) target = detail::require_number(s, key, where);
    };
    load("throughput_base_ppm", p.throughput_base_ppm);
    load("throughput_cpu_coeff", p.throughput_cpu_coeff);
    load("throughput_mem_coeff", p.throughput_mem_coeff);
    load("cpu_saturation", p.cpu_saturation);
    load("mem_saturation", p.mem_saturation);
    load("latency_attenuation", p.latency_attenuation);
    load("latency_floor_ms", p.latency_floor_ms);
    load("api_latency_base_ms", p.api_latency_base_ms);
    load("api_latency_net_coeff", p.api_latency_net_coeff);
    load("cpu_load_units", p.cpu_load_units);
    load("mem_load_units", p.mem_load_units);
    load("pod_work_ppm_s", p.pod_work_ppm_s);
    load("failure_floor_factor", p.failure_floor_factor);
    load("failure_min_factor", p.failure_min_factor);
    if (s.contains("failure_prob_range")) {
      const std::vector<double> range = detail::require_double_array(s, "failure_prob_range", where);
      if (range.size() != 2) {
        throw ValidationError(where + ": 'failure_prob_range' must have exactly 2 entries");
      }
      p.failure_prob_range = {range[0], range[1]};
    }
    if (s.contains("seed")) p.seed = detail::require_u64(s, "seed", where);
    if (s.contains("noise_sigmas")) {
      const nlohmann::json& n = s.at("noise_sigmas");
      const std::string nwhere = where + ".noise_sigmas";
      detail::reject_unknown_keys(n,
                                  {"api_latency_ms", "cpu_util_pct", "mem_util_pct",
                                   "pod_throughput_ppm", "pod_latency_s", "success_rate"},
                                  nwhere);
      auto load_sigma = [&](const char* key, double& target) {
        if (n.contains(key)) target = detail::require_number(n, key, nwhere);
      };
      load_sigma("api_latency_ms", p.noise_sigmas.api_latency_ms);
      load_sigma("cpu_util_pct", p.noise_sigmas.cpu_util_pct);
      load_sigma("mem_util_pct", p.noise_sigmas.mem_util_pct);
      load_sigma("pod_throughput_ppm", p.noise_sigmas.pod_throughput_ppm);
      load_sigma("pod_latency_s", p.noise_sigmas.pod_latency_s);
      load_sigma("success_rate", p.noise_sigmas.success_rate);
    }
    validate(p);
  }

  validate(config.training);
  return config;
}

// ---------------------------------------------------------------------------
// Convergence plot data
// ---------------------------------------------------------------------------

inline constexpr std::string_view kConvergenceHeaderLine = "# nlcps-convergence v1";

/// Per-step convergence series (step, moving_avg, variance) ready for
/// external plotting.
inline std::string serialize_convergence_csv(const std::vector<StepRecord>& records) {
  std::ostringstream out;
  out << kConvergenceHeaderLine << "\n"
      << "step,moving_avg,variance\n";
  for (const StepRecord& r : records) {
    out << r.step << ',' << format_double(r.moving_avg) << ',' << format_double(r.variance)
        << "\n";
  }
  return out.str();
}

/// Long-format comparison series keyed by run id, for plotting several runs
/// on one axis.
inline std::string serialize_convergence_compare_csv(
    const std::vector<std::pair<std::string, std::vector<StepRecord>>>& runs) {
  std::ostringstream out;
  out << kConvergenceHeaderLine << "\n"
      << "run_id,step,moving_avg,variance\n";
  for (const auto& [run_id, records] : runs) {
    if (run_id.find_first_of(",\n\r") != std::string::npos) {
      throw ValidationError("convergence: run id contains CSV delimiter: '" + run_id + "'");
    }
    for (const StepRecord& r : records) {
      out << run_id << ',' << r.step << ',' << format_double(r.moving_avg) << ','
          << format_double(r.variance) << "\n";
    }
  }
  return out.str();
}

}  // namespace nlcps

#endif  // NLCPS_IO_HPP
