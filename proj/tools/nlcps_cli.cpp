// Command-line surface for the placement learner: dataset generation,
// training, held-out evaluation, single-shot recommendation, and convergence
// plot-data export.
//
// Exit codes: 0 success, 1 runtime failure (I/O), 2 usage or validation
// error. Output paths resolve against --out-dir, which falls back to the
// NLCPS_OUT_DIR environment variable and then the current directory.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlcps/nlcps.hpp"

namespace {

namespace fs = std::filesystem;

std::string resolve_out_dir(const std::string& flag_value, const std::string& fallback = ".") {
  if (!flag_value.empty()) {
    return flag_value;
  }
  if (const char* env = std::getenv("NLCPS_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return fallback;
}

std::string join_out(const std::string& out_dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) {
    return path;
  }
  return (fs::path(out_dir) / p).string();
}

std::string path_stem(const std::string& path) {
  return fs::path(path).stem().string();
}

// ---------------------------------------------------------------------------
// gen-dataset
// ---------------------------------------------------------------------------

struct GenDatasetArgs {
  std::vector<int> sizes = {5, 8, 10, 12};
  int per_size = 200;
  std::uint64_t seed = 42;
  std::string out = "dataset.json";
  std::string out_dir;
};

int run_gen_dataset(const GenDatasetArgs& args) {
  const nlcps::SyntheticDataset dataset =
      nlcps::generate_dataset(args.sizes, args.per_size, args.seed);
  const std::string path = join_out(resolve_out_dir(args.out_dir), args.out);
  nlcps::write_dataset(dataset, path);
  std::cout << "wrote " << dataset.configurations.size() << " configurations to " << path << "\n";
  for (const auto& [size, count] : dataset.per_size_counts) {
    std::cout << "  size " << size << ": " << count << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string dataset;
  std::string config;
  std::string out_dir;
  std::optional<std::int64_t> timesteps;
  std::optional<double> alpha;
  std::optional<double> learning_rate;
  std::vector<int> sizes;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> counter_strategy;
  std::optional<std::int64_t> window;
  std::optional<std::string> mode;
};

int run_train(const TrainArgs& args) {
  nlcps::ExperimentConfig config;
  if (!args.config.empty()) {
    config = nlcps::read_config(args.config);
  }
  // Explicit flags override the config file, which overrides defaults.
  if (args.timesteps) config.training.timesteps = *args.timesteps;
  if (args.alpha) config.training.alpha = *args.alpha;
  if (args.learning_rate) config.training.learning_rate = *args.learning_rate;
  if (!args.sizes.empty()) config.training.cluster_sizes = args.sizes;
  if (args.seed) config.training.seed = *args.seed;
  if (args.counter_strategy) {
    config.training.counter_strategy = nlcps::parse_counter_strategy(*args.counter_strategy);
  }
  if (args.window) config.training.moving_average_window = *args.window;
  if (args.mode) config.training.mode = nlcps::parse_training_mode(*args.mode);
  config.training.dataset_ref = args.dataset;
  nlcps::validate(config.training);

  const nlcps::SyntheticDataset dataset = nlcps::read_dataset(args.dataset);
  // Flag beats the environment override beats the config file's output_dir.
  const std::string out_dir =
      resolve_out_dir(args.out_dir, args.config.empty() ? "." : config.output_dir);

  const std::vector<nlcps::TrainingRun> runs =
      nlcps::train(config.training, dataset, config.synth_model, config.reward_model);
  for (const nlcps::TrainingRun& run : runs) {
    nlcps::Checkpoint checkpoint;
    checkpoint.agent = run.agent;
    checkpoint.metadata.run_id = run.run_id;
    checkpoint.metadata.mode = run.trace.mode;
    checkpoint.metadata.cluster_sizes = run.trace.cluster_sizes;
    checkpoint.metadata.master_seed = run.trace.master_seed;
    checkpoint.metadata.run_seed = run.trace.run_seed;
    checkpoint.metadata.timesteps = static_cast<std::int64_t>(run.trace.records.size());

    const std::string checkpoint_path = join_out(out_dir, "checkpoint_" + run.run_id + ".json");
    const std::string trace_path = join_out(out_dir, "trace_" + run.run_id + ".csv");
    const std::string summary_path = join_out(out_dir, "summary_" + run.run_id + ".json");
    nlcps::write_checkpoint(checkpoint, checkpoint_path);
    nlcps::write_trace_csv(run.trace, trace_path);
    nlcps::write_run_summary(nlcps::make_run_summary(run.trace), summary_path);

    std::cout << "run " << run.run_id << ": final moving-average reward "
              << nlcps::format_double(run.trace.summary.final_moving_avg) << ", mean regret "
              << nlcps::format_double(run.trace.summary.mean_regret) << " (window "
              << run.trace.summary.summary_window << ")\n";
    std::cout << "  wrote " << checkpoint_path << "\n";
    std::cout << "  wrote " << trace_path << "\n";
    std::cout << "  wrote " << summary_path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint;
  std::string profile;
  std::string out;
  std::string out_dir;
  std::vector<std::string> expect;  // strategy=node_id
  std::uint64_t random_seed = 0;
};

std::map<std::string, std::string> parse_expectations(const std::vector<std::string>& raw) {
  std::map<std::string, std::string> expectations;
  for (const std::string& item : raw) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw nlcps::ValidationError("--expect needs STRATEGY=NODE_ID, got '" + item + "'");
    }
    expectations[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return expectations;
}

int run_eval(const EvalArgs& args) {
  const nlcps::Checkpoint checkpoint = nlcps::read_checkpoint(args.checkpoint);
  const nlcps::ClusterContext context = nlcps::load_inventory(args.profile);
  const nlcps::EvaluationReport report =
      nlcps::evaluate_profile(checkpoint.agent, context, parse_expectations(args.expect),
                              path_stem(args.profile), args.random_seed);
  const std::string out_name =
      args.out.empty() ? "report_" + path_stem(args.profile) + ".json" : args.out;
  const std::string path = join_out(resolve_out_dir(args.out_dir), out_name);
  nlcps::write_report(report, path);
  std::cout << nlcps::format_report_table(report);
  std::cout << "wrote " << path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// recommend
// ---------------------------------------------------------------------------

struct RecommendArgs {
  std::string checkpoint;
  std::string inventory;
};

int run_recommend(const RecommendArgs& args) {
  const nlcps::Checkpoint checkpoint = nlcps::read_checkpoint(args.checkpoint);
  const nlcps::ClusterContext context = nlcps::load_inventory(args.inventory);

  nlohmann::json out;
  out["strategy"] = "NL-CPS";
  if (context.size() == 1) {
    // Nothing to score against: min-max normalization needs alternatives.
    out["chosen"] = context.node_ids().front();
    out["chosen_index"] = 0;
    out["scores"] = nlohmann::json::array();
    out["warning"] = "inventory has a single node; no alternatives were considered";
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  const nlcps::PlacementDecision decision =
      nlcps::select(nlcps::score_exploit(checkpoint.agent.net, context), context, "NL-CPS");
  out["chosen"] = decision.chosen_node_id;
  out["chosen_index"] = decision.chosen_index;
  nlohmann::json scores = nlohmann::json::array();
  for (const nlcps::UcbScore& s : decision.all_scores) {
    scores.push_back({{"node_index", s.node_index},
                      {"node_id", context.node_ids()[static_cast<std::size_t>(s.node_index)]},
                      {"exploitation", s.exploitation},
                      {"exploration", s.exploration},
                      {"total", s.total}});
  }
  out["scores"] = std::move(scores);
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> traces;
  std::string out;
  std::string out_dir;
  bool compare = false;
};

int run_report(const ReportArgs& args) {
  std::string content;
  if (args.compare) {
    std::vector<std::pair<std::string, std::vector<nlcps::StepRecord>>> runs;
    for (const std::string& trace_path : args.traces) {
      runs.emplace_back(path_stem(trace_path), nlcps::read_trace_csv(trace_path));
    }
    content = nlcps::serialize_convergence_compare_csv(runs);
  } else {
    if (args.traces.size() != 1) {
      throw nlcps::ValidationError("report: exactly one --trace expected without --compare");
    }
    content = nlcps::serialize_convergence_csv(nlcps::read_trace_csv(args.traces.front()));
  }
  const std::string out_name = args.out.empty() ? "convergence.csv" : args.out;
  const std::string path = join_out(resolve_out_dir(args.out_dir), out_name);
  nlcps::write_text_atomic(path, content);
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned control-plane placement: train, evaluate, recommend"};
  app.require_subcommand(1);

  GenDatasetArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen-dataset", "Generate a synthetic cluster dataset");
  gen->add_option("--sizes", gen_args.sizes, "Cluster sizes to sample")
      ->capture_default_str();
  gen->add_option("--per-size", gen_args.per_size, "Configurations per size")
      ->capture_default_str();
  gen->add_option("--seed", gen_args.seed, "Master seed")->capture_default_str();
  gen->add_option("--out", gen_args.out, "Output dataset file")->capture_default_str();
  gen->add_option("--out-dir", gen_args.out_dir, "Output directory (or NLCPS_OUT_DIR)");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train placement policies on a dataset");
  train->add_option("--dataset", train_args.dataset, "Dataset file")->required();
  train->add_option("--config", train_args.config, "Experiment config file");
  train->add_option("--out-dir", train_args.out_dir, "Output directory (or NLCPS_OUT_DIR)");
  train->add_option("--timesteps", train_args.timesteps, "Training timesteps per run");
  train->add_option("--alpha", train_args.alpha, "Exploration parameter");
  train->add_option("--learning-rate", train_args.learning_rate, "Adam learning rate");
  train->add_option("--sizes", train_args.sizes, "Cluster sizes to train on");
  train->add_option("--seed", train_args.seed, "Master seed");
  train->add_option("--counter-strategy", train_args.counter_strategy,
                    "feature-bucket or action-index");
  train->add_option("--window", train_args.window, "Moving average window");
  train->add_option("--mode", train_args.mode, "per-size or continual");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a node inventory");
  eval->add_option("--checkpoint", eval_args.checkpoint, "Checkpoint file")->required();
  eval->add_option("--profile", eval_args.profile, "Inventory file")->required();
  eval->add_option("--out", eval_args.out, "Report output file");
  eval->add_option("--out-dir", eval_args.out_dir, "Output directory (or NLCPS_OUT_DIR)");
  eval->add_option("--expect", eval_args.expect,
                   "Expected selection STRATEGY=NODE_ID (repeatable)");
  eval->add_option("--random-seed", eval_args.random_seed, "Seed for the RANDOM baseline")
      ->capture_default_str();

  RecommendArgs rec_args;
  CLI::App* rec = app.add_subcommand("recommend", "Print the placement decision for an inventory");
  rec->add_option("--checkpoint", rec_args.checkpoint, "Checkpoint file")->required();
  rec->add_option("--inventory", rec_args.inventory, "Inventory file")->required();

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand("report", "Emit convergence plot data from traces");
  report->add_option("--trace", report_args.traces, "Trace CSV file (repeatable)")->required();
  report->add_option("--out", report_args.out, "Output CSV file");
  report->add_option("--out-dir", report_args.out_dir, "Output directory (or NLCPS_OUT_DIR)");
  report->add_flag("--compare", report_args.compare, "Merge traces into one long-format series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit 0; usage errors exit 2
  }

  try {
    if (gen->parsed()) return run_gen_dataset(gen_args);
    if (train->parsed()) return run_train(train_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (rec->parsed()) return run_recommend(rec_args);
    if (report->parsed()) return run_report(report_args);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const nlcps::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlcps::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
