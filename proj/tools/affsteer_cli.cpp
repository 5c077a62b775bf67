// affsteer: fit, apply and evaluate affine steering maps on embedding files.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "affsteer/dataset_io.hpp"
#include "affsteer/error.hpp"
#include "affsteer/experiment.hpp"
#include "affsteer/map_file.hpp"
#include "affsteer/metrics.hpp"
#include "affsteer/moments.hpp"
#include "affsteer/oracle_check.hpp"
#include "affsteer/parallel.hpp"
#include "affsteer/random.hpp"
#include "affsteer/synth.hpp"
#include "affsteer/transforms.hpp"

namespace {

using namespace affsteer;

constexpr int kUsageError = 2;

std::vector<double> default_p_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(0.5 + 0.05 * i);
  return grid;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream field(item);
    T v{};
    field >> v;
    if (field.fail() || !(field >> std::ws).eof())
      fail(ErrorCode::kInvalidArgument, std::string(flag) + ": cannot parse '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) fail(ErrorCode::kInvalidArgument, std::string(flag) + " is empty");
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kIo, "short write to " + path);
}

// Dataset outputs are written as <stem>.emb and <stem>.csv.
void write_dataset_stem(const std::string& stem, const EmbeddingDataset& data) {
  write_dataset(stem + ".emb", stem + ".csv", data);
}

struct Options {
  std::string emb, labels, map, out;
  std::string method = "mimic";
  std::string gate = "oracle";
  std::string steer_order = "steer-then-train";
  std::string design = "controlled";
  std::string k_list;
  std::string p_grid;
  int source = 0;
  int target = 1;
  double lambda = kClassificationLambda;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::size_t d = 16;
  std::size_t n = 2000;
  std::size_t sample = 0;
  std::size_t knn_sample = 1000;
  std::size_t ebbn_sample = 0;
  int trials = 3;
};

SteerOrder parse_order(const std::string& s) {
  return s == "train-then-steer" ? SteerOrder::kTrainThenSteer : SteerOrder::kSteerThenTrain;
}

int cmd_synth(const Options& o) {
  SynthSpec spec = o.design == "clustered" ? clustered_concepts_spec(o.seed, o.d, o.n)
                                           : controlled_bias_spec(o.p, o.seed, o.d, o.n);
  write_dataset_stem(o.out, synth(spec));
  return 0;
}

int cmd_fit(const Options& o) {
  const auto data = read_dataset(o.emb, o.labels);
  const auto m = fit_moments(data);
  SteeringFunction f;
  if (o.method == "mean-match")
    f = fit_mean_match(m, o.source, o.target);
  else if (o.method == "mimic")
    f = fit_mimic(m, o.source, o.target, o.lambda);
  else
    f = fit_leace(m, o.lambda);
  if (f.kind != SteeringKind::kLeace) {
    if (o.gate == "nearest-mean")
      f.gate = NearestMean{m[o.source].mean, m[o.target].mean};
    else if (o.gate == "always")
      f.gate = AlwaysApply{};
    else
      f.gate = OracleLabels{};
  }
  save_map(o.out, f);
  return 0;
}

int cmd_apply(const Options& o) {
  const auto data = read_dataset(o.emb, o.labels);
  write_dataset_stem(o.out, apply(load_map(o.map), data));
  return 0;
}

int cmd_eval(const Options& o) {
  const auto data = read_dataset(o.emb, o.labels);
  EvalOptions opts;
  if (!o.map.empty()) opts.steering = load_map(o.map);
  opts.order = parse_order(o.steer_order);
  if (!o.k_list.empty()) opts.k_list = parse_list<std::size_t>(o.k_list, "--k-list");
  opts.knn_sample = o.knn_sample;
  opts.ebbn_sample = o.ebbn_sample;
  opts.seed = o.seed;
  const EvalResult result = run_eval(data, opts);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  write_text(o.out, to_json(result));
  return 0;
}

int cmd_sweep(const Options& o) {
  SweepConfig cfg;
  cfg.p_grid = o.p_grid.empty() ? default_p_grid() : parse_list<double>(o.p_grid, "--p-grid");
  cfg.seed = o.seed;
  cfg.d = o.d;
  cfg.n_per_class = o.n;
  cfg.source = o.source;
  cfg.target = o.target;
  cfg.lambda = o.lambda;
  cfg.order = parse_order(o.steer_order);
  write_text(o.out, sweep_csv(run_sweep(cfg)));
  return 0;
}

int cmd_neighbors(const Options& o) {
  const auto data = read_dataset(o.emb, o.labels);
  const auto ks = parse_list<std::size_t>(o.k_list.empty() ? "128" : o.k_list, "--k-list");
  const auto curve = knn_same_label_fraction(data.h, data.concepts, ks, std::min(o.sample, data.n()), o.seed);
  std::string text = "k,fraction\n";
  char line[64];
  for (const auto& pt : curve) {
    std::snprintf(line, sizeof(line), "%zu,%.6f\n", pt.k, pt.fraction);
    text += line;
  }
  write_text(o.out, text);
  return 0;
}

int cmd_cosine_matrix(const Options& o) {
  const auto data = read_dataset(o.emb, o.labels);
  std::vector<std::size_t> rows(data.n());
  std::iota(rows.begin(), rows.end(), 0);
  if (o.sample > 0 && o.sample < data.n()) {
    Rng rng(o.seed);
    rng.shuffle(rows);
    rows.resize(o.sample);
  }
  // Concept 0 rows first, each block in row order.
  std::stable_sort(rows.begin(), rows.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [&](std::size_t a, std::size_t b) { return data.concepts[a] < data.concepts[b]; });
  write_cosine_matrix(o.out, data.h, rows);
  return 0;
}

int cmd_oracle_check(const Options& o) {
  const auto results = run_oracle_checks(o.seed, o.trials);
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%s  %-76s measured=%.3e tol=%.1e\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.measured, r.tolerance);
    ok = ok && r.pass;
  }
  return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  affsteer::apply_thread_cap_from_env();

  CLI::App app{"Fit, apply and evaluate affine steering and concept-erasure maps"};
  app.require_subcommand(1);
  Options o;

  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--emb", o.emb, "Embedding file (EMB1)")->required();
    sub->add_option("--labels", o.labels, "Labels CSV: row_id,concept[,task]")->required();
  };
  auto add_concepts = [&](CLI::App* sub) {
    sub->add_option("--source", o.source, "Source concept")->check(CLI::Range(0, 1));
    sub->add_option("--target", o.target, "Target concept")->check(CLI::Range(0, 1));
  };
  auto add_order = [&](CLI::App* sub) {
    sub->add_option("--steer-order", o.steer_order, "steer-then-train or train-then-steer")
        ->check(CLI::IsMember({"steer-then-train", "train-then-steer"}));
  };

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset to <out>.emb and <out>.csv");
  synth_cmd->add_option("--out", o.out, "Output stem")->required();
  synth_cmd->add_option("--design", o.design, "controlled or clustered")
      ->check(CLI::IsMember({"controlled", "clustered"}));
  synth_cmd->add_option("--p", o.p, "Share of concept-0 rows with task label 1 (controlled)")
      ->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--d", o.d, "Dimension");
  synth_cmd->add_option("--n", o.n, "Rows per concept");
  synth_cmd->add_option("--seed", o.seed, "Seed");

  auto* fit_cmd = app.add_subcommand("fit", "Fit a steering map and write it to --out");
  add_data(fit_cmd);
  fit_cmd->add_option("--method", o.method, "mean-match, mimic or leace")
      ->check(CLI::IsMember({"mean-match", "mimic", "leace"}));
  add_concepts(fit_cmd);
  fit_cmd->add_option("--gate", o.gate, "oracle, nearest-mean or always")
      ->check(CLI::IsMember({"oracle", "nearest-mean", "always"}));
  fit_cmd->add_option("--lambda", o.lambda, "Diagonal regularization")->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--out", o.out, "Map file")->required();

  auto* apply_cmd = app.add_subcommand("apply", "Apply a map; writes <out>.emb and <out>.csv");
  add_data(apply_cmd);
  apply_cmd->add_option("--map", o.map, "Map file")->required();
  apply_cmd->add_option("--out", o.out, "Output stem")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Metrics report (JSON) before and after an optional map");
  add_data(eval_cmd);
  eval_cmd->add_option("--map", o.map, "Map file");
  add_order(eval_cmd);
  eval_cmd->add_option("--k-list", o.k_list, "Comma-separated k values for the neighbor curve");
  eval_cmd->add_option("--knn-sample", o.knn_sample, "Query rows for the neighbor curve");
  eval_cmd->add_option("--ebbn-sample", o.ebbn_sample, "Row cap per concept for EBBN (0 = all)");
  eval_cmd->add_option("--seed", o.seed, "Seed for the split and sampling");
  eval_cmd->add_option("--out", o.out, "Output path (stdout if omitted)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Controlled-bias sweep over p; CSV output");
  sweep_cmd->add_option("--p-grid", o.p_grid, "Comma-separated p values (default 0.5..0.95)");
  sweep_cmd->add_option("--seed", o.seed, "Seed");
  sweep_cmd->add_option("--d", o.d, "Dimension");
  sweep_cmd->add_option("--n", o.n, "Rows per concept");
  add_concepts(sweep_cmd);
  sweep_cmd->add_option("--lambda", o.lambda, "Diagonal regularization")->check(CLI::NonNegativeNumber);
  add_order(sweep_cmd);
  sweep_cmd->add_option("--out", o.out, "Output path (stdout if omitted)");

  auto* nb_cmd = app.add_subcommand("neighbors", "k-NN same-concept fraction curve; CSV output");
  add_data(nb_cmd);
  nb_cmd->add_option("--k-list", o.k_list, "Comma-separated k values (default 128)");
  nb_cmd->add_option("--sample", o.sample, "Query rows (0 = all)");
  nb_cmd->add_option("--seed", o.seed, "Seed");
  nb_cmd->add_option("--out", o.out, "Output path (stdout if omitted)");

  auto* cos_cmd = app.add_subcommand("cosine-matrix", "Cosine similarity matrix grouped by concept (EMB1)");
  add_data(cos_cmd);
  cos_cmd->add_option("--sample", o.sample, "Random rows to keep (0 = all)");
  cos_cmd->add_option("--seed", o.seed, "Seed");
  cos_cmd->add_option("--out", o.out, "Output matrix file")->required();

  auto* oracle_cmd = app.add_subcommand("oracle-check", "Run the closed-form and brute-force oracles");
  oracle_cmd->add_option("--seed", o.seed, "Seed");
  oracle_cmd->add_option("--trials", o.trials, "Trials per property")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  const std::map<CLI::App*, int (*)(const Options&)> handlers = {
      {synth_cmd, cmd_synth},         {fit_cmd, cmd_fit},
      {apply_cmd, cmd_apply},         {eval_cmd, cmd_eval},
      {sweep_cmd, cmd_sweep},         {nb_cmd, cmd_neighbors},
      {cos_cmd, cmd_cosine_matrix},   {oracle_cmd, cmd_oracle_check},
  };
  try {
    for (const auto& [sub, handler] : handlers)
      if (sub->parsed()) return handler(o);
  } catch (const affsteer::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return affsteer::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return kUsageError;
}
