#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affsteer/dataset.hpp"
#include "affsteer/metrics.hpp"
#include "affsteer/probe.hpp"
#include "affsteer/transforms.hpp"

namespace affsteer {

// Where the probe sees the steering map: fitted on steered training vectors
// (the default) or fitted on raw vectors and evaluated on steered ones.
enum class SteerOrder { kSteerThenTrain, kTrainThenSteer };

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> eval;
};

// Seeded shuffle, first 80% train; both halves returned in ascending order.
Split train_eval_split(std::size_t n, std::uint64_t seed, double train_fraction = 0.8);

struct EvalOptions {
  std::optional<SteeringFunction> steering;
  SteerOrder order = SteerOrder::kSteerThenTrain;
  std::vector<std::size_t> k_list;  // empty: no neighbor curve
  std::size_t knn_sample = 1000;
  std::size_t ebbn_sample = 0;      // 0: all pairs
  ProbeConfig probe;
  std::uint64_t seed = 0;
};

struct EvalResult {
  MetricsReport before;
  std::optional<MetricsReport> after;
  std::vector<std::string> warnings;
};

// Probe metrics use the train/eval split; EBBN, the neighbor curve and the
// class-mean gap are computed over every row. Probe metrics are skipped when
// the dataset has no task labels.
EvalResult run_eval(const EmbeddingDataset& data, const EvalOptions& opts);

// {"before": {...}, "after": {...}}; "after" only when a map was given.
std::string to_json(const EvalResult& result);

struct SweepConfig {
  std::vector<double> p_grid;
  std::uint64_t seed = 0;
  std::size_t d = 16;
  std::size_t n_per_class = 2000;
  int source = 0;
  int target = 1;
  double lambda = kClassificationLambda;
  SteerOrder order = SteerOrder::kSteerThenTrain;
  ProbeConfig probe;
};

struct SweepRow {
  double p = 0.0;
  double tpr_before = 0.0, tpr_mm = 0.0, tpr_mimic = 0.0;
  double acc_before = 0.0, acc_mm = 0.0, acc_mimic = 0.0;
};

// One controlled-bias dataset per p (same seed for every p), maps fitted on
// the training split, oracle gate.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

// Header p,tpr_before,tpr_mm,tpr_mimic,acc_before,acc_mm,acc_mimic; values
// with six decimals.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace affsteer
