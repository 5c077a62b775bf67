#include "affsteer/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "affsteer/error.hpp"
#include "affsteer/moments.hpp"
#include "affsteer/random.hpp"
#include "affsteer/synth.hpp"

namespace affsteer {

Split train_eval_split(std::size_t n, std::uint64_t seed, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    fail(ErrorCode::kInvalidArgument, "train fraction must lie in (0, 1)");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);
  const auto cut = static_cast<std::size_t>(train_fraction * static_cast<double>(n));
  Split s{{idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cut)},
          {idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end()}};
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.eval.begin(), s.eval.end());
  return s;
}

namespace {

struct ProbeScores {
  TprGaps gaps;
  double accuracy = 0.0;
};

ProbeScores score_probe(const EmbeddingDataset& train_view, const EmbeddingDataset& eval_view,
                        const Split& split, const ProbeConfig& cfg, int k_classes) {
  const EmbeddingDataset train = subset(train_view, split.train);
  const EmbeddingDataset eval = subset(eval_view, split.eval);
  const ProbeModel model = train_probe(train, cfg);
  const auto pred = predict(model, eval.h);
  ProbeScores s;
  s.gaps = tpr_gaps(pred, *eval.task, eval.concepts, k_classes);
  s.accuracy = accuracy(pred, *eval.task);
  return s;
}

MetricsReport evaluate_state(const EmbeddingDataset& train_view, const EmbeddingDataset& eval_view,
                             const Split& split, const EvalOptions& opts, int within_concept,
                             const char* label, std::vector<std::string>& warnings) {
  MetricsReport r;
  const int k = task_class_count(eval_view);
  if (eval_view.has_task() && k >= 2 && !split.train.empty() && !split.eval.empty()) {
    const ProbeScores s = score_probe(train_view, eval_view, split, opts.probe, k);
    r.tpr_gap_per_class = s.gaps.per_class;
    r.tpr_rms = s.gaps.rms;
    r.accuracy = s.accuracy;
    for (int y : s.gaps.undefined_classes)
      warnings.push_back(std::string(label) + ": task class " + std::to_string(y) +
                         " is missing from one concept group in the eval split; its TPR gap is set to 0");
  }
  const auto ebbn = ebbn_estimate(eval_view.h, eval_view.concepts, within_concept, opts.ebbn_sample, opts.seed);
  r.ebbn = ebbn.value;
  r.ebbn_stderr = ebbn.standard_error;
  if (!opts.k_list.empty()) {
    const std::size_t sample = std::min(opts.knn_sample, eval_view.n());
    r.neighbor_curve = knn_same_label_fraction(eval_view.h, eval_view.concepts, opts.k_list, sample, opts.seed);
  }
  const auto m = fit_moments(eval_view);
  r.class_mean_gap = norm(m[0].mean - m[1].mean);
  return r;
}

nlohmann::ordered_json parse_report(const MetricsReport& r) {
  return nlohmann::ordered_json::parse(to_json(r));
}

}  // namespace

EvalResult run_eval(const EmbeddingDataset& data, const EvalOptions& opts) {
  data.validate();
  const Split split = train_eval_split(data.n(), opts.seed);
  const int within = opts.steering && opts.steering->kind != SteeringKind::kLeace
                         ? opts.steering->source_concept
                         : 0;
  EvalResult result;
  result.before = evaluate_state(data, data, split, opts, within, "before", result.warnings);
  if (opts.steering) {
    const EmbeddingDataset steered = apply(*opts.steering, data);
    const EmbeddingDataset& train_view =
        opts.order == SteerOrder::kSteerThenTrain ? steered : data;
    result.after = evaluate_state(train_view, steered, split, opts, within, "after", result.warnings);
  }
  return result;
}

std::string to_json(const EvalResult& result) {
  nlohmann::ordered_json j;
  j["before"] = parse_report(result.before);
  if (result.after) j["after"] = parse_report(*result.after);
  return j.dump(2) + "\n";
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  if (cfg.p_grid.empty()) fail(ErrorCode::kInvalidArgument, "empty p grid");
  std::vector<SweepRow> rows;
  for (double p : cfg.p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::kInvalidArgument, "p grid values must lie in [0, 1]");
    const EmbeddingDataset data = synth(controlled_bias_spec(p, cfg.seed, cfg.d, cfg.n_per_class));
    const Split split = train_eval_split(data.n(), cfg.seed);
    const ConceptMoments m = fit_moments(subset(data, split.train));

    SweepRow row;
    row.p = p;
    const ProbeScores before = score_probe(data, data, split, cfg.probe, 2);
    row.tpr_before = before.gaps.rms;
    row.acc_before = before.accuracy;

    const std::array<SteeringFunction, 2> maps{fit_mean_match(m, cfg.source, cfg.target),
                                               fit_mimic(m, cfg.source, cfg.target, cfg.lambda)};
    std::array<ProbeScores, 2> after;
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const EmbeddingDataset steered = apply(maps[i], data);
      const EmbeddingDataset& train_view = cfg.order == SteerOrder::kSteerThenTrain ? steered : data;
      after[i] = score_probe(train_view, steered, split, cfg.probe, 2);
    }
    row.tpr_mm = after[0].gaps.rms;
    row.acc_mm = after[0].accuracy;
    row.tpr_mimic = after[1].gaps.rms;
    row.acc_mimic = after[1].accuracy;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "p,tpr_before,tpr_mm,tpr_mimic,acc_before,acc_mm,acc_mimic\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.p, r.tpr_before,
                  r.tpr_mm, r.tpr_mimic, r.acc_before, r.acc_mm, r.acc_mimic);
    out += line;
  }
  return out;
}

}  // namespace affsteer
