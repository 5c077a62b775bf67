#include "affsteer/probe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "affsteer/error.hpp"

namespace affsteer {

namespace {

double log_sum_exp(std::span<const double> z) {
  const double top = *std::max_element(z.begin(), z.end());
  double s = 0.0;
  for (double v : z) s += std::exp(v - top);
  return top + std::log(s);
}

double model_norm(const ProbeModel& g) {
  double s = 0.0;
  for (double v : g.weights.data()) s += v * v;
  for (double v : g.biases) s += v * v;
  return std::sqrt(s);
}

ProbeModel step_from(const ProbeModel& m, const ProbeModel& g, double step) {
  ProbeModel out = m;
  auto w = out.weights.data();
  auto gw = g.weights.data();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= step * gw[i];
  for (std::size_t i = 0; i < out.biases.size(); ++i) out.biases[i] -= step * g.biases[i];
  return out;
}

void check_dims(const ProbeModel& model, const Matrix& h) {
  if (model.weights.cols() != h.cols() || model.weights.rows() != model.biases.size())
    fail(ErrorCode::kDimensionMismatch, "probe expects dimension " + std::to_string(model.weights.cols()));
}

}  // namespace

ProbeObjective::ProbeObjective(const Matrix& h, std::span<const int> labels, int classes, double l2)
    : h_(h), labels_(labels), classes_(classes), l2_(l2) {
  if (labels.size() != h.rows()) fail(ErrorCode::kLengthMismatch, "labels vs rows");
  if (h.rows() == 0) fail(ErrorCode::kInvalidArgument, "empty training set");
}

Matrix ProbeObjective::logits(const ProbeModel& model) const {
  Matrix z = h_ * transpose(model.weights);
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t k = 0; k < z.cols(); ++k) z(i, k) += model.biases[k];
  return z;
}

double ProbeObjective::value(const ProbeModel& model) const {
  const Matrix z = logits(model);
  double loss = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i)
    loss += log_sum_exp(z.row(i)) - z(i, static_cast<std::size_t>(labels_[i]));
  double wsq = 0.0;
  for (double v : model.weights.data()) wsq += v * v;
  return (loss + 0.5 * l2_ * wsq) / static_cast<double>(z.rows());
}

ProbeModel ProbeObjective::gradient(const ProbeModel& model) const {
  Matrix p = logits(model);
  const double inv_n = 1.0 / static_cast<double>(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    auto row = p.row(i);
    const double lse = log_sum_exp(row);
    for (double& v : row) v = std::exp(v - lse);
    row[static_cast<std::size_t>(labels_[i])] -= 1.0;
    for (double& v : row) v *= inv_n;
  }
  ProbeModel g;
  g.weights = transpose(p) * h_;
  auto gw = g.weights.data();
  auto w = model.weights.data();
  for (std::size_t i = 0; i < gw.size(); ++i) gw[i] += l2_ * inv_n * w[i];
  g.biases.assign(static_cast<std::size_t>(classes_), 0.0);
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t k = 0; k < p.cols(); ++k) g.biases[k] += p(i, k);
  return g;
}

ProbeModel train_probe(const Matrix& h, std::span<const int> labels, const ProbeConfig& cfg,
                       ProbeTrace* trace) {
  if (cfg.max_iters < 1) fail(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  if (!(cfg.learning_rate > 0.0) || !(cfg.l2 >= 0.0))
    fail(ErrorCode::kInvalidArgument, "learning rate must be positive and l2 nonnegative");
  if (labels.size() != h.rows()) fail(ErrorCode::kLengthMismatch, "labels vs rows");
  int classes = 0;
  for (int y : labels) {
    if (y < 0) fail(ErrorCode::kInvalidArgument, "negative class label");
    classes = std::max(classes, y + 1);
  }
  if (classes < 2) fail(ErrorCode::kInvalidArgument, "probe needs at least two classes");

  const ProbeObjective objective(h, labels, classes, cfg.l2);
  ProbeModel model{Matrix(static_cast<std::size_t>(classes), h.cols()),
                   Vector(static_cast<std::size_t>(classes), 0.0)};
  double loss = objective.value(model);
  double step = cfg.learning_rate;
  ProbeTrace local;
  local.loss.push_back(loss);

  for (int it = 0; it < cfg.max_iters; ++it) {
    const ProbeModel g = objective.gradient(model);
    if (model_norm(g) <= cfg.tol) {
      local.converged = true;
      break;
    }
    bool moved = false;
    while (step > 1e-20) {
      ProbeModel candidate = step_from(model, g, step);
      const double candidate_loss = objective.value(candidate);
      if (candidate_loss <= loss) {
        model = std::move(candidate);
        loss = candidate_loss;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    local.loss.push_back(loss);
    local.iterations = it + 1;
    step = std::min(cfg.learning_rate, 2.0 * step);
  }
  if (trace) *trace = std::move(local);
  return model;
}

ProbeModel train_probe(const EmbeddingDataset& data, const ProbeConfig& cfg, ProbeTrace* trace) {
  if (!data.task) fail(ErrorCode::kMissingTaskLabels, "probe training needs task labels");
  return train_probe(data.h, *data.task, cfg, trace);
}

Matrix predict_proba(const ProbeModel& model, const Matrix& h) {
  check_dims(model, h);
  Matrix z = h * transpose(model.weights);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    auto row = z.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] += model.biases[k];
    const double lse = log_sum_exp(row);
    for (double& v : row) v = std::exp(v - lse);
  }
  return z;
}

std::vector<int> predict(const ProbeModel& model, const Matrix& h) {
  check_dims(model, h);
  Matrix z = h * transpose(model.weights);
  std::vector<int> out(h.rows());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    auto row = z.row(i);
    std::size_t best = 0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      row[k] += model.biases[k];
      if (row[k] > row[best]) best = k;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

}  // namespace affsteer
