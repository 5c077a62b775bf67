#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "affsteer/dataset.hpp"
#include "affsteer/matrix.hpp"

namespace affsteer {

struct ProbeModel {
  Matrix weights;  // K x d
  Vector biases;   // K

  int classes() const noexcept { return static_cast<int>(biases.size()); }
};

struct ProbeConfig {
  double l2 = 1e-4;
  int max_iters = 1000;
  double tol = 1e-7;
  double learning_rate = 1.0;
  std::uint64_t seed = 0;  // reserved for minibatch shuffling; full-batch ignores it
};

struct ProbeTrace {
  std::vector<double> loss;  // objective after each accepted step, starting at the initial point
  int iterations = 0;
  bool converged = false;
};

// Objective scaled by 1/n: (1/n) [ Σ_i -log softmax(W h_i + b)_{y_i} + (l2/2) ||W||² ].
// Its gradient norm is the unscaled gradient norm divided by n, so the
// stopping rule ||∇|| <= tol is the same as ||∇_sum|| <= tol * n.
class ProbeObjective {
 public:
  // h and labels must outlive the objective.
  ProbeObjective(const Matrix& h, std::span<const int> labels, int classes, double l2);

  double value(const ProbeModel& model) const;
  // Gradient with the same shape as the model.
  ProbeModel gradient(const ProbeModel& model) const;

 private:
  Matrix logits(const ProbeModel& model) const;

  const Matrix& h_;
  std::span<const int> labels_;
  int classes_;
  double l2_;
};

// Full-batch gradient descent from zero weights; the step halves until the
// objective does not increase and then grows back toward learning_rate.
// Throws MissingTaskLabels without task labels, InvalidArgument when K < 2.
ProbeModel train_probe(const EmbeddingDataset& data, const ProbeConfig& cfg = {},
                       ProbeTrace* trace = nullptr);
ProbeModel train_probe(const Matrix& h, std::span<const int> labels, const ProbeConfig& cfg = {},
                       ProbeTrace* trace = nullptr);

// argmax of the logits, ties to the lowest class index.
std::vector<int> predict(const ProbeModel& model, const Matrix& h);
// Row-wise softmax probabilities (n x K).
Matrix predict_proba(const ProbeModel& model, const Matrix& h);

}  // namespace affsteer

namespace affsteer {

// Model file: "PRB1", u32 K, u32 d, biases (K f64), weights (K*d f64 row-major),
// all little-endian.
std::vector<std::uint8_t> serialize_probe(const ProbeModel& model);
ProbeModel deserialize_probe(std::span<const std::uint8_t> bytes);
void save_probe(const std::string& path, const ProbeModel& model);
ProbeModel load_probe(const std::string& path);

}  // namespace affsteer
