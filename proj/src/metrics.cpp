#include "affsteer/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include <json.hpp>

#include "affsteer/dataset_io.hpp"
#include "affsteer/error.hpp"
#include "affsteer/kernels.hpp"
#include "affsteer/random.hpp"

namespace affsteer {

TprGaps tpr_gaps(std::span<const int> pred, std::span<const int> truth,
                 std::span<const int> concepts, int k_classes) {
  if (pred.size() != truth.size() || truth.size() != concepts.size())
    fail(ErrorCode::kLengthMismatch, "prediction, truth and concept arrays differ in length");
  if (k_classes < 1) fail(ErrorCode::kInvalidArgument, "need at least one class");
  const auto k = static_cast<std::size_t>(k_classes);
  // [concept][class] -> (rows with truth == class, of which predicted correctly)
  std::vector<std::size_t> total(2 * k, 0), hit(2 * k, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int y = truth[i];
    // Predictions outside [0, K) are allowed; they simply miss.
    if (y < 0 || y >= k_classes) fail(ErrorCode::kInvalidArgument, "true class label outside [0, K)");
    if (concepts[i] != 0 && concepts[i] != 1)
      fail(ErrorCode::kInvalidArgument, "concept label outside {0,1}");
    const std::size_t slot = static_cast<std::size_t>(concepts[i]) * k + static_cast<std::size_t>(y);
    ++total[slot];
    hit[slot] += pred[i] == y ? 1 : 0;
  }
  TprGaps out;
  out.per_class.assign(k, 0.0);
  double sq = 0.0;
  for (std::size_t y = 0; y < k; ++y) {
    if (total[y] == 0 || total[k + y] == 0) {
      out.undefined_classes.push_back(static_cast<int>(y));
      continue;
    }
    const double tpr0 = static_cast<double>(hit[y]) / static_cast<double>(total[y]);
    const double tpr1 = static_cast<double>(hit[k + y]) / static_cast<double>(total[k + y]);
    out.per_class[y] = tpr0 - tpr1;
    sq += out.per_class[y] * out.per_class[y];
  }
  out.rms = std::sqrt(sq / static_cast<double>(k));
  return out;
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) fail(ErrorCode::kLengthMismatch, "accuracy inputs differ in length");
  if (pred.empty()) fail(ErrorCode::kInvalidArgument, "accuracy of an empty set");
  std::size_t same = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) same += pred[i] == truth[i] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(pred.size());
}

EbbnEstimate ebbn_estimate(const Matrix& h, std::span<const int> concepts, int within_concept,
                           std::size_t sample, std::uint64_t seed) {
  if (concepts.size() != h.rows()) fail(ErrorCode::kLengthMismatch, "concept labels vs rows");
  if (within_concept != 0 && within_concept != 1)
    fail(ErrorCode::kInvalidArgument, "within concept must be 0 or 1");
  std::array<std::vector<std::size_t>, 2> rows;
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    if (concepts[i] != 0 && concepts[i] != 1) fail(ErrorCode::kInvalidArgument, "concept outside {0,1}");
    rows[static_cast<std::size_t>(concepts[i])].push_back(i);
  }
  for (int c = 0; c < 2; ++c)
    if (rows[c].size() < 2)
      fail(ErrorCode::kMissingConcept, "EBBN needs at least two rows of concept " + std::to_string(c));
  if (sample > 0) {
    Rng rng(seed);
    for (auto& r : rows) {
      if (r.size() <= sample) continue;
      rng.shuffle(r);
      r.resize(sample);
      std::sort(r.begin(), r.end());
    }
  }
  const auto& own = rows[static_cast<std::size_t>(within_concept)];
  const auto within = kernels::parallel::within_pair_stats(h, own);
  const auto cross = kernels::parallel::cross_pair_stats(h, rows[0], rows[1]);

  auto mean_and_var = [](const kernels::PairStats& s) {
    const double mean = s.sum / s.count;
    const double var = s.count > 1 ? std::max(0.0, (s.sum_sq - s.count * mean * mean) / (s.count - 1)) : 0.0;
    return std::pair{mean, var};
  };
  const auto [wm, wv] = mean_and_var(within);
  const auto [cm, cv] = mean_and_var(cross);
  EbbnEstimate est;
  est.within_mean = wm;
  est.cross_mean = cm;
  est.value = std::abs(wm - cm);
  est.standard_error = std::sqrt(wv / within.count + cv / cross.count);
  return est;
}

Matrix unit_rows(const Matrix& h) {
  Matrix u = h;
  for (std::size_t r = 0; r < u.rows(); ++r) {
    auto row = u.row(r);
    const double len = norm(row);
    if (!(len > 0.0)) fail(ErrorCode::kZeroVector, "row " + std::to_string(r) + " has zero norm");
    for (double& v : row) v /= len;
  }
  return u;
}

std::vector<NeighborPoint> knn_same_label_fraction(const Matrix& h, std::span<const int> labels,
                                                   std::span<const std::size_t> ks,
                                                   std::size_t sample, std::uint64_t seed) {
  const std::size_t n = h.rows();
  if (labels.size() != n) fail(ErrorCode::kLengthMismatch, "labels vs rows");
  if (ks.empty()) fail(ErrorCode::kBadK, "no k values given");
  std::vector<std::size_t> sorted_ks(ks.begin(), ks.end());
  std::sort(sorted_ks.begin(), sorted_ks.end());
  sorted_ks.erase(std::unique(sorted_ks.begin(), sorted_ks.end()), sorted_ks.end());
  if (sorted_ks.front() < 1 || sorted_ks.back() >= n)
    fail(ErrorCode::kBadK, "k must lie in [1, n-1]");
  if (sample > n) fail(ErrorCode::kBadK, "sample exceeds row count");

  std::vector<std::size_t> queries(n);
  std::iota(queries.begin(), queries.end(), 0);
  if (sample > 0 && sample < n) {
    Rng rng(seed);
    rng.shuffle(queries);
    queries.resize(sample);
  }
  const Matrix unit = unit_rows(h);
  Matrix fractions(queries.size(), sorted_ks.size());
  kernels::parallel::knn_label_fractions(unit, labels, queries, sorted_ks, fractions);

  std::vector<NeighborPoint> curve;
  for (std::size_t i = 0; i < sorted_ks.size(); ++i) {
    double sum = 0.0;
    for (std::size_t q = 0; q < queries.size(); ++q) sum += fractions(q, i);
    curve.push_back({sorted_ks[i], sum / static_cast<double>(queries.size())});
  }
  return curve;
}

namespace {
void check_order(std::span<const std::size_t> order, std::size_t n) {
  for (std::size_t r : order)
    if (r >= n) fail(ErrorCode::kInvalidArgument, "order index out of range");
}
}  // namespace

void write_cosine_matrix(const std::string& path, const Matrix& h,
                         std::span<const std::size_t> order) {
  check_order(order, h.rows());
  const Matrix unit = unit_rows(h);
  MatrixFileWriter out(path, order.size(), order.size());
  constexpr std::size_t kBlockRows = 256;
  for (std::size_t first = 0; first < order.size(); first += kBlockRows) {
    Matrix block(std::min(kBlockRows, order.size() - first), order.size());
    kernels::parallel::cosine_block(unit, order, first, block);
    for (std::size_t r = 0; r < block.rows(); ++r) out.write_row(block.row(r));
  }
  out.close();
}

Matrix cosine_matrix(const Matrix& h, std::span<const std::size_t> order) {
  check_order(order, h.rows());
  const Matrix unit = unit_rows(h);
  Matrix block(order.size(), order.size());
  kernels::parallel::cosine_block(unit, order, 0, block);
  return block;
}

std::string to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["tpr_gap_per_class"] = report.tpr_gap_per_class ? nlohmann::ordered_json(*report.tpr_gap_per_class)
                                                     : nlohmann::ordered_json(nullptr);
  j["tpr_rms"] = report.tpr_rms ? nlohmann::ordered_json(*report.tpr_rms) : nlohmann::ordered_json(nullptr);
  j["accuracy"] = report.accuracy ? nlohmann::ordered_json(*report.accuracy) : nlohmann::ordered_json(nullptr);
  j["ebbn"] = report.ebbn;
  j["ebbn_stderr"] = report.ebbn_stderr;
  auto curve = nlohmann::ordered_json::array();
  for (const auto& p : report.neighbor_curve) curve.push_back({{"k", p.k}, {"fraction", p.fraction}});
  j["neighbor_curve"] = std::move(curve);
  j["class_mean_gap"] = report.class_mean_gap;
  return j.dump(2);
}

}  // namespace affsteer
