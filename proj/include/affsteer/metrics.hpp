#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "affsteer/matrix.hpp"

namespace affsteer {

struct TprGaps {
  std::vector<double> per_class;  // TPR(concept 0) - TPR(concept 1) for each task class
  double rms = 0.0;
  // Classes missing from one concept group; their gap is reported as 0.
  std::vector<int> undefined_classes;
};

TprGaps tpr_gaps(std::span<const int> pred, std::span<const int> truth,
                 std::span<const int> concepts, int k_classes);

double accuracy(std::span<const int> pred, std::span<const int> truth);

struct EbbnEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  double within_mean = 0.0;
  double cross_mean = 0.0;
};

// |mean over distinct within-class pairs of ||h_i - h_j||² minus mean over
// cross-class pairs|, with the within class given by `within_concept`.
// The standard error treats pairs as independent. `sample`, when nonzero,
// caps each class at that many rows (seeded subsample).
EbbnEstimate ebbn_estimate(const Matrix& h, std::span<const int> concepts, int within_concept = 0,
                           std::size_t sample = 0, std::uint64_t seed = 0);

struct NeighborPoint {
  std::size_t k = 0;
  double fraction = 0.0;
};

// For `sample` seeded-random query rows (all rows when sample == 0 or n),
// the mean share of the k most cosine-similar other rows with the query's
// label. Throws BadK, ZeroVector.
std::vector<NeighborPoint> knn_same_label_fraction(const Matrix& h, std::span<const int> labels,
                                                   std::span<const std::size_t> ks,
                                                   std::size_t sample, std::uint64_t seed);

// Row-normalised copy of h; throws ZeroVector on a zero row.
Matrix unit_rows(const Matrix& h);

// Cosine similarities between rows, permuted by `order`, streamed to an EMB1
// matrix file in blocks.
void write_cosine_matrix(const std::string& path, const Matrix& h,
                         std::span<const std::size_t> order);

// In-memory variant for small inputs.
Matrix cosine_matrix(const Matrix& h, std::span<const std::size_t> order);

struct MetricsReport {
  std::optional<std::vector<double>> tpr_gap_per_class;
  std::optional<double> tpr_rms;
  std::optional<double> accuracy;
  double ebbn = 0.0;
  double ebbn_stderr = 0.0;
  std::vector<NeighborPoint> neighbor_curve;
  double class_mean_gap = 0.0;  // ||mu_0 - mu_1||
};

// JSON object with keys tpr_gap_per_class, tpr_rms, accuracy, ebbn,
// ebbn_stderr, neighbor_curve, class_mean_gap. Missing probe metrics are null.
std::string to_json(const MetricsReport& report);

}  // namespace affsteer
