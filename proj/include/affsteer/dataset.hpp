#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "affsteer/matrix.hpp"

namespace affsteer {

// n embeddings (rows of `h`) with a binary concept label per row and
// optional downstream task labels in {0..K-1}.
struct EmbeddingDataset {
  Matrix h;
  std::vector<int> concepts;
  std::optional<std::vector<int>> task;

  std::size_t n() const noexcept { return h.rows(); }
  std::size_t d() const noexcept { return h.cols(); }
  bool has_task() const noexcept { return task.has_value(); }

  // Throws on n == 0, d == 0, label/row count mismatch or non-binary concepts.
  void validate() const;
};

// Rows `rows` of `data`, in the given order.
EmbeddingDataset subset(const EmbeddingDataset& data, std::span<const std::size_t> rows);

// Indices of rows whose concept label equals `c`.
std::vector<std::size_t> rows_with_concept(const EmbeddingDataset& data, int c);

// Number of task classes (max label + 1); 0 without task labels.
int task_class_count(const EmbeddingDataset& data);

}  // namespace affsteer
