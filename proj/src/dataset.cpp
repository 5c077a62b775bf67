#include "affsteer/dataset.hpp"

#include <algorithm>
#include <string>

#include "affsteer/error.hpp"

namespace affsteer {

void EmbeddingDataset::validate() const {
  if (n() == 0 || d() == 0) fail(ErrorCode::kMalformedFile, "dataset must have n >= 1 and d >= 1");
  if (concepts.size() != n())
    fail(ErrorCode::kLengthMismatch, "concept labels: " + std::to_string(concepts.size()) +
                                         " for " + std::to_string(n()) + " rows");
  for (int c : concepts)
    if (c != 0 && c != 1) fail(ErrorCode::kMalformedFile, "concept label not in {0,1}");
  if (task) {
    if (task->size() != n())
      fail(ErrorCode::kLengthMismatch, "task labels: " + std::to_string(task->size()) + " for " +
                                           std::to_string(n()) + " rows");
    for (int y : *task)
      if (y < 0) fail(ErrorCode::kMalformedFile, "negative task label");
  }
}

EmbeddingDataset subset(const EmbeddingDataset& data, std::span<const std::size_t> rows) {
  EmbeddingDataset out;
  out.h = Matrix(rows.size(), data.d());
  out.concepts.reserve(rows.size());
  if (data.task) out.task.emplace().reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = data.h.row(rows[i]);
    std::copy(src.begin(), src.end(), out.h.row(i).begin());
    out.concepts.push_back(data.concepts[rows[i]]);
    if (data.task) out.task->push_back((*data.task)[rows[i]]);
  }
  return out;
}

std::vector<std::size_t> rows_with_concept(const EmbeddingDataset& data, int c) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.concepts.size(); ++i)
    if (data.concepts[i] == c) rows.push_back(i);
  return rows;
}

int task_class_count(const EmbeddingDataset& data) {
  if (!data.task || data.task->empty()) return 0;
  return *std::max_element(data.task->begin(), data.task->end()) + 1;
}

}  // namespace affsteer
