#pragma once

#include <cstdint>
#include <fstream>
#include <span>
#include <string>

#include "affsteer/dataset.hpp"
#include "affsteer/matrix.hpp"

namespace affsteer {

// Embedding/matrix file: "EMB1", u32 LE rows, u32 LE cols, then rows*cols
// float32 LE values, row-major. Values are widened to double on read.
Matrix read_matrix(const std::string& path);
void write_matrix(const std::string& path, const Matrix& m);

// Streams a matrix file row by row without holding it in memory.
class MatrixFileWriter {
 public:
  MatrixFileWriter(const std::string& path, std::size_t rows, std::size_t cols);
  void write_row(std::span<const double> row);
  // Throws if fewer rows than announced were written.
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t written_ = 0;
};

// Labels CSV: one line per embedding row, `row_id,concept[,task]`, with an
// optional header line. row_id must count up from 0.
// Throws MalformedFile, LengthMismatch (label rows vs embedding rows), BadMagic.
EmbeddingDataset read_dataset(const std::string& emb_path, const std::string& labels_path);
void write_dataset(const std::string& emb_path, const std::string& labels_path,
                   const EmbeddingDataset& data);

}  // namespace affsteer
