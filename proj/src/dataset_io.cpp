#include "affsteer/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "affsteer/error.hpp"
#include "byte_io.hpp"

namespace affsteer {

namespace {

constexpr std::string_view kMagic = "EMB1";

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max())
    fail(ErrorCode::kInvalidArgument, std::string(what) + " exceeds u32");
  return static_cast<std::uint32_t>(v);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_int(std::string_view s, long long& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

struct Labels {
  std::vector<int> concepts;
  std::optional<std::vector<int>> task;
};

Labels read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  Labels labels;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  std::vector<int> task;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split_fields(view);
    long long first = 0;
    if (labels.concepts.empty() && columns == 0 && !parse_int(fields[0], first)) {
      columns = fields.size();  // header line
      continue;
    }
    if (fields.size() < 2 || fields.size() > 3)
      fail(ErrorCode::kMalformedFile, path + ":" + std::to_string(line_no) + ": expected 2 or 3 columns");
    if (columns == 0) columns = fields.size();
    if (fields.size() != columns)
      fail(ErrorCode::kMalformedFile, path + ":" + std::to_string(line_no) + ": inconsistent column count");
    long long row_id = 0, concept_id = 0, y = 0;
    if (!parse_int(fields[0], row_id) || !parse_int(fields[1], concept_id))
      fail(ErrorCode::kMalformedFile, path + ":" + std::to_string(line_no) + ": not an integer");
    if (row_id != static_cast<long long>(labels.concepts.size()))
      fail(ErrorCode::kMalformedFile, path + ":" + std::to_string(line_no) + ": row_id out of sequence");
    if (concept_id != 0 && concept_id != 1)
      fail(ErrorCode::kMalformedFile, path + ":" + std::to_string(line_no) + ": concept must be 0 or 1");
    labels.concepts.push_back(static_cast<int>(concept_id));
    if (columns == 3) {
      if (!parse_int(fields[2], y) || y < 0 || y > std::numeric_limits<int>::max())
        fail(ErrorCode::kMalformedFile, path + ":" + std::to_string(line_no) + ": bad task label");
      task.push_back(static_cast<int>(y));
    }
  }
  if (columns == 3) labels.task = std::move(task);
  return labels;
}

}  // namespace

Matrix read_matrix(const std::string& path) {
  const auto bytes = detail::read_file_bytes(path);
  detail::ByteReader in(bytes);
  if (!in.starts_with(kMagic)) fail(ErrorCode::kBadMagic, path + " is not an EMB1 file");
  in.skip(kMagic.size());
  const std::size_t rows = in.u32();
  const std::size_t cols = in.u32();
  if (in.remaining() != 4 * rows * cols)
    fail(ErrorCode::kMalformedFile, path + ": payload size does not match header");
  Matrix m(rows, cols);
  for (double& v : m.data()) v = static_cast<double>(in.f32());
  return m;
}

void write_matrix(const std::string& path, const Matrix& m) {
  MatrixFileWriter writer(path, m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) writer.write_row(m.row(r));
  writer.close();
}

MatrixFileWriter::MatrixFileWriter(const std::string& path, std::size_t rows, std::size_t cols)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), rows_(rows), cols_(cols) {
  if (!out_) fail(ErrorCode::kIo, "cannot write " + path);
  detail::ByteWriter header;
  header.bytes(kMagic);
  header.u32(checked_u32(rows, "row count"));
  header.u32(checked_u32(cols, "column count"));
  out_.write(reinterpret_cast<const char*>(header.buffer().data()),
             static_cast<std::streamsize>(header.buffer().size()));
}

void MatrixFileWriter::write_row(std::span<const double> row) {
  if (row.size() != cols_) fail(ErrorCode::kDimensionMismatch, "row width differs from header");
  if (written_ == rows_) fail(ErrorCode::kInvalidArgument, "more rows than announced");
  detail::ByteWriter buf;
  for (double v : row) buf.f32(static_cast<float>(v));
  out_.write(reinterpret_cast<const char*>(buf.buffer().data()),
             static_cast<std::streamsize>(buf.buffer().size()));
  ++written_;
}

void MatrixFileWriter::close() {
  if (written_ != rows_) fail(ErrorCode::kInvalidArgument, "fewer rows written than announced");
  out_.close();
  if (!out_) fail(ErrorCode::kIo, "short write to " + path_);
}

EmbeddingDataset read_dataset(const std::string& emb_path, const std::string& labels_path) {
  EmbeddingDataset data;
  data.h = read_matrix(emb_path);
  auto labels = read_labels(labels_path);
  if (labels.concepts.size() != data.n())
    fail(ErrorCode::kLengthMismatch, labels_path + " has " + std::to_string(labels.concepts.size()) +
                                         " rows, embeddings have " + std::to_string(data.n()));
  data.concepts = std::move(labels.concepts);
  data.task = std::move(labels.task);
  data.validate();
  return data;
}

void write_dataset(const std::string& emb_path, const std::string& labels_path,
                   const EmbeddingDataset& data) {
  data.validate();
  write_matrix(emb_path, data.h);
  std::ofstream out(labels_path, std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + labels_path);
  out << (data.task ? "row_id,concept,task\n" : "row_id,concept\n");
  for (std::size_t i = 0; i < data.n(); ++i) {
    out << i << ',' << data.concepts[i];
    if (data.task) out << ',' << (*data.task)[i];
    out << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "short write to " + labels_path);
}

}  // namespace affsteer
