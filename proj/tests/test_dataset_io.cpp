#include <doctest.h>

#include <fstream>
#include <iterator>

#include "affsteer/dataset_io.hpp"
#include "affsteer/random.hpp"
#include "test_util.hpp"

using namespace affsteer;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

EmbeddingDataset random_dataset(std::size_t n, std::size_t d, bool with_task) {
  Rng rng(9);
  EmbeddingDataset data;
  data.h = Matrix(n, d);
  for (double& v : data.h.data()) v = static_cast<double>(static_cast<float>(rng.normal()));
  data.concepts.resize(n);
  for (std::size_t i = 0; i < n; ++i) data.concepts[i] = static_cast<int>(i % 2);
  if (with_task) {
    data.task = std::vector<int>(n);
    for (std::size_t i = 0; i < n; ++i) (*data.task)[i] = static_cast<int>(i % 3);
  }
  return data;
}

}  // namespace

TEST_CASE("dataset round-trip at float32 precision") {
  testing::TempDir dir("io");
  for (bool with_task : {false, true}) {
    const auto data = random_dataset(37, 5, with_task);
    write_dataset(dir.file("d.emb"), dir.file("d.csv"), data);
    const auto back = read_dataset(dir.file("d.emb"), dir.file("d.csv"));
    CHECK(back.h == data.h);
    CHECK(back.concepts == data.concepts);
    CHECK(back.task == data.task);
  }
}

TEST_CASE("double values are rounded to float32 on write") {
  testing::TempDir dir("round");
  const Matrix m = Matrix::from_rows({{0.1, 1.0 / 3.0}});
  write_matrix(dir.file("m.emb"), m);
  const Matrix back = read_matrix(dir.file("m.emb"));
  CHECK(back(0, 0) == static_cast<double>(0.1f));
  CHECK(back(0, 1) == static_cast<double>(static_cast<float>(1.0 / 3.0)));
}

TEST_CASE("labels CSV parsing") {
  testing::TempDir dir("csv");
  const auto data = random_dataset(3, 2, false);
  write_matrix(dir.file("x.emb"), data.h);
  SUBCASE("without header") {
    write_text(dir.file("l.csv"), "0,1\n1,0\n2,1\n");
    const auto d = read_dataset(dir.file("x.emb"), dir.file("l.csv"));
    CHECK(d.concepts == std::vector<int>{1, 0, 1});
    CHECK_FALSE(d.has_task());
  }
  SUBCASE("header and task column") {
    write_text(dir.file("l.csv"), "row_id,concept,task\n0,1,2\n1,0,0\n2,1,1\n");
    const auto d = read_dataset(dir.file("x.emb"), dir.file("l.csv"));
    CHECK(*d.task == std::vector<int>{2, 0, 1});
  }
  SUBCASE("too few label rows") {
    write_text(dir.file("l.csv"), "0,1\n1,0\n");
    CHECK_ERROR_CODE(read_dataset(dir.file("x.emb"), dir.file("l.csv")), ErrorCode::kLengthMismatch);
  }
  SUBCASE("bad rows") {
    for (const char* text : {"0,2\n1,0\n2,1\n", "0,1\n2,0\n1,1\n", "0,1\n1,x\n2,1\n", "0,1,1\n1,0\n2,1\n",
                             "0\n1\n2\n", "0,1\n1,0\n2,1,-1\n"}) {
      write_text(dir.file("l.csv"), text);
      CHECK_ERROR_CODE(read_dataset(dir.file("x.emb"), dir.file("l.csv")), ErrorCode::kMalformedFile);
    }
  }
}

TEST_CASE("embedding file errors") {
  testing::TempDir dir("emb");
  write_text(dir.file("bad.emb"), "XXXX\x01\0\0\0");
  CHECK_ERROR_CODE(read_matrix(dir.file("bad.emb")), ErrorCode::kBadMagic);
  write_matrix(dir.file("ok.emb"), Matrix::from_rows({{1, 2}, {3, 4}}));
  {
    std::ifstream in(dir.file("ok.emb"), std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::ofstream(dir.file("short.emb"), std::ios::binary) << bytes.substr(0, bytes.size() - 2);
    std::ofstream(dir.file("hdr.emb"), std::ios::binary) << bytes.substr(0, 6);
  }
  CHECK_ERROR_CODE(read_matrix(dir.file("short.emb")), ErrorCode::kMalformedFile);
  CHECK_ERROR_CODE(read_matrix(dir.file("hdr.emb")), ErrorCode::kMalformedFile);
  CHECK_ERROR_CODE(read_matrix(dir.file("missing.emb")), ErrorCode::kIo);
}

TEST_CASE("streaming writer") {
  testing::TempDir dir("stream");
  MatrixFileWriter w(dir.file("s.emb"), 2, 3);
  w.write_row(std::vector<double>{1, 2, 3});
  CHECK_ERROR_CODE(w.write_row(std::vector<double>{1, 2}), ErrorCode::kDimensionMismatch);
  CHECK_ERROR_CODE(w.close(), ErrorCode::kInvalidArgument);
  w.write_row(std::vector<double>{4, 5, 6});
  w.close();
  CHECK(read_matrix(dir.file("s.emb")) == Matrix::from_rows({{1, 2, 3}, {4, 5, 6}}));
}
