#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "affsteer/map_file.hpp"
#include "affsteer/moments.hpp"
#include "affsteer/probe.hpp"
#include "affsteer/random.hpp"
#include "test_util.hpp"

using namespace affsteer;

namespace {

std::vector<SteeringFunction> fitted_maps() {
  Rng rng(1);
  const std::size_t d = 5;
  const auto m = moments_from_gaussian_spec(random_vector(rng, d), random_psd(rng, d, 8, 0.1),
                                            random_vector(rng, d), random_psd(rng, d, 8, 0.1), {0.4, 0.6});
  auto mm = fit_mean_match(m, 1, 0);
  auto mimic = fit_mimic(m, 0, 1);
  mimic.gate = NearestMean{m[0].mean, m[1].mean};
  auto always = fit_mimic(m, 1, 0);
  always.gate = AlwaysApply{};
  return {mm, mimic, always, fit_leace(m)};
}

}  // namespace

TEST_CASE("map round-trip is bitwise") {
  for (const auto& f : fitted_maps()) {
    const auto bytes = serialize_map(f);
    CHECK(deserialize_map(bytes) == f);
  }
  testing::TempDir dir("map");
  const auto f = fitted_maps()[1];
  save_map(dir.file("m.bin"), f);
  CHECK(load_map(dir.file("m.bin")) == f);
}

TEST_CASE("map header layout") {
  const auto f = fitted_maps()[1];
  const auto bytes = serialize_map(f);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "AFM1");
  CHECK(bytes[4] == 1);  // mimic
  CHECK(bytes[5] == 1);  // nearest mean
  CHECK(bytes[6] == 5);
  CHECK(bytes.size() == 4 + 2 + 4 + 8 * (5 + 25 + 10) + 2);
}

TEST_CASE("malformed map files") {
  const auto good = serialize_map(fitted_maps()[0]);
  for (std::size_t cut : {0ul, 3ul, 6ul, 9ul, good.size() / 2, good.size() - 1}) {
    std::vector<std::uint8_t> truncated(good.begin(), good.begin() + static_cast<long>(cut));
    CHECK_ERROR_CODE(deserialize_map(truncated), ErrorCode::kMalformedFile);
  }
  auto trailing = good;
  trailing.push_back(0);
  CHECK_ERROR_CODE(deserialize_map(trailing), ErrorCode::kMalformedFile);
  auto magic = good;
  magic[0] = 'X';
  CHECK_ERROR_CODE(deserialize_map(magic), ErrorCode::kMalformedFile);
  auto kind = good;
  kind[4] = 9;
  CHECK_ERROR_CODE(deserialize_map(kind), ErrorCode::kVersionMismatch);
  auto gate = good;
  gate[5] = 7;
  CHECK_ERROR_CODE(deserialize_map(gate), ErrorCode::kVersionMismatch);
  auto nan = good;
  const double q = std::numeric_limits<double>::quiet_NaN();
  std::memcpy(nan.data() + 10, &q, 8);
  CHECK_ERROR_CODE(deserialize_map(nan), ErrorCode::kMalformedFile);
  CHECK_ERROR_CODE(load_map("/nonexistent/dir/map.bin"), ErrorCode::kIo);
}

TEST_CASE("probe model file") {
  ProbeModel model{Matrix::from_rows({{1, 2, 3}, {-1, 0.5, 1e-300}}), {0.25, -4}};
  const auto bytes = serialize_probe(model);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "PRB1");
  CHECK(bytes.size() == 4 + 8 + 8 * (2 + 6));
  const auto back = deserialize_probe(bytes);
  CHECK(back.weights == model.weights);
  CHECK(back.biases == model.biases);
  auto bad = bytes;
  bad[0] = 'Q';
  CHECK_ERROR_CODE(deserialize_probe(bad), ErrorCode::kBadMagic);
  bad = bytes;
  bad.pop_back();
  CHECK_ERROR_CODE(deserialize_probe(bad), ErrorCode::kMalformedFile);
  testing::TempDir dir("probe");
  save_probe(dir.file("p.bin"), model);
  CHECK(load_probe(dir.file("p.bin")).weights == model.weights);
}
