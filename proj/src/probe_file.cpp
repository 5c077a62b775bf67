#include <cmath>
#include <string_view>

#include "affsteer/error.hpp"
#include "affsteer/probe.hpp"
#include "byte_io.hpp"

namespace affsteer {

namespace {
constexpr std::string_view kMagic = "PRB1";
}

std::vector<std::uint8_t> serialize_probe(const ProbeModel& model) {
  if (model.weights.rows() != model.biases.size())
    fail(ErrorCode::kDimensionMismatch, "probe weights and biases disagree on K");
  detail::ByteWriter out;
  out.bytes(kMagic);
  out.u32(static_cast<std::uint32_t>(model.weights.rows()));
  out.u32(static_cast<std::uint32_t>(model.weights.cols()));
  for (double v : model.biases) out.f64(v);
  for (double v : model.weights.data()) out.f64(v);
  return std::move(out.buffer());
}

ProbeModel deserialize_probe(std::span<const std::uint8_t> bytes) {
  detail::ByteReader in(bytes);
  if (!in.starts_with(kMagic)) fail(ErrorCode::kBadMagic, "not a probe file");
  in.skip(kMagic.size());
  const std::size_t k = in.u32();
  const std::size_t d = in.u32();
  if (in.remaining() != 8 * (k + k * d)) fail(ErrorCode::kMalformedFile, "probe file size mismatch");
  ProbeModel model{Matrix(k, d), Vector(k)};
  auto finite = [](double v) {
    if (!std::isfinite(v)) fail(ErrorCode::kMalformedFile, "non-finite value in probe file");
    return v;
  };
  for (double& v : model.biases) v = finite(in.f64());
  for (double& v : model.weights.data()) v = finite(in.f64());
  return model;
}

void save_probe(const std::string& path, const ProbeModel& model) {
  detail::write_file_bytes(path, serialize_probe(model));
}

ProbeModel load_probe(const std::string& path) { return deserialize_probe(detail::read_file_bytes(path)); }

}  // namespace affsteer
