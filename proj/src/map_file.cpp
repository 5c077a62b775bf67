#include "affsteer/map_file.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

#include "affsteer/error.hpp"
#include "byte_io.hpp"

namespace affsteer {

namespace detail {

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "short write to " + path);
}

}  // namespace detail

namespace {
constexpr std::string_view kMagic = "AFM1";

double finite_or_fail(double v) {
  if (!std::isfinite(v)) fail(ErrorCode::kMalformedFile, "non-finite value in map file");
  return v;
}
}  // namespace

std::vector<std::uint8_t> serialize_map(const SteeringFunction& f) {
  const std::size_t d = f.map.b.size();
  if (!f.map.w.square() || f.map.w.rows() != d)
    fail(ErrorCode::kDimensionMismatch, "steering map must be square");
  detail::ByteWriter out;
  out.bytes(kMagic);
  out.u8(static_cast<std::uint8_t>(f.kind));
  out.u8(static_cast<std::uint8_t>(gate_tag(f.gate)));
  out.u32(static_cast<std::uint32_t>(d));
  for (double v : f.map.b) out.f64(v);
  for (double v : f.map.w.data()) out.f64(v);
  if (const auto* g = std::get_if<NearestMean>(&f.gate)) {
    if (g->mu_src.size() != d || g->mu_tgt.size() != d)
      fail(ErrorCode::kDimensionMismatch, "nearest-mean gate dimension");
    for (double v : g->mu_src) out.f64(v);
    for (double v : g->mu_tgt) out.f64(v);
  }
  out.u8(static_cast<std::uint8_t>(f.source_concept));
  out.u8(static_cast<std::uint8_t>(f.target_concept));
  return std::move(out.buffer());
}

SteeringFunction deserialize_map(std::span<const std::uint8_t> bytes) {
  detail::ByteReader in(bytes);
  if (!in.starts_with(kMagic)) fail(ErrorCode::kMalformedFile, "missing AFM1 magic");
  in.skip(kMagic.size());

  SteeringFunction f;
  const std::uint8_t kind = in.u8();
  if (kind > 2) fail(ErrorCode::kVersionMismatch, "unknown map kind " + std::to_string(kind));
  f.kind = static_cast<SteeringKind>(kind);
  const std::uint8_t tag = in.u8();
  if (tag > 2) fail(ErrorCode::kVersionMismatch, "unknown gate tag " + std::to_string(tag));

  const std::size_t d = in.u32();
  if (d == 0) fail(ErrorCode::kMalformedFile, "map dimension is zero");
  const std::size_t payload = tag == 1 ? 2 * d : 0;
  if (in.remaining() != 8 * (d + d * d + payload) + 2)
    fail(ErrorCode::kMalformedFile, "map size does not match its dimension");

  f.map.b.resize(d);
  for (double& v : f.map.b) v = finite_or_fail(in.f64());
  f.map.w = Matrix(d, d);
  for (double& v : f.map.w.data()) v = finite_or_fail(in.f64());

  switch (static_cast<GateTag>(tag)) {
    case GateTag::kOracleLabels: f.gate = OracleLabels{}; break;
    case GateTag::kAlwaysApply: f.gate = AlwaysApply{}; break;
    case GateTag::kNearestMean: {
      NearestMean g{Vector(d), Vector(d)};
      for (double& v : g.mu_src) v = finite_or_fail(in.f64());
      for (double& v : g.mu_tgt) v = finite_or_fail(in.f64());
      f.gate = std::move(g);
      break;
    }
  }
  f.source_concept = in.u8();
  f.target_concept = in.u8();
  if (f.source_concept > 1 || f.target_concept > 1)
    fail(ErrorCode::kMalformedFile, "concept identities must be 0 or 1");
  return f;
}

void save_map(const std::string& path, const SteeringFunction& f) {
  detail::write_file_bytes(path, serialize_map(f));
}

SteeringFunction load_map(const std::string& path) {
  return deserialize_map(detail::read_file_bytes(path));
}

}  // namespace affsteer
