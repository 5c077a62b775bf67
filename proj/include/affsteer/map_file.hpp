#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "affsteer/transforms.hpp"

namespace affsteer {

// Steering map file, all integers and floats little-endian:
//
//   "AFM1"             magic
//   u8                 kind (0 mean-match, 1 mimic, 2 leace)
//   u8                 gate tag (0 oracle labels, 1 nearest mean, 2 always)
//   u32                d
//   f64[d]             b
//   f64[d*d]           w, row-major
//   f64[2d]            gate payload, nearest-mean only: mu_src then mu_tgt
//   u8, u8             source concept, target concept
std::vector<std::uint8_t> serialize_map(const SteeringFunction& f);

// Throws MalformedFile (bad magic, truncation, trailing bytes, non-finite
// entries) or VersionMismatch (unknown kind or gate tag).
SteeringFunction deserialize_map(std::span<const std::uint8_t> bytes);

void save_map(const std::string& path, const SteeringFunction& f);
SteeringFunction load_map(const std::string& path);

}  // namespace affsteer
