#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "affsteer/dataset.hpp"
#include "affsteer/matrix.hpp"

namespace affsteer {

// Steer exactly the rows whose concept label is the source concept.
struct OracleLabels {
  friend bool operator==(const OracleLabels&, const OracleLabels&) = default;
};

// Steer rows strictly closer to mu_src than to mu_tgt. Equidistant rows are
// left alone.
struct NearestMean {
  Vector mu_src;
  Vector mu_tgt;
  friend bool operator==(const NearestMean&, const NearestMean&) = default;
};

struct AlwaysApply {
  friend bool operator==(const AlwaysApply&, const AlwaysApply&) = default;
};

using GatePolicy = std::variant<OracleLabels, NearestMean, AlwaysApply>;

// Wire tags used by the map file format.
enum class GateTag : std::uint8_t { kOracleLabels = 0, kNearestMean = 1, kAlwaysApply = 2 };

GateTag gate_tag(const GatePolicy& policy);

bool gate_decide(const GatePolicy& policy, std::span<const double> row,
                 std::optional<int> row_label, int source_concept);

// One byte per row: 1 when the gate selects it.
std::vector<std::uint8_t> gate_mask(const GatePolicy& policy, const EmbeddingDataset& data,
                                    int source_concept);

// Fraction of rows where the gate agrees with (label == source_concept).
double gate_accuracy(const GatePolicy& policy, const EmbeddingDataset& data, int source_concept);

}  // namespace affsteer
