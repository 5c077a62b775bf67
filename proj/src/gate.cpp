#include "affsteer/gate.hpp"

#include "affsteer/error.hpp"

namespace affsteer {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

GateTag gate_tag(const GatePolicy& policy) {
  return std::visit(Overloaded{[](const OracleLabels&) { return GateTag::kOracleLabels; },
                               [](const NearestMean&) { return GateTag::kNearestMean; },
                               [](const AlwaysApply&) { return GateTag::kAlwaysApply; }},
                    policy);
}

bool gate_decide(const GatePolicy& policy, std::span<const double> row,
                 std::optional<int> row_label, int source_concept) {
  return std::visit(
      Overloaded{
          [&](const OracleLabels&) {
            if (!row_label) fail(ErrorCode::kMissingLabel, "oracle gate needs a concept label");
            return *row_label == source_concept;
          },
          [&](const NearestMean& g) {
            if (g.mu_src.size() != row.size() || g.mu_tgt.size() != row.size())
              fail(ErrorCode::kDimensionMismatch, "nearest-mean gate dimension");
            return squared_distance(row, g.mu_src) < squared_distance(row, g.mu_tgt);
          },
          [](const AlwaysApply&) { return true; }},
      policy);
}

std::vector<std::uint8_t> gate_mask(const GatePolicy& policy, const EmbeddingDataset& data,
                                    int source_concept) {
  std::vector<std::uint8_t> mask(data.n());
  const bool has_labels = data.concepts.size() == data.n();
  for (std::size_t r = 0; r < data.n(); ++r) {
    std::optional<int> label;
    if (has_labels) label = data.concepts[r];
    mask[r] = gate_decide(policy, data.h.row(r), label, source_concept) ? 1 : 0;
  }
  return mask;
}

double gate_accuracy(const GatePolicy& policy, const EmbeddingDataset& data, int source_concept) {
  if (data.concepts.size() != data.n() || data.n() == 0)
    fail(ErrorCode::kMissingLabel, "gate accuracy needs concept labels");
  const auto mask = gate_mask(policy, data, source_concept);
  std::size_t agree = 0;
  for (std::size_t r = 0; r < data.n(); ++r)
    agree += (mask[r] != 0) == (data.concepts[r] == source_concept) ? 1 : 0;
  return static_cast<double>(agree) / static_cast<double>(data.n());
}

}  // namespace affsteer
