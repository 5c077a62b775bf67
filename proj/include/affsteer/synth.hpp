#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <variant>

#include "affsteer/dataset.hpp"
#include "affsteer/matrix.hpp"

namespace affsteer {

// Task label 1 with probability p for concept-0 rows and 1 - p for
// concept-1 rows.
struct ByConcept {
  double p = 0.5;
};

// Task label 1 iff normal . h > 0 (evaluated on the sampled row).
struct ByHyperplane {
  Vector normal;
};

using TaskRule = std::variant<ByConcept, ByHyperplane>;

struct SynthSpec {
  std::size_t d = 0;
  std::size_t n_per_class = 0;
  std::array<Vector, 2> mu;
  std::array<Matrix, 2> sigma;
  TaskRule task_rule = ByConcept{};
  // With ByConcept, rows get an extra (2y - 1) * task_shift so the task is
  // also encoded in the features. Empty means no shift.
  Vector task_shift;
  std::uint64_t seed = 0;
};

// Concept-0 rows first, then concept-1 rows. h = mu_c [+ (2y-1) shift] +
// sigma_c^{1/2} z with z standard normal. Throws NotPSD.
EmbeddingDataset synth(const SynthSpec& spec);

// Desk-scale analogue of the controlled dialect/sentiment design: concepts
// separated by 4 along axis 0, task signal ±0.25 along axis 1, shared
// anisotropic diagonal noise with variances from 0.5 to 2.0. Needs d >= 2.
SynthSpec controlled_bias_spec(double p, std::uint64_t seed, std::size_t d = 16,
                               std::size_t n_per_class = 2000);

// Two concept clusters in different directions (means 3 e0 and 3 e1) with
// distinct anisotropic covariances; the first two coordinates are rotated in
// concept 1. Task labels come from a hyperplane. Needs d >= 2.
SynthSpec clustered_concepts_spec(std::uint64_t seed, std::size_t d = 8,
                                  std::size_t n_per_class = 4000);

}  // namespace affsteer
