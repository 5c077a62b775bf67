#pragma once

#include <cstddef>
#include <cstdint>

#include "affsteer/dataset.hpp"
#include "affsteer/gate.hpp"
#include "affsteer/matrix.hpp"
#include "affsteer/moments.hpp"

namespace affsteer {

// Diagonal regularization defaults for de-biasing (classification) fits and
// de-toxification (generation) fits.
inline constexpr double kClassificationLambda = 1e-5;
inline constexpr double kGenerationLambda = 1e-7;

// h -> w h + b. `w` is square for steering maps and k x d for PCA.
struct AffineMap {
  Matrix w;
  Vector b;

  std::size_t in_dim() const noexcept { return w.cols(); }
  std::size_t out_dim() const noexcept { return w.rows(); }
  Vector operator()(std::span<const double> h) const;

  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

enum class SteeringKind : std::uint8_t { kMeanMatch = 0, kMimic = 1, kLeace = 2 };

const char* kind_name(SteeringKind kind);

struct SteeringFunction {
  AffineMap map;
  SteeringKind kind = SteeringKind::kMeanMatch;
  int source_concept = 0;  // unused by LEACE
  int target_concept = 1;  // unused by LEACE
  GatePolicy gate = OracleLabels{};

  std::size_t dim() const noexcept { return map.w.rows(); }
  friend bool operator==(const SteeringFunction&, const SteeringFunction&) = default;
};

// Translation by mu_tgt - mu_src (w = I).
SteeringFunction fit_mean_match(const ConceptMoments& m, int src, int tgt);

// Mean and covariance matching (the Gaussian optimal-transport map):
//   w = S0^{-1/2} (S0^{1/2} S1 S0^{1/2})^{1/2} S0^{-1/2},  b = mu_tgt - w mu_src
// with S0, S1 the source/target covariances plus lambda * I.
// Throws RankDeficient if a regularized covariance is singular.
SteeringFunction fit_mimic(const ConceptMoments& m, int src, int tgt,
                           double lambda = kClassificationLambda);

// Least-squares concept erasure for a binary concept:
//   w = I - S^{1/2} P S^{+1/2},  b = mu - w mu
// where S is the regularized global covariance, S^{+1/2} its whitening
// transform and P projects onto S^{+1/2} Cov(h, c).
// Throws DegenerateConcept when Cov(h, c) vanishes.
SteeringFunction fit_leace(const ConceptMoments& m, double lambda = kClassificationLambda);

// Returns a new dataset; rows chosen by the gate are mapped, the rest copied.
// LEACE maps every row. Labels are carried over.
EmbeddingDataset apply(const SteeringFunction& f, const EmbeddingDataset& data);

// Squared 2-Wasserstein distance between N(mu_a, sigma_a) and N(mu_b, sigma_b).
double gaussian_w2_squared(const Vector& mu_a, const Matrix& sigma_a, const Vector& mu_b,
                           const Matrix& sigma_b);

// Centers by the global mean and projects onto the top-k covariance
// eigenvectors: w is k x d with orthonormal rows, b = -w mu.
AffineMap pca_fit(const EmbeddingDataset& data, std::size_t k);
EmbeddingDataset pca_apply(const AffineMap& pca, const EmbeddingDataset& data);

}  // namespace affsteer
