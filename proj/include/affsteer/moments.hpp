#pragma once

#include <array>
#include <cstddef>

#include "affsteer/dataset.hpp"
#include "affsteer/matrix.hpp"

namespace affsteer {

struct ClassMoments {
  std::size_t count = 0;
  Vector mean;
  Matrix second_moment;  // E[h hᵀ | c]
  Matrix covariance;     // second_moment - mean meanᵀ
};

// Concept-conditional and global moments. All estimators are population
// (divide-by-n) estimators.
struct ConceptMoments {
  std::array<ClassMoments, 2> cls;
  std::array<double, 2> weight{};  // P(c)
  Vector mean;
  Matrix covariance;
  Vector cross_cov;  // Cov(h, c); the concept is binary so this is a vector

  std::size_t dim() const noexcept { return mean.size(); }
  const ClassMoments& operator[](int c) const { return cls[static_cast<std::size_t>(c)]; }
};

// Throws MissingConcept when a concept value has no rows.
ConceptMoments fit_moments(const EmbeddingDataset& data);

// Exact moments of the two-component mixture with the given weights
// (nonnegative, summing to one). Throws NotPSD.
ConceptMoments moments_from_gaussian_spec(const Vector& mu0, const Matrix& sigma0,
                                          const Vector& mu1, const Matrix& sigma1,
                                          std::array<double, 2> weights);

// Population mean and covariance of the rows of h (used by PCA and oracles).
Vector row_mean(const Matrix& h);
Matrix row_covariance(const Matrix& h, const Vector& mean);

}  // namespace affsteer
