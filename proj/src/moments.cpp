#include "affsteer/moments.hpp"

#include <cmath>
#include <string>

#include "affsteer/error.hpp"
#include "affsteer/kernels.hpp"
#include "affsteer/linalg.hpp"

namespace affsteer {

namespace {

Vector mean_of_rows(const Matrix& h, std::span<const std::size_t> rows) {
  Vector sum(h.cols(), 0.0);
  for (std::size_t r : rows) {
    auto x = h.row(r);
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += x[j];
  }
  for (double& v : sum) v /= static_cast<double>(rows.size());
  return sum;
}

// (1/|rows|) Σ (h_r - mean)(h_r - mean)ᵀ, summed in row order per entry.
Matrix covariance_of_rows(const Matrix& h, std::span<const std::size_t> rows, const Vector& mean) {
  const std::size_t d = h.cols();
  Matrix centered_t(d, rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto x = h.row(rows[k]);
    for (std::size_t j = 0; j < d; ++j) centered_t(j, k) = x[j] - mean[j];
  }
  Matrix cov = kernels::parallel::gram(centered_t);
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (double& v : cov.data()) v *= inv_n;
  return cov;
}

ClassMoments class_moments_from(const Vector& mean, const Matrix& cov, std::size_t count) {
  ClassMoments m;
  m.count = count;
  m.mean = mean;
  m.covariance = cov;
  m.second_moment = cov + outer(mean, mean);
  return m;
}

}  // namespace

Vector row_mean(const Matrix& h) {
  std::vector<std::size_t> all(h.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return mean_of_rows(h, all);
}

Matrix row_covariance(const Matrix& h, const Vector& mean) {
  std::vector<std::size_t> all(h.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return covariance_of_rows(h, all, mean);
}

ConceptMoments fit_moments(const EmbeddingDataset& data) {
  data.validate();
  const std::array<std::vector<std::size_t>, 2> rows{rows_with_concept(data, 0),
                                                      rows_with_concept(data, 1)};
  for (int c = 0; c < 2; ++c)
    if (rows[c].empty())
      fail(ErrorCode::kMissingConcept, "no rows with concept " + std::to_string(c));

  const double n = static_cast<double>(data.n());
  ConceptMoments m;
  for (int c = 0; c < 2; ++c) {
    Vector mean = mean_of_rows(data.h, rows[c]);
    Matrix cov = covariance_of_rows(data.h, rows[c], mean);
    m.cls[c] = class_moments_from(mean, cov, rows[c].size());
    m.weight[c] = static_cast<double>(rows[c].size()) / n;
  }

  const std::size_t d = data.d();
  const double n0 = static_cast<double>(m.cls[0].count);
  const double n1 = static_cast<double>(m.cls[1].count);
  m.mean.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) m.mean[j] = (n0 * m.cls[0].mean[j] + n1 * m.cls[1].mean[j]) / n;

  std::vector<std::size_t> all(data.n());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  m.covariance = covariance_of_rows(data.h, all, m.mean);

  // E[h c] - E[h] E[c] = P(c=1) (mu_1 - mu)
  m.cross_cov.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) m.cross_cov[j] = m.weight[1] * (m.cls[1].mean[j] - m.mean[j]);
  return m;
}

ConceptMoments moments_from_gaussian_spec(const Vector& mu0, const Matrix& sigma0,
                                          const Vector& mu1, const Matrix& sigma1,
                                          std::array<double, 2> weights) {
  const std::size_t d = mu0.size();
  if (mu1.size() != d || sigma0.rows() != d || sigma1.rows() != d || !sigma0.square() ||
      !sigma1.square())
    fail(ErrorCode::kDimensionMismatch, "gaussian spec dimensions disagree");
  if (!(weights[0] >= 0.0 && weights[1] >= 0.0) ||
      std::abs(weights[0] + weights[1] - 1.0) > 1e-12)
    fail(ErrorCode::kInvalidArgument, "mixture weights must be nonnegative and sum to 1");
  // Validates symmetry and PSD.
  (void)linalg::psd_sqrt(sigma0);
  (void)linalg::psd_sqrt(sigma1);

  ConceptMoments m;
  m.cls[0] = class_moments_from(mu0, sigma0, 0);
  m.cls[1] = class_moments_from(mu1, sigma1, 0);
  m.weight = weights;
  m.mean.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) m.mean[j] = weights[0] * mu0[j] + weights[1] * mu1[j];
  m.covariance = Matrix(d, d);
  for (int c = 0; c < 2; ++c) {
    if (weights[c] == 0.0) continue;
    const Vector delta = m.cls[c].mean - m.mean;
    m.covariance = m.covariance + weights[c] * (m.cls[c].covariance + outer(delta, delta));
  }
  m.covariance = symmetrize(m.covariance);
  m.cross_cov.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) m.cross_cov[j] = weights[1] * (mu1[j] - m.mean[j]);
  return m;
}

}  // namespace affsteer
