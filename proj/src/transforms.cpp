#include "affsteer/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "affsteer/error.hpp"
#include "affsteer/kernels.hpp"
#include "affsteer/linalg.hpp"

namespace affsteer {

namespace {

void check_concepts(int src, int tgt) {
  if ((src != 0 && src != 1) || (tgt != 0 && tgt != 1) || src == tgt)
    fail(ErrorCode::kInvalidArgument, "source and target concepts must be distinct values in {0,1}");
}

void check_moments(const ConceptMoments& m) {
  if (m.dim() == 0 || m[0].mean.size() != m.dim() || m[1].mean.size() != m.dim())
    fail(ErrorCode::kMissingConcept, "moments must cover both concepts");
}

// Singular means the smallest eigenvalue is at roundoff level relative to the
// largest. The same threshold is the inverse-root cutoff so that every
// accepted eigenvalue is actually inverted.
constexpr double kRankTol = 1e-14;

linalg::PsdRoots full_rank_roots(const Matrix& s, const char* what) {
  auto roots = linalg::psd_roots(s, kRankTol);
  if (!(roots.min_eigenvalue > kRankTol * roots.max_eigenvalue) ||
      !(roots.max_eigenvalue > 0.0))
    fail(ErrorCode::kRankDeficient,
         std::string(what) + " covariance is singular after regularization; raise lambda");
  return roots;
}

}  // namespace

Vector AffineMap::operator()(std::span<const double> h) const {
  Vector out = matvec(w, h);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

const char* kind_name(SteeringKind kind) {
  switch (kind) {
    case SteeringKind::kMeanMatch: return "mean-match";
    case SteeringKind::kMimic: return "mimic";
    case SteeringKind::kLeace: return "leace";
  }
  return "unknown";
}

SteeringFunction fit_mean_match(const ConceptMoments& m, int src, int tgt) {
  check_concepts(src, tgt);
  check_moments(m);
  SteeringFunction f;
  f.kind = SteeringKind::kMeanMatch;
  f.source_concept = src;
  f.target_concept = tgt;
  f.map.w = Matrix::identity(m.dim());
  f.map.b = m[tgt].mean - m[src].mean;
  return f;
}

SteeringFunction fit_mimic(const ConceptMoments& m, int src, int tgt, double lambda) {
  check_concepts(src, tgt);
  check_moments(m);
  const Matrix s0 = linalg::regularize(m[src].covariance, lambda);
  const Matrix s1 = linalg::regularize(m[tgt].covariance, lambda);
  const auto r0 = full_rank_roots(s0, "source");
  (void)full_rank_roots(s1, "target");

  const Matrix middle = symmetrize(r0.sqrt * s1 * r0.sqrt);
  const Matrix middle_sqrt = linalg::psd_sqrt(middle);
  SteeringFunction f;
  f.kind = SteeringKind::kMimic;
  f.source_concept = src;
  f.target_concept = tgt;
  f.map.w = symmetrize(r0.inv_sqrt * middle_sqrt * r0.inv_sqrt);
  f.map.b = m[tgt].mean - matvec(f.map.w, m[src].mean);
  return f;
}

SteeringFunction fit_leace(const ConceptMoments& m, double lambda) {
  check_moments(m);
  const double scale = norm(m.mean) + std::sqrt(std::max(0.0, trace(m.covariance)));
  if (norm(m.cross_cov) <= 1e-12 * scale + 1e-300)
    fail(ErrorCode::kDegenerateConcept, "concept has no linear signal (cross-covariance is zero)");

  const Matrix s = linalg::regularize(m.covariance, lambda);
  const auto roots = linalg::psd_roots(s);
  // Whitening is S^{+1/2}. With v = S^{+1/2} Σ_xz and P = v vᵀ / |v|²,
  // S^{1/2} P S^{+1/2} = u tᵀ / |v|² where u = S^{1/2} v and t = S^{+1/2} v.
  const Vector v = matvec(roots.inv_sqrt, m.cross_cov);
  const double vv = dot(v, v);
  if (!(vv > 0.0))
    fail(ErrorCode::kDegenerateConcept, "whitened cross-covariance is zero");
  const Vector u = matvec(roots.sqrt, v);
  const Vector t = matvec(roots.inv_sqrt, v);

  const std::size_t d = m.dim();
  SteeringFunction f;
  f.kind = SteeringKind::kLeace;
  f.gate = AlwaysApply{};
  f.source_concept = 0;
  f.target_concept = 0;
  f.map.w = Matrix::identity(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) f.map.w(i, j) -= u[i] * t[j] / vv;
  f.map.b = m.mean - matvec(f.map.w, m.mean);
  return f;
}

EmbeddingDataset apply(const SteeringFunction& f, const EmbeddingDataset& data) {
  if (!f.map.w.square() || f.map.w.cols() != data.d() || f.map.b.size() != data.d())
    fail(ErrorCode::kDimensionMismatch, "map dimension " + std::to_string(f.map.w.cols()) +
                                            " vs data dimension " + std::to_string(data.d()));
  std::vector<std::uint8_t> mask;
  if (f.kind == SteeringKind::kLeace)
    mask.assign(data.n(), 1);
  else
    mask = gate_mask(f.gate, data, f.source_concept);

  EmbeddingDataset out;
  out.h = Matrix(data.n(), data.d());
  out.concepts = data.concepts;
  out.task = data.task;
  kernels::parallel::affine_rows(f.map.w, f.map.b, data.h, mask, out.h);
  return out;
}

double gaussian_w2_squared(const Vector& mu_a, const Matrix& sigma_a, const Vector& mu_b,
                           const Matrix& sigma_b) {
  if (mu_a.size() != mu_b.size() || sigma_a.rows() != mu_a.size() || sigma_b.rows() != mu_b.size())
    fail(ErrorCode::kDimensionMismatch, "gaussian dimensions disagree");
  const Matrix root_a = linalg::psd_sqrt(sigma_a);
  (void)linalg::psd_sqrt(sigma_b);
  const Matrix cross = linalg::psd_sqrt(symmetrize(root_a * sigma_b * root_a));
  const double value =
      squared_distance(mu_a, mu_b) + trace(sigma_a) + trace(sigma_b) - 2.0 * trace(cross);
  return std::max(0.0, value);
}

AffineMap pca_fit(const EmbeddingDataset& data, std::size_t k) {
  if (k < 1 || k > data.d())
    fail(ErrorCode::kBadRank, "PCA rank " + std::to_string(k) + " outside [1, " +
                                  std::to_string(data.d()) + "]");
  const Vector mu = row_mean(data.h);
  const auto eig = linalg::sym_eig(row_covariance(data.h, mu));
  AffineMap map;
  map.w = Matrix(k, data.d());
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < data.d(); ++j) map.w(r, j) = eig.eigenvectors(j, r);
  map.b = scaled(-1.0, matvec(map.w, mu));
  return map;
}

EmbeddingDataset pca_apply(const AffineMap& pca, const EmbeddingDataset& data) {
  if (pca.in_dim() != data.d())
    fail(ErrorCode::kDimensionMismatch, "PCA input dimension differs from data");
  EmbeddingDataset out;
  out.h = data.h * transpose(pca.w);
  for (std::size_t r = 0; r < out.h.rows(); ++r) {
    auto row = out.h.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += pca.b[j];
  }
  out.concepts = data.concepts;
  out.task = data.task;
  return out;
}

}  // namespace affsteer
