#include "affsteer/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "affsteer/error.hpp"

namespace affsteer::linalg {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-12;

double off_diagonal_norm(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

// Applies the rotation that zeroes m(p, q) to m (both sides) and v (right).
void rotate(Matrix& m, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = m(p, q);
  const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const double mkp = m(k, p);
    const double mkq = m(k, q);
    m(k, p) = c * mkp - s * mkq;
    m(k, q) = s * mkp + c * mkq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double mpk = m(p, k);
    const double mqk = m(q, k);
    m(p, k) = c * mpk - s * mqk;
    m(q, k) = s * mpk + c * mqk;
  }
  m(p, q) = 0.0;
  m(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

// v * diag(f(lambda)) * vᵀ
template <class F>
Matrix spectral_map(const EigenDecomp& e, F f) {
  const std::size_t n = e.eigenvalues.size();
  Matrix scaled_v = e.eigenvectors;
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.eigenvalues[k]);
    for (std::size_t i = 0; i < n; ++i) scaled_v(i, k) *= fk;
  }
  return symmetrize(scaled_v * transpose(e.eigenvectors));
}

double eigen_scale(const EigenDecomp& e) {
  double s = 0.0;
  for (double l : e.eigenvalues) s = std::max(s, std::abs(l));
  return s;
}

void check_psd(const EigenDecomp& e, double tol) {
  const double floor = -tol * eigen_scale(e);
  const double lowest = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
  if (lowest < floor) {
    std::ostringstream msg;
    msg << "eigenvalue " << lowest << " below tolerance " << floor;
    fail(ErrorCode::kNotPSD, msg.str());
  }
}

}  // namespace

bool is_symmetric(const Matrix& a) {
  if (!a.square()) return false;
  const double bound = 1e-12 * std::max(1.0, max_abs(a));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (!(std::abs(a(i, j) - a(j, i)) <= bound)) return false;
  return true;
}

EigenDecomp sym_eig(const Matrix& a) {
  if (!is_symmetric(a)) fail(ErrorCode::kNotSymmetric, "sym_eig requires a symmetric matrix");
  const std::size_t n = a.rows();
  Matrix m = symmetrize(a);
  Matrix v = Matrix::identity(n);
  const double target = kOffDiagonalTol * frobenius_norm(m);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(m) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (m(p, q) != 0.0) rotate(m, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return m(x, x) > m(y, y); });

  EigenDecomp out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = m(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

PsdRoots psd_roots(const Matrix& a, double tol) {
  const EigenDecomp e = sym_eig(a);
  check_psd(e, tol);
  const double cutoff = tol * eigen_scale(e);
  PsdRoots roots;
  roots.sqrt = spectral_map(e, [](double l) { return l > 0.0 ? std::sqrt(l) : 0.0; });
  roots.inv_sqrt = spectral_map(e, [cutoff](double l) { return l > cutoff ? 1.0 / std::sqrt(l) : 0.0; });
  roots.max_eigenvalue = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.front();
  roots.min_eigenvalue = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
  return roots;
}

Matrix psd_sqrt(const Matrix& a, double tol) {
  const EigenDecomp e = sym_eig(a);
  check_psd(e, tol);
  return spectral_map(e, [](double l) { return l > 0.0 ? std::sqrt(l) : 0.0; });
}

Matrix psd_inv_sqrt(const Matrix& a, double tol) {
  const EigenDecomp e = sym_eig(a);
  check_psd(e, tol);
  const double cutoff = tol * eigen_scale(e);
  return spectral_map(e, [cutoff](double l) { return l > cutoff ? 1.0 / std::sqrt(l) : 0.0; });
}

Matrix regularize(const Matrix& a, double lambda) {
  if (!a.square()) fail(ErrorCode::kDimensionMismatch, "regularize needs a square matrix");
  if (!(lambda >= 0.0)) fail(ErrorCode::kInvalidArgument, "lambda must be nonnegative");
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) out(i, i) += lambda;
  return out;
}

}  // namespace affsteer::linalg
