#pragma once

#include "affsteer/matrix.hpp"

namespace affsteer::linalg {

// Relative eigenvalue tolerance for PSD checks: eigenvalues in
// [-tol * lambda_max, 0) count as zero, anything lower is an error.
inline constexpr double kDefaultPsdTol = 1e-10;

struct EigenDecomp {
  Vector eigenvalues;  // descending; ties keep original diagonal order
  Matrix eigenvectors;  // orthonormal columns, column k pairs with eigenvalues[k]
};

bool is_symmetric(const Matrix& a);

// Cyclic Jacobi rotations. Converges when the off-diagonal Frobenius norm
// drops to 1e-12 * ||a||_F, capped at 100 sweeps. Throws NotSymmetric.
EigenDecomp sym_eig(const Matrix& a);

// Both roots from one decomposition. `inv_sqrt` is the pseudoinverse square
// root: eigenvalues at or below tol * lambda_max map to zero.
struct PsdRoots {
  Matrix sqrt;
  Matrix inv_sqrt;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};
PsdRoots psd_roots(const Matrix& a, double tol = kDefaultPsdTol);

Matrix psd_sqrt(const Matrix& a, double tol = kDefaultPsdTol);
Matrix psd_inv_sqrt(const Matrix& a, double tol = kDefaultPsdTol);

// a + lambda * I
Matrix regularize(const Matrix& a, double lambda);

}  // namespace affsteer::linalg
