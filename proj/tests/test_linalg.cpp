#include <doctest.h>

#include <cmath>

#include "affsteer/linalg.hpp"
#include "affsteer/random.hpp"
#include "test_util.hpp"

using namespace affsteer;
using namespace affsteer::linalg;
using affsteer::testing::rel_frob;

namespace {

Matrix reconstruct(const EigenDecomp& e) {
  return e.eigenvectors * Matrix::diagonal(e.eigenvalues) * transpose(e.eigenvectors);
}

}  // namespace

TEST_CASE("sym_eig on small matrices") {
  SUBCASE("diagonal") {
    const auto e = sym_eig(Matrix::diagonal(std::vector<double>{4, 9}));
    CHECK(e.eigenvalues == Vector{9, 4});
    CHECK(std::abs(e.eigenvectors(1, 0)) == 1.0);
    CHECK(std::abs(e.eigenvectors(0, 1)) == 1.0);
  }
  SUBCASE("identity keeps original order") {
    const auto e = sym_eig(Matrix::identity(3));
    CHECK(e.eigenvalues == Vector{1, 1, 1});
    CHECK(e.eigenvectors == Matrix::identity(3));
  }
  SUBCASE("2x2 with roots of x^2 - 4x + 3") {
    const auto e = sym_eig(Matrix::from_rows({{2, 1}, {1, 2}}));
    CHECK(e.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("asymmetric input") {
    CHECK_ERROR_CODE(sym_eig(Matrix::from_rows({{1, 2}, {0, 1}})), ErrorCode::kNotSymmetric);
    CHECK_ERROR_CODE(sym_eig(Matrix(2, 3)), ErrorCode::kNotSymmetric);
  }
}

TEST_CASE("is_symmetric tolerance scales with the largest entry") {
  CHECK(is_symmetric(Matrix::from_rows({{1e6, 1.0}, {1.0 + 1e-7, 1.0}})));
  CHECK_FALSE(is_symmetric(Matrix::from_rows({{1.0, 1.0}, {1.0 + 1e-9, 1.0}})));
}

TEST_CASE("sym_eig reconstruction and orthonormality on random matrices") {
  Rng rng(1);
  for (std::size_t d : {1u, 2u, 5u, 13u, 40u}) {
    for (int t = 0; t < 3; ++t) {
      const Matrix a = random_symmetric(rng, d);
      const auto e = sym_eig(a);
      const Matrix& v = e.eigenvectors;
      CHECK(frobenius_norm(transpose(v) * v - Matrix::identity(d)) <= 1e-10 * static_cast<double>(d));
      CHECK(frobenius_norm(reconstruct(e) - a) <= 1e-9 * std::max(1.0, frobenius_norm(a)));
      for (std::size_t k = 1; k < d; ++k) CHECK(e.eigenvalues[k - 1] >= e.eigenvalues[k]);
    }
  }
}

TEST_CASE("sym_eig is bit-deterministic") {
  Rng rng(2);
  const Matrix a = random_symmetric(rng, 12);
  const auto e1 = sym_eig(a), e2 = sym_eig(a);
  CHECK(e1.eigenvalues == e2.eigenvalues);
  CHECK(e1.eigenvectors == e2.eigenvectors);
}

TEST_CASE("psd_sqrt examples") {
  CHECK(psd_sqrt(Matrix::diagonal(std::vector<double>{4, 9})) ==
        Matrix::diagonal(std::vector<double>{2, 3}));
  CHECK(psd_sqrt(Matrix::identity(4)) == Matrix::identity(4));
  const Matrix a = Matrix::from_rows({{2, 1}, {1, 2}});
  const Matrix s = psd_sqrt(a);
  CHECK(rel_frob(s * s, a) <= 1e-12);
  const auto e = sym_eig(s);
  CHECK(e.eigenvalues[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("psd roots clamp tiny negative eigenvalues and reject real ones") {
  const Matrix slightly = Matrix::diagonal(std::vector<double>{1.0, -1e-12});
  CHECK(psd_sqrt(slightly) == Matrix::diagonal(std::vector<double>{1.0, 0.0}));
  CHECK_ERROR_CODE(psd_sqrt(Matrix::diagonal(std::vector<double>{1.0, -1e-6})), ErrorCode::kNotPSD);
  CHECK_ERROR_CODE(psd_inv_sqrt(Matrix::diagonal(std::vector<double>{1.0, -1e-6})), ErrorCode::kNotPSD);
  CHECK_ERROR_CODE(psd_roots(Matrix::diagonal(std::vector<double>{-1.0})), ErrorCode::kNotPSD);
}

TEST_CASE("psd_inv_sqrt is the pseudoinverse root") {
  CHECK(psd_inv_sqrt(Matrix::diagonal(std::vector<double>{4, 9})) ==
        Matrix::diagonal(std::vector<double>{0.5, 1.0 / 3.0}));
  CHECK(psd_inv_sqrt(Matrix::diagonal(std::vector<double>{4, 0})) ==
        Matrix::diagonal(std::vector<double>{0.5, 0.0}));
}

TEST_CASE("psd_inv_sqrt times psd_sqrt projects onto the range") {
  Rng rng(3);
  for (std::size_t rank : {1u, 3u, 6u}) {
    const std::size_t d = 6;
    const Matrix a = random_psd(rng, d, rank);
    const auto roots = psd_roots(a);
    const Matrix proj = roots.inv_sqrt * roots.sqrt;
    // Oracle: the projector from the eigenvectors with nonzero eigenvalues.
    const auto e = sym_eig(a);
    Matrix expected(d, d);
    for (std::size_t k = 0; k < rank; ++k) {
      const auto col = [&] {
        Vector v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = e.eigenvectors(i, k);
        return v;
      }();
      expected = expected + outer(col, col);
    }
    CHECK(frobenius_norm(proj - expected) <= 1e-8);
    CHECK(frobenius_norm(roots.inv_sqrt * a * roots.inv_sqrt - expected) <= 1e-8);
  }
}

TEST_CASE("psd_sqrt squares back on random PSD matrices") {
  Rng rng(4);
  for (std::size_t d : {2u, 8u, 24u}) {
    const Matrix a = random_psd(rng, d, d + 3);
    const Matrix s = psd_sqrt(a);
    CHECK(frobenius_norm(s * s - a) <= 1e-9 * frobenius_norm(a));
    CHECK(is_symmetric(s));
  }
}

TEST_CASE("regularize") {
  CHECK(regularize(Matrix::diagonal(std::vector<double>{1, 0}), 1e-5) ==
        Matrix::diagonal(std::vector<double>{1.00001, 0.00001}));
  const Matrix a = Matrix::from_rows({{2, 1}, {1, 2}});
  CHECK(regularize(a, 0.0) == a);
  const auto e = sym_eig(regularize(Matrix(3, 3, 1.0), 1e-5));
  CHECK(e.eigenvalues[0] == doctest::Approx(3.00001).epsilon(1e-12));
  CHECK(e.eigenvalues[2] == doctest::Approx(1e-5).epsilon(1e-9));
  CHECK_ERROR_CODE(regularize(a, -1.0), ErrorCode::kInvalidArgument);
}
