#include <doctest.h>

#include <cmath>

#include "affsteer/linalg.hpp"
#include "affsteer/moments.hpp"
#include "affsteer/random.hpp"
#include "affsteer/synth.hpp"
#include "test_util.hpp"

using namespace affsteer;

namespace {

EmbeddingDataset make(std::initializer_list<std::initializer_list<double>> rows, std::vector<int> concepts) {
  return {Matrix::from_rows(rows), std::move(concepts), std::nullopt};
}

}  // namespace

TEST_CASE("fit_moments: one point per class") {
  const auto m = fit_moments(make({{0, 0}, {2, 2}}, {0, 1}));
  CHECK(m[0].mean == Vector{0, 0});
  CHECK(m[1].mean == Vector{2, 2});
  CHECK(m.mean == Vector{1, 1});
  CHECK(m[0].covariance == Matrix(2, 2));
  CHECK(m[1].covariance == Matrix(2, 2));
  CHECK(m[0].count == 1);
  CHECK(m.weight[0] == 0.5);
}

TEST_CASE("fit_moments: population covariance") {
  const auto m = fit_moments(make({{1, 0}, {-1, 0}, {5, 5}}, {0, 0, 1}));
  CHECK(m[0].mean == Vector{0, 0});
  CHECK(m[0].covariance == Matrix::diagonal(std::vector<double>{1, 0}));
  CHECK(m[0].count + m[1].count == 3);
}

TEST_CASE("fit_moments: concept independent of h gives zero cross-covariance") {
  const auto m = fit_moments(make({{0}, {2}, {0}, {2}}, {0, 0, 1, 1}));
  CHECK(m.cross_cov == Vector{0});
}

TEST_CASE("fit_moments: cross-covariance definition") {
  Rng rng(1);
  Matrix h(30, 3);
  for (double& v : h.data()) v = rng.normal();
  std::vector<int> c(30);
  for (std::size_t i = 0; i < 30; ++i) c[i] = rng.bernoulli(0.4) ? 1 : 0;
  c[0] = 0;
  c[1] = 1;
  const auto m = fit_moments({h, c, std::nullopt});
  double mean_c = 0.0;
  for (int v : c) mean_c += v;
  mean_c /= 30.0;
  for (std::size_t j = 0; j < 3; ++j) {
    double hc = 0.0;
    for (std::size_t i = 0; i < 30; ++i) hc += h(i, j) * c[i];
    CHECK(m.cross_cov[j] == doctest::Approx(hc / 30.0 - m.mean[j] * mean_c).epsilon(1e-12));
  }
}

TEST_CASE("fit_moments: missing concept") {
  CHECK_ERROR_CODE(fit_moments(make({{0}, {1}}, {0, 0})), ErrorCode::kMissingConcept);
  CHECK_ERROR_CODE(fit_moments(make({{0}, {1}}, {1, 1})), ErrorCode::kMissingConcept);
}

TEST_CASE("fit_moments: second moment, total expectation and norm identity") {
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    SynthSpec spec;
    spec.d = 5;
    spec.n_per_class = 100 + 50 * static_cast<std::size_t>(t);
    spec.mu = {random_vector(rng, 5, 3.0), random_vector(rng, 5, 3.0)};
    spec.sigma = {random_psd(rng, 5, 7), random_psd(rng, 5, 3)};
    spec.seed = rng.next();
    const auto data = synth(spec);
    const auto m = fit_moments(data);
    for (int c = 0; c < 2; ++c) {
      const auto& cm = m[c];
      CHECK(testing::rel_frob(cm.covariance + outer(cm.mean, cm.mean), cm.second_moment) <= 1e-10);
      const auto e = linalg::sym_eig(cm.covariance);
      CHECK(e.eigenvalues.back() >= -1e-10 * e.eigenvalues.front());
      // Mean squared norm equals |mu|^2 + tr(sigma).
      double sq = 0.0;
      for (std::size_t r : rows_with_concept(data, c)) sq += dot(data.h.row(r), data.h.row(r));
      sq /= static_cast<double>(cm.count);
      const double expected = dot(cm.mean, cm.mean) + trace(cm.covariance);
      CHECK(std::abs(sq - expected) <= 1e-10 * expected);
    }
    const double n = static_cast<double>(data.n());
    for (std::size_t j = 0; j < 5; ++j) {
      const double mixed = (static_cast<double>(m[0].count) * m[0].mean[j] +
                            static_cast<double>(m[1].count) * m[1].mean[j]) / n;
      CHECK(m.mean[j] == doctest::Approx(mixed).epsilon(1e-13));
    }
  }
}

TEST_CASE("moments_from_gaussian_spec") {
  const Matrix eye = Matrix::identity(2);
  SUBCASE("mixture covariance identity") {
    const auto m = moments_from_gaussian_spec({1, 0}, eye, {-1, 0}, eye, {0.5, 0.5});
    CHECK(m.mean == Vector{0, 0});
    CHECK(testing::rel_frob(m.covariance, Matrix::diagonal(std::vector<double>{2, 1})) <= 1e-15);
  }
  SUBCASE("identical components") {
    const Matrix s = Matrix::from_rows({{2, 1}, {1, 3}});
    const auto m = moments_from_gaussian_spec({1, 2}, s, {1, 2}, s, {0.3, 0.7});
    CHECK(testing::rel_frob(m.covariance, s) <= 1e-15);
    CHECK(m.mean[0] == doctest::Approx(1.0));
    CHECK(m.mean[1] == doctest::Approx(2.0));
  }
  SUBCASE("degenerate weights") {
    const Matrix s = Matrix::from_rows({{2, 1}, {1, 3}});
    const auto m = moments_from_gaussian_spec({1, 2}, s, {5, 5}, eye, {1.0, 0.0});
    CHECK(m.mean == Vector{1, 2});
    CHECK(m.covariance == s);
  }
  SUBCASE("errors") {
    CHECK_ERROR_CODE(moments_from_gaussian_spec({0}, Matrix::diagonal(std::vector<double>{-1}), {0},
                                                Matrix::identity(1), {0.5, 0.5}),
                     ErrorCode::kNotPSD);
    CHECK_ERROR_CODE(moments_from_gaussian_spec({0}, Matrix::identity(1), {0}, Matrix::identity(1), {0.5, 0.6}),
                     ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("sample moments converge at the root-n rate") {
  Rng rng(3);
  const std::size_t d = 3;
  const Vector mu0 = {1, 0, -1}, mu1 = {0, 2, 0};
  const Matrix s0 = random_psd(rng, d, 5, 0.1), s1 = random_psd(rng, d, 5, 0.1);
  const auto exact = moments_from_gaussian_spec(mu0, s0, mu1, s1, {0.5, 0.5});
  auto error_at = [&](std::size_t n) {
    // Average over repetitions so the ratio is not dominated by one draw.
    double total = 0.0;
    for (int rep = 0; rep < 12; ++rep) {
      SynthSpec spec{d, n, {mu0, mu1}, {s0, s1}, ByConcept{}, {}, rng.next()};
      const auto m = fit_moments(synth(spec));
      total += frobenius_norm(m.covariance - exact.covariance) + norm(m.mean - exact.mean);
    }
    return total / 12.0;
  };
  const double e1 = error_at(500), e4 = error_at(2000);
  const double ratio = e1 / e4;
  CHECK(ratio >= 1.0);
  CHECK(ratio <= 4.0);
}
