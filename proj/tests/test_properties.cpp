// Randomized properties. Each property runs over many generated cases; a
// failure reports the case seed so it can be replayed.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "affsteer/gate.hpp"
#include "affsteer/linalg.hpp"
#include "affsteer/map_file.hpp"
#include "affsteer/metrics.hpp"
#include "affsteer/moments.hpp"
#include "affsteer/parallel.hpp"
#include "affsteer/probe.hpp"
#include "affsteer/random.hpp"
#include "affsteer/synth.hpp"
#include "affsteer/transforms.hpp"
#include "test_util.hpp"

using namespace affsteer;

namespace {

// Calls prop(rng) for `cases` independent generators derived from `seed`.
template <class Prop>
void for_all(std::uint64_t seed, int cases, Prop prop) {
  std::uint64_t state = seed;
  for (int i = 0; i < cases; ++i) {
    const std::uint64_t case_seed = splitmix64(state);
    CAPTURE(case_seed);
    Rng rng(case_seed);
    prop(rng);
  }
}

std::size_t gen_dim(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next() % (hi - lo + 1));
}

// Gaussian two-concept dataset with random size, dimension, means and
// covariances of random rank (full rank when `full`).
EmbeddingDataset gen_dataset(Rng& rng, bool full, std::size_t max_d = 10) {
  const std::size_t d = gen_dim(rng, 1, max_d);
  SynthSpec spec;
  spec.d = d;
  spec.n_per_class = gen_dim(rng, 3 * d + 5, 400);
  spec.mu = {random_vector(rng, d, 3.0 * rng.uniform()), random_vector(rng, d, 3.0 * rng.uniform())};
  for (auto& s : spec.sigma) {
    const std::size_t cols = full ? d + gen_dim(rng, 0, d) : gen_dim(rng, 1, d);
    s = random_psd(rng, d, cols, full ? 0.05 : 0.0);
  }
  spec.task_rule = ByConcept{rng.uniform()};
  spec.seed = rng.next();
  return synth(spec);
}

Vector class_mean(const EmbeddingDataset& data, int c) {
  return row_mean(subset(data, rows_with_concept(data, c)).h);
}

}  // namespace

TEST_CASE("property: eigendecomposition invariants") {
  for_all(1, 60, [](Rng& rng) {
    const std::size_t d = gen_dim(rng, 1, 24);
    Matrix a = random_symmetric(rng, d);
    if (rng.bernoulli(0.3)) a = random_psd(rng, d, gen_dim(rng, 1, d));  // repeated zero eigenvalues
    const auto e = linalg::sym_eig(a);
    const Matrix& v = e.eigenvectors;
    CHECK(frobenius_norm(transpose(v) * v - Matrix::identity(d)) <= 1e-10 * static_cast<double>(d));
    CHECK(frobenius_norm(v * Matrix::diagonal(e.eigenvalues) * transpose(v) - a) <=
          1e-9 * std::max(1.0, frobenius_norm(a)));
    CHECK(std::is_sorted(e.eigenvalues.rbegin(), e.eigenvalues.rend()));
  });
}

TEST_CASE("property: PSD roots") {
  for_all(2, 60, [](Rng& rng) {
    const std::size_t d = gen_dim(rng, 1, 20);
    const std::size_t rank = gen_dim(rng, 1, d);
    const Matrix a = random_psd(rng, d, rank);
    const auto roots = linalg::psd_roots(a);
    CHECK(frobenius_norm(roots.sqrt * roots.sqrt - a) <= 1e-9 * std::max(1.0, frobenius_norm(a)));
    const Matrix proj = roots.inv_sqrt * a * roots.inv_sqrt;
    CHECK(frobenius_norm(proj * proj - proj) <= 1e-8);
    CHECK(std::abs(trace(proj) - static_cast<double>(rank)) <= 1e-8);
  });
}

TEST_CASE("property: mean matching constraint") {
  for_all(3, 40, [](Rng& rng) {
    const auto data = gen_dataset(rng, rng.bernoulli(0.5));
    const auto m = fit_moments(data);
    const int src = rng.bernoulli(0.5) ? 1 : 0;
    const auto out = apply(fit_mean_match(m, src, 1 - src), data);
    CHECK(norm(class_mean(out, 0) - class_mean(out, 1)) <= 1e-10 * (1.0 + norm(m.mean)));
  });
}

TEST_CASE("property: mimic constraint, symmetry, definiteness and transport") {
  for_all(4, 40, [](Rng& rng) {
    const std::size_t d = gen_dim(rng, 1, 16);
    const Matrix s0 = random_psd(rng, d, d + gen_dim(rng, 0, d), 0.02);
    const Matrix s1 = random_psd(rng, d, d + gen_dim(rng, 0, d), 0.02);
    const Vector mu0 = random_vector(rng, d), mu1 = random_vector(rng, d);
    const auto f = fit_mimic(moments_from_gaussian_spec(mu0, s0, mu1, s1, {0.5, 0.5}), 0, 1, 0.0);
    const Matrix& w = f.map.w;
    CHECK(frobenius_norm(w * s0 * transpose(w) - s1) <= 1e-8 * frobenius_norm(s1));
    CHECK(frobenius_norm(w - transpose(w)) <= 1e-9 * frobenius_norm(w));
    CHECK(linalg::sym_eig(w).eigenvalues.back() > 0.0);
    const Vector mu = matvec(w, mu0) + f.map.b;
    CHECK(gaussian_w2_squared(mu, symmetrize(w * s0 * transpose(w)), mu1, s1) <=
          1e-8 * (1.0 + trace(s1) + dot(mu1, mu1)));
  });
}

TEST_CASE("property: mimic on sampled data matches class covariances") {
  for_all(5, 20, [](Rng& rng) {
    const auto data = gen_dataset(rng, true, 8);
    const auto out = apply(fit_mimic(fit_moments(data), 0, 1, 0.0), data);
    const auto m = fit_moments(out);
    CHECK(frobenius_norm(m[0].covariance - m[1].covariance) <= 1e-8 * frobenius_norm(m[1].covariance));
  });
}

TEST_CASE("property: leace guards and is an oblique projection") {
  for_all(6, 40, [](Rng& rng) {
    const auto data = gen_dataset(rng, true);
    const auto m = fit_moments(data);
    const auto f = fit_leace(m, rng.bernoulli(0.5) ? 0.0 : kClassificationLambda);
    const auto out = apply(f, data);
    CHECK(norm(class_mean(out, 0) - class_mean(out, 1)) <= 1e-8 * (1.0 + norm(m.mean)));
    CHECK(frobenius_norm(f.map.w * f.map.w - f.map.w) <= 1e-8 * std::max(1.0, frobenius_norm(f.map.w)));
  });
}

TEST_CASE("property: gate decisions") {
  for_all(7, 40, [](Rng& rng) {
    const std::size_t d = gen_dim(rng, 1, 8);
    const NearestMean nm{random_vector(rng, d), random_vector(rng, d)};
    const Vector h = random_vector(rng, d, 2.0);
    // The decision depends only on the sign of a linear function of h.
    const double score = 2.0 * dot(h, nm.mu_tgt - nm.mu_src) + dot(nm.mu_src, nm.mu_src) - dot(nm.mu_tgt, nm.mu_tgt);
    if (std::abs(score) > 1e-9) CHECK(gate_decide(nm, h, std::nullopt, 0) == (score < 0.0));
    // Translating h and both means together leaves the decision alone.
    const Vector t = random_vector(rng, d, 5.0);
    const NearestMean shifted{nm.mu_src + t, nm.mu_tgt + t};
    if (std::abs(score) > 1e-6) CHECK(gate_decide(shifted, h + t, std::nullopt, 0) == gate_decide(nm, h, std::nullopt, 0));
    const int label = rng.bernoulli(0.5) ? 1 : 0;
    CHECK(gate_decide(OracleLabels{}, h, label, 1) == (label == 1));
  });
}

TEST_CASE("property: tpr rms is invariant to class relabeling") {
  for_all(8, 40, [](Rng& rng) {
    const int k = static_cast<int>(gen_dim(rng, 2, 6));
    const std::size_t n = gen_dim(rng, 10, 300);
    std::vector<int> truth(n), pred(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<int>(rng.next() % static_cast<std::uint64_t>(k));
      pred[i] = rng.bernoulli(0.7) ? truth[i] : static_cast<int>(rng.next() % static_cast<std::uint64_t>(k));
      c[i] = rng.bernoulli(0.5) ? 1 : 0;
    }
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    std::vector<int> truth_p(n), pred_p(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth_p[i] = perm[static_cast<std::size_t>(truth[i])];
      pred_p[i] = perm[static_cast<std::size_t>(pred[i])];
    }
    const auto a = tpr_gaps(pred, truth, c, k), b = tpr_gaps(pred_p, truth_p, c, k);
    CHECK(b.rms == doctest::Approx(a.rms).epsilon(1e-12));
    double sq = 0.0;
    for (double g : a.per_class) sq += g * g;
    CHECK(std::abs(a.rms - std::sqrt(sq / k)) <= 1e-12);
  });
}

TEST_CASE("property: knn at k = n - 1 is the base rate") {
  for_all(9, 30, [](Rng& rng) {
    const std::size_t n = gen_dim(rng, 3, 80);
    Matrix h(n, gen_dim(rng, 1, 5));
    for (double& v : h.data()) v = rng.normal() + 0.1;
    std::vector<int> labels(n);
    for (int& l : labels) l = rng.bernoulli(0.4) ? 1 : 0;
    const double ones = std::accumulate(labels.begin(), labels.end(), 0.0);
    double expected = 0.0;
    for (int l : labels) expected += (l == 1 ? ones - 1 : n - ones - 1) / static_cast<double>(n - 1);
    expected /= static_cast<double>(n);
    const auto curve = knn_same_label_fraction(h, labels, std::vector<std::size_t>{n - 1}, 0, 0);
    CHECK(std::abs(curve[0].fraction - expected) <= 1e-12);
  });
}

TEST_CASE("property: ebbn is permutation invariant and translation invariant") {
  for_all(10, 20, [](Rng& rng) {
    const auto data = gen_dataset(rng, true, 5);
    const auto e = ebbn_estimate(data.h, data.concepts);
    std::vector<std::size_t> perm(data.n());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    const auto shuffled = subset(data, perm);
    CHECK(ebbn_estimate(shuffled.h, shuffled.concepts).value == doctest::Approx(e.value).epsilon(1e-9));
    Matrix moved = data.h;
    const Vector t = random_vector(rng, data.d(), 4.0);
    for (std::size_t r = 0; r < moved.rows(); ++r)
      for (std::size_t j = 0; j < moved.cols(); ++j) moved(r, j) += t[j];
    CHECK(ebbn_estimate(moved, data.concepts).value == doctest::Approx(e.value).epsilon(1e-8).scale(1.0));
  });
}

TEST_CASE("property: probe argmax ignores a common logit shift") {
  for_all(11, 30, [](Rng& rng) {
    const std::size_t k = gen_dim(rng, 2, 5), d = gen_dim(rng, 1, 6);
    ProbeModel m{Matrix(k, d), Vector(k)};
    for (double& v : m.weights.data()) v = rng.normal();
    for (double& v : m.biases) v = rng.normal();
    Matrix h(25, d);
    for (double& v : h.data()) v = rng.normal();
    ProbeModel shifted = m;
    const double c = 10.0 * rng.normal();
    for (double& b : shifted.biases) b += c;
    CHECK(predict(shifted, h) == predict(m, h));
  });
}

TEST_CASE("property: map files round-trip bitwise") {
  for_all(12, 30, [](Rng& rng) {
    const std::size_t d = gen_dim(rng, 1, 12);
    SteeringFunction f;
    f.kind = static_cast<SteeringKind>(rng.next() % 3);
    f.map.w = random_symmetric(rng, d);
    f.map.b = random_vector(rng, d, 1e3);
    f.source_concept = rng.bernoulli(0.5) ? 1 : 0;
    f.target_concept = 1 - f.source_concept;
    switch (rng.next() % 3) {
      case 0: f.gate = OracleLabels{}; break;
      case 1: f.gate = NearestMean{random_vector(rng, d), random_vector(rng, d)}; break;
      default: f.gate = AlwaysApply{}; break;
    }
    CHECK(deserialize_map(serialize_map(f)) == f);
  });
}

TEST_CASE("property: results do not depend on the thread count") {
  const int saved = max_threads();
  for_all(13, 10, [](Rng& rng) {
    const auto data = gen_dataset(rng, true, 8);
    std::vector<std::size_t> ks = {1, std::min<std::size_t>(data.n() - 1, 17)};
    set_max_threads(1);
    const auto m1 = fit_moments(data);
    const auto out1 = apply(fit_mimic(m1, 0, 1), data);
    const auto e1 = ebbn_estimate(out1.h, out1.concepts);
    const auto k1 = knn_same_label_fraction(out1.h, out1.concepts, ks, 50, 3);
    set_max_threads(4);
    const auto m4 = fit_moments(data);
    const auto out4 = apply(fit_mimic(m4, 0, 1), data);
    const auto e4 = ebbn_estimate(out4.h, out4.concepts);
    const auto k4 = knn_same_label_fraction(out4.h, out4.concepts, ks, 50, 3);
    CHECK(m1.covariance == m4.covariance);
    CHECK(out1.h == out4.h);
    CHECK(e1.value == e4.value);
    CHECK(e1.standard_error == e4.standard_error);
    for (std::size_t i = 0; i < ks.size(); ++i) CHECK(k1[i].fraction == k4[i].fraction);
  });
  set_max_threads(saved);
}
