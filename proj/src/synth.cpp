#include "affsteer/synth.hpp"

#include <cmath>

#include "affsteer/error.hpp"
#include "affsteer/linalg.hpp"
#include "affsteer/random.hpp"

namespace affsteer {

EmbeddingDataset synth(const SynthSpec& spec) {
  const std::size_t d = spec.d;
  if (d == 0 || spec.n_per_class == 0)
    fail(ErrorCode::kInvalidArgument, "synth needs d >= 1 and n_per_class >= 1");
  for (int c = 0; c < 2; ++c)
    if (spec.mu[c].size() != d || spec.sigma[c].rows() != d || !spec.sigma[c].square())
      fail(ErrorCode::kDimensionMismatch, "synth mean/covariance dimension");
  if (!spec.task_shift.empty() && spec.task_shift.size() != d)
    fail(ErrorCode::kDimensionMismatch, "task shift dimension");
  if (const auto* r = std::get_if<ByConcept>(&spec.task_rule); r && !(r->p >= 0.0 && r->p <= 1.0))
    fail(ErrorCode::kInvalidArgument, "ByConcept p must lie in [0, 1]");
  if (const auto* r = std::get_if<ByHyperplane>(&spec.task_rule); r && r->normal.size() != d)
    fail(ErrorCode::kDimensionMismatch, "hyperplane normal dimension");

  const std::array<Matrix, 2> root{linalg::psd_sqrt(spec.sigma[0]), linalg::psd_sqrt(spec.sigma[1])};
  Rng rng(spec.seed);
  EmbeddingDataset data;
  data.h = Matrix(2 * spec.n_per_class, d);
  data.concepts.resize(2 * spec.n_per_class);
  data.task.emplace(2 * spec.n_per_class);

  Vector z(d);
  std::size_t r = 0;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < spec.n_per_class; ++i, ++r) {
      int y = 0;
      if (const auto* rule = std::get_if<ByConcept>(&spec.task_rule))
        y = rng.bernoulli(c == 0 ? rule->p : 1.0 - rule->p) ? 1 : 0;
      for (double& v : z) v = rng.normal();
      auto row = data.h.row(r);
      for (std::size_t j = 0; j < d; ++j) {
        double v = 0.0;
        for (std::size_t k = 0; k < d; ++k) v += root[c](j, k) * z[k];
        row[j] = spec.mu[c][j] + v;
      }
      if (!spec.task_shift.empty() && std::holds_alternative<ByConcept>(spec.task_rule)) {
        const double sign = y == 1 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < d; ++j) row[j] += sign * spec.task_shift[j];
      }
      if (const auto* rule = std::get_if<ByHyperplane>(&spec.task_rule))
        y = dot(rule->normal, row) > 0.0 ? 1 : 0;
      data.concepts[r] = c;
      (*data.task)[r] = y;
    }
  }
  return data;
}

SynthSpec controlled_bias_spec(double p, std::uint64_t seed, std::size_t d, std::size_t n_per_class) {
  if (d < 2) fail(ErrorCode::kInvalidArgument, "controlled-bias design needs d >= 2");
  SynthSpec s;
  s.d = d;
  s.n_per_class = n_per_class;
  s.mu = {Vector(d, 0.0), Vector(d, 0.0)};
  s.mu[0][0] = 2.0;
  s.mu[1][0] = -2.0;
  Vector var(d);
  for (std::size_t j = 0; j < d; ++j)
    var[j] = 0.5 + 1.5 * static_cast<double>(j) / static_cast<double>(d - 1);
  s.sigma = {Matrix::diagonal(var), Matrix::diagonal(var)};
  s.task_rule = ByConcept{p};
  s.task_shift.assign(d, 0.0);
  s.task_shift[1] = 0.25;
  s.seed = seed;
  return s;
}

SynthSpec clustered_concepts_spec(std::uint64_t seed, std::size_t d, std::size_t n_per_class) {
  if (d < 2) fail(ErrorCode::kInvalidArgument, "clustered design needs d >= 2");
  SynthSpec s;
  s.d = d;
  s.n_per_class = n_per_class;
  s.mu = {Vector(d, 0.0), Vector(d, 0.0)};
  s.mu[0][0] = 3.0;
  s.mu[1][1] = 3.0;
  Vector var0(d), var1(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(d - 1);
    var0[j] = 0.2 + 0.8 * t;
    var1[j] = 1.0 - 0.7 * t;
  }
  s.sigma[0] = Matrix::diagonal(var0);
  // Rotate the leading 2x2 block of concept 1 by 30 degrees.
  Matrix rot = Matrix::identity(d);
  const double a = std::acos(-1.0) / 6.0;
  rot(0, 0) = std::cos(a);
  rot(0, 1) = -std::sin(a);
  rot(1, 0) = std::sin(a);
  rot(1, 1) = std::cos(a);
  s.sigma[1] = symmetrize(rot * Matrix::diagonal(var1) * transpose(rot));
  Vector normal(d, 0.0);
  normal[d - 1] = 1.0;
  s.task_rule = ByHyperplane{normal};
  s.seed = seed;
  return s;
}

}  // namespace affsteer
