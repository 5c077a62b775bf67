// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "affsteer/kernels.hpp"
#include "affsteer/matrix.hpp"
#include "affsteer/metrics.hpp"
#include "affsteer/random.hpp"

namespace {

using namespace affsteer;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

std::vector<std::size_t> iota_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

template <bool Parallel>
void BM_Gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, n, 1), b = random_matrix(n, n, 2);
  Matrix c(n, n);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::parallel::gemm(a, b, c);
    else kernels::serial::gemm(a, b, c);
    benchmark::DoNotOptimize(c.data());
  }
}

template <bool Parallel>
void BM_Gram(benchmark::State& state) {
  const Matrix xt = random_matrix(64, static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    Matrix g = Parallel ? kernels::parallel::gram(xt) : kernels::serial::gram(xt);
    benchmark::DoNotOptimize(g.data());
  }
}

template <bool Parallel>
void BM_AffineRows(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix w = random_matrix(64, 64, 4), in = random_matrix(n, 64, 5);
  const Vector b(64, 0.5);
  const std::vector<std::uint8_t> mask(n, 1);
  Matrix out(n, 64);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::parallel::affine_rows(w, b, in, mask, out);
    else kernels::serial::affine_rows(w, b, in, mask, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_WithinPairs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix h = random_matrix(n, 32, 6);
  const auto rows = iota_rows(n);
  for (auto _ : state) {
    auto s = Parallel ? kernels::parallel::within_pair_stats(h, rows)
                      : kernels::serial::within_pair_stats(h, rows);
    benchmark::DoNotOptimize(s);
  }
}

template <bool Parallel>
void BM_Knn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix unit = unit_rows(random_matrix(n, 32, 7));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 2);
  const auto queries = iota_rows(256);
  const std::vector<std::size_t> ks = {8, 32, 128};
  Matrix fractions(queries.size(), ks.size());
  for (auto _ : state) {
    if constexpr (Parallel) kernels::parallel::knn_label_fractions(unit, labels, queries, ks, fractions);
    else kernels::serial::knn_label_fractions(unit, labels, queries, ks, fractions);
    benchmark::DoNotOptimize(fractions.data());
  }
}

}  // namespace

BENCHMARK(BM_Gemm<false>)->Arg(128)->Arg(256);
BENCHMARK(BM_Gemm<true>)->Arg(128)->Arg(256);
BENCHMARK(BM_Gram<false>)->Arg(4000)->Arg(16000);
BENCHMARK(BM_Gram<true>)->Arg(4000)->Arg(16000);
BENCHMARK(BM_AffineRows<false>)->Arg(8000);
BENCHMARK(BM_AffineRows<true>)->Arg(8000);
BENCHMARK(BM_WithinPairs<false>)->Arg(1000)->Arg(2000);
BENCHMARK(BM_WithinPairs<true>)->Arg(1000)->Arg(2000);
BENCHMARK(BM_Knn<false>)->Arg(4000);
BENCHMARK(BM_Knn<true>)->Arg(4000);

BENCHMARK_MAIN();
