#include <cstdint>
#include <vector>

#include "affsteer/kernels.hpp"
#include "row_ops.hpp"

namespace affsteer::kernels::parallel {

namespace {
using Index = std::int64_t;
Index as_index(std::size_t n) { return static_cast<Index>(n); }
}  // namespace

void gemm(const Matrix& a, const Matrix& b, Matrix& c) {
  const Index n = as_index(a.rows());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) detail::gemm_row(a, b, c, static_cast<std::size_t>(i));
}

Matrix gram(const Matrix& xt) {
  Matrix out(xt.rows(), xt.rows());
  const Index n = as_index(xt.rows());
#pragma omp parallel for schedule(dynamic, 4)
  for (Index i = 0; i < n; ++i) detail::gram_row(xt, out, static_cast<std::size_t>(i));
  detail::mirror_upper(out);
  return out;
}

void affine_rows(const Matrix& w, std::span<const double> b, const Matrix& in,
                 std::span<const std::uint8_t> mask, Matrix& out) {
  const Index n = as_index(in.rows());
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < n; ++r) detail::affine_row(w, b, in, mask, out, static_cast<std::size_t>(r));
}

PairStats within_pair_stats(const Matrix& h, std::span<const std::size_t> rows) {
  std::vector<PairStats> partial(rows.size());
  const Index n = as_index(rows.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (Index a = 0; a < n; ++a)
    partial[static_cast<std::size_t>(a)] = detail::within_row(h, rows, static_cast<std::size_t>(a));
  return detail::accumulate(partial);
}

PairStats cross_pair_stats(const Matrix& h, std::span<const std::size_t> rows_a,
                           std::span<const std::size_t> rows_b) {
  std::vector<PairStats> partial(rows_a.size());
  const Index n = as_index(rows_a.size());
#pragma omp parallel for schedule(static)
  for (Index a = 0; a < n; ++a) {
    const auto i = static_cast<std::size_t>(a);
    partial[i] = detail::cross_row(h, rows_a[i], rows_b);
  }
  return detail::accumulate(partial);
}

void knn_label_fractions(const Matrix& unit, std::span<const int> labels,
                         std::span<const std::size_t> queries, std::span<const std::size_t> ks,
                         Matrix& fractions) {
  const Index n = as_index(queries.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (Index q = 0; q < n; ++q) {
    const auto i = static_cast<std::size_t>(q);
    detail::knn_query(unit, labels, queries[i], ks, fractions.row(i));
  }
}

void cosine_block(const Matrix& unit, std::span<const std::size_t> order, std::size_t first,
                  Matrix& block) {
  const Index n = as_index(block.rows());
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < n; ++r)
    detail::cosine_row(unit, order, first, block, static_cast<std::size_t>(r));
}

}  // namespace affsteer::kernels::parallel
