#include <vector>

#include "affsteer/kernels.hpp"
#include "row_ops.hpp"

namespace affsteer::kernels::serial {

void gemm(const Matrix& a, const Matrix& b, Matrix& c) {
  for (std::size_t i = 0; i < a.rows(); ++i) detail::gemm_row(a, b, c, i);
}

Matrix gram(const Matrix& xt) {
  Matrix out(xt.rows(), xt.rows());
  for (std::size_t i = 0; i < xt.rows(); ++i) detail::gram_row(xt, out, i);
  detail::mirror_upper(out);
  return out;
}

void affine_rows(const Matrix& w, std::span<const double> b, const Matrix& in,
                 std::span<const std::uint8_t> mask, Matrix& out) {
  for (std::size_t r = 0; r < in.rows(); ++r) detail::affine_row(w, b, in, mask, out, r);
}

PairStats within_pair_stats(const Matrix& h, std::span<const std::size_t> rows) {
  std::vector<PairStats> partial(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) partial[a] = detail::within_row(h, rows, a);
  return detail::accumulate(partial);
}

PairStats cross_pair_stats(const Matrix& h, std::span<const std::size_t> rows_a,
                           std::span<const std::size_t> rows_b) {
  std::vector<PairStats> partial(rows_a.size());
  for (std::size_t a = 0; a < rows_a.size(); ++a)
    partial[a] = detail::cross_row(h, rows_a[a], rows_b);
  return detail::accumulate(partial);
}

void knn_label_fractions(const Matrix& unit, std::span<const int> labels,
                         std::span<const std::size_t> queries, std::span<const std::size_t> ks,
                         Matrix& fractions) {
  for (std::size_t q = 0; q < queries.size(); ++q)
    detail::knn_query(unit, labels, queries[q], ks, fractions.row(q));
}

void cosine_block(const Matrix& unit, std::span<const std::size_t> order, std::size_t first,
                  Matrix& block) {
  for (std::size_t r = 0; r < block.rows(); ++r) detail::cosine_row(unit, order, first, block, r);
}

}  // namespace affsteer::kernels::serial
