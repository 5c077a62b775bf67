#pragma once

// Data-parallel inner loops. Every kernel exists twice: a serial reference
// and an OpenMP version. Both perform the same floating-point operations in
// the same order per output element, and reductions are finished serially
// from per-row partials, so the two agree bitwise at any thread count.

#include <cstddef>
#include <cstdint>
#include <span>

#include "affsteer/matrix.hpp"

namespace affsteer::kernels {

// Sum, sum of squares and count of squared Euclidean distances over a pair set.
struct PairStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  double count = 0.0;

  friend bool operator==(const PairStats&, const PairStats&) = default;
};

#define AFFSTEER_KERNEL_DECLS                                                              \
  /* c = a * b; c must be pre-sized a.rows() x b.cols(). */                               \
  void gemm(const Matrix& a, const Matrix& b, Matrix& c);                                  \
  /* out(i,j) = <xt.row(i), xt.row(j)>; xt is variables x observations. */                \
  Matrix gram(const Matrix& xt);                                                           \
  /* Rows with mask[r] != 0 become w*in.row(r) + b; others are copied. */                 \
  void affine_rows(const Matrix& w, std::span<const double> b, const Matrix& in,          \
                   std::span<const std::uint8_t> mask, Matrix& out);                       \
  /* Distinct unordered pairs drawn from `rows`. */                                        \
  PairStats within_pair_stats(const Matrix& h, std::span<const std::size_t> rows);         \
  /* All pairs (a, b) with a from `rows_a`, b from `rows_b`. */                            \
  PairStats cross_pair_stats(const Matrix& h, std::span<const std::size_t> rows_a,         \
                             std::span<const std::size_t> rows_b);                         \
  /* fractions(q, i): share of the ks[i] most cosine-similar rows to queries[q]           \
     (excluding itself, ties by ascending index) whose label matches. `unit` holds        \
     L2-normalised rows; ks must be ascending. */                                          \
  void knn_label_fractions(const Matrix& unit, std::span<const int> labels,                \
                           std::span<const std::size_t> queries,                           \
                           std::span<const std::size_t> ks, Matrix& fractions);           \
  /* block(r, c) = <unit.row(order[first + r]), unit.row(order[c])>. */                   \
  void cosine_block(const Matrix& unit, std::span<const std::size_t> order,                \
                    std::size_t first, Matrix& block);

namespace serial {
AFFSTEER_KERNEL_DECLS
}  // namespace serial

namespace parallel {
AFFSTEER_KERNEL_DECLS
}  // namespace parallel

#undef AFFSTEER_KERNEL_DECLS

}  // namespace affsteer::kernels
