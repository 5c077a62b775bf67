#pragma once

// Per-row bodies shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "affsteer/kernels.hpp"
#include "affsteer/matrix.hpp"

namespace affsteer::kernels::detail {

inline void gemm_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
  auto out = c.row(i);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const double aik = a(i, k);
    if (aik == 0.0) continue;
    auto brow = b.row(k);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += aik * brow[j];
  }
}

inline double row_dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

inline double row_sqdist(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return s;
}

inline void gram_row(const Matrix& xt, Matrix& out, std::size_t i) {
  for (std::size_t j = i; j < xt.rows(); ++j) out(i, j) = row_dot(xt.row(i), xt.row(j));
}

inline void mirror_upper(Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) m(i, j) = m(j, i);
}

inline void affine_row(const Matrix& w, std::span<const double> b, const Matrix& in,
                       std::span<const std::uint8_t> mask, Matrix& out, std::size_t r) {
  auto src = in.row(r);
  auto dst = out.row(r);
  if (mask[r] == 0) {
    std::copy(src.begin(), src.end(), dst.begin());
    return;
  }
  for (std::size_t i = 0; i < w.rows(); ++i) dst[i] = row_dot(w.row(i), src) + b[i];
}

inline PairStats within_row(const Matrix& h, std::span<const std::size_t> rows, std::size_t a) {
  PairStats s;
  auto x = h.row(rows[a]);
  for (std::size_t b = a + 1; b < rows.size(); ++b) {
    const double d = row_sqdist(x, h.row(rows[b]));
    s.sum += d;
    s.sum_sq += d * d;
  }
  s.count = static_cast<double>(rows.size() - a - 1);
  return s;
}

inline PairStats cross_row(const Matrix& h, std::size_t row_a, std::span<const std::size_t> rows_b) {
  PairStats s;
  auto x = h.row(row_a);
  for (std::size_t r : rows_b) {
    const double d = row_sqdist(x, h.row(r));
    s.sum += d;
    s.sum_sq += d * d;
  }
  s.count = static_cast<double>(rows_b.size());
  return s;
}

inline PairStats accumulate(std::span<const PairStats> partials) {
  PairStats total;
  for (const auto& p : partials) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
    total.count += p.count;
  }
  return total;
}

inline void knn_query(const Matrix& unit, std::span<const int> labels, std::size_t query,
                      std::span<const std::size_t> ks, std::span<double> fractions_row) {
  const std::size_t n = unit.rows();
  const std::size_t max_k = ks.back();
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(n - 1);
  auto q = unit.row(query);
  for (std::size_t r = 0; r < n; ++r) {
    if (r == query) continue;
    cand.emplace_back(row_dot(q, unit.row(r)), r);
  }
  auto closer = [](const auto& x, const auto& y) {
    return x.first > y.first || (x.first == y.first && x.second < y.second);
  };
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(max_k), cand.end(),
                    closer);
  std::size_t same = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (; next < ks[i]; ++next) same += labels[cand[next].second] == labels[query] ? 1 : 0;
    fractions_row[i] = static_cast<double>(same) / static_cast<double>(ks[i]);
  }
}

inline void cosine_row(const Matrix& unit, std::span<const std::size_t> order, std::size_t first,
                       Matrix& block, std::size_t r) {
  auto x = unit.row(order[first + r]);
  auto out = block.row(r);
  for (std::size_t c = 0; c < order.size(); ++c) {
    out[c] = std::clamp(row_dot(x, unit.row(order[c])), -1.0, 1.0);
  }
}

}  // namespace affsteer::kernels::detail
