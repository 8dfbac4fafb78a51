#include "blockseg/prefix_stats.hpp"

#include <stdexcept>

namespace blockseg {

PrefixStats::PrefixStats(const ObservationMatrix& y, const SegConfig& cfg)
    : n_(y.n()),
      derived_(validate_config(cfg, y.n())),
      s_(static_cast<size_t>(n_ + 1) * (n_ + 1), 0.0),
      s2_(static_cast<size_t>(n_ + 1) * (n_ + 1), 0.0),
      d_(n_ + 1, 0.0),
      d2_(n_ + 1, 0.0) {
  for (int i = 0; i < n_; ++i) {
    double row = 0.0, row2 = 0.0;
    for (int j = 0; j < n_; ++j) {
      const double v = y(i, j);
      row += v;
      row2 += v * v;
      s_[idx(i + 1, j + 1)] = s_[idx(i, j + 1)] + row;
      s2_[idx(i + 1, j + 1)] = s2_[idx(i, j + 1)] + row2;
    }
    d_[i + 1] = d_[i] + y(i, i);
    d2_[i + 1] = d2_[i] + y(i, i) * y(i, i);
  }

  const int n0 = derived_.n0;
  g01_count_ = static_cast<std::int64_t>(n0) * n0;
  // corner rectangle: rows [0, n0) x cols [n - n0, n)
  m01_ = (s_[idx(n0, n_)] - s_[idx(n0, n_ - n0)]) / static_cast<double>(g01_count_);

  const TriSum all = tri_sum(0, n_);
  c0_ = all.sq_sum - 2.0 * m01_ * all.sum + m01_ * m01_ * static_cast<double>(all.count);
}

TriSum PrefixStats::tri_sum(int a, int b) const {
  if (!(0 <= a && a < b && b <= n_)) {
    throw std::invalid_argument("tri_sum requires 0 <= a < b <= n");
  }
  // (square sum + diagonal sum) / 2, valid because Y is symmetric
  const double rect = s_[idx(b, b)] - s_[idx(a, b)] - s_[idx(b, a)] + s_[idx(a, a)];
  const double rect2 = s2_[idx(b, b)] - s2_[idx(a, b)] - s2_[idx(b, a)] + s2_[idx(a, a)];
  const std::int64_t len = b - a;
  return {0.5 * (rect + d_[b] - d_[a]), 0.5 * (rect2 + d2_[b] - d2_[a]), len * (len + 1) / 2};
}

double PrefixStats::segment_cost(int a, int b) const {
  const TriSum t = tri_sum(a, b);
  const double cnt = static_cast<double>(t.count);
  const double sse = t.sq_sum - t.sum * t.sum / cnt;
  const double baseline_fit = t.sq_sum - 2.0 * m01_ * t.sum + m01_ * m01_ * cnt;
  return sse - baseline_fit;
}

}  // namespace blockseg
