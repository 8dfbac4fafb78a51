#pragma once

#include <cstdint>
#include <vector>

#include "blockseg/types.hpp"

namespace blockseg {

struct TriSum {
  double sum;
  double sq_sum;
  std::int64_t count;
};

// Summed-area tables over Y and Y^2 plus diagonal prefixes, giving O(1)
// triangular block sums, the corner baseline mean m01 and the
// segmentation-independent criterion constant c0.
class PrefixStats {
 public:
  PrefixStats(const ObservationMatrix& y, const SegConfig& cfg);

  int n() const { return n_; }
  const DerivedConfig& derived() const { return derived_; }
  double m01() const { return m01_; }
  std::int64_t g01_count() const { return g01_count_; }
  double c0() const { return c0_; }

  // sum of Y over the leading r x c rectangle
  double rect_sum(int r, int c) const { return s_[idx(r, c)]; }

  // triangular block sums over {(i,j) : a <= i <= j < b}
  TriSum tri_sum(int a, int b) const;

  // g(a,b): within-block SSE minus the block's contribution to the
  // baseline-fit term, so that Q_n^K(t) = c0 + sum_k g(b_{k-1}, b_k)
  double segment_cost(int a, int b) const;

 private:
  size_t idx(int r, int c) const { return static_cast<size_t>(r) * (n_ + 1) + c; }

  int n_;
  DerivedConfig derived_;
  std::vector<double> s_, s2_;  // (n+1)x(n+1) 2D prefix sums of Y and Y^2
  std::vector<double> d_, d2_;  // prefix sums of diagonal entries and their squares
  double m01_;
  std::int64_t g01_count_;
  double c0_;
};

}  // namespace blockseg
