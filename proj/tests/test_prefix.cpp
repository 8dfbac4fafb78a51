#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blockseg/dp.hpp"
#include "blockseg/evaluate.hpp"
#include "blockseg/prefix_stats.hpp"
#include "blockseg/rng.hpp"

using namespace blockseg;

namespace {

ObservationMatrix random_symmetric(int n, Xoshiro256pp& rng) {
  ObservationMatrix y(n);
  NormalSampler normal(rng.next());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      y(i, j) = normal.next();
      y(j, i) = y(i, j);
    }
  return y;
}

// oracle for tri_sum: explicit membership loop
TriSum naive_tri(const ObservationMatrix& y, int a, int b) {
  TriSum s{0.0, 0.0, 0};
  for (int i = a; i < b; ++i)
    for (int j = i; j < b; ++j) {
      s.sum += y(i, j);
      s.sq_sum += y(i, j) * y(i, j);
      ++s.count;
    }
  return s;
}

}  // namespace

TEST_CASE("corner mean on the i+j matrix") {
  ObservationMatrix y(8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) y(i, j) = i + j;
  const PrefixStats stats(y, SegConfig{});
  // n0 = 2: rows {0,1} x cols {6,7}
  CHECK(stats.m01() == doctest::Approx(7.0));
  CHECK(stats.g01_count() == 4);
}

TEST_CASE("triangular block sums match the naive loop") {
  Xoshiro256pp rng(11);
  for (int n : {8, 17, 40}) {
    const ObservationMatrix y = random_symmetric(n, rng);
    const PrefixStats stats(y, SegConfig{});
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b <= n; ++b) {
        const TriSum got = stats.tri_sum(a, b);
        const TriSum want = naive_tri(y, a, b);
        CHECK(got.count == want.count);
        CHECK(got.sum == doctest::Approx(want.sum).epsilon(1e-10));
        CHECK(got.sq_sum == doctest::Approx(want.sq_sum).epsilon(1e-10));
      }
  }
}

TEST_CASE("c0 equals the whole-triangle deviation from m01") {
  Xoshiro256pp rng(12);
  const int n = 24;
  const ObservationMatrix y = random_symmetric(n, rng);
  const PrefixStats stats(y, SegConfig{});
  double want = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double d = y(i, j) - stats.m01();
      want += d * d;
    }
  CHECK(stats.c0() == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("criterion additivity against the naive evaluation") {
  Xoshiro256pp rng(13);
  SegConfig cfg;
  int done = 0;
  while (done < 60) {
    const int n = 8 + static_cast<int>(rng.next() % 53);  // up to 60
    const DerivedConfig d = validate_config(cfg, n);
    const int K = d.k_lo + static_cast<int>(rng.next() % (d.k_hi - d.k_lo + 1));
    const Segmentation t = sample_segmentation(n, K, d.l_min, d.l_max, rng);
    const ObservationMatrix y = random_symmetric(n, rng);
    const PrefixStats stats(y, cfg);
    double q = stats.c0();
    for (int k = 1; k <= t.k(); ++k) q += stats.segment_cost(t.b[k - 1], t.b[k]);
    const double naive = criterion_value(y, cfg, t);
    CHECK(nearly_equal(q, naive, 1e-9));
    ++done;
  }
}
