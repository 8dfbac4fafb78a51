#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blockseg/dp.hpp"
#include "blockseg/evaluate.hpp"
#include "blockseg/prefix_stats.hpp"
#include "blockseg/rng.hpp"
#include "blockseg/simulate.hpp"

using namespace blockseg;

namespace {

ObservationMatrix random_symmetric(int n, std::uint64_t seed) {
  ObservationMatrix y(n);
  NormalSampler normal(seed);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      y(i, j) = normal.next();
      y(j, i) = y(i, j);
    }
  return y;
}

}  // namespace

TEST_CASE("DP matches exhaustive enumeration on random matrices") {
  SegConfig cfg;
  for (int n : {10, 12, 14}) {
    for (int K : {2, 3, 4}) {
      for (int rep = 0; rep < 10; ++rep) {
        const ObservationMatrix y = random_symmetric(n, 1000ULL * n + 10ULL * K + rep);
        const PrefixStats stats(y, cfg);
        const auto got = segment_for_k(stats, cfg, K);
        REQUIRE(got.has_value());
        const auto [bt, bq] = brute_force_segment(y, cfg, K);
        CHECK(got->first.b == bt.b);
        CHECK(nearly_equal(got->second, bq, 1e-9));
      }
    }
  }
}

TEST_CASE("tie rule: constant matrix picks the same segmentation as brute force") {
  SegConfig cfg;
  const int n = 12;
  const ObservationMatrix y(n, 3.5);
  const PrefixStats stats(y, cfg);
  for (int K : {2, 3, 4, 5}) {
    const auto got = segment_for_k(stats, cfg, K);
    REQUIRE(got.has_value());
    CHECK(got->second == doctest::Approx(0.0).epsilon(1e-12));
    const auto [bt, bq] = brute_force_segment(y, cfg, K);
    CHECK(got->first.b == bt.b);
  }
}

TEST_CASE("noiseless matrices are recovered exactly") {
  SimSpec spec;
  spec.truth.tau = {0, 0.07, 0.2, 0.4, 0.67, 1};
  spec.truth.mu = {1, 1, 1, 1, 1};
  SegConfig cfg;
  for (int n : {100, 500}) {
    spec.n = n;
    const auto [y, t_star] = generate(spec, cfg);
    const PrefixStats stats(y, cfg);
    const SegmentationResult res = select_k(stats, cfg);
    CHECK(res.k_hat == 5);
    CHECK(res.boundaries_hat.b == t_star.b);
    CHECK(std::abs(res.per_k[4].criterion) <= 1e-9);
  }
}

TEST_CASE("K = 1 is infeasible whenever c < 1") {
  SegConfig cfg;
  const ObservationMatrix y = random_symmetric(40, 7);
  const PrefixStats stats(y, cfg);
  CHECK_FALSE(segment_for_k(stats, cfg, 1).has_value());
  const SegmentationResult res = select_k(stats, cfg);
  CHECK_FALSE(res.per_k[0].feasible);
  CHECK(res.k_hat >= 2);
}

TEST_CASE("segmentation counting matches enumeration") {
  for (int n : {10, 16, 23}) {
    for (int K : {2, 3, 5}) {
      for (int l_min : {1, 2, 3}) {
        const int l_max = n - 2;
        long long seen = 0;
        enumerate_segmentations(n, K, l_min, l_max, [&](const Segmentation&) { ++seen; });
        CHECK(seen == count_segmentations(n, K, l_min, l_max));
      }
    }
  }
}

TEST_CASE("serial and parallel row fills build identical tables") {
  SegConfig cfg;
  const ObservationMatrix y = random_symmetric(120, 99);
  const PrefixStats stats(y, cfg);
  const DPTable serial = build_dp_table(stats, cfg, cfg.k_max, false);
  const DPTable parallel = build_dp_table(stats, cfg, cfg.k_max, true);
  CHECK(serial.cost == parallel.cost);
  CHECK(serial.arg == parallel.arg);
}

TEST_CASE("selection prefers the smallest K on ties") {
  // constant matrix: every feasible K has criterion 0, so k_hat = k_lo
  SegConfig cfg;
  const ObservationMatrix y(30, 2.0);
  const PrefixStats stats(y, cfg);
  const SegmentationResult res = select_k(stats, cfg);
  CHECK(res.k_hat == validate_config(cfg, 30).k_lo);
}
