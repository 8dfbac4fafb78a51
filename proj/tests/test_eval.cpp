#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blockseg/dp.hpp"
#include "blockseg/evaluate.hpp"
#include "blockseg/rng.hpp"
#include "blockseg/simulate.hpp"

using namespace blockseg;

namespace {

GroundTruth thirds() {
  GroundTruth t;
  t.tau = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
  t.mu = {1, 1, 1};
  t.mu0 = 0.0;
  return t;
}

}  // namespace

TEST_CASE("hausdorff distances") {
  Segmentation a, b;
  a.b = {0, 10, 20, 30};
  b.b = {0, 10, 20, 30};
  CHECK(hausdorff(a, b).h1 == 0);
  CHECK(hausdorff(a, b).h2 == 0);

  b.b = {0, 12, 30};  // drops one boundary, moves the other
  const HausdorffPair h = hausdorff(a, b);
  CHECK(h.h1 == 8);  // 20 is 8 away from 12
  CHECK(h.h2 == 2);  // 12 is 2 away from 10

  b.b = {0, 12, 40};
  CHECK_THROWS_AS(hausdorff(a, b), ConfigError);
}

TEST_CASE("intersection counts cover the triangle minus the corner") {
  const int n = 60;
  SegConfig cfg;
  const DerivedConfig d = validate_config(cfg, n);
  GroundTruth truth;
  truth.tau = {0, 0.25, 0.6, 1};
  truth.mu = {1, 2, 3};
  const Segmentation t_star = truth.boundaries(n);

  Xoshiro256pp rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    Segmentation t;
    while (true) {
      t = sample_segmentation(n, 2 + static_cast<int>(rng.next() % 4), d.l_min, d.l_max, rng);
      try {
        intersection_counts(t, truth, cfg, n);
        break;
      } catch (const ConfigError&) {
      }
    }
    const IntersectionCounts c = intersection_counts(t, truth, cfg, n);
    CHECK(c.total() ==
          static_cast<std::int64_t>(n) * (n + 1) / 2 - static_cast<std::int64_t>(d.n0) * d.n0);
    // each block clear of the corner contributes its full triangular size
    for (int l = 1; l <= c.k_star; ++l) {
      const std::int64_t len = t_star.b[l] - t_star.b[l - 1];
      CHECK(c.col_sum(l) == len * (len + 1) / 2);
    }
    for (int k = 1; k <= c.k; ++k) {
      const std::int64_t len = t.b[k] - t.b[k - 1];
      CHECK(c.row_sum(k) == len * (len + 1) / 2);
    }
  }
}

TEST_CASE("deterministic term vanishes at the truth and is nonnegative") {
  const int n = 60;
  SegConfig cfg;
  GroundTruth truth;
  truth.tau = {0, 0.25, 0.6, 1};
  truth.mu = {1, -0.5, 2};
  CHECK(bn_term(truth.boundaries(n), truth, cfg, n) == doctest::Approx(0.0).epsilon(1e-12));

  const DerivedConfig d = validate_config(cfg, n);
  Xoshiro256pp rng(6);
  for (int rep = 0; rep < 30; ++rep) {
    const Segmentation t =
        sample_segmentation(n, 2 + static_cast<int>(rng.next() % 5), d.l_min, d.l_max, rng);
    CHECK(bn_term(t, truth, cfg, n) >= -1e-12);
  }
}

TEST_CASE("deterministic term equals the noiseless criterion gap") {
  // with sigma = 0 the whole normalized gap is the deterministic part
  SegConfig cfg;
  for (int n : {40, 60}) {
    SimSpec spec;
    spec.n = n;
    spec.truth.tau = {0, 0.3, 0.55, 1};
    spec.truth.mu = {1.5, -1, 0.75};
    spec.truth.mu0 = 0.25;
    const auto [y, t_star] = generate(spec, cfg);
    const DerivedConfig d = validate_config(cfg, n);
    const double pref = 2.0 / (static_cast<double>(n) * (n + 1));

    Xoshiro256pp rng(7);
    for (int rep = 0; rep < 30; ++rep) {
      const Segmentation t =
          sample_segmentation(n, 2 + static_cast<int>(rng.next() % 4), d.l_min, d.l_max, rng);
      const double gap = pref * (criterion_value(y, cfg, t) - criterion_value(y, cfg, t_star));
      CHECK(bn_term(t, spec.truth, cfg, n) == doctest::Approx(gap).epsilon(1e-9));
    }
  }
}

TEST_CASE("decomposition identity on random pairs") {
  SegConfig cfg;
  Xoshiro256pp rng(8);
  for (int n : {20, 40}) {
    const DerivedConfig d = validate_config(cfg, n);
    GroundTruth truth;
    truth.tau = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    truth.mu = {1, 2, -1};
    for (double sigma : {0.5, 1.0, 4.0}) {
      for (int rep = 0; rep < 10; ++rep) {
        SimSpec spec;
        spec.n = n;
        spec.truth = truth;
        spec.truth.sigma = sigma;
        spec.seed = rng.next();
        const auto [y, t_star] = generate(spec, cfg);
        Segmentation t;
        while (true) {
          t = sample_segmentation(n, 2 + static_cast<int>(rng.next() % 3), d.l_min, d.l_max, rng);
          try {
            intersection_counts(t, spec.truth, cfg, n);
            break;
          } catch (const ConfigError&) {
          }
        }
        const TheoryDecomposition terms = random_terms(t, y, spec.truth, cfg);
        const double sum = terms.bn + terms.vn + terms.wn + terms.zn;
        CHECK(std::abs(sum - terms.jn) <= 1e-8 * std::max(1.0, std::abs(terms.jn)));
      }
    }
  }
}

TEST_CASE("lower bound holds in every mode at n=15") {
  SegConfig cfg;
  for (Lemma1Mode mode : {Lemma1Mode::kUnder, Lemma1Mode::kOver, Lemma1Mode::kEqualFar}) {
    const Lemma1Report rep = lemma1_check(thirds(), cfg, 15, mode);
    CAPTURE(rep.mode);
    CHECK_FALSE(rep.empty);
    CHECK(rep.exhaustive);
    CHECK(rep.margin > 0.0);
  }
}

TEST_CASE("equal_far with a huge delta has no candidates") {
  Lemma1Options opts;
  opts.delta = 0.9;
  const Lemma1Report rep = lemma1_check(thirds(), SegConfig{}, 15, Lemma1Mode::kEqualFar, opts);
  CHECK(rep.empty);
  CHECK(rep.candidates_checked == 0);
}

TEST_CASE("zero contrast is rejected") {
  GroundTruth flat = thirds();
  flat.mu = {0, 0, 0};  // equal to mu0
  CHECK_THROWS_AS(lemma1_check(flat, SegConfig{}, 15, Lemma1Mode::kUnder), ConfigError);
}

TEST_CASE("sampled segmentations are admissible and cover the class") {
  const int n = 18, K = 3, l_min = 2, l_max = 12;
  Xoshiro256pp rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    const Segmentation s = sample_segmentation(n, K, l_min, l_max, rng);
    s.validate(n);
    for (int k = 1; k <= K; ++k) {
      const int len = s.b[k] - s.b[k - 1];
      CHECK(len >= l_min);
      CHECK(len <= l_max);
    }
  }
}
