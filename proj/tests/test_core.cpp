#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blockseg/types.hpp"

using namespace blockseg;

TEST_CASE("derived constants at n=500 with defaults") {
  SegConfig cfg;
  const DerivedConfig d = validate_config(cfg, 500);
  CHECK(d.l_min == 2);
  CHECK(d.l_max == 374);
  CHECK(d.n0 == 125);
  CHECK(d.k_lo == 2);
  CHECK(d.k_hi == 20);  // capped by k_max

  SegConfig wide = cfg;
  wide.k_max = 300;
  CHECK(validate_config(wide, 500).k_hi == 250);
}

TEST_CASE("derived constants at n=16") {
  SegConfig cfg;
  cfg.k_max = 100;
  const DerivedConfig d = validate_config(cfg, 16);
  CHECK(d.l_max == 11);
  CHECK(d.n0 == 4);
  CHECK(d.k_lo == 2);
  CHECK(d.k_hi == 8);
}

TEST_CASE("config guards") {
  SegConfig cfg;
  cfg.c = 0.3;
  CHECK_THROWS_AS(validate_config(cfg, 100), ConfigError);
  cfg.c = 1.0;
  CHECK_THROWS_AS(validate_config(cfg, 100), ConfigError);
  cfg.c = 0.75;
  CHECK_THROWS_AS(validate_config(cfg, 7), ConfigError);
  cfg.min_len = 80;
  CHECK_THROWS_AS(validate_config(cfg, 100), ConfigError);
}

TEST_CASE("segmentation validation and one-based boundaries") {
  Segmentation s;
  s.b = {0, 35, 100, 200, 335, 500};
  s.validate(500);
  CHECK(s.k() == 5);
  CHECK(s.to_one_based() == std::vector<int>{1, 36, 101, 201, 336, 501});

  Segmentation bad;
  bad.b = {0, 10, 10, 20};
  CHECK_THROWS_AS(bad.validate(20), ConfigError);
  bad.b = {1, 20};
  CHECK_THROWS_AS(bad.validate(20), ConfigError);
}

TEST_CASE("ground truth boundaries and gaps") {
  GroundTruth t;
  t.tau = {0, 0.07, 0.2, 0.4, 0.67, 1};
  t.mu = {1, 1, 1, 1, 1};
  t.validate();
  CHECK(t.k_star() == 5);
  CHECK(t.boundaries(500).b == std::vector<int>{0, 35, 100, 200, 335, 500});
  CHECK(t.boundaries(1500).b == std::vector<int>{0, 105, 300, 600, 1005, 1500});
  CHECK(t.delta_tau() == doctest::Approx(0.07));
  CHECK(t.lambda_inf() == doctest::Approx(1.0));
  CHECK(t.lambda_bar() == doctest::Approx(1.0));

  t.mu = {1, 1};
  CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("matrix validation") {
  ObservationMatrix y(8, 1.0);
  y.validate();
  y(2, 5) = 2.0;  // breaks symmetry
  CHECK_THROWS_AS(y.validate(), ConfigError);
  y(5, 2) = 2.0;
  y.validate();
  y(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(y.validate(), ConfigError);
  CHECK_THROWS_AS(ObservationMatrix(4, 0.0).validate(), ConfigError);
}
