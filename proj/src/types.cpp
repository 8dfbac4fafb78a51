#include "blockseg/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace blockseg {

void ObservationMatrix::validate() const {
  if (n_ < 8) {
    throw ConfigError("matrix side length must be at least 8, got " + std::to_string(n_));
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double y = (*this)(i, j);
      if (!std::isfinite(y)) {
        throw ConfigError("non-finite entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (j > i) {
        const double yt = (*this)(j, i);
        if (std::abs(y - yt) > 1e-9 * std::max(1.0, std::abs(y))) {
          std::ostringstream msg;
          msg << "asymmetric entries at (" << i << "," << j << "): " << y << " vs " << yt;
          throw ConfigError(msg.str());
        }
      }
    }
  }
}

void Segmentation::validate(int n) const {
  if (b.size() < 2 || b.front() != 0 || b.back() != n) {
    throw ConfigError("segmentation must run from 0 to n");
  }
  for (size_t i = 1; i < b.size(); ++i) {
    if (b[i] <= b[i - 1]) throw ConfigError("segmentation boundaries must be strictly increasing");
  }
}

std::vector<int> Segmentation::to_one_based() const {
  std::vector<int> t(b.size());
  for (size_t i = 0; i < b.size(); ++i) t[i] = b[i] + 1;
  return t;
}

DerivedConfig validate_config(const SegConfig& cfg, int n) {
  if (n < 8) throw ConfigError("n must be at least 8, got " + std::to_string(n));
  if (!(cfg.c >= 0.5 && cfg.c < 1.0)) {
    throw ConfigError("c must lie in [1/2, 1), got " + std::to_string(cfg.c));
  }
  if (cfg.min_len < 1) throw ConfigError("min_len must be positive");
  if (cfg.k_max < 1) throw ConfigError("k_max must be positive");

  DerivedConfig d;
  d.l_min = cfg.min_len;
  d.l_max = static_cast<int>(std::ceil(cfg.c * n)) - 1;
  d.n0 = static_cast<int>(std::floor((1.0 - cfg.c) * n));
  if (d.n0 < 1) throw ConfigError("corner size n0 is empty for this (c, n)");
  if (2 * d.n0 > n) throw ConfigError("corner overlaps the diagonal for this (c, n)");
  if (d.l_min > d.l_max) {
    throw ConfigError("min_len " + std::to_string(d.l_min) + " exceeds max block length " +
                      std::to_string(d.l_max));
  }

  // feasible K: K * l_min <= n <= K * l_max
  d.k_lo = (n + d.l_max - 1) / d.l_max;
  d.k_hi = std::min(cfg.k_max, n / d.l_min);
  if (d.k_lo > d.k_hi) {
    throw ConfigError("no feasible number of blocks: need K in [" + std::to_string(d.k_lo) +
                      ", " + std::to_string(n / d.l_min) + "] but k_max = " + std::to_string(cfg.k_max));
  }
  return d;
}

void GroundTruth::validate() const {
  if (tau.size() < 2 || tau.front() != 0.0 || tau.back() != 1.0) {
    throw ConfigError("break fractions must run from 0 to 1");
  }
  for (size_t i = 1; i < tau.size(); ++i) {
    if (tau[i] <= tau[i - 1]) throw ConfigError("break fractions must be strictly increasing");
  }
  if (mu.size() + 1 != tau.size()) {
    throw ConfigError("need one block mean per block: got " + std::to_string(mu.size()) +
                      " means for " + std::to_string(tau.size() - 1) + " blocks");
  }
  if (sigma < 0) throw ConfigError("sigma must be nonnegative");
}

Segmentation GroundTruth::boundaries(int n) const {
  Segmentation s;
  s.b.reserve(tau.size());
  for (double t : tau) s.b.push_back(static_cast<int>(std::floor(n * t)));
  s.validate(n);
  return s;
}

double GroundTruth::delta_tau() const {
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < tau.size(); ++i) d = std::min(d, tau[i] - tau[i - 1]);
  return d;
}

double GroundTruth::lambda_inf() const {
  double d = std::numeric_limits<double>::infinity();
  for (double m : mu) d = std::min(d, std::abs(m - mu0));
  return d;
}

double GroundTruth::lambda_bar() const {
  double d = 0.0;
  for (size_t k = 0; k < mu.size(); ++k) {
    d = std::max(d, std::abs(mu[k] - mu0));
    for (size_t l = k + 1; l < mu.size(); ++l) d = std::max(d, std::abs(mu[k] - mu[l]));
  }
  return d;
}

}  // namespace blockseg
