#include "blockseg/simulate.hpp"

#include <algorithm>

#include "blockseg/rng.hpp"

namespace blockseg {

ObservationMatrix mean_matrix(const SimSpec& spec, const SegConfig& cfg) {
  spec.truth.validate();
  const int n = spec.n;
  const DerivedConfig d = validate_config(cfg, n);
  const Segmentation tb = spec.truth.boundaries(n);

  // admissibility of the true segmentation under this config
  for (int k = 1; k <= tb.k(); ++k) {
    const int len = tb.b[k] - tb.b[k - 1];
    if (len < d.l_min || len > d.l_max) {
      throw ConfigError("true block " + std::to_string(k) + " has inadmissible length " +
                        std::to_string(len));
    }
  }

  // omega lifts the whole baseline region towards the block means; the
  // G01-based estimate of mu0 then sits close to the mu_k, which is the
  // regime where the non-penalized selection starts over-segmenting
  ObservationMatrix mu(n, spec.truth.mu0 + spec.truth.omega);
  for (int k = 1; k <= tb.k(); ++k) {
    for (int i = tb.b[k - 1]; i < tb.b[k]; ++i)
      for (int j = tb.b[k - 1]; j < tb.b[k]; ++j) mu(i, j) = spec.truth.mu[k - 1];
  }
  return mu;
}

std::pair<ObservationMatrix, Segmentation> generate(const SimSpec& spec, const SegConfig& cfg) {
  ObservationMatrix y = mean_matrix(spec, cfg);
  const int n = spec.n;
  if (spec.truth.sigma > 0.0) {
    NormalSampler normal(spec.seed);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        y(i, j) += spec.truth.sigma * normal.next();
        y(j, i) = y(i, j);
      }
  }
  return {std::move(y), spec.truth.boundaries(n)};
}

std::pair<double, double> empirical_noise_moments(const SimSpec& spec, const SegConfig& cfg,
                                                  int replicates) {
  const ObservationMatrix mu = mean_matrix(spec, cfg);
  const int n = spec.n;
  double sum = 0.0, sq = 0.0;
  long long cnt = 0;
  for (int r = 0; r < replicates; ++r) {
    SimSpec rep = spec;
    rep.seed = spec.seed + static_cast<std::uint64_t>(r);
    const auto [y, tb] = generate(rep, cfg);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double eps = y(i, j) - mu(i, j);
        sum += eps;
        sq += eps * eps;
        ++cnt;
      }
  }
  const double mean = sum / static_cast<double>(cnt);
  const double var = cnt > 1 ? (sq - sum * mean) / static_cast<double>(cnt - 1) : 0.0;
  return {mean, var};
}

}  // namespace blockseg
