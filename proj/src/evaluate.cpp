#include "blockseg/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "blockseg/dp.hpp"
#include "blockseg/rng.hpp"
#include "blockseg/simulate.hpp"

namespace blockseg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// per-row block lookup: index (1-based) of the segment containing row i and
// the row index where that segment ends
struct RowBlock {
  int index;
  int end;
};

RowBlock row_block(const Segmentation& t, int i) {
  const auto it = std::upper_bound(t.b.begin(), t.b.end(), i);
  return {static_cast<int>(it - t.b.begin()), *it};
}

// Sweep of the upper triangle classifying each cell into
// (estimated block or baseline) x (true block or baseline). Corner cells are
// excluded unless they fall inside an estimated block, in which case they
// carry the true baseline label; that case is rejected when !allow_est_corner.
IntersectionCounts sweep_counts(const Segmentation& t, const Segmentation& t_star, int n, int n0,
                                bool allow_est_corner) {
  IntersectionCounts c;
  c.k = t.k();
  c.k_star = t_star.k();
  c.counts.assign(static_cast<size_t>(c.k + 1) * (c.k_star + 1), 0);
  for (int i = 0; i < n; ++i) {
    const RowBlock est = row_block(t, i);
    const RowBlock tru = row_block(t_star, i);
    for (int j = i; j < n; ++j) {
      int ke = j < est.end ? est.index : 0;
      int kt = j < tru.end ? tru.index : 0;
      if (i < n0 && j >= n - n0) {  // corner cell
        if (kt != 0) throw ConfigError("true block intersects the corner estimator region");
        if (ke == 0) continue;
        if (!allow_est_corner) {
          throw ConfigError("estimated block intersects the corner estimator region");
        }
      }
      ++c.at(ke, kt);
    }
  }
  return c;
}

double bn_from_counts(const IntersectionCounts& c, const GroundTruth& truth, int n) {
  auto mu_of = [&](int l) { return l == 0 ? truth.mu0 : truth.mu[l - 1]; };
  const double norm = static_cast<double>(n) * (n + 1);

  double k0 = 0.0;
  for (int l = 1; l <= c.k_star; ++l) {
    const double d = mu_of(l) - truth.mu0;
    k0 += static_cast<double>(c.at(0, l)) * d * d;
  }
  k0 *= 2.0 / norm;

  double kd = 0.0;
  for (int k = 1; k <= c.k; ++k) {
    const double nk = static_cast<double>(c.row_sum(k));
    if (nk == 0.0) throw ConfigError("empty estimated block in counts");
    double inner = 0.0;
    for (int l = 0; l <= c.k_star; ++l) {
      if (c.at(k, l) == 0) continue;
      for (int lp = 0; lp <= c.k_star; ++lp) {
        const double d = mu_of(l) - mu_of(lp);
        inner += static_cast<double>(c.at(k, l)) * static_cast<double>(c.at(k, lp)) * d * d;
      }
    }
    kd += inner / nk;
  }
  kd /= norm;
  return k0 + kd;
}

}  // namespace

std::int64_t IntersectionCounts::row_sum(int k_) const {
  std::int64_t s = 0;
  for (int l = 0; l <= k_star; ++l) s += at(k_, l);
  return s;
}

std::int64_t IntersectionCounts::col_sum(int l) const {
  std::int64_t s = 0;
  for (int k_ = 0; k_ <= k; ++k_) s += at(k_, l);
  return s;
}

std::int64_t IntersectionCounts::total() const {
  std::int64_t s = 0;
  for (std::int64_t v : counts) s += v;
  return s;
}

HausdorffPair hausdorff(const Segmentation& t_true, const Segmentation& t_hat) {
  if (t_true.b.back() != t_hat.b.back()) throw ConfigError("segmentations disagree on n");
  auto one_sided = [](const std::vector<int>& from, const std::vector<int>& to) {
    int worst = 0;
    for (int x : from) {
      const auto it = std::lower_bound(to.begin(), to.end(), x);
      int best = std::numeric_limits<int>::max();
      if (it != to.end()) best = *it - x;
      if (it != to.begin()) best = std::min(best, x - *(it - 1));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return {one_sided(t_true.b, t_hat.b), one_sided(t_hat.b, t_true.b)};
}

IntersectionCounts intersection_counts(const Segmentation& t, const GroundTruth& truth,
                                       const SegConfig& cfg, int n) {
  truth.validate();
  t.validate(n);
  const DerivedConfig d = validate_config(cfg, n);
  return sweep_counts(t, truth.boundaries(n), n, d.n0, /*allow_est_corner=*/false);
}

double bn_term(const Segmentation& t, const GroundTruth& truth_in, const SegConfig& cfg, int n) {
  GroundTruth truth = truth_in;
  truth.mu0 += truth.omega;
  truth.omega = 0.0;
  truth.validate();
  t.validate(n);
  const DerivedConfig d = validate_config(cfg, n);
  const IntersectionCounts c =
      sweep_counts(t, truth.boundaries(n), n, d.n0, /*allow_est_corner=*/true);
  return bn_from_counts(c, truth, n);
}

TheoryDecomposition random_terms(const Segmentation& t, const ObservationMatrix& y,
                                 const GroundTruth& truth_in, const SegConfig& cfg) {
  const int n = y.n();
  // omega only shifts the baseline, so fold it into an effective mu0
  GroundTruth truth = truth_in;
  truth.mu0 += truth.omega;
  truth.omega = 0.0;
  truth.validate();
  t.validate(n);
  const DerivedConfig d = validate_config(cfg, n);
  const Segmentation t_star = truth.boundaries(n);

  SimSpec spec;
  spec.n = n;
  spec.truth = truth;
  const ObservationMatrix mu = mean_matrix(spec, cfg);

  const IntersectionCounts c = sweep_counts(t, t_star, n, d.n0, /*allow_est_corner=*/false);
  const int k = t.k(), k_star = t_star.k();

  // noise sums per estimated block, true block, corner and the two baselines
  std::vector<double> s_est(k + 1, 0.0), s_true(k_star + 1, 0.0);
  std::vector<std::int64_t> card_est(k + 1, 0), card_true(k_star + 1, 0);
  double s_g01 = 0.0;
  for (int i = 0; i < n; ++i) {
    const RowBlock est = row_block(t, i);
    const RowBlock tru = row_block(t_star, i);
    for (int j = i; j < n; ++j) {
      const double eps = y(i, j) - mu(i, j);
      if (i < d.n0 && j >= n - d.n0) {
        s_g01 += eps;
        continue;
      }
      const int ke = j < est.end ? est.index : 0;
      const int kt = j < tru.end ? tru.index : 0;
      s_est[ke] += eps;
      ++card_est[ke];
      s_true[kt] += eps;
      ++card_true[kt];
    }
  }

  const double norm = static_cast<double>(n) * (n + 1);
  const double pref = 2.0 / norm;
  const double g01 = static_cast<double>(d.n0) * d.n0;
  auto mu_of = [&](int l) { return l == 0 ? truth.mu0 : truth.mu[l - 1]; };

  double vd = 0.0;
  for (int l = 1; l <= k_star; ++l) vd += s_true[l] * s_true[l] / static_cast<double>(card_true[l]);
  for (int l = 1; l <= k; ++l) vd -= s_est[l] * s_est[l] / static_cast<double>(card_est[l]);
  vd *= pref;
  const double v0 = pref * (s_g01 * s_g01 / (g01 * g01)) *
                    static_cast<double>(card_est[0] - card_true[0]);

  double wd = 0.0;
  for (int l = 1; l <= k_star; ++l) wd += s_true[l] * mu_of(l);
  for (int kk = 1; kk <= k; ++kk) {
    double ebar = 0.0;  // expectation of the estimated block mean
    for (int l = 0; l <= k_star; ++l) ebar += static_cast<double>(c.at(kk, l)) * mu_of(l);
    ebar /= static_cast<double>(c.row_sum(kk));
    wd -= s_est[kk] * ebar;
  }
  wd *= 2.0 * pref;
  const double w0 = 2.0 * pref * truth.mu0 * (s_true[0] - s_est[0]);

  double bias00 = 0.0;  // sum over the estimated baseline of (E[Y] - mu0)
  for (int l = 1; l <= k_star; ++l) bias00 += static_cast<double>(c.at(0, l)) * (mu_of(l) - truth.mu0);
  const double zn = 2.0 * pref * (s_g01 / g01) * ((s_true[0] - s_est[0]) - bias00);

  TheoryDecomposition out;
  out.bn = bn_from_counts(c, truth, n);
  out.vn = vd + v0;
  out.wn = wd + w0;
  out.zn = zn;
  out.jn = pref * (criterion_value(y, cfg, t) - criterion_value(y, cfg, t_star));
  out.lambda_inf = truth.lambda_inf();
  out.lambda_bar = truth.lambda_bar();
  out.delta_tau = truth.delta_tau();
  return out;
}

std::string to_string(Lemma1Mode mode) {
  switch (mode) {
    case Lemma1Mode::kUnder: return "under";
    case Lemma1Mode::kOver: return "over";
    case Lemma1Mode::kEqualFar: return "equal_far";
  }
  return "?";
}

Lemma1Mode lemma1_mode_from_string(const std::string& s) {
  if (s == "under") return Lemma1Mode::kUnder;
  if (s == "over") return Lemma1Mode::kOver;
  if (s == "equal_far") return Lemma1Mode::kEqualFar;
  throw ConfigError("unknown mode '" + s + "' (expected under|over|equal_far)");
}

void enumerate_segmentations(int n, int K, int l_min, int l_max,
                             const std::function<void(const Segmentation&)>& visit) {
  Segmentation cur;
  cur.b.assign(K + 1, 0);
  cur.b[K] = n;
  auto recurse = [&](auto&& self, int level) -> void {
    if (level == K) {
      const int len = n - cur.b[K - 1];
      if (len >= l_min && len <= l_max) visit(cur);
      return;
    }
    const int lo = cur.b[level - 1] + l_min;
    const int hi = std::min(cur.b[level - 1] + l_max, n - (K - level) * l_min);
    for (int b = lo; b <= hi; ++b) {
      cur.b[level] = b;
      self(self, level + 1);
    }
  };
  if (K >= 1) recurse(recurse, 1);
}

// uniform draw from the segmentation class via the counting table
Segmentation sample_segmentation(int n, int K, int l_min, int l_max, Xoshiro256pp& rng) {
  // ways[k][j]: number of ways to cover [0, j) with k segments
  std::vector<std::vector<double>> ways(K + 1, std::vector<double>(n + 1, 0.0));
  ways[0][0] = 1.0;
  for (int k = 1; k <= K; ++k)
    for (int j = 0; j <= n; ++j)
      for (int len = l_min; len <= l_max && len <= j; ++len) ways[k][j] += ways[k - 1][j - len];

  Segmentation s;
  s.b.assign(K + 1, 0);
  s.b[K] = n;
  int j = n;
  for (int k = K; k >= 1; --k) {
    const double u = rng.uniform() * ways[k][j];
    double acc = 0.0;
    int chosen = l_min;
    for (int len = l_min; len <= l_max && len <= j; ++len) {
      acc += ways[k - 1][j - len];
      if (u <= acc) {
        chosen = len;
        break;
      }
      chosen = len;
    }
    j -= chosen;
    s.b[k - 1] = j;
  }
  return s;
}

Lemma1Report lemma1_check(const GroundTruth& truth_in, const SegConfig& cfg, int n,
                          Lemma1Mode mode, const Lemma1Options& opts) {
  GroundTruth truth = truth_in;
  truth.mu0 += truth.omega;
  truth.omega = 0.0;
  truth.validate();
  const DerivedConfig d = validate_config(cfg, n);
  const double lambda = truth.lambda_inf();
  if (!(lambda > 0.0)) throw ConfigError("block means must differ from the baseline (lambda_inf = 0)");
  const double dt = truth.delta_tau();
  const Segmentation t_star = truth.boundaries(n);
  const int k_star = t_star.k();
  const double delta = opts.delta > 0.0 ? opts.delta : dt / 4.0;

  Lemma1Report rep;
  rep.mode = to_string(mode);
  rep.n = n;

  int l_min = 1;
  std::vector<int> ks;
  switch (mode) {
    case Lemma1Mode::kUnder:
      l_min = 1;
      for (int k = 1; k < k_star; ++k) ks.push_back(k);
      rep.bound = lambda * lambda * dt * dt * dt * dt / 64.0;
      break;
    case Lemma1Mode::kOver: {
      l_min = cfg.min_len;
      const int hi = opts.k_over_max > 0 ? opts.k_over_max : k_star + 1;
      for (int k = k_star + 1; k <= hi; ++k) ks.push_back(k);
      const double dn = static_cast<double>(cfg.min_len) / n;
      rep.bound = lambda * lambda * dn * dn / 4.0;
      break;
    }
    case Lemma1Mode::kEqualFar:
      l_min = 1;
      ks.push_back(k_star);
      rep.bound = lambda * lambda / 32.0 * std::min(dt / 2.0, delta) * dt * dt * dt;
      break;
  }

  const double far_threshold = static_cast<double>(n) * delta;
  auto in_class = [&](const Segmentation& t) {
    if (mode != Lemma1Mode::kEqualFar) return true;
    int sup = 0;
    for (size_t i = 0; i < t.b.size(); ++i) sup = std::max(sup, std::abs(t.b[i] - t_star.b[i]));
    return static_cast<double>(sup) > far_threshold;
  };

  double min_bn = kInf;
  long long checked = 0;
  std::vector<Segmentation> batch;
  batch.reserve(4096);

  auto flush = [&] {
    double local_min = kInf;
#pragma omp parallel for schedule(dynamic) reduction(min : local_min)
    for (size_t i = 0; i < batch.size(); ++i) {
      const IntersectionCounts c = sweep_counts(batch[i], t_star, n, d.n0, true);
      local_min = std::min(local_min, bn_from_counts(c, truth, n));
    }
    min_bn = std::min(min_bn, local_min);
    checked += static_cast<long long>(batch.size());
    batch.clear();
  };

  long long class_size = 0;
  for (int k : ks) class_size += count_segmentations(n, k, l_min, d.l_max);

  if (class_size <= opts.budget) {
    for (int k : ks) {
      enumerate_segmentations(n, k, l_min, d.l_max, [&](const Segmentation& t) {
        if (!in_class(t)) return;
        batch.push_back(t);
        if (batch.size() == 4096) flush();
      });
      flush();
    }
  } else {
    rep.exhaustive = false;
    Xoshiro256pp rng(opts.sample_seed);
    std::vector<double> weights;
    for (int k : ks) weights.push_back(static_cast<double>(count_segmentations(n, k, l_min, d.l_max)));
    const double wtot = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (long long s = 0; s < opts.budget; ++s) {
      double u = rng.uniform() * wtot;
      size_t pick = 0;
      while (pick + 1 < weights.size() && u > weights[pick]) u -= weights[pick++];
      const Segmentation t = sample_segmentation(n, ks[pick], l_min, d.l_max, rng);
      if (!in_class(t)) continue;
      batch.push_back(t);
      if (batch.size() == 4096) flush();
    }
    flush();
  }

  rep.candidates_checked = checked;
  rep.empty = checked == 0;
  rep.min_bn = rep.empty ? kInf : min_bn;
  rep.margin = rep.empty ? kInf : min_bn - rep.bound;
  return rep;
}

}  // namespace blockseg
