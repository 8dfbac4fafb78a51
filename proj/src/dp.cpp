#include "blockseg/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blockseg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// DP tie order: smallest predecessor wins at every backtrack step, i.e. the
// boundary vector comparison runs from the last interior boundary backwards.
bool tie_before(const Segmentation& a, const Segmentation& b) {
  for (int i = a.k() - 1; i >= 1; --i) {
    if (a.b[i] != b.b[i]) return a.b[i] < b.b[i];
  }
  return false;
}

void fill_row(const PrefixStats& stats, DPTable& t, int k, int l_min, int l_max, bool parallel) {
  const int n = t.n;
  const int j_lo = k * l_min;
  const int j_hi = std::min<long long>(n, static_cast<long long>(k) * l_max);
  const size_t row = static_cast<size_t>(k) * (n + 1);
  const size_t prev = row - (n + 1);

#pragma omp parallel for schedule(static) if (parallel)
  for (int j = j_lo; j <= j_hi; ++j) {
    double best = kInf;
    int best_i = -1;
    const int i_lo = std::max((k - 1) * l_min, j - l_max);
    const int i_hi = std::min<long long>(j - l_min, static_cast<long long>(k - 1) * l_max);
    for (int i = i_lo; i <= i_hi; ++i) {
      const double base = t.cost[prev + i];
      if (base == kInf) continue;
      const double v = base + stats.segment_cost(i, j);
      if (v < best) {  // strict: ties keep the smaller i
        best = v;
        best_i = i;
      }
    }
    t.cost[row + j] = best;
    t.arg[row + j] = best_i;
  }
}

}  // namespace

Segmentation DPTable::backtrack(int k) const {
  Segmentation s;
  s.b.assign(k + 1, 0);
  s.b[k] = n;
  for (int level = k; level > 1; --level) s.b[level - 1] = pred(level, s.b[level]);
  return s;
}

DPTable build_dp_table(const PrefixStats& stats, const SegConfig&, int k_max, bool parallel) {
  const DerivedConfig d = stats.derived();
  const int n = stats.n();
  DPTable t;
  t.n = n;
  t.k_max = std::min(k_max, n / d.l_min);
  t.cost.assign(static_cast<size_t>(t.k_max + 1) * (n + 1), kInf);
  t.arg.assign(t.cost.size(), -1);
  t.cost[0] = 0.0;  // cost[0][0]
  for (int k = 1; k <= t.k_max; ++k) fill_row(stats, t, k, d.l_min, d.l_max, parallel);
  return t;
}

std::optional<std::pair<Segmentation, double>> segment_for_k(const PrefixStats& stats,
                                                             const SegConfig& cfg, int K) {
  if (K < 1 || K > cfg.k_max) throw ConfigError("K out of range [1, k_max]");
  const DPTable t = build_dp_table(stats, cfg, K);
  if (K > t.k_max || t.at(K, t.n) == kInf) return std::nullopt;
  return std::make_pair(t.backtrack(K), stats.c0() + t.at(K, t.n));
}

SegmentationResult select_k(const PrefixStats& stats, const SegConfig& cfg, bool parallel) {
  const DPTable t = build_dp_table(stats, cfg, cfg.k_max, parallel);
  SegmentationResult res;
  res.m01 = stats.m01();
  res.k_hat = 0;
  double best = kInf;
  for (int K = 1; K <= cfg.k_max; ++K) {
    PerKRecord rec;
    rec.k = K;
    rec.feasible = K <= t.k_max && t.at(K, t.n) != kInf;
    if (rec.feasible) {
      rec.boundaries = t.backtrack(K);
      rec.criterion = stats.c0() + t.at(K, t.n);
      if (rec.criterion < best) {  // strict: ties keep the smaller K
        best = rec.criterion;
        res.k_hat = K;
      }
    }
    res.per_k.push_back(std::move(rec));
  }
  if (res.k_hat == 0) throw ConfigError("no feasible number of blocks up to k_max");
  res.boundaries_hat = res.per_k[res.k_hat - 1].boundaries;
  return res;
}

double criterion_value(const ObservationMatrix& y, const SegConfig& cfg, const Segmentation& t) {
  const int n = y.n();
  t.validate(n);
  const DerivedConfig d = validate_config(cfg, n);

  double corner = 0.0;
  for (int i = 0; i < d.n0; ++i)
    for (int j = n - d.n0; j < n; ++j) corner += y(i, j);
  const double m01 = corner / (static_cast<double>(d.n0) * d.n0);

  double q = 0.0;
  for (int k = 1; k <= t.k(); ++k) {
    const int a = t.b[k - 1], b = t.b[k];
    double sum = 0.0;
    long long cnt = 0;
    for (int i = a; i < b; ++i)
      for (int j = i; j < b; ++j) {
        sum += y(i, j);
        ++cnt;
      }
    const double mean = sum / static_cast<double>(cnt);
    for (int i = a; i < b; ++i)
      for (int j = i; j < b; ++j) q += (y(i, j) - mean) * (y(i, j) - mean);
  }

  // E_0: upper-triangle cells outside every diagonal block
  for (int i = 0; i < n; ++i) {
    auto it = std::upper_bound(t.b.begin(), t.b.end(), i);
    const int block_end = *it;  // i < block_end by construction
    for (int j = i; j < n; ++j) {
      if (j < block_end) continue;
      q += (y(i, j) - m01) * (y(i, j) - m01);
    }
  }
  return q;
}

long long count_segmentations(int n, int K, int l_min, int l_max) {
  std::vector<long long> prev(n + 1, 0), cur(n + 1, 0);
  prev[0] = 1;
  for (int k = 1; k <= K; ++k) {
    std::fill(cur.begin(), cur.end(), 0);
    for (int j = 0; j <= n; ++j) {
      for (int len = l_min; len <= l_max && len <= j; ++len) cur[j] += prev[j - len];
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

std::pair<Segmentation, double> brute_force_segment(const ObservationMatrix& y,
                                                    const SegConfig& cfg, int K,
                                                    long long guard) {
  const int n = y.n();
  const DerivedConfig d = validate_config(cfg, n);
  const long long total = count_segmentations(n, K, d.l_min, d.l_max);
  if (total == 0) throw ConfigError("no admissible segmentation with K = " + std::to_string(K));
  if (total > guard) {
    throw ConfigError("enumeration guard exceeded: " + std::to_string(total) + " segmentations");
  }

  Segmentation best;
  double best_q = kInf;
  Segmentation cur;
  cur.b.assign(K + 1, 0);
  cur.b[K] = n;

  auto recurse = [&](auto&& self, int level) -> void {
    if (level == K) {
      const int len = n - cur.b[K - 1];
      if (len < d.l_min || len > d.l_max) return;
      const double q = criterion_value(y, cfg, cur);
      if (q < best_q || (q == best_q && tie_before(cur, best))) {
        best_q = q;
        best = cur;
      }
      return;
    }
    const int lo = cur.b[level - 1] + d.l_min;
    const int hi = std::min(cur.b[level - 1] + d.l_max, n - (K - level) * d.l_min);
    for (int b = lo; b <= hi; ++b) {
      cur.b[level] = b;
      self(self, level + 1);
    }
  };
  recurse(recurse, 1);
  return {best, best_q};
}

}  // namespace blockseg
