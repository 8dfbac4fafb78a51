#pragma once

#include <optional>
#include <utility>

#include "blockseg/prefix_stats.hpp"
#include "blockseg/types.hpp"

namespace blockseg {

// cost[k][j]: minimal sum of segment costs covering [0, j) with exactly k
// admissible segments (+inf when infeasible); arg holds the optimal
// predecessor boundary (ties broken towards the smallest one).
struct DPTable {
  int n = 0;
  int k_max = 0;
  std::vector<double> cost;
  std::vector<int> arg;

  double at(int k, int j) const { return cost[static_cast<size_t>(k) * (n + 1) + j]; }
  int pred(int k, int j) const { return arg[static_cast<size_t>(k) * (n + 1) + j]; }

  // walks arg back from (k, n); requires cost[k][n] finite
  Segmentation backtrack(int k) const;
};

// Fills the table up to k_max segments. The row fill for each k is
// data-parallel over j; `parallel` switches between the OpenMP kernel and the
// serial reference, which produce identical tables.
DPTable build_dp_table(const PrefixStats& stats, const SegConfig& cfg, int k_max,
                       bool parallel = true);

// Exact minimizer of Q_n^K over the admissible segmentations with K blocks,
// together with the criterion value c0 + sum of segment costs.
// Returns nullopt when no admissible segmentation with K blocks exists.
std::optional<std::pair<Segmentation, double>> segment_for_k(const PrefixStats& stats,
                                                             const SegConfig& cfg, int K);

// Sweeps K = 1..k_max off a single table and selects the non-penalized
// minimizer (ties towards the smallest K).
SegmentationResult select_k(const PrefixStats& stats, const SegConfig& cfg,
                            bool parallel = true);

// Naive evaluation of the criterion: per-block SSE by explicit membership
// loops plus the squared deviation of the remaining upper triangle from the
// corner mean. Independent of PrefixStats; serves as the test oracle.
double criterion_value(const ObservationMatrix& y, const SegConfig& cfg, const Segmentation& t);

// Exhaustive enumeration over all admissible segmentations with K blocks,
// evaluated with criterion_value and the same tie rule as the DP.
// Throws ConfigError when the class has more than `guard` members.
std::pair<Segmentation, double> brute_force_segment(const ObservationMatrix& y,
                                                    const SegConfig& cfg, int K,
                                                    long long guard = 10'000'000);

// number of boundary vectors with K segment lengths in [l_min, l_max]
long long count_segmentations(int n, int K, int l_min, int l_max);

}  // namespace blockseg
