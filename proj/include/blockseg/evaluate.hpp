#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "blockseg/rng.hpp"
#include "blockseg/types.hpp"

namespace blockseg {

struct HausdorffPair {
  int h1;  // max over true boundaries of the distance to the nearest estimated one
  int h2;  // symmetric counterpart
};

HausdorffPair hausdorff(const Segmentation& t_true, const Segmentation& t_hat);

// n_{k,l} = |D_k intersect D*_l| with index 0 standing for the baseline
// region outside the corner (D_0 = G00, D*_0 = G*00).
struct IntersectionCounts {
  int k = 0;
  int k_star = 0;
  std::vector<std::int64_t> counts;  // (K+1) x (K*+1)

  std::int64_t at(int k_, int l) const { return counts[static_cast<size_t>(k_) * (k_star + 1) + l]; }
  std::int64_t& at(int k_, int l) { return counts[static_cast<size_t>(k_) * (k_star + 1) + l]; }
  std::int64_t row_sum(int k_) const;
  std::int64_t col_sum(int l) const;
  std::int64_t total() const;
};

// Exact counts by direct sweep of the upper triangle minus the corner.
// Requires every block (estimated and true) to be disjoint from the corner.
IntersectionCounts intersection_counts(const Segmentation& t, const GroundTruth& truth,
                                       const SegConfig& cfg, int n);

// Deterministic part B_n of the normalized criterion gap, computed from the
// intersection counts. Estimated blocks reaching into the corner are allowed
// (their corner cells carry the baseline mean); true blocks must stay clear.
double bn_term(const Segmentation& t, const GroundTruth& truth, const SegConfig& cfg, int n);

struct TheoryDecomposition {
  double bn, vn, wn, zn;
  double jn;  // normalized criterion gap, computed independently from the criterion
  double lambda_inf, lambda_bar, delta_tau;
};

// All terms of the decomposition J_n = B_n + V_n + W_n + Z_n for a matrix
// generated from this truth (the noise is recovered cell-wise as Y - E[Y]).
TheoryDecomposition random_terms(const Segmentation& t, const ObservationMatrix& y,
                                 const GroundTruth& truth, const SegConfig& cfg);

enum class Lemma1Mode { kUnder, kOver, kEqualFar };

std::string to_string(Lemma1Mode mode);
Lemma1Mode lemma1_mode_from_string(const std::string& s);

struct Lemma1Options {
  double delta = -1.0;            // kEqualFar threshold; default delta_tau / 4
  long long budget = 1'000'000;   // sample size when the class is too large to enumerate
  int k_over_max = -1;            // largest K checked in kOver mode; default K* + 1
  std::uint64_t sample_seed = 0x5eedULL;
};

struct Lemma1Report {
  std::string mode;
  int n = 0;
  double bound = 0.0;
  double min_bn = 0.0;
  double margin = 0.0;  // min_bn - bound
  long long candidates_checked = 0;
  bool empty = false;       // no segmentation in the requested class
  bool exhaustive = true;   // false when uniform sampling replaced enumeration
};

// Verifies the lower bound on B_n over the class of segmentations named by
// the mode: fewer blocks than the truth (over the min-length-1 admissible
// set), more blocks than the truth, or the right number but far from the
// true boundaries in sup norm.
Lemma1Report lemma1_check(const GroundTruth& truth, const SegConfig& cfg, int n, Lemma1Mode mode,
                          const Lemma1Options& opts = {});

// Enumerates boundary vectors with K segment lengths in [l_min, l_max],
// in lexicographic order. Used by the lemma check and by test oracles.
void enumerate_segmentations(int n, int K, int l_min, int l_max,
                             const std::function<void(const Segmentation&)>& visit);

// Uniform draw from the same class, via a counting table.
Segmentation sample_segmentation(int n, int K, int l_min, int l_max, Xoshiro256pp& rng);

}  // namespace blockseg
