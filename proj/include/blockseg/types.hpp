#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

// Index convention used throughout: 0-based half-open blocks. A segmentation
// stores boundaries b_0 = 0 < b_1 < ... < b_K = n and block k covers the
// triangular cell set {(i,j) : b_{k-1} <= i <= j < b_k}. The 1-based
// boundaries t_k found in output files satisfy t_k = b_k + 1.

namespace blockseg {

// invalid parameters / infeasible configuration
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// file-format and filesystem failures
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ObservationMatrix {
 public:
  ObservationMatrix() = default;
  ObservationMatrix(int n, double fill = 0.0) : n_(n), v_(static_cast<size_t>(n) * n, fill) {}

  int n() const { return n_; }
  double operator()(int i, int j) const { return v_[static_cast<size_t>(i) * n_ + j]; }
  double& operator()(int i, int j) { return v_[static_cast<size_t>(i) * n_ + j]; }
  const std::vector<double>& values() const { return v_; }

  // all entries finite, symmetry within 1e-9 relative, n >= 8
  void validate() const;

 private:
  int n_ = 0;
  std::vector<double> v_;
};

struct Segmentation {
  std::vector<int> b;  // b.front() == 0, b.back() == n, strictly increasing

  int k() const { return static_cast<int>(b.size()) - 1; }
  bool operator==(const Segmentation&) const = default;

  void validate(int n) const;
  // conventional 1-based boundaries t_k = b_k + 1 used in output files
  std::vector<int> to_one_based() const;
};

struct SegConfig {
  double c = 0.75;       // max block-size fraction, in [1/2, 1)
  int min_len = 2;       // minimal block length
  int k_max = 20;        // largest number of blocks tried
  bool symmetrize = false;
};

// constants derived from (cfg, n)
struct DerivedConfig {
  int l_min;   // minimal admissible block length
  int l_max;   // ceil(c*n) - 1, the strict upper bound
  int n0;      // corner side length, floor((1-c)*n)
  int k_lo;    // smallest feasible K
  int k_hi;    // largest feasible K (capped by k_max)
};

DerivedConfig validate_config(const SegConfig& cfg, int n);

// true block structure driving simulation and theory checks
struct GroundTruth {
  std::vector<double> tau;  // 0 = tau_0 < ... < tau_{K*} = 1
  std::vector<double> mu;   // block means, size K*
  double mu0 = 0.0;         // baseline mean
  double sigma = 0.0;       // Gaussian noise sd
  double omega = 0.0;       // baseline-shift misspecification amplitude

  int k_star() const { return static_cast<int>(mu.size()); }
  void validate() const;

  // integer boundaries b*_k = floor(n * tau_k)
  Segmentation boundaries(int n) const;

  double delta_tau() const;   // min_k (tau_k - tau_{k-1})
  double lambda_inf() const;  // min_k |mu_k - mu0|
  double lambda_bar() const;  // sup over distinct block/baseline mean gaps
};

struct PerKRecord {
  int k = 0;
  bool feasible = false;
  Segmentation boundaries;   // empty when infeasible
  double criterion = 0.0;    // Q_n^K value, meaningless when infeasible
};

struct SegmentationResult {
  std::vector<PerKRecord> per_k;  // per_k[i] holds K = i + 1
  int k_hat = 0;
  Segmentation boundaries_hat;
  double m01 = 0.0;  // corner baseline mean estimate
};

inline bool nearly_equal(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace blockseg
