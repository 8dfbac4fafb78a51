#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blockseg/types.hpp"

namespace blockseg {

struct ExperimentConfig {
  std::vector<int> n_values;
  std::vector<double> sigma_values;
  std::vector<double> omega_values = {0.0};
  int replicates = 50;
  std::uint64_t base_seed = 1;
  GroundTruth truth;  // sigma/omega fields are overridden per cell
  SegConfig seg;
  int jobs = 0;  // 0 = available parallelism; BLOCKSEG_JOBS overrides
};

// Reads a JSON or TOML config (decided by extension, .toml vs anything else).
ExperimentConfig load_experiment_config(const std::string& path);

struct ReplicateRow {
  int n;
  double sigma;
  double omega;
  std::uint64_t seed;
  int k_hat;
  int h1;
  int h2;
  long long runtime_ms;
};

// Runs every (n, sigma, omega) x replicate cell, replicate-parallel, and
// writes <output> (one row per replicate, sorted by cell then seed) plus
// <output stem>_aggregate.csv with per-cell median/Q1/Q3. Rows already
// present in an existing output file are kept and not recomputed, so an
// interrupted run can be resumed without duplicating (cell, seed) pairs.
std::vector<ReplicateRow> run_experiment(const ExperimentConfig& cfg, const std::string& output);

void write_replicate_csv(const std::vector<ReplicateRow>& rows, const std::string& path);
void write_aggregate_csv(const std::vector<ReplicateRow>& rows, const std::string& path);

std::string aggregate_path_for(const std::string& output);

}  // namespace blockseg
