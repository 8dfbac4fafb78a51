// Compares the serial and OpenMP DP row fills on a simulated matrix and
// verifies they produce the same table.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "blockseg/dp.hpp"
#include "blockseg/prefix_stats.hpp"
#include "blockseg/simulate.hpp"

using namespace blockseg;

namespace {

double time_build(const PrefixStats& stats, const SegConfig& cfg, bool parallel, DPTable& out) {
  const auto start = std::chrono::steady_clock::now();
  out = build_dp_table(stats, cfg, cfg.k_max, parallel);
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 1500;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;

  SimSpec spec;
  spec.n = n;
  spec.truth.tau = {0.0, 0.07, 0.2, 0.4, 0.67, 1.0};
  spec.truth.mu = {1.0, 1.0, 1.0, 1.0, 1.0};
  spec.truth.mu0 = 0.0;
  spec.truth.sigma = 1.0;
  spec.seed = 42;
  SegConfig cfg;

  const auto [y, t_star] = generate(spec, cfg);
  const PrefixStats stats(y, cfg);

  double best_serial = 1e300, best_parallel = 1e300;
  DPTable serial, parallel;
  for (int r = 0; r < reps; ++r) {
    DPTable t;
    best_serial = std::min(best_serial, time_build(stats, cfg, false, t));
    serial = std::move(t);
    best_parallel = std::min(best_parallel, time_build(stats, cfg, true, t));
    parallel = std::move(t);
  }

  const bool identical = serial.cost == parallel.cost && serial.arg == parallel.arg;
  std::printf("n=%d k_max=%d\n", n, cfg.k_max);
  std::printf("serial   best of %d: %.3fs\n", reps, best_serial);
  std::printf("parallel best of %d: %.3fs (speedup %.2fx)\n", reps, best_parallel,
              best_serial / best_parallel);
  std::printf("tables identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
