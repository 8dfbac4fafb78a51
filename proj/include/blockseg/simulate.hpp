#pragma once

#include <cstdint>
#include <utility>

#include "blockseg/types.hpp"

namespace blockseg {

struct SimSpec {
  int n = 0;
  GroundTruth truth;
  std::uint64_t seed = 0;
  // noise family: only Gaussian is generated; the truth's sigma scales it
};

// Mean matrix for this truth: mu_k on the diagonal blocks, mu0 + omega
// elsewhere (omega shifts the baseline towards the block means).
ObservationMatrix mean_matrix(const SimSpec& spec, const SegConfig& cfg);

// Draws noise for i <= j in row-major order from a single xoshiro256++
// stream seeded by spec.seed, then mirrors to enforce exact symmetry.
// Same spec -> bit-identical matrix.
std::pair<ObservationMatrix, Segmentation> generate(const SimSpec& spec,
                                                    const SegConfig& cfg = SegConfig{});

// Pooled sample mean and variance of the generated noise across replicates
// (replicate r uses seed spec.seed + r).
std::pair<double, double> empirical_noise_moments(const SimSpec& spec, const SegConfig& cfg,
                                                  int replicates);

}  // namespace blockseg
