#pragma once

#include <cstdint>

#include "rsoc/types.hpp"

namespace rsoc {

enum class NoiseDistribution { gaussian };

struct NoiseConfig {
  double eps = 0.0;  // smoothing magnitude; 0 disables smoothing entirely
  int samples = 1;   // Monte-Carlo batch size M
  NoiseDistribution distribution = NoiseDistribution::gaussian;
  std::uint64_t seed = 0;
};

// One Monte-Carlo batch of standard-normal control perturbations for a single
// (seed, epoch, timestep) key. The key fully determines the content, so the
// same batch can be re-materialized anywhere (backward pass, every line-search
// trial) without storing or synchronizing state.
struct SampleSet {
  std::vector<Vec> z;  // M vectors of length dim
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  std::uint64_t timestep = 0;
  int size() const { return static_cast<int>(z.size()); }
};

// Standard normal at a counter key; pure function of its arguments.
double normal_at(std::uint64_t seed, std::uint64_t epoch, std::uint64_t t,
                 std::uint64_t sample, std::uint64_t lane);

SampleSet draw_sample_set(const NoiseConfig& config, std::uint64_t epoch, std::uint64_t t,
                          int dim);

}  // namespace rsoc
