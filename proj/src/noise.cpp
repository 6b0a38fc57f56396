#include "rsoc/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace rsoc {

namespace {

// SplitMix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t key_word(std::uint64_t seed, std::uint64_t epoch, std::uint64_t t,
                              std::uint64_t sample, std::uint64_t word) {
  std::uint64_t h = mix64(seed ^ 0x8f1bbcdcbfa53e0bULL);
  h = mix64(h ^ epoch);
  h = mix64(h ^ t);
  h = mix64(h ^ sample);
  h = mix64(h ^ word);
  return h;
}

// Top 53 bits -> double. u1 in (0,1] so log() is safe; u2 in [0,1).
inline double uniform_open(std::uint64_t w) {
  return (static_cast<double>(w >> 11) + 1.0) * 0x1.0p-53;
}
inline double uniform_half_open(std::uint64_t w) {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

}  // namespace

double normal_at(std::uint64_t seed, std::uint64_t epoch, std::uint64_t t,
                 std::uint64_t sample, std::uint64_t lane) {
  const double u1 = uniform_open(key_word(seed, epoch, t, sample, 2 * lane));
  const double u2 = uniform_half_open(key_word(seed, epoch, t, sample, 2 * lane + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

SampleSet draw_sample_set(const NoiseConfig& config, std::uint64_t epoch, std::uint64_t t,
                          int dim) {
  if (config.samples < 1) throw std::invalid_argument("draw_sample_set: samples must be >= 1");
  if (dim < 1) throw std::invalid_argument("draw_sample_set: dim must be >= 1");
  SampleSet set;
  set.seed = config.seed;
  set.epoch = epoch;
  set.timestep = t;
  set.z.resize(static_cast<std::size_t>(config.samples));
  for (int i = 0; i < config.samples; ++i) {
    Vec& zi = set.z[static_cast<std::size_t>(i)];
    zi.resize(dim);
    for (int j = 0; j < dim; ++j) {
      zi[j] = normal_at(config.seed, epoch, t, static_cast<std::uint64_t>(i),
                        static_cast<std::uint64_t>(j));
    }
  }
  return set;
}

}  // namespace rsoc
