#pragma once

#include <cstdint>

namespace aniso {

// xoshiro256** seeded through splitmix64. Self-contained so that streams are
// bit-identical across platforms and so that per-walk substreams can be derived
// cheaply: substream(seed, i) and substream(seed, j) are decorrelated for
// i != j because splitmix64 scrambles the combined key.
class RngState {
 public:
  explicit RngState(std::uint64_t seed);
  static RngState substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();

  // Strictly inside (0,1): 53-bit mantissa offset by half an ulp.
  double uniform();

  // Standard normal via Marsaglia polar rejection; the spare value is
  // discarded to keep the state a pure function of draw count.
  double normal();

 private:
  std::uint64_t s_[4];
};

// Gamma(shape, 1) by Marsaglia-Tsang squeeze; shape < 1 uses the u^{1/shape}
// boost. Requires shape > 0.
double sample_gamma(RngState& rng, double shape);

// Beta(a, b) as Ga / (Ga + Gb). Requires a, b > 0.
double sample_beta(RngState& rng, double a, double b);

}  // namespace aniso
