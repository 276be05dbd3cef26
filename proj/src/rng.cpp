#include "anisomean/rng.hpp"

#include <cmath>

#include "anisomean/errors.hpp"

namespace aniso {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngState::RngState(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& w : s_) w = splitmix64(x);
}

RngState RngState::substream(std::uint64_t seed, std::uint64_t index) {
  // Scramble the index before combining so that consecutive indices land far
  // apart in seed space.
  std::uint64_t ix = index;
  const std::uint64_t mixed = splitmix64(ix);
  return RngState(seed ^ (mixed + 0x632be59bd9b4e019ull));
}

std::uint64_t RngState::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5u, 7) * 9u;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngState::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngState::normal() {
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double r2 = u * u + v * v;
    if (r2 > 0.0 && r2 < 1.0) return u * std::sqrt(-2.0 * std::log(r2) / r2);
  }
}

double sample_gamma(RngState& rng, double shape) {
  require(shape > 0.0, errc::bad_parameter, "gamma shape must be positive");
  if (shape < 1.0) {
    // Boost: Gamma(a) = Gamma(a+1) * U^{1/a}.
    const double g = sample_gamma(rng, shape + 1.0);
    return g * std::pow(rng.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(RngState& rng, double a, double b) {
  require(a > 0.0 && b > 0.0, errc::bad_parameter, "beta parameters must be positive");
  const double ga = sample_gamma(rng, a);
  const double gb = sample_gamma(rng, b);
  return ga / (ga + gb);
}

}  // namespace aniso
