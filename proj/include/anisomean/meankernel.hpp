#pragma once

#include <cstdint>
#include <span>

#include "anisomean/evaluation.hpp"
#include "anisomean/measure.hpp"
#include "anisomean/rng.hpp"
#include "anisomean/testfunction.hpp"

namespace aniso {

// Nonlocal mean of radius r and order s against the measure a:
//   M u(x) = normalization * r^{2s} * integral_r^inf integral_sphere
//            [u(x + rho omega) + u(x - rho omega)] / ((rho^2 - r^2)^s rho)
// with normalization = sin(pi s) / (pi * total mass), which makes M 1 = 1
// exactly. The kernel is a probability density in (rho, omega, sign).
struct MeanKernelParams {
  double r = 0.0;
  double s = 0.0;
  double normalization = 0.0;
  const SpectralMeasure* measure = nullptr;
};

MeanKernelParams make_mean_kernel(double r, double s, const SpectralMeasure& a);

// Quadrature evaluation: the substitution w = 1 - (r/rho)^2 turns the radial
// integral into a Gauss-Jacobi sum with weight w^{-s} (1-w)^{s-1}; the rule is
// run at N and 2N nodes and the difference reported as error estimate.
EvalResult mean_value(const TestFunction& u, std::span<const double> x,
                      const MeanKernelParams& kernel, const QuadratureSpec& spec = {});

// Radial density of the jump length, supported on rho > r (DomainError at or
// below r). Integrates to one.
double kernel_density(double rho, const MeanKernelParams& kernel);

struct Jump {
  double rho = 0.0;
  Vec omega;
  int sign = 1;  // +1 or -1, the side of x the jump lands on
};

// Draw (rho, omega, sign) from the kernel: (r/rho)^2 = 1 - w with
// w ~ Beta(1-s, s), omega from the normalized measure, sign a fair coin.
Jump sample_jump(const MeanKernelParams& kernel, RngState& rng);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t count = 0;
};

// Monte Carlo counterpart of mean_value: average u over `count` jumps.
McEstimate mc_mean_value(const TestFunction& u, std::span<const double> x,
                         const MeanKernelParams& kernel, std::int64_t count,
                         std::uint64_t seed);

}  // namespace aniso
