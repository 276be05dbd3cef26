#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "anisomean/linalg.hpp"
#include "anisomean/measure.hpp"
#include "anisomean/testfunction.hpp"

namespace aniso {

// Ball or axis-aligned box. The solver only needs the distance to the
// boundary from inside, an inside test, and the nearest boundary point.
struct Domain {
  enum class Shape { ball, box };

  Shape shape = Shape::ball;
  int n = 0;
  Vec center;          // ball
  double radius = 0.0; // ball
  Vec lo, hi;          // box

  static Domain ball(Vec center, double radius);
  static Domain box(Vec lo, Vec hi);

  // Negative inside, positive outside, zero on the boundary.
  double signed_distance(std::span<const double> x) const;
  bool contains(std::span<const double> x) const;
  // Nearest boundary point; exterior points are returned unchanged.
  Vec boundary_projection(std::span<const double> x) const;
};

struct WalkConfig {
  std::int64_t walks = 100000;
  std::int64_t max_steps = 10000;
  double theta = 1.0;  // step radius as a fraction of the boundary distance
  double hmax = std::numeric_limits<double>::infinity();  // step radius cap
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
};

struct WalkStats {
  double estimate = 0.0;
  double std_error = 0.0;   // sample standard deviation / sqrt(count)
  double mean_steps = 0.0;
  double truncated_fraction = 0.0;
  std::int64_t count = 0;
};

// Estimates u(x0) for the exterior-value problem L u = 0 in Omega, u = g
// outside, by the jump walk: from x the step radius is
// r = min(theta * dist(x, boundary), hmax), the jump (rho, omega, sign) is
// drawn from the mean kernel of radius r, and the walk moves to
// x + sign * rho * omega. A walk that leaves Omega scores g at its landing
// point; one that reaches max_steps scores g at the nearest boundary point
// and counts as truncated.
//
// Walk i consumes the dedicated substream (seed, i), so the result is a
// function of the seed alone, for any worker count. Exact when every
// mean kernel of the measure satisfies the mean value property with the
// capped radius (the isotropic case); anisotropic runs carry a per-step
// bias that vanishes with hmax, surveyed by bias_scan.
WalkStats run_walks(const TestFunction& g, std::span<const double> x0, double s,
                    const SpectralMeasure& a, const Domain& omega, const WalkConfig& config);

struct BiasRow {
  double cap = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double diff_prev = 0.0;  // estimate minus the previous row's (0 for the first)
};

struct BiasScan {
  std::vector<BiasRow> rows;
};

// Runs run_walks once per cap (strictly decreasing caps required), all runs
// from the same seed so successive estimates share their random numbers, and
// reports the successive differences. For a consistent scheme the
// differences shrink towards the noise level as the cap tightens.
BiasScan bias_scan(const TestFunction& g, std::span<const double> x0, double s,
                   const SpectralMeasure& a, const Domain& omega, const WalkConfig& config,
                   std::span<const double> caps);

}  // namespace aniso
