#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "anisomean/evaluation.hpp"
#include "anisomean/measure.hpp"
#include "anisomean/testfunction.hpp"

namespace aniso {

// u(x) - (mean value of radius r) - normalization * r^{2s} * (operator value):
// the remainder of the second-order expansion, O(r^2) for C2 functions.
double expansion_residual(const TestFunction& u, std::span<const double> x, double r, double s,
                          const SpectralMeasure& a, const QuadratureSpec& spec = {});

struct OrderFit {
  Vec radii;
  Vec residuals;       // |expansion residual| per radius
  double slope = 0.0;  // least-squares slope of log|residual| vs log r
  double fit_rms = 0.0;
  bool vacuous = false;  // too many residuals at the rounding floor to fit
};

// Fits the decay order of the expansion residual over a radius ladder.
// Residuals below 100 * eps * sup|u| are excluded; if fewer than two survive
// the fit is vacuous (slope reported as +infinity).
OrderFit fit_expansion_order(const TestFunction& u, std::span<const double> x, double s,
                             const SpectralMeasure& a, std::span<const double> ladder,
                             const QuadratureSpec& spec = {});

struct LimitRow {
  double s = 0.0;
  double value = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
};

struct LimitReport {
  double target = 0.0;
  std::vector<LimitRow> rows;
  bool errors_strictly_decreasing = false;
  double final_rel_err = 0.0;
};

// (1-s) * L u(x) against the local target -(1/2) sum m_ij d_ij u(x) over an
// s ladder increasing towards 1.
LimitReport local_limit_operator(const TestFunction& u, std::span<const double> x,
                                 const SpectralMeasure& a, std::span<const double> s_ladder,
                                 const QuadratureSpec& spec = {});

// Mean value of fixed radius r against the spherical average
// (2 mass)^{-1} * integral [u(x+r omega) + u(x-r omega)] d a over the ladder.
LimitReport local_limit_mean(const TestFunction& u, std::span<const double> x, double r,
                             const SpectralMeasure& a, std::span<const double> s_ladder,
                             const QuadratureSpec& spec = {});

struct SeminormResult {
  double squared = 0.0;
  double error_estimate = 0.0;    // radial refinement delta
  double truncation_bound = 0.0;  // coarse bound on mass outside the core box
};

// Squared anisotropic Gagliardo seminorm
//   integral dx integral_0^inf d rho integral d a(omega)
//     [(u(x)-u(x+rho omega))^2 + (u(x)-u(x-rho omega))^2] rho^{-1-2s}.
// x runs over a core box (support for compact u, center + 6 widths for
// Gaussian decay) by composite Gauss-Legendre panels; the radial integral
// reuses the operator's split substitutions; the exact far-field reach-in
// term (the kernel mass that rays from outside the box deposit inside it) is
// added in closed form. n in {1,2}; plane waves are rejected
// (UnboundedSupport), C0 entries too (NotC2AtPoint).
SeminormResult hs_seminorm(const TestFunction& u, double s, const SpectralMeasure& a,
                           const QuadratureSpec& spec = {});

struct McSeminormResult {
  double squared = 0.0;
  double std_error = 0.0;
  std::int64_t count = 0;
};

// Monte Carlo counterpart: importance sampling with the same radial split
// (rho^{1-2s} inside rho0, rho^{-1-2s} outside), x uniform over the core box,
// directions from the normalized measure. The deterministic far-field term is
// included, so the estimator targets the same quantity as hs_seminorm.
McSeminormResult hs_seminorm_mc(const TestFunction& u, double s, const SpectralMeasure& a,
                                std::int64_t count, std::uint64_t seed,
                                const QuadratureSpec& spec = {});

// Squared first-order seminorm: integral of <m grad u, grad u> with m the
// measure's second-moment matrix.
SeminormResult h1_seminorm(const TestFunction& u, const SpectralMeasure& a,
                           const QuadratureSpec& spec = {});

// Squared L2 norm over the same core box.
double l2_norm_sq(const TestFunction& u, const QuadratureSpec& spec = {});

// Interpolation energy: squared seminorm divided by 4.
double energy(const TestFunction& u, double s, const SpectralMeasure& a,
              const QuadratureSpec& spec = {});

struct BbmRow {
  double s = 0.0;
  double hs_sq = 0.0;      // squared seminorm at s
  double scaled = 0.0;     // (1-s) * hs_sq
  double abs_err = 0.0;    // |scaled - h1_sq|
  double rel_err = 0.0;
  double ineq_ratio = 0.0; // scaled / (h1 + l2)^2, the uniform-bound ratio
};

struct BbmReport {
  double h1_sq = 0.0;
  double l2_sq = 0.0;
  std::vector<BbmRow> rows;
  bool errors_strictly_decreasing = false;
  double final_rel_err = 0.0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

// Scaled-seminorm limit table over an s ladder increasing towards 1.
BbmReport bbm_check(const TestFunction& u, const SpectralMeasure& a,
                    std::span<const double> s_ladder, const QuadratureSpec& spec = {});

}  // namespace aniso
