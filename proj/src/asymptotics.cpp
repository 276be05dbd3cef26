#include "anisomean/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anisomean/meankernel.hpp"
#include "anisomean/operator.hpp"
#include "anisomean/quadrature.hpp"

namespace aniso {

namespace {

// ── core box for the x-integrals ────────────────────────────────────────────

double core_extent(const TestFunction& u) {
  switch (u.decay) {
    case Decay::compact:
      return u.support_radius;
    case Decay::gaussian:
      return u.center_offset + 6.0 * u.width;
    case Decay::none:
      fail(errc::unbounded_support,
           "seminorms need compactly supported or Gaussian-decay functions");
  }
  return 0.0;
}

struct XGrid {
  std::vector<Vec> pts;
  Vec wts;
  double extent = 0.0;
};

// Composite Gauss-Legendre panels on [-X, X]^n, panel size tied to the
// function's own scale so narrow bumps are resolved.
XGrid core_grid(const TestFunction& u) {
  const double X = core_extent(u);
  XGrid g;
  g.extent = X;

  const int panels =
      u.n == 1 ? std::clamp(static_cast<int>(std::ceil(2.0 * X / (0.5 * u.width))), 8, 48)
               : std::clamp(static_cast<int>(std::ceil(2.0 * X / (0.75 * u.width))), 4, 16);
  const int nodes = u.n == 1 ? 8 : 6;
  const JacobiRule gl = gauss_legendre(nodes);

  Vec axis_pts, axis_wts;
  const double h = 2.0 * X / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = -X + p * h;
    for (int q = 0; q < nodes; ++q) {
      axis_pts.push_back(lo + h * gl.nodes[q]);
      axis_wts.push_back(h * gl.weights[q]);
    }
  }

  if (u.n == 1) {
    for (std::size_t i = 0; i < axis_pts.size(); ++i) {
      g.pts.push_back(Vec{axis_pts[i]});
      g.wts.push_back(axis_wts[i]);
    }
  } else {
    for (std::size_t i = 0; i < axis_pts.size(); ++i)
      for (std::size_t j = 0; j < axis_pts.size(); ++j) {
        g.pts.push_back(Vec{axis_pts[i], axis_pts[j]});
        g.wts.push_back(axis_wts[i] * axis_wts[j]);
      }
  }
  return g;
}

// Directions and weights of the measure as a flat list.
std::vector<SpherePoint> measure_nodes(const SpectralMeasure& a, int resolution) {
  if (!a.nodes().empty()) {
    std::vector<SpherePoint> out;
    out.reserve(a.nodes().size());
    for (const auto& at : a.nodes()) out.push_back({at.dir, at.weight});
    return out;
  }
  const int res = resolution > 0 ? resolution : kDefaultSphereResolution;
  return sphere_rule(a.dim(), res).points;
}

// First positive radius at which y + t*omega leaves [-X, X]^n. Positive for
// interior y; rays never re-enter a convex box.
double box_exit_radius(std::span<const double> y, std::span<const double> omega, double X) {
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (std::abs(omega[i]) < 1e-300) continue;
    const double wall = omega[i] > 0.0 ? X : -X;
    t = std::min(t, (wall - y[i]) / omega[i]);
  }
  return std::max(t, 0.0);
}

void check_seminorm_inputs(const TestFunction& u, const SpectralMeasure& a) {
  require(u.n <= 2, errc::unsupported_dimension, "seminorms are implemented for n in {1,2}");
  require(a.dim() == u.n, errc::dimension_mismatch,
          "measure dimension does not match the function");
  require(u.smoothness != Smoothness::c0 && u.has_derivatives(), errc::not_c2_at_point,
          "seminorms need a differentiable function");
  a.total_mass();
}

// Exact kernel mass that reaches from outside the core box back into it:
// integral over the box of u(y)^2 times the tail measure of rays leaving it.
double far_field_term(const XGrid& g, const std::vector<SpherePoint>& dirs,
                      const TestFunction& u, double s) {
  double acc = 0.0;
  Vec neg;
  for (std::size_t i = 0; i < g.pts.size(); ++i) {
    const Vec& y = g.pts[i];
    const double uy = u.value(y);
    if (uy == 0.0) continue;
    double k = 0.0;
    for (const auto& d : dirs) {
      neg = scaled(d.dir, -1.0);
      const double rp = box_exit_radius(y, d.dir, g.extent);
      const double rm = box_exit_radius(y, neg, g.extent);
      k += d.weight * (std::pow(rp, -2.0 * s) + std::pow(rm, -2.0 * s));
    }
    acc += g.wts[i] * uy * uy * k;
  }
  return acc / (2.0 * s);
}

// Largest |u| on the core box boundary, the scale of what far_field_term's
// compact-support assumption neglects.
double boundary_sup(const TestFunction& u, double X) {
  if (u.decay == Decay::compact && X >= u.support_radius) return 0.0;
  double m = 0.0;
  if (u.n == 1) {
    m = std::max(std::abs(u.value(Vec{X})), std::abs(u.value(Vec{-X})));
  } else {
    for (int j = 0; j < 64; ++j) {
      const double th = 2.0 * M_PI * j / 64;
      const double c = std::cos(th), sn = std::sin(th);
      const double scale = X / std::max(std::abs(c), std::abs(sn));
      m = std::max(m, std::abs(u.value(Vec{scale * c, scale * sn})));
    }
  }
  return m;
}

// Sum over the measure and both signs of (u(x) - u(x +- rho omega))^2.
double sq_diff_sum(const TestFunction& u, const Vec& x, double ux, double rho,
                   const std::vector<SpherePoint>& dirs) {
  double acc = 0.0;
  for (const auto& d : dirs) {
    const Vec yp = axpy(x, rho, d.dir);
    const Vec ym = axpy(x, -rho, d.dir);
    const double dp = ux - u.value(yp);
    const double dm = ux - u.value(ym);
    acc += d.weight * (dp * dp + dm * dm);
  }
  return acc;
}

}  // namespace

// ── expansion ────────────────────────────────────────────────────────────────

double expansion_residual(const TestFunction& u, std::span<const double> x, double r, double s,
                          const SpectralMeasure& a, const QuadratureSpec& spec) {
  const MeanKernelParams kernel = make_mean_kernel(r, s, a);
  const EvalResult mv = mean_value(u, x, kernel, spec);
  const EvalResult op = eval_operator(u, x, s, a, spec);
  return u.value(x) - mv.value - kernel.normalization * std::pow(r, 2.0 * s) * op.value;
}

OrderFit fit_expansion_order(const TestFunction& u, std::span<const double> x, double s,
                             const SpectralMeasure& a, std::span<const double> ladder,
                             const QuadratureSpec& spec) {
  require(ladder.size() >= 3, errc::bad_parameter, "order fit needs at least three radii");
  OrderFit fit;
  for (double r : ladder) {
    require(r > 0.0 && std::isfinite(r), errc::bad_parameter, "radii must be positive");
    fit.radii.push_back(r);
    fit.residuals.push_back(std::abs(expansion_residual(u, x, r, s, a, spec)));
  }

  const double floor =
      100.0 * std::numeric_limits<double>::epsilon() * std::max(u.sup_bound, 1e-12);
  Vec lx, ly;
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    if (fit.residuals[i] > floor) {
      lx.push_back(std::log(fit.radii[i]));
      ly.push_back(std::log(fit.residuals[i]));
    }
  }
  if (lx.size() < 2) {
    fit.vacuous = true;
    fit.slope = std::numeric_limits<double>::infinity();
    return fit;
  }

  const std::size_t m = lx.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) { mx += lx[i]; my += ly[i]; }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double pred = my + fit.slope * (lx[i] - mx);
    rss += (ly[i] - pred) * (ly[i] - pred);
  }
  fit.fit_rms = std::sqrt(rss / static_cast<double>(m));
  return fit;
}

// ── local limits ────────────────────────────────────────────────────────────

namespace {

LimitReport assemble_limit(double target, const Vec& svals, const Vec& values) {
  LimitReport rep;
  rep.target = target;
  const double scale = std::max(std::abs(target), 1e-300);
  bool dec = true;
  for (std::size_t i = 0; i < svals.size(); ++i) {
    LimitRow row;
    row.s = svals[i];
    row.value = values[i];
    row.abs_err = std::abs(values[i] - target);
    row.rel_err = row.abs_err / scale;
    if (i > 0 && !(row.abs_err < rep.rows.back().abs_err)) dec = false;
    rep.rows.push_back(row);
  }
  rep.errors_strictly_decreasing = dec && svals.size() >= 2;
  rep.final_rel_err = rep.rows.empty() ? 0.0 : rep.rows.back().rel_err;
  return rep;
}

void check_ladder(std::span<const double> s_ladder) {
  require(s_ladder.size() >= 2, errc::bad_parameter, "ladder needs at least two values");
  for (double s : s_ladder)
    require(s > 0.0 && s < 1.0, errc::bad_parameter, "ladder values must lie in (0,1)");
  // Decreasing-error reporting is meaningless unless the ladder approaches 1.
  for (std::size_t i = 1; i < s_ladder.size(); ++i)
    require(s_ladder[i] > s_ladder[i - 1], errc::bad_parameter,
            "ladder must increase strictly");
}

}  // namespace

LimitReport local_limit_operator(const TestFunction& u, std::span<const double> x,
                                 const SpectralMeasure& a, std::span<const double> s_ladder,
                                 const QuadratureSpec& spec) {
  check_ladder(s_ladder);
  require(u.has_derivatives(), errc::not_c2_at_point, "local limit needs second derivatives");
  const Matrix m = a.second_moment(spec.sphere_resolution);
  const Matrix h = u.hessian(x);
  const double target = -0.5 * m.inner(h);

  Vec svals(s_ladder.begin(), s_ladder.end());
  Vec values;
  for (double s : svals)
    values.push_back((1.0 - s) * eval_operator(u, x, s, a, spec).value);
  return assemble_limit(target, svals, values);
}

LimitReport local_limit_mean(const TestFunction& u, std::span<const double> x, double r,
                             const SpectralMeasure& a, std::span<const double> s_ladder,
                             const QuadratureSpec& spec) {
  check_ladder(s_ladder);
  require(r > 0.0 && std::isfinite(r), errc::bad_parameter, "radius must be positive");
  const double target =
      a.integrate(
          [&](std::span<const double> omega) {
            const Vec y = scaled(omega, r);
            return u.value(axpy(x, 1.0, y)) + u.value(axpy(x, -1.0, y));
          },
          spec.sphere_resolution) /
      (2.0 * a.total_mass());

  Vec svals(s_ladder.begin(), s_ladder.end());
  Vec values;
  for (double s : svals)
    values.push_back(mean_value(u, x, make_mean_kernel(r, s, a), spec).value);
  return assemble_limit(target, svals, values);
}

// ── seminorms ───────────────────────────────────────────────────────────────

namespace {

// One full tensor pass of the squared seminorm core at a given radial size.
double hs_core_pass(const TestFunction& u, double s, const XGrid& g,
                    const std::vector<SpherePoint>& dirs, double rho0, int nodes) {
  const JacobiRule inner = gauss_jacobi(0.0, 1.0 - 2.0 * s, nodes);
  const JacobiRule tail = gauss_jacobi(0.0, 2.0 * s - 1.0, nodes);
  const double cin = std::pow(rho0, 2.0 - 2.0 * s);
  const double cta = std::pow(rho0, -2.0 * s);

  double acc = 0.0;
  for (std::size_t i = 0; i < g.pts.size(); ++i) {
    const Vec& x = g.pts[i];
    const double ux = u.value(x);
    double radial = 0.0;
    for (int q = 0; q < inner.size(); ++q) {
      const double rho = rho0 * inner.nodes[q];
      radial += cin * inner.weights[q] * sq_diff_sum(u, x, ux, rho, dirs) / (rho * rho);
    }
    for (int q = 0; q < tail.size(); ++q) {
      const double rho = rho0 / tail.nodes[q];
      radial += cta * tail.weights[q] * sq_diff_sum(u, x, ux, rho, dirs);
    }
    acc += g.wts[i] * radial;
  }
  return acc;
}

double truncation_diagnostic(const TestFunction& u, const SpectralMeasure& a, double s,
                             double X) {
  const double ub = boundary_sup(u, X);
  if (ub == 0.0) return 0.0;
  const double kappa = 1.0 / (2.0 - 2.0 * s) + 1.0 / (2.0 * s);
  return 8.0 * a.total_mass() * ub * std::max(u.sup_bound, 1.0) *
         std::pow(2.0 * X, u.n) * kappa;
}

}  // namespace

SeminormResult hs_seminorm(const TestFunction& u, double s, const SpectralMeasure& a,
                           const QuadratureSpec& spec) {
  require(s > 0.0 && s < 1.0, errc::bad_parameter, "s must lie in (0,1)");
  check_seminorm_inputs(u, a);
  const XGrid g = core_grid(u);
  const auto dirs = measure_nodes(a, spec.sphere_resolution);

  const int n1 = spec.radial_nodes;
  const int n2 = std::min(2 * n1, 512);
  const double far = far_field_term(g, dirs, u, s);
  const double coarse = hs_core_pass(u, s, g, dirs, spec.rho0, n1) + far;
  const double fine = hs_core_pass(u, s, g, dirs, spec.rho0, n2) + far;

  SeminormResult r;
  r.squared = fine;
  r.error_estimate = std::abs(fine - coarse);
  r.truncation_bound = truncation_diagnostic(u, a, s, g.extent);
  require(std::isfinite(r.squared), errc::nonfinite_value, "seminorm overflowed");
  return r;
}

McSeminormResult hs_seminorm_mc(const TestFunction& u, double s, const SpectralMeasure& a,
                                std::int64_t count, std::uint64_t seed,
                                const QuadratureSpec& spec) {
  require(s > 0.0 && s < 1.0, errc::bad_parameter, "s must lie in (0,1)");
  require(count > 0, errc::bad_parameter, "sample count must be positive");
  check_seminorm_inputs(u, a);
  const XGrid g = core_grid(u);
  const double X = g.extent;
  const double rho0 = spec.rho0;
  const double mass = a.total_mass();
  const double volume = std::pow(2.0 * X, u.n);
  const double norm_in = std::pow(rho0, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
  const double norm_out = std::pow(rho0, -2.0 * s) / (2.0 * s);

  const auto dirs = measure_nodes(a, spec.sphere_resolution);
  const double far = far_field_term(g, dirs, u, s);

  RngState rng(seed);
  Vec x(u.n);
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t i = 0; i < count; ++i) {
    for (auto& c : x) c = X * (2.0 * rng.uniform() - 1.0);
    const Vec omega = a.sample_direction(rng);
    const double ux = u.value(x);

    // Inner draw: density (2-2s) rho^{1-2s} / rho0^{2-2s} on (0, rho0).
    const double ri = rho0 * std::pow(rng.uniform(), 1.0 / (2.0 - 2.0 * s));
    const double dpi = ux - u.value(axpy(x, ri, omega));
    const double dmi = ux - u.value(axpy(x, -ri, omega));
    const double gin = (dpi * dpi + dmi * dmi) / (ri * ri);

    // Tail draw: density 2s rho0^{2s} rho^{-1-2s} on (rho0, inf).
    const double ro = rho0 * std::pow(rng.uniform(), -1.0 / (2.0 * s));
    const double dpo = ux - u.value(axpy(x, ro, omega));
    const double dmo = ux - u.value(axpy(x, -ro, omega));
    const double gout = dpo * dpo + dmo * dmo;

    const double v = volume * mass * (norm_in * gin + norm_out * gout);
    sum += v;
    sumsq += v * v;
  }

  McSeminormResult r;
  r.count = count;
  const double mean = sum / static_cast<double>(count);
  r.squared = mean + far;
  const double var = std::max(0.0, sumsq / static_cast<double>(count) - mean * mean);
  r.std_error = std::sqrt(var / static_cast<double>(count));
  return r;
}

SeminormResult h1_seminorm(const TestFunction& u, const SpectralMeasure& a,
                           const QuadratureSpec& spec) {
  check_seminorm_inputs(u, a);
  const Matrix m = a.second_moment(spec.sphere_resolution);
  const XGrid g = core_grid(u);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.pts.size(); ++i) {
    const Vec grad = u.gradient(g.pts[i]);
    acc += g.wts[i] * m.quad(grad);
  }
  SeminormResult r;
  r.squared = acc;
  return r;
}

double l2_norm_sq(const TestFunction& u, const QuadratureSpec&) {
  require(u.decay != Decay::none, errc::unbounded_support,
          "L2 norm needs decaying functions");
  require(u.n <= 2, errc::unsupported_dimension, "norms are implemented for n in {1,2}");
  const XGrid g = core_grid(u);
  double acc = 0.0;
  for (std::size_t i = 0; i < g.pts.size(); ++i) {
    const double v = u.value(g.pts[i]);
    acc += g.wts[i] * v * v;
  }
  return acc;
}

double energy(const TestFunction& u, double s, const SpectralMeasure& a,
              const QuadratureSpec& spec) {
  return 0.25 * hs_seminorm(u, s, a, spec).squared;
}

BbmReport bbm_check(const TestFunction& u, const SpectralMeasure& a,
                    std::span<const double> s_ladder, const QuadratureSpec& spec) {
  check_ladder(s_ladder);
  BbmReport rep;
  rep.h1_sq = h1_seminorm(u, a, spec).squared;
  rep.l2_sq = l2_norm_sq(u, spec);
  const double norm_sq =
      (std::sqrt(rep.h1_sq) + std::sqrt(rep.l2_sq)) * (std::sqrt(rep.h1_sq) + std::sqrt(rep.l2_sq));

  bool dec = true;
  for (double s : s_ladder) {
    BbmRow row;
    row.s = s;
    row.hs_sq = hs_seminorm(u, s, a, spec).squared;
    row.scaled = (1.0 - s) * row.hs_sq;
    row.abs_err = std::abs(row.scaled - rep.h1_sq);
    row.rel_err = row.abs_err / std::max(rep.h1_sq, 1e-300);
    row.ineq_ratio = row.scaled / norm_sq;
    if (!rep.rows.empty() && !(row.abs_err < rep.rows.back().abs_err)) dec = false;
    rep.rows.push_back(row);
  }
  rep.errors_strictly_decreasing = dec && rep.rows.size() >= 2;
  rep.final_rel_err = rep.rows.back().rel_err;
  rep.ratio_min = rep.rows.front().ineq_ratio;
  rep.ratio_max = rep.rows.front().ineq_ratio;
  for (const auto& row : rep.rows) {
    rep.ratio_min = std::min(rep.ratio_min, row.ineq_ratio);
    rep.ratio_max = std::max(rep.ratio_max, row.ineq_ratio);
  }
  return rep;
}

}  // namespace aniso
