#include "anisomean/operator.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "anisomean/quadrature.hpp"

namespace aniso {

double second_difference(const TestFunction& u, std::span<const double> x,
                         std::span<const double> y) {
  require(static_cast<int>(x.size()) == u.n && x.size() == y.size(), errc::dimension_mismatch,
          "point and offset must match the function dimension");
  const Vec xm = axpy(x, -1.0, y);
  const Vec xp = axpy(x, +1.0, y);
  return 2.0 * u.value(x) - u.value(xm) - u.value(xp);
}

namespace {

void check_eval_inputs(const TestFunction& u, std::span<const double> x, double s,
                       const SpectralMeasure& a, const QuadratureSpec& spec) {
  require(s > 0.0 && s < 1.0, errc::bad_parameter, "s must lie in (0,1)");
  require(static_cast<int>(x.size()) == u.n, errc::dimension_mismatch,
          "evaluation point has wrong dimension");
  require(a.dim() == u.n, errc::dimension_mismatch,
          "measure dimension does not match the function");
  require(spec.rho0 > 0.0 && std::isfinite(spec.rho0), errc::bad_parameter,
          "split radius must be positive");
  require(spec.radial_nodes >= 1, errc::bad_parameter, "radial_nodes must be positive");
  require(spec.sphere_resolution >= 0, errc::bad_parameter,
          "sphere_resolution must be nonnegative");
  require(spec.tail_cap == 0.0 || spec.tail_cap > spec.rho0, errc::bad_parameter,
          "tail_cap must exceed rho0");
  a.total_mass();  // NullMeasure guard
}

// Spherical average of the second difference at radius rho.
double sphere_sd(const TestFunction& u, std::span<const double> x, double rho,
                 const SpectralMeasure& a, int resolution) {
  return a.integrate(
      [&](std::span<const double> omega) {
        const Vec y = scaled(omega, rho);
        return second_difference(u, x, y);
      },
      resolution);
}

// Inner piece: rho = rho0 w; integrand (second difference)/rho^2 extends
// smoothly to w = 0 (value -<D2u(x) omega, omega> averaged), weight w^{1-2s}.
//
// Computing the ratio by subtraction loses everything once rho^2 dips below
// the rounding noise of u, and as s approaches 1 the Jacobi weight puts
// nearly all its mass exactly there. Below a crossover radius the ratio is
// replaced by its rho -> 0 limit, the averaged Hessian quadratic form; the
// crossover balances the eps |u| / rho^2 subtraction noise against the
// rho^2 Taylor error, with the Hessian magnitude floored at the function's
// own curvature scale so flat points (where the limit is the exact value
// anyway) stay protected.
double inner_pass(const TestFunction& u, std::span<const double> x, double s,
                  const SpectralMeasure& a, const QuadratureSpec& spec, int nodes) {
  const double rho0 = spec.rho0;
  const Matrix h = u.hessian(x);
  double hmax = 0.0;
  for (double e : h.a) hmax = std::max(hmax, std::abs(e));
  const double hmag =
      std::max(hmax, u.sup_bound / std::max(u.width * u.width, 1e-300));
  double rho_star = 0.0;
  double limit_ratio = 0.0;
  if (hmag > 0.0) {
    limit_ratio = -a.integrate(
        [&](std::span<const double> om) { return h.quad(om); }, spec.sphere_resolution);
    const double scale = std::max(std::abs(u.value(x)), 0.01 * u.sup_bound);
    rho_star = std::min(std::pow(2.22e-16 * scale / hmag, 0.25), 0.02 * rho0);
  }
  const JacobiRule inner = gauss_jacobi(0.0, 1.0 - 2.0 * s, nodes);
  return std::pow(rho0, 2.0 - 2.0 * s) * inner.apply([&](double w) {
    const double rho = rho0 * w;
    if (rho < rho_star) return limit_ratio;
    return sphere_sd(u, x, rho, a, spec.sphere_resolution) / (rho * rho);
  });
}

// Tail piece: rho = rho0 / v against v^{2s-1}. A cap at rho = C restricts v
// to (rho0/C, 1); that segment is mapped back onto the full rule domain.
double tail_pass(const TestFunction& u, std::span<const double> x, double s,
                 const SpectralMeasure& a, const QuadratureSpec& spec, int nodes) {
  const double rho0 = spec.rho0;
  const JacobiRule tail = gauss_jacobi(0.0, 2.0 * s - 1.0, nodes);
  if (spec.tail_cap == 0.0) {
    return std::pow(rho0, -2.0 * s) * tail.apply([&](double v) {
      return sphere_sd(u, x, rho0 / v, a, spec.sphere_resolution);
    });
  }
  const double vmin = rho0 / spec.tail_cap;
  // integral_{vmin}^{1} f(v) v^{2s-1} dv with v = vmin + (1-vmin) z needs a
  // plain Gauss-Legendre rule: the Jacobi weight no longer matches after the
  // shift, so the weight stays in the integrand (it is smooth on the
  // segment, bounded away from v = 0).
  const JacobiRule gl = gauss_legendre(nodes);
  return std::pow(rho0, -2.0 * s) * (1.0 - vmin) * gl.apply([&](double z) {
    const double v = vmin + (1.0 - vmin) * z;
    return sphere_sd(u, x, rho0 / v, a, spec.sphere_resolution) *
           std::pow(v, 2.0 * s - 1.0);
  });
}

}  // namespace

EvalResult eval_operator(const TestFunction& u, std::span<const double> x, double s,
                         const SpectralMeasure& a, const QuadratureSpec& spec) {
  check_eval_inputs(u, x, s, a, spec);
  require(u.smoothness != Smoothness::c0 && u.has_derivatives(), errc::not_c2_at_point,
          "operator evaluation needs a twice differentiable function");

  const int n1 = spec.radial_nodes;
  const int n2 = std::min(2 * n1, 512);

  // A function without decay keeps oscillating along the whole tail, where
  // the v-map compresses infinitely many periods toward v = 0. Give the tail
  // rule its densest sampling up front; the guard term below charges what
  // even that cannot resolve.
  const bool undamped = u.decay == Decay::none;
  const int t1 = undamped ? std::max(n1, 256) : n1;
  const int t2 = std::min(2 * t1, 512);

  const double in1 = inner_pass(u, x, s, a, spec, n1);
  const double in2 = inner_pass(u, x, s, a, spec, n2);
  const double tl1 = tail_pass(u, x, s, a, spec, t1);
  const double tl2 = tail_pass(u, x, s, a, spec, t2);

  EvalResult r;
  r.pieces.inner = in2;
  r.pieces.tail = tl2;
  if (spec.tail_cap > 0.0) {
    r.pieces.truncation_bound =
        2.0 * u.sup_bound * a.total_mass() * std::pow(spec.tail_cap, -2.0 * s) / s;
  }
  r.value = in2 + tl2;
  r.error_estimate = std::abs(in2 - in1) + std::abs(tl2 - tl1);

  if (undamped) {
    // The rule resolves the tail oscillation of an undamped function only
    // down to v_res ~ (freq rho0 / nodes)^{2/3}; below that the nodes alias
    // an essentially arbitrary phase and the refinement delta can miss real
    // error. Charge the whole kernel mass of the unresolved scale to the
    // error estimate. The frequency scale is read off the derivatives at x
    // (exact |k| for plane waves).
    const Matrix h = u.hessian(x);
    double hmax = 0.0;
    for (double e : h.a) hmax = std::max(hmax, std::abs(e));
    const double freq = std::max(
        std::sqrt(hmax), norm2(u.gradient(x)) / std::max(u.sup_bound, 1e-300));
    const double c = freq * spec.rho0;
    if (c > 0.0) {
      double vres = std::pow(c / t2, 2.0 / 3.0);
      // The continuous angular rule has its own resolution limit: an
      // M-point circle rule is exact only through trigonometric degree
      // M - 1, and the spherical average of cos at radius rho carries
      // harmonics up to degree ~ rho |k|. Node-based measures sum exactly
      // and have no such floor.
      if (a.kind() == MeasureKind::uniform && u.n >= 2) {
        const int m = spec.sphere_resolution > 0 ? spec.sphere_resolution : 64;
        vres = std::max(vres, c / m);
      }
      vres = std::min(1.0, vres);
      const double vfloor = spec.tail_cap > 0.0 ? spec.rho0 / spec.tail_cap : 0.0;
      if (vres > vfloor) {
        r.error_estimate += 4.0 * u.sup_bound * a.total_mass() *
                            std::pow(spec.rho0, -2.0 * s) *
                            (std::pow(vres, 2.0 * s) - std::pow(vfloor, 2.0 * s)) /
                            (2.0 * s);
      }
    }
  }

  require(std::isfinite(r.value), errc::nonfinite_value,
          "operator evaluation produced a non-finite value");
  return r;
}

namespace {

// C(s) = integral_1^inf cos(t) t^{-1-2s} dt: ten full 2*pi panels by
// tanh-sinh, then a 12-term integration-by-parts series from Z = 1 + 20*pi;
// each step swaps sine and cosine and raises the power, so the remainder is
// below Z^{-13} times a factorial-growth factor, about 2e-14 here.
double cosine_tail(double s) {
  const double a0 = 1.0 + 2.0 * s;
  double finite = 0.0;
  double lo = 1.0;
  for (int p = 0; p < 10; ++p) {
    const double hi = lo + 2.0 * M_PI;
    finite += tanh_sinh([a0](double t) { return std::cos(t) * std::pow(t, -a0); }, lo, hi,
                        1e-15, nullptr, 10);
    lo = hi;
  }
  const double Z = lo;
  // I_c(a) = -sin(Z) Z^{-a} + a I_s(a+1); I_s(a) = cos(Z) Z^{-a} - a I_c(a+1).
  double series = 0.0;
  double coef = 1.0;
  double a = a0;
  bool cos_phase = true;
  for (int k = 0; k < 12; ++k) {
    const double term = cos_phase ? -std::sin(Z) * std::pow(Z, -a)
                                  : std::cos(Z) * std::pow(Z, -a);
    series += coef * term;
    coef *= cos_phase ? a : -a;
    a += 1.0;
    cos_phase = !cos_phase;
  }
  return finite + series;
}

double compute_symbol_constant(double s) {
  // Head on (0,1): 1 - cos t = 2 sin^2(t/2) behaves like t^{2-2s} against
  // t^{-1-2s}, an integrable endpoint singularity the DE nodes absorb.
  // Written as 2 (sin(t/2)/t)^2 t^{1-2s} so that deep quadrature nodes stay
  // in range: the naive t^{-1-2s} factor overflows below t ~ 1e-106 once s
  // is large, and the resulting inf nodes would silently drop a few e-11 of
  // mass. The exponent 1-2s > -1 never overflows within double range.
  const double head = tanh_sinh(
      [s](double t) {
        const double r = std::sin(0.5 * t) / t;
        return 2.0 * r * r * std::pow(t, 1.0 - 2.0 * s);
      },
      0.0, 1.0, 1e-15, nullptr, 12);
  const double tail = 1.0 / (2.0 * s) - cosine_tail(s);
  return 2.0 * (head + tail);
}

}  // namespace

double symbol_constant(double s) {
  require(s > 0.0 && s < 1.0, errc::bad_parameter, "s must lie in (0,1)");
  static std::mutex mu;
  static std::map<double, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  const double v = compute_symbol_constant(s);
  cache.emplace(s, v);
  return v;
}

double symbol(std::span<const double> k, double s, const SpectralMeasure& a) {
  require(s > 0.0 && s < 1.0, errc::bad_parameter, "s must lie in (0,1)");
  require(static_cast<int>(k.size()) == a.dim(), errc::dimension_mismatch,
          "wave vector dimension does not match the measure");
  a.total_mass();
  return symbol_constant(s) * a.directional_moment(k, 2.0 * s);
}

}  // namespace aniso
