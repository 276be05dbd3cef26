#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "anisomean/asymptotics.hpp"
#include "anisomean/errors.hpp"
#include "anisomean/meankernel.hpp"
#include "anisomean/measure.hpp"
#include "anisomean/operator.hpp"
#include "anisomean/testfunction.hpp"

using namespace aniso;

namespace {

constexpr double kPi = std::numbers::pi;

template <typename F>
errc thrown_code(F&& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  return errc::ok;
}

SpectralMeasure four_axes() {
  return SpectralMeasure::atomic(2, {{{1.0, 0.0}, 1.0},
                                     {{-1.0, 0.0}, 1.0},
                                     {{0.0, 1.0}, 1.0},
                                     {{0.0, -1.0}, 1.0}});
}

SpectralMeasure pm1() {
  return SpectralMeasure::atomic(1, {{{1.0}, 1.0}, {{-1.0}, 1.0}});
}

// Closed form of the second-difference moment, via the reflection formula.
double moment_constant_closed(double s) {
  return kPi * std::exp(-std::lgamma(1.0 + 2.0 * s)) / std::sin(kPi * s);
}

}  // namespace

TEST_CASE("expansion residuals decay at second order or faster") {
  const auto circ = SpectralMeasure::uniform(2);
  const auto four = four_axes();
  const auto g2 = make_function("gaussian", 2, std::vector<double>{1.0});
  const Vec ladder{0.1, 0.05, 0.025, 0.0125, 0.00625};
  QuadratureSpec spec;
  spec.radial_nodes = 128;

  // For the gaussian the residual follows a clean r^{2+2s} law; the fitted
  // slope lands on 2+2s to within the ladder's own curvature.
  for (double s : {0.25, 0.5, 0.75}) {
    for (const auto* a : {&circ, &four}) {
      const auto fit = fit_expansion_order(g2, Vec{0.2, -0.1}, s, *a, ladder, spec);
      CHECK(!fit.vacuous);
      CHECK(fit.slope >= 1.9);
      CHECK(fit.slope == doctest::Approx(2.0 + 2.0 * s).epsilon(0.08));
      CHECK(fit.fit_rms < 0.5);
    }
  }

  // The bump's non-analytic profile needs denser rules before the fit is
  // quadrature-clean; the slope then shows the same law.
  QuadratureSpec hi;
  hi.radial_nodes = 256;
  hi.sphere_resolution = 256;
  const auto b2 = make_function("bump", 2, std::vector<double>{1.0});
  for (double s : {0.25, 0.5, 0.75}) {
    const auto fit = fit_expansion_order(b2, Vec{0.1, 0.05}, s, circ, ladder, hi);
    CHECK(!fit.vacuous);
    CHECK(fit.slope >= 1.9);
  }
  const auto fit4 = fit_expansion_order(b2, Vec{0.1, 0.05}, 0.5, four, ladder, hi);
  CHECK(fit4.slope >= 1.9);
}

TEST_CASE("the residual is wired to its parts") {
  const auto circ = SpectralMeasure::uniform(2);
  const auto g2 = make_function("gaussian", 2, std::vector<double>{1.0});
  const Vec x{0.3, -0.2};
  const double r = 0.05, s = 0.6;
  const auto kern = make_mean_kernel(r, s, circ);
  const double expected = g2.value(x) - mean_value(g2, x, kern).value -
                          kern.normalization * std::pow(r, 2.0 * s) *
                              eval_operator(g2, x, s, circ).value;
  CHECK(expansion_residual(g2, x, r, s, circ) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("constants make the order fit vacuous") {
  const auto circ = SpectralMeasure::uniform(2);
  const auto one = make_function("plane-wave-cos", 2, Vec{0.0, 0.0});
  const Vec ladder{0.1, 0.05, 0.025};
  const auto fit = fit_expansion_order(one, Vec{0.0, 0.0}, 0.5, circ, ladder);
  CHECK(fit.vacuous);
  CHECK(std::isinf(fit.slope));

  const auto g2 = make_function("gaussian", 2, std::vector<double>{1.0});
  CHECK(thrown_code([&] {
          fit_expansion_order(g2, Vec{0.0, 0.0}, 0.5, circ, Vec{0.1, 0.05});
        }) == errc::bad_parameter);
  CHECK(thrown_code([&] {
          fit_expansion_order(g2, Vec{0.0, 0.0}, 0.5, circ, Vec{0.1, 0.0, 0.025});
        }) == errc::bad_parameter);
  CHECK(thrown_code([&] {
          expansion_residual(g2, Vec{0.0, 0.0}, 0.0, 0.5, circ);
        }) == errc::bad_parameter);
}

TEST_CASE("the scaled operator approaches its local limit") {
  const Vec ladder{0.9, 0.99, 0.999, 0.9999};
  const auto circ = SpectralMeasure::uniform(2);
  const auto g2 = make_function("gaussian", 2, std::vector<double>{1.0});

  // Uniform circle: second moment pi * I, gaussian Hessian -I at the origin,
  // so the target is pi.
  const auto rep = local_limit_operator(g2, Vec{0.0, 0.0}, circ, ladder);
  CHECK(rep.target == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(rep.errors_strictly_decreasing);
  CHECK(rep.final_rel_err <= 2e-3);
  // The gap scales like 1-s, one decade per rung on this ladder.
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const double ratio = rep.rows[i - 1].abs_err / rep.rows[i].abs_err;
    CHECK(ratio > 4.0);
    CHECK(ratio < 25.0);
  }

  // Two unit atoms along e1 and cos(x1): moment diag(2,0) against Hessian
  // diag(-1,0) gives exactly 1.
  const auto axes = SpectralMeasure::atomic(2, {{{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, 1.0}});
  const auto w = make_function("plane-wave-cos", 2, Vec{1.0, 0.0});
  const auto repw = local_limit_operator(w, Vec{0.0, 0.0}, axes, ladder);
  CHECK(repw.target == 1.0);
  CHECK(repw.errors_strictly_decreasing);
  CHECK(repw.final_rel_err <= 2e-3);
}

TEST_CASE("the mean value approaches the spherical average") {
  const Vec ladder{0.9, 0.99, 0.999, 0.9999};
  const auto circ = SpectralMeasure::uniform(2);
  const auto axes = SpectralMeasure::atomic(2, {{{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, 1.0}});
  const auto g2 = make_function("gaussian", 2, std::vector<double>{1.0});
  const double r = 0.5;

  const auto rep = local_limit_mean(g2, Vec{0.0, 0.0}, r, circ, ladder);
  // At the center the pair average is direction-free: exp(-r^2/2) exactly.
  CHECK(rep.target == doctest::Approx(std::exp(-0.125)).epsilon(1e-12));
  CHECK(rep.errors_strictly_decreasing);
  CHECK(rep.final_rel_err <= 1e-3);

  const auto repa = local_limit_mean(g2, Vec{0.0, 0.0}, r, axes, ladder);
  CHECK(repa.target == doctest::Approx(rep.target).epsilon(1e-14));
  CHECK(repa.final_rel_err <= 1e-3);
}

TEST_CASE("the seminorm matches its Fourier closed form") {
  // One dimension, unit atoms at +-1, standard gaussian. Writing the squared
  // seminorm through the Fourier transform gives 4 K(s) Gamma(s + 1/2).
  const auto m1 = pm1();
  const auto g1 = make_function("gaussian", 1, std::vector<double>{1.0});
  for (double s : {0.3, 0.5, 0.7, 0.9}) {
    const auto r = hs_seminorm(g1, s, m1);
    const double closed = 4.0 * moment_constant_closed(s) * std::exp(std::lgamma(s + 0.5));
    CHECK(r.squared == doctest::Approx(closed).epsilon(1e-8));
    CHECK(std::abs(r.squared - closed) <= r.error_estimate + 1e-9 * closed);
    CHECK(r.truncation_bound >= 0.0);
  }
  CHECK(hs_seminorm(g1, 0.5, m1).squared == doctest::Approx(4.0 * kPi).epsilon(1e-9));

  // Two dimensions, uniform circle: the direction average adds the circle
  // cosine moment and the radial Fourier integral gives Gamma(s+1).
  const auto circ = SpectralMeasure::uniform(2);
  const auto g2 = make_function("gaussian", 2, std::vector<double>{1.0});
  for (double s : {0.5, 0.8}) {
    const double cp = 2.0 * std::sqrt(kPi) *
                      std::exp(std::lgamma(s + 0.5) - std::lgamma(s + 1.0));
    const double closed =
        2.0 * kPi * moment_constant_closed(s) * cp * std::exp(std::lgamma(s + 1.0));
    CHECK(hs_seminorm(g2, s, circ).squared == doctest::Approx(closed).epsilon(1e-5));
  }

  CHECK(energy(g1, 0.5, m1) == doctest::Approx(kPi).epsilon(1e-9));
}

TEST_CASE("first-order seminorm and L2 norm closed forms") {
  const auto m1 = pm1();
  const auto g1 = make_function("gaussian", 1, std::vector<double>{1.0});
  // integral 2 (u')^2 = sqrt(pi); integral u^2 = sqrt(pi) as well.
  CHECK(h1_seminorm(g1, m1).squared == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
  CHECK(l2_norm_sq(g1) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));

  const auto circ = SpectralMeasure::uniform(2);
  const auto g2 = make_function("gaussian", 2, std::vector<double>{1.0});
  // Second moment pi I, integral |grad u|^2 = pi, integral u^2 = pi.
  CHECK(h1_seminorm(g2, circ).squared == doctest::Approx(kPi * kPi).epsilon(1e-8));
  CHECK(l2_norm_sq(g2) == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("scaled seminorms approach the first-order seminorm") {
  const auto m1 = pm1();
  const auto g1 = make_function("gaussian", 1, std::vector<double>{1.0});
  const auto rep = bbm_check(g1, m1, Vec{0.55, 0.65, 0.75, 0.85, 0.95});
  CHECK(rep.h1_sq == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
  CHECK(rep.errors_strictly_decreasing);
  CHECK(rep.final_rel_err < 0.12);
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].scaled < rep.rows[i - 1].scaled);
  CHECK(rep.ratio_min > 0.0);
  CHECK(rep.ratio_max < 1.0);

  // Near s = 1 the scaled seminorm sits within two percent of its limit.
  const auto close = bbm_check(g1, m1, Vec{0.9, 0.99});
  CHECK(close.rows.back().rel_err <= 2e-2);
}

TEST_CASE("Monte Carlo seminorm agrees within its own noise") {
  const auto m1 = pm1();
  const auto g1 = make_function("gaussian", 1, std::vector<double>{1.0});
  const auto mc = hs_seminorm_mc(g1, 0.6, m1, 400000, 42);
  const auto qd = hs_seminorm(g1, 0.6, m1);
  CHECK(mc.count == 400000);
  CHECK(mc.std_error > 0.0);
  CHECK(std::abs(mc.squared - qd.squared) <= 3.0 * mc.std_error);

  // Same seed, same stream, bitwise identical.
  const auto again = hs_seminorm_mc(g1, 0.6, m1, 400000, 42);
  CHECK(again.squared == mc.squared);
  CHECK(again.std_error == mc.std_error);

  const auto circ = SpectralMeasure::uniform(2);
  const auto b2 = make_function("bump", 2, std::vector<double>{1.0});
  const auto mc2 = hs_seminorm_mc(b2, 0.4, circ, 200000, 7);
  const auto qd2 = hs_seminorm(b2, 0.4, circ);
  CHECK(std::abs(mc2.squared - qd2.squared) <= 3.0 * mc2.std_error);
}

TEST_CASE("unsupported seminorm inputs are rejected") {
  const auto circ = SpectralMeasure::uniform(2);
  const auto sph = SpectralMeasure::uniform(3);
  const auto w = make_function("plane-wave-cos", 2, Vec{1.0, 0.0});
  const auto ind = make_function("indicator", 2, std::vector<double>{1.0});
  const auto g2 = make_function("gaussian", 2, std::vector<double>{1.0});
  const auto g3 = make_function("gaussian", 3, std::vector<double>{1.0});

  CHECK(thrown_code([&] { hs_seminorm(w, 0.5, circ); }) == errc::unbounded_support);
  CHECK(thrown_code([&] { hs_seminorm(ind, 0.5, circ); }) == errc::not_c2_at_point);
  CHECK(thrown_code([&] { hs_seminorm(g3, 0.5, sph); }) == errc::unsupported_dimension);
  CHECK(thrown_code([&] { hs_seminorm(g2, 0.0, circ); }) == errc::bad_parameter);
  CHECK(thrown_code([&] { l2_norm_sq(w); }) == errc::unbounded_support);
  CHECK(thrown_code([&] { l2_norm_sq(g3); }) == errc::unsupported_dimension);
  CHECK(thrown_code([&] { hs_seminorm_mc(g2, 0.5, circ, 0, 1); }) == errc::bad_parameter);

  const Vec x{0.0, 0.0};
  CHECK(thrown_code([&] { local_limit_operator(g2, x, circ, Vec{}); }) ==
        errc::bad_parameter);
  CHECK(thrown_code([&] { local_limit_operator(g2, x, circ, Vec{0.9}); }) ==
        errc::bad_parameter);
  CHECK(thrown_code([&] { local_limit_operator(g2, x, circ, Vec{0.9, 0.8}); }) ==
        errc::bad_parameter);
  CHECK(thrown_code([&] { local_limit_operator(g2, x, circ, Vec{0.9, 1.5}); }) ==
        errc::bad_parameter);
  CHECK(thrown_code([&] { local_limit_operator(ind, x, circ, Vec{0.9, 0.99}); }) ==
        errc::not_c2_at_point);
  CHECK(thrown_code([&] { local_limit_mean(g2, x, -0.5, circ, Vec{0.9, 0.99}); }) ==
        errc::bad_parameter);
  CHECK(thrown_code([&] { bbm_check(g2, circ, Vec{0.5}); }) == errc::bad_parameter);
}
