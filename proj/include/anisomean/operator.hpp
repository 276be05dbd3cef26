#pragma once

#include <span>

#include "anisomean/evaluation.hpp"
#include "anisomean/measure.hpp"
#include "anisomean/testfunction.hpp"

namespace aniso {

// Centered second difference 2u(x) - u(x-y) - u(x+y).
double second_difference(const TestFunction& u, std::span<const double> x,
                         std::span<const double> y);

// L u(x) = integral over (0,inf) x sphere of the second difference against
// rho^{-1-2s} d rho d a(omega), positive-definite sign convention (applied to
// cos(k.x) it returns +symbol times the cosine). Splits at spec.rho0:
//   inner: rho = rho0 * w, the smooth ratio (second difference)/rho^2 against
//          the Jacobi weight w^{1-2s};
//   tail:  rho = rho0 / v against v^{2s-1}, truncated at spec.tail_cap when
//          set, with the remainder bounded by 2 sup|u| mass cap^{-2s} / s.
// Requires s in (0,1), a C2 function with derivatives, dimensions matching.
EvalResult eval_operator(const TestFunction& u, std::span<const double> x, double s,
                         const SpectralMeasure& a, const QuadratureSpec& spec = {});

// K(s) = 2 integral_0^inf (1 - cos t) t^{-1-2s} dt, the one-dimensional
// second-difference moment entering the Fourier symbol. Adaptive evaluation,
// cached per s. K(1/2) = pi.
double symbol_constant(double s);

// Fourier symbol psi(k) = K(s) * integral |k.omega|^{2s} d a(omega); the
// operator applied to cos(k.x) equals psi(k) cos(k.x).
double symbol(std::span<const double> k, double s, const SpectralMeasure& a);

}  // namespace aniso
