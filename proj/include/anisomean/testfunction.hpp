#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>

#include "anisomean/linalg.hpp"

namespace aniso {

enum class Smoothness { c0, c2, smooth };
enum class Decay { compact, gaussian, none };

// A scalar test function with analytic derivatives and enough metadata for
// the evaluators to pick truncation radii and reject unusable inputs.
// Functions are value types; the callables must be pure.
struct TestFunction {
  int n = 0;
  std::string name;
  std::function<double(std::span<const double>)> value;
  std::function<Vec(std::span<const double>)> gradient;   // null for c0
  std::function<Matrix(std::span<const double>)> hessian;  // null for c0
  double sup_bound = 0.0;       // finite bound on |u|
  double support_radius = std::numeric_limits<double>::infinity();  // compact: u=0 outside
  double width = 1.0;           // decay scale (gaussian) or support scale
  double center_offset = 0.0;   // how far the mass may sit from the origin
  Smoothness smoothness = Smoothness::smooth;
  Decay decay = Decay::gaussian;

  bool has_derivatives() const { return static_cast<bool>(hessian); }
};

// Catalog lookup. Names and parameter layouts:
//   gaussian         params = [width]                u = exp(-|x|^2 / (2 width^2))
//   plane-wave-cos   params = [k_1 .. k_n]           u = cos(k . x)
//   bump             params = [radius]               u = exp(1 - 1/(1 - |x/R|^2)) inside |x|<R, 0 outside
//   cutoff-quadratic params = [R, A row-major n*n]   u = (x^T A x / 2) * chi(|x|/R), chi a smooth cutoff
//   indicator        params = [radius]               u = 1 inside |x| <= R, 0 outside (C0: no derivatives)
// Unknown names raise UnknownFunction; wrong parameter counts or out-of-range
// values raise BadParameter.
TestFunction make_function(const std::string& name, int n, std::span<const double> params);

// Combinators. Derivatives, bounds and decay metadata transform accordingly.
TestFunction translate(TestFunction u, Vec shift);       // x -> u(x - shift)
TestFunction dilate(TestFunction u, double lam);         // x -> u(lam * x)
TestFunction lincomb(double a, TestFunction u, double b, TestFunction v);

}  // namespace aniso
