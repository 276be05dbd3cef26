#pragma once

#include <functional>
#include <utility>

#include "anisomean/linalg.hpp"

namespace aniso {

// Gauss-Jacobi rule on (0,1) for the weight w^beta * (1-w)^alpha.
// Exact for polynomial f of degree <= 2n-1 in
//   integral_0^1 f(w) w^beta (1-w)^alpha dw = sum_i weights[i] * f(nodes[i]).
// Requires alpha > -1, beta > -1 (BadExponent otherwise) and 1 <= n <= 512
// (Overflow above; the tridiagonal eigensolve degrades past that size).
struct JacobiRule {
  double alpha = 0.0;
  double beta = 0.0;
  Vec nodes;    // strictly inside (0,1), ascending
  Vec weights;  // strictly positive

  int size() const { return static_cast<int>(nodes.size()); }
  double total_weight() const;  // equals Beta(beta+1, alpha+1)

  template <class F>
  double apply(F&& f) const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

JacobiRule gauss_jacobi(double alpha, double beta, int n);

inline JacobiRule gauss_legendre(int n) { return gauss_jacobi(0.0, 0.0, n); }

// Product rule on the unit sphere S^{n-1}, n in {1,2,3}.
//   n=1: the two points {+1,-1}, weight 1 each (counting measure).
//   n=2: `resolution` equispaced angles, weight 2*pi/resolution (trapezoid,
//        exact for trigonometric polynomials of degree < resolution).
//   n=3: Gauss-Legendre in cos(polar) x equispaced azimuth with
//        2*resolution azimuths, weights summing to 4*pi.
struct SpherePoint {
  Vec dir;
  double weight;
};

struct SphereRule {
  int dim = 0;
  std::vector<SpherePoint> points;

  double total_weight() const;

  template <class F>
  double apply(F&& f) const {
    double s = 0.0;
    for (const auto& p : points) s += p.weight * f(p.dir);
    return s;
  }
};

SphereRule sphere_rule(int dim, int resolution);

// Adaptive tanh-sinh (double exponential) quadrature on (a,b). Tolerates
// integrable endpoint singularities; nodes never touch a or b. Refines by
// level halving until the last correction is below tol (relative to the
// running value) or max_level is hit. If err_out is non-null it receives the
// final correction magnitude, an a-posteriori error estimate.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-13, double* err_out = nullptr, int max_level = 12);

}  // namespace aniso
