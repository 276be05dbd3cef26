#pragma once

namespace aniso {

// Discretization knobs shared by the operator and mean-kernel evaluators.
// radial_nodes is the base Gauss-Jacobi size N; every evaluation is also run
// at 2N and the difference becomes the reported error estimate (the 2N value
// is returned). rho0 is the inner/tail split radius of the operator integral.
// tail_cap > 0 truncates the tail integral at that radius and accounts for
// the remainder through EvalResult::pieces.truncation_bound.
struct QuadratureSpec {
  int radial_nodes = 64;
  int sphere_resolution = 64;
  double rho0 = 1.0;
  double tail_cap = 0.0;  // 0 = integrate to infinity
};

struct EvalPieces {
  double inner = 0.0;             // contribution of rho in (0, rho0)
  double tail = 0.0;              // contribution of rho in (rho0, cap or infinity)
  double truncation_bound = 0.0;  // bound on what a tail_cap discarded
};

struct EvalResult {
  double value = 0.0;
  double error_estimate = 0.0;  // refinement delta, a-posteriori
  EvalPieces pieces;
};

}  // namespace aniso
