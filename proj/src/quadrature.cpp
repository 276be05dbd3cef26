#include "anisomean/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "anisomean/errors.hpp"

namespace aniso {

namespace {

// ln Beta(x,y) for x,y > 0.
double log_beta(double x, double y) { return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y); }

}  // namespace

double JacobiRule::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double SphereRule::total_weight() const {
  double s = 0.0;
  for (const auto& p : points) s += p.weight;
  return s;
}

// Golub-Welsch: nodes are eigenvalues of the Jacobi recurrence matrix, the
// weight of node i is mu0 * (first eigenvector component)^2. The recurrence
// coefficients below are for the weight (1-x)^a (1+x)^b on (-1,1); the rule is
// then mapped to (0,1) with w = (1+x)/2, which sends the x-weight
// (1-x)^a (1+x)^b dx to 2^{a+b+1} (1-w)^a w^b dw. Using the exact
// mu0 = integral of the (0,1) weight = Beta(b+1, a+1) absorbs that constant.
JacobiRule gauss_jacobi(double alpha, double beta, int n) {
  require(alpha > -1.0 && beta > -1.0, errc::bad_exponent,
          "Jacobi exponents must exceed -1, got alpha=" + std::to_string(alpha) +
              " beta=" + std::to_string(beta));
  require(n >= 1, errc::bad_parameter, "rule size must be positive");
  require(n <= 512, errc::overflow, "rule size capped at 512, got " + std::to_string(n));

  const double a = alpha;
  const double b = beta;

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double diag;
    if (k == 0) {
      diag = (b - a) / (a + b + 2.0);
    } else {
      const double d = 2.0 * k + a + b;
      diag = (b * b - a * a) / (d * (d + 2.0));
    }
    J(k, k) = diag;
    if (k + 1 < n) {
      double off2;
      if (k == 0) {
        off2 = 4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
      } else {
        const double kk = k + 1.0;  // recurrence index of beta_{k+1}
        const double d = 2.0 * kk + a + b;
        off2 = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) /
               (d * d * (d + 1.0) * (d - 1.0));
      }
      J(k, k + 1) = J(k + 1, k) = std::sqrt(off2);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  require(es.info() == Eigen::Success, errc::overflow, "tridiagonal eigensolve failed");

  const double mu0 = std::exp(log_beta(beta + 1.0, alpha + 1.0));

  JacobiRule rule;
  rule.alpha = alpha;
  rule.beta = beta;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (1.0 + es.eigenvalues()[i]);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

SphereRule sphere_rule(int dim, int resolution) {
  require(resolution >= 1, errc::bad_parameter, "sphere rule resolution must be positive");
  SphereRule rule;
  rule.dim = dim;
  switch (dim) {
    case 1: {
      rule.points.push_back({Vec{1.0}, 1.0});
      rule.points.push_back({Vec{-1.0}, 1.0});
      break;
    }
    case 2: {
      const int m = resolution;
      const double w = 2.0 * M_PI / m;
      rule.points.reserve(m);
      for (int j = 0; j < m; ++j) {
        const double th = 2.0 * M_PI * j / m;
        rule.points.push_back({Vec{std::cos(th), std::sin(th)}, w});
      }
      break;
    }
    case 3: {
      // cos(polar) integrated by Gauss-Legendre on (-1,1), azimuth by
      // trapezoid; weights multiply to surface measure (total 4*pi).
      const int np = resolution;
      const int na = 2 * resolution;
      JacobiRule gl = gauss_legendre(np);  // on (0,1)
      const double wa = 2.0 * M_PI / na;
      rule.points.reserve(static_cast<std::size_t>(np) * na);
      for (int i = 0; i < np; ++i) {
        const double t = 2.0 * gl.nodes[i] - 1.0;  // cos(polar) in (-1,1)
        const double wt = 2.0 * gl.weights[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
        for (int j = 0; j < na; ++j) {
          const double ph = 2.0 * M_PI * j / na;
          rule.points.push_back({Vec{st * std::cos(ph), st * std::sin(ph), t}, wt * wa});
        }
      }
      break;
    }
    default:
      fail(errc::unsupported_dimension,
           "sphere rules exist for n in {1,2,3}, got n=" + std::to_string(dim));
  }
  return rule;
}

// Nodes are generated from both endpoints in offset form, t = a + (b-a)*sig
// and t = b - (b-a)*(1-sig), with sig = logistic(pi*sinh(kh)); 1-sig is
// computed directly so offsets stay resolvable down to ~1e-290 and f is never
// called at a or b.
//
// Precision caveat: f receives the rounded coordinate t, so a singularity at
// the right endpoint is resolved only down to one ulp of b (offsets below
// that round onto b itself and the nonfinite guard drops them). For a 1/sqrt
// blowup at b this truncates about 2e-8 of mass; put the singular endpoint at
// 0 when full precision matters there. err_out reports the last refinement
// correction, which cannot see this representation-limited truncation.
double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol,
                 double* err_out, int max_level) {
  require(b > a, errc::bad_parameter, "tanh_sinh needs b > a");
  const double len = b - a;

  // sig(k*h) and 1-sig(k*h); weight(k*h) = pi/2*cosh(kh)*2*sig*(1-sig).
  auto node = [](double u, double& sig, double& one_minus_sig, double& wt) {
    const double z = M_PI * std::sinh(u);  // 2 * (pi/2) sinh(u)
    if (z >= 0.0) {
      const double e = std::exp(-z);
      sig = 1.0 / (1.0 + e);
      one_minus_sig = e / (1.0 + e);
    } else {
      const double e = std::exp(z);
      sig = e / (1.0 + e);
      one_minus_sig = 1.0 / (1.0 + e);
    }
    wt = M_PI * std::cosh(u) * sig * one_minus_sig;
  };

  auto eval_at = [&](double sig, double oms) -> double {
    // Evaluate from the nearer endpoint to keep the offset exact.
    const double t = (sig <= 0.5) ? a + len * sig : b - len * oms;
    const double v = f(t);
    return std::isfinite(v) ? v : 0.0;  // weights kill integrable endpoint blowups
  };

  // Level 0: h = 1, k = 0 plus symmetric terms until they stop contributing.
  double h = 1.0;
  double sum = 0.0;
  {
    double sig, oms, wt;
    node(0.0, sig, oms, wt);
    sum = wt * eval_at(sig, oms);
    for (int k = 1; k <= 7; ++k) {
      node(k * h, sig, oms, wt);
      if (oms < 1e-290) break;
      sum += wt * eval_at(sig, oms);
      node(-k * h, sig, oms, wt);
      sum += wt * eval_at(sig, oms);
    }
  }
  double value = sum * h * len;

  double last_delta = std::abs(value);
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    // New points are the odd multiples of h.
    double add = 0.0;
    const int kmax = (1 << level) * 7;
    for (int k = 1; k <= kmax; k += 2) {
      double sig, oms, wt;
      node(k * h, sig, oms, wt);
      if (oms < 1e-290) break;
      add += wt * eval_at(sig, oms);
      node(-k * h, sig, oms, wt);
      add += wt * eval_at(sig, oms);
    }
    const double refined = 0.5 * value + add * h * len;
    last_delta = std::abs(refined - value);
    value = refined;
    if (level >= 3 && last_delta <= tol * std::max(1.0, std::abs(value))) break;
  }
  if (err_out) *err_out = last_delta;
  return value;
}

}  // namespace aniso
