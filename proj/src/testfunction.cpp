#include "anisomean/testfunction.hpp"

#include <cmath>

#include "anisomean/errors.hpp"

namespace aniso {

namespace {

void check_params(bool ok, const std::string& what) {
  require(ok, errc::bad_parameter, what);
}

TestFunction gaussian(int n, std::span<const double> params) {
  check_params(params.size() == 1, "gaussian takes params = [width]");
  const double w = params[0];
  check_params(w > 0.0 && std::isfinite(w), "gaussian width must be positive");
  const double iw2 = 1.0 / (w * w);
  TestFunction f;
  f.n = n;
  f.name = "gaussian";
  f.value = [iw2](std::span<const double> x) { return std::exp(-0.5 * dot(x, x) * iw2); };
  f.gradient = [iw2](std::span<const double> x) {
    const double u = std::exp(-0.5 * dot(x, x) * iw2);
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = -u * x[i] * iw2;
    return g;
  };
  f.hessian = [n, iw2](std::span<const double> x) {
    const double u = std::exp(-0.5 * dot(x, x) * iw2);
    Matrix h(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) h(i, j) = u * (x[i] * x[j] * iw2 * iw2);
      h(i, i) -= u * iw2;
    }
    return h;
  };
  f.sup_bound = 1.0;
  f.width = w;
  f.decay = Decay::gaussian;
  f.smoothness = Smoothness::smooth;
  return f;
}

TestFunction plane_wave_cos(int n, std::span<const double> params) {
  check_params(static_cast<int>(params.size()) == n,
               "plane-wave-cos takes params = [k_1 .. k_n]");
  Vec k(params.begin(), params.end());
  for (double c : k) check_params(std::isfinite(c), "wave vector must be finite");
  TestFunction f;
  f.n = n;
  f.name = "plane-wave-cos";
  f.value = [k](std::span<const double> x) { return std::cos(dot(k, x)); };
  f.gradient = [k](std::span<const double> x) {
    const double s = std::sin(dot(k, x));
    Vec g(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) g[i] = -s * k[i];
    return g;
  };
  f.hessian = [n, k](std::span<const double> x) {
    const double c = std::cos(dot(k, x));
    Matrix h(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h(i, j) = -c * k[i] * k[j];
    return h;
  };
  f.sup_bound = 1.0;
  f.width = 1.0;
  f.decay = Decay::none;
  f.smoothness = Smoothness::smooth;
  return f;
}

TestFunction bump(int n, std::span<const double> params) {
  check_params(params.size() == 1, "bump takes params = [radius]");
  const double R = params[0];
  check_params(R > 0.0 && std::isfinite(R), "bump radius must be positive");
  const double iR2 = 1.0 / (R * R);
  // u = f(t), t = |x|^2/R^2, f(t) = exp(1 - 1/(1-t)) for t < 1, else 0.
  auto ft = [](double t) { return t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t)) : 0.0; };
  TestFunction f;
  f.n = n;
  f.name = "bump";
  f.value = [ft, iR2](std::span<const double> x) { return ft(dot(x, x) * iR2); };
  f.gradient = [ft, iR2](std::span<const double> x) {
    const double t = dot(x, x) * iR2;
    Vec g(x.size(), 0.0);
    if (t < 1.0) {
      const double fp = -ft(t) / ((1.0 - t) * (1.0 - t));
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = fp * 2.0 * x[i] * iR2;
    }
    return g;
  };
  f.hessian = [n, ft, iR2](std::span<const double> x) {
    const double t = dot(x, x) * iR2;
    Matrix h(n);
    if (t < 1.0) {
      const double om = 1.0 - t;
      const double u = ft(t);
      const double fp = -u / (om * om);
      const double fpp = u * (1.0 / (om * om * om * om) - 2.0 / (om * om * om));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
          h(i, j) = fpp * (2.0 * x[i] * iR2) * (2.0 * x[j] * iR2);
        h(i, i) += fp * 2.0 * iR2;
      }
    }
    return h;
  };
  f.sup_bound = 1.0;
  f.support_radius = R;
  f.width = R;
  f.decay = Decay::compact;
  f.smoothness = Smoothness::smooth;
  return f;
}

// Quintic smoothstep S on (0,1): S(0)=0, S(1)=1, first and second derivatives
// vanish at both ends, so the cutoff below is exactly C^2.
double qs(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double qs1(double t) { return 30.0 * t * t * (1.0 + t * (-2.0 + t)); }
double qs2(double t) { return 60.0 * t * (1.0 + t * (-3.0 + 2.0 * t)); }

TestFunction cutoff_quadratic(int n, std::span<const double> params) {
  check_params(params.size() == static_cast<std::size_t>(1 + n * n),
               "cutoff-quadratic takes params = [R, A row-major]");
  const double R = params[0];
  check_params(R > 0.0 && std::isfinite(R), "cutoff radius must be positive");
  Matrix A(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double aij = params[1 + i * n + j];
      const double aji = params[1 + j * n + i];
      check_params(std::isfinite(aij), "matrix entries must be finite");
      A(i, j) = 0.5 * (aij + aji);  // symmetrize
    }

  // chi(t) = 1 on t <= 1/2, quintic descent to 0 at t = 1.
  auto chi = [](double t, double& c1, double& c2) {
    if (t <= 0.5) { c1 = c2 = 0.0; return 1.0; }
    if (t >= 1.0) { c1 = c2 = 0.0; return 0.0; }
    const double z = 2.0 * t - 1.0;
    c1 = -2.0 * qs1(z);
    c2 = -4.0 * qs2(z);
    return 1.0 - qs(z);
  };

  double amax = 0.0;
  for (double a : A.a) amax += std::abs(a);

  TestFunction f;
  f.n = n;
  f.name = "cutoff-quadratic";
  f.value = [A, R, chi](std::span<const double> x) {
    const double t = norm2(x) / R;
    double c1, c2;
    const double c = chi(t, c1, c2);
    return c == 0.0 ? 0.0 : 0.5 * A.quad(x) * c;
  };
  f.gradient = [n, A, R, chi](std::span<const double> x) {
    const double r = norm2(x);
    const double t = r / R;
    double c1, c2;
    const double c = chi(t, c1, c2);
    Vec g(n, 0.0);
    if (c == 0.0) return g;
    const double q = 0.5 * A.quad(x);
    for (int i = 0; i < n; ++i) {
      double Ax = 0.0;
      for (int j = 0; j < n; ++j) Ax += A(i, j) * x[j];
      g[i] = c * Ax;
      if (c1 != 0.0) g[i] += q * c1 * x[i] / (R * r);
    }
    return g;
  };
  f.hessian = [n, A, R, chi](std::span<const double> x) {
    const double r = norm2(x);
    const double t = r / R;
    double c1, c2;
    const double c = chi(t, c1, c2);
    Matrix h(n);
    if (c == 0.0) return h;
    const double q = 0.5 * A.quad(x);
    Vec Ax(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Ax[i] += A(i, j) * x[j];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double v = c * A(i, j);
        if (c1 != 0.0 || c2 != 0.0) {
          const double ti = x[i] / (R * r);  // gradient of t
          const double tj = x[j] / (R * r);
          const double htij = (i == j ? 1.0 / r : 0.0) / R - x[i] * x[j] / (R * r * r * r);
          v += c2 * ti * tj * q + c1 * (ti * Ax[j] + tj * Ax[i]) + q * c1 * htij;
        }
        h(i, j) = v;
      }
    }
    return h;
  };
  f.sup_bound = 0.5 * amax * R * R;
  f.support_radius = R;
  f.width = R;
  f.decay = Decay::compact;
  f.smoothness = Smoothness::c2;
  return f;
}

TestFunction indicator_ball(int n, std::span<const double> params) {
  check_params(params.size() == 1, "indicator takes params = [radius]");
  const double R = params[0];
  check_params(R > 0.0 && std::isfinite(R), "indicator radius must be positive");
  const double R2 = R * R;
  TestFunction f;
  f.n = n;
  f.name = "indicator";
  f.value = [R2](std::span<const double> x) { return dot(x, x) <= R2 ? 1.0 : 0.0; };
  f.sup_bound = 1.0;
  f.support_radius = R;
  f.width = R;
  f.decay = Decay::compact;
  f.smoothness = Smoothness::c0;
  return f;
}

}  // namespace

TestFunction make_function(const std::string& name, int n, std::span<const double> params) {
  require(n >= 1, errc::unsupported_dimension, "dimension must be positive");
  if (name == "gaussian") return gaussian(n, params);
  if (name == "plane-wave-cos") return plane_wave_cos(n, params);
  if (name == "bump") return bump(n, params);
  if (name == "cutoff-quadratic") return cutoff_quadratic(n, params);
  if (name == "indicator") return indicator_ball(n, params);
  fail(errc::unknown_function, "no catalog entry named '" + name + "'");
}

TestFunction translate(TestFunction u, Vec shift) {
  require(static_cast<int>(shift.size()) == u.n, errc::dimension_mismatch,
          "shift has wrong dimension");
  TestFunction f = u;
  f.name = u.name + "+shift";
  const double off = norm2(shift);
  auto shifted = [shift](std::span<const double> x) {
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - shift[i];
    return y;
  };
  f.value = [val = u.value, shifted](std::span<const double> x) { return val(shifted(x)); };
  if (u.has_derivatives()) {
    f.gradient = [g = u.gradient, shifted](std::span<const double> x) { return g(shifted(x)); };
    f.hessian = [h = u.hessian, shifted](std::span<const double> x) { return h(shifted(x)); };
  }
  if (std::isfinite(f.support_radius)) f.support_radius += off;
  f.center_offset = u.center_offset + off;
  return f;
}

TestFunction dilate(TestFunction u, double lam) {
  require(lam > 0.0 && std::isfinite(lam), errc::bad_parameter, "dilation must be positive");
  TestFunction f = u;
  f.name = u.name + "+dilate";
  f.value = [val = u.value, lam](std::span<const double> x) { return val(scaled(x, lam)); };
  if (u.has_derivatives()) {
    f.gradient = [g = u.gradient, lam](std::span<const double> x) {
      Vec r = g(scaled(x, lam));
      for (auto& c : r) c *= lam;
      return r;
    };
    f.hessian = [h = u.hessian, lam](std::span<const double> x) {
      Matrix r = h(scaled(x, lam));
      for (auto& c : r.a) c *= lam * lam;
      return r;
    };
  }
  if (std::isfinite(f.support_radius)) f.support_radius /= lam;
  f.width /= lam;
  f.center_offset /= lam;
  return f;
}

TestFunction lincomb(double a, TestFunction u, double b, TestFunction v) {
  require(u.n == v.n, errc::dimension_mismatch, "combined functions must share a dimension");
  require(std::isfinite(a) && std::isfinite(b), errc::bad_parameter,
          "combination weights must be finite");
  TestFunction f;
  f.n = u.n;
  f.name = u.name + "+" + v.name;
  f.value = [a, ua = u.value, b, vb = v.value](std::span<const double> x) {
    return a * ua(x) + b * vb(x);
  };
  if (u.has_derivatives() && v.has_derivatives()) {
    f.gradient = [a, ug = u.gradient, b, vg = v.gradient](std::span<const double> x) {
      Vec r = ug(x);
      Vec s = vg(x);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = a * r[i] + b * s[i];
      return r;
    };
    f.hessian = [a, uh = u.hessian, b, vh = v.hessian](std::span<const double> x) {
      Matrix r = uh(x);
      Matrix s = vh(x);
      for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = a * r.a[i] + b * s.a[i];
      return r;
    };
  }
  f.sup_bound = std::abs(a) * u.sup_bound + std::abs(b) * v.sup_bound;
  f.support_radius = std::max(u.support_radius, v.support_radius);
  f.width = std::max(u.width, v.width);
  f.center_offset = std::max(u.center_offset, v.center_offset);
  f.smoothness = std::min(u.smoothness, v.smoothness);
  f.decay = std::max(u.decay, v.decay);  // compact < gaussian < none
  return f;
}

}  // namespace aniso
