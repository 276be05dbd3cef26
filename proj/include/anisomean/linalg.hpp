#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace aniso {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// a + t*b
inline Vec axpy(std::span<const double> a, double t, std::span<const double> b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + t * b[i];
  return r;
}

inline Vec scaled(std::span<const double> a, double t) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
  return r;
}

// Dense symmetric n-by-n matrix, row-major. Small n only (spatial dimension).
struct Matrix {
  int n = 0;
  Vec a;

  Matrix() = default;
  explicit Matrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
  }

  // Frobenius inner product <A, B>.
  double inner(const Matrix& other) const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * other.a[i];
    return s;
  }

  // x^T A x
  double quad(std::span<const double> x) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += (*this)(i, j) * x[i] * x[j];
    return s;
  }
};

}  // namespace aniso
