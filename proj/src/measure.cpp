#include "anisomean/measure.hpp"

#include <algorithm>
#include <cmath>

namespace aniso {

namespace {

constexpr double kUnitSlack = 1e-9;  // admissible direction norm defect before rejection

double sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;           // counting measure on {+1,-1}
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: fail(errc::unsupported_dimension, "uniform measure needs n in {1,2,3}");
  }
}

}  // namespace

void SpectralMeasure::finalize() {
  if (!nodes_.empty()) {
    mass_ = 0.0;
    cumulative_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      mass_ += nodes_[i].weight;
      cumulative_[i] = mass_;
    }
  }
}

SpectralMeasure SpectralMeasure::atomic(int n, std::vector<Atom> atoms) {
  require(n >= 1, errc::unsupported_dimension, "dimension must be positive");
  SpectralMeasure m;
  m.n_ = n;
  m.kind_ = MeasureKind::atomic;
  for (auto& at : atoms) {
    require(static_cast<int>(at.dir.size()) == n, errc::dimension_mismatch,
            "atom direction has length " + std::to_string(at.dir.size()) + ", expected " +
                std::to_string(n));
    require(at.weight >= 0.0 && std::isfinite(at.weight), errc::negative_weight,
            "atom weight must be finite and >= 0, got " + std::to_string(at.weight));
    const double r = norm2(at.dir);
    require(std::abs(r - 1.0) <= kUnitSlack, errc::non_unit_direction,
            "atom direction norm " + std::to_string(r) + " deviates from 1 beyond 1e-9");
    for (auto& c : at.dir) c /= r;
  }
  m.nodes_ = std::move(atoms);
  m.finalize();
  return m;
}

SpectralMeasure SpectralMeasure::uniform(int n) {
  SpectralMeasure m;
  m.n_ = n;
  m.kind_ = MeasureKind::uniform;
  m.mass_ = sphere_area(n);
  if (n == 1) {
    m.nodes_ = {{Vec{1.0}, 1.0}, {Vec{-1.0}, 1.0}};
    m.finalize();
  } else {
    m.uniform_rule_ = sphere_rule(n, kDefaultSphereResolution);
  }
  return m;
}

SpectralMeasure SpectralMeasure::density_on_circle(std::vector<double> values) {
  require(!values.empty(), errc::bad_parameter, "density grid needs at least one value");
  SpectralMeasure m;
  m.n_ = 2;
  m.kind_ = MeasureKind::density_grid;
  const int cnt = static_cast<int>(values.size());
  const double cell = 2.0 * M_PI / cnt;
  m.nodes_.reserve(values.size());
  for (int j = 0; j < cnt; ++j) {
    require(values[j] >= 0.0 && std::isfinite(values[j]), errc::negative_weight,
            "density value must be finite and >= 0, got " + std::to_string(values[j]));
    const double th = cell * j;
    m.nodes_.push_back({Vec{std::cos(th), std::sin(th)}, values[j] * cell});
  }
  m.grid_desc_ = "equispaced:" + std::to_string(cnt);
  m.density_values_ = std::move(values);
  m.finalize();
  return m;
}

SpectralMeasure SpectralMeasure::density_on_sphere(int polar_count, std::vector<double> values) {
  require(polar_count >= 1, errc::bad_parameter, "polar count must be positive");
  const int na = 2 * polar_count;
  require(values.size() == static_cast<std::size_t>(polar_count) * na, errc::dimension_mismatch,
          "expected " + std::to_string(polar_count * na) + " density values, got " +
              std::to_string(values.size()));
  SpectralMeasure m;
  m.n_ = 3;
  m.kind_ = MeasureKind::density_grid;
  m.polar_count_ = polar_count;
  const JacobiRule gl = gauss_legendre(polar_count);
  const double wa = 2.0 * M_PI / na;
  m.nodes_.reserve(values.size());
  for (int i = 0; i < polar_count; ++i) {
    const double t = 2.0 * gl.nodes[i] - 1.0;
    const double wt = 2.0 * gl.weights[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (int j = 0; j < na; ++j) {
      const double v = values[static_cast<std::size_t>(i) * na + j];
      require(v >= 0.0 && std::isfinite(v), errc::negative_weight,
              "density value must be finite and >= 0, got " + std::to_string(v));
      const double ph = wa * j;
      m.nodes_.push_back({Vec{st * std::cos(ph), st * std::sin(ph), t}, v * wt * wa});
    }
  }
  m.grid_desc_ = "product:" + std::to_string(polar_count) + "x" + std::to_string(na);
  m.density_values_ = std::move(values);
  m.polar_bounds_.resize(polar_count + 1);
  m.polar_bounds_.front() = -1.0;
  m.polar_bounds_.back() = 1.0;
  for (int i = 1; i < polar_count; ++i)
    m.polar_bounds_[i] = (2.0 * gl.nodes[i - 1] - 1.0 + 2.0 * gl.nodes[i] - 1.0) * 0.5;
  m.finalize();
  return m;
}

ValidationReport SpectralMeasure::validate(std::optional<double> s, double lambda_min) const {
  ValidationReport rep;
  auto flag = [&rep](errc code, const std::string& detail) {
    rep.pass = false;
    rep.issues.push_back({code, detail});
  };

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& at = nodes_[i];
    if (static_cast<int>(at.dir.size()) != n_)
      flag(errc::dimension_mismatch, "node " + std::to_string(i) + " has wrong dimension");
    else if (std::abs(norm2(at.dir) - 1.0) > 1e-12)
      flag(errc::non_unit_direction, "node " + std::to_string(i) + " is not unit length");
    if (!(at.weight >= 0.0) || !std::isfinite(at.weight))
      flag(errc::negative_weight, "node " + std::to_string(i) + " has invalid weight");
  }
  rep.total_mass = mass_;
  if (!(mass_ > 0.0)) flag(errc::null_measure, "measure has zero total mass");

  if (s && rep.pass) {
    const double lam = ellipticity(*s);
    rep.ellipticity = lam;
    if (lam < lambda_min)
      flag(errc::tolerance_exceeded,
           "ellipticity " + std::to_string(lam) + " below requested floor " +
               std::to_string(lambda_min));
  }
  return rep;
}

double SpectralMeasure::total_mass() const {
  require(mass_ > 0.0, errc::null_measure, "measure has zero total mass");
  return mass_;
}

double SpectralMeasure::integrate(const std::function<double(std::span<const double>)>& f,
                                  int resolution) const {
  if (!nodes_.empty()) {
    double s = 0.0;
    for (const auto& at : nodes_) s += at.weight * f(at.dir);
    return s;
  }
  if (resolution > 0 && resolution != kDefaultSphereResolution) {
    return sphere_rule(n_, resolution).apply(f);
  }
  return uniform_rule_.apply(f);
}

Matrix SpectralMeasure::second_moment(int resolution) const {
  Matrix m(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      const double v =
          integrate([&](std::span<const double> w) { return w[i] * w[j]; }, resolution);
      m(i, j) = m(j, i) = v;
    }
  }
  if (kind_ == MeasureKind::uniform && n_ >= 2) {
    // The product rules integrate quadratics exactly from tiny resolutions
    // on; a mismatch under doubling means the caller forced something absurd.
    const int res = resolution > 0 ? resolution : kDefaultSphereResolution;
    const double check =
        sphere_rule(n_, 2 * res).apply([&](std::span<const double> w) { return w[0] * w[0]; });
    require(std::abs(check - m(0, 0)) <= 1e-10 * std::max(1.0, mass_),
            errc::quadrature_under_resolved,
            "second moment unstable under resolution doubling");
  }
  return m;
}

double SpectralMeasure::directional_moment(std::span<const double> k, double p) const {
  require(static_cast<int>(k.size()) == n_, errc::dimension_mismatch,
          "direction has wrong dimension");
  require(p >= 0.0, errc::bad_parameter, "moment exponent must be >= 0");
  if (!nodes_.empty()) {
    double s = 0.0;
    for (const auto& at : nodes_) s += at.weight * std::pow(std::abs(dot(k, at.dir)), p);
    return s;
  }
  const double kn = norm2(k);
  if (kn == 0.0) return 0.0;
  if (n_ == 2) {
    // Rotation invariance: integral over the circle of |k.omega|^p equals
    // 4 |k|^p * integral_0^{pi/2} cos^p.
    const double prof =
        tanh_sinh([p](double th) { return std::pow(std::cos(th), p); }, 0.0, 0.5 * M_PI, 1e-14);
    return 4.0 * std::pow(kn, p) * prof;
  }
  // n == 3: align the polar axis with k; the azimuth integrates to 2*pi and
  // the polar profile is 2*pi * integral_{-1}^{1} |t|^p dt = 4*pi/(p+1).
  return 4.0 * M_PI * std::pow(kn, p) / (p + 1.0);
}

double SpectralMeasure::ellipticity(double s, int grid) const {
  require(s > 0.0 && s < 1.0, errc::bad_parameter, "s must lie in (0,1)");
  require(n_ <= 3, errc::unsupported_dimension, "ellipticity scan supports n in {1,2,3}");
  total_mass();  // NullMeasure guard
  const double p = 2.0 * s;

  if (n_ == 1) {
    // Both unit directions see |omega . e| = 1.
    return mass_;
  }

  if (n_ == 2) {
    auto g = [&](double th) {
      const Vec e{std::cos(th), std::sin(th)};
      return directional_moment(e, p);
    };
    const int m = grid > 0 ? grid : 1024;
    double best_th = 0.0, best = g(0.0);
    for (int j = 1; j < m; ++j) {
      const double th = M_PI * j / m;  // antipodal symmetry: scan half the circle
      const double v = g(th);
      if (v < best) { best = v; best_th = th; }
    }
    // Axis-aligned candidates catch degenerate minima exactly.
    for (double th : {0.0, 0.5 * M_PI}) {
      const double v = g(th);
      if (v < best) { best = v; best_th = th; }
    }
    // Golden-section refinement around the incumbent cell.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = best_th - M_PI / m, hi = best_th + M_PI / m;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - gr * (hi - lo); f1 = g(x1);
      } else {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + gr * (hi - lo); f2 = g(x2);
      }
    }
    return std::min({best, f1, f2});
  }

  // n == 3: coarse scan over a product grid plus poles, then shrinking local
  // grid refinement in (polar, azimuth) coordinates.
  auto gdir = [&](double ct, double ph) {
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const Vec e{st * std::cos(ph), st * std::sin(ph), ct};
    return directional_moment(e, p);
  };
  const int m = grid > 0 ? grid : 48;
  double best = gdir(1.0, 0.0), best_ct = 1.0, best_ph = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double ct = -1.0 + 2.0 * i / m;
    for (int j = 0; j < 2 * m; ++j) {
      const double ph = M_PI * j / m;
      const double v = gdir(ct, ph);
      if (v < best) { best = v; best_ct = ct; best_ph = ph; }
    }
  }
  double dct = 2.0 / m, dph = M_PI / m;
  for (int round = 0; round < 60; ++round) {
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        const double ct = std::clamp(best_ct + 0.5 * dct * i, -1.0, 1.0);
        const double ph = best_ph + 0.5 * dph * j;
        const double v = gdir(ct, ph);
        if (v < best) { best = v; best_ct = ct; best_ph = ph; }
      }
    }
    dct *= 0.55;
    dph *= 0.55;
  }
  return best;
}

Vec SpectralMeasure::sample_direction(RngState& rng) const {
  require(mass_ > 0.0, errc::null_measure, "cannot sample from a zero-mass measure");

  if (nodes_.empty()) {
    // Uniform kind, n >= 2: normalized Gaussian vector.
    Vec d(n_);
    for (;;) {
      for (auto& c : d) c = rng.normal();
      const double r = norm2(d);
      if (r > 1e-12) {
        for (auto& c : d) c /= r;
        return d;
      }
    }
  }

  const double u = rng.uniform() * mass_;
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::size_t idx =
      std::min(static_cast<std::size_t>(it - cumulative_.begin()), nodes_.size() - 1);

  if (kind_ != MeasureKind::density_grid) return nodes_[idx].dir;

  if (n_ == 2) {
    const int cnt = static_cast<int>(nodes_.size());
    const double cell = 2.0 * M_PI / cnt;
    const double th = cell * static_cast<double>(idx) + (rng.uniform() - 0.5) * cell;
    return Vec{std::cos(th), std::sin(th)};
  }

  // n == 3: jitter uniformly over the cell in (cos polar, azimuth), which is
  // area-uniform on the sphere.
  const int na = 2 * polar_count_;
  const int i = static_cast<int>(idx) / na;
  const int j = static_cast<int>(idx) % na;
  const double t_lo = polar_bounds_[i];
  const double t_hi = polar_bounds_[i + 1];
  const double t = t_lo + rng.uniform() * (t_hi - t_lo);
  const double wa = 2.0 * M_PI / na;
  const double ph = wa * j + (rng.uniform() - 0.5) * wa;
  const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
  return Vec{st * std::cos(ph), st * std::sin(ph), t};
}

}  // namespace aniso
