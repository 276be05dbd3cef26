#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anisomean/errors.hpp"
#include "anisomean/linalg.hpp"
#include "anisomean/quadrature.hpp"
#include "anisomean/rng.hpp"

namespace aniso {

enum class MeasureKind { atomic, density_grid, uniform };

struct Atom {
  Vec dir;       // unit vector in R^n
  double weight; // >= 0
};

struct ValidationIssue {
  errc code;
  std::string detail;
};

struct ValidationReport {
  bool pass = true;
  double total_mass = 0.0;
  std::optional<double> ellipticity;  // present when validate() was given an s
  std::vector<ValidationIssue> issues;
};

// Finite nonnegative measure on the unit sphere S^{n-1}, the angular part of
// the operator kernel. Atomic measures carry explicit unit directions;
// density-grid measures are nonnegative values on a fixed angular grid
// (n=2: equispaced circle, n=3: Gauss-Legendre polar times equispaced
// azimuth), integrated with the grid's own product weights; the uniform kind
// is unnormalized surface measure. Immutable once constructed; all members
// are const-safe for concurrent use.
class SpectralMeasure {
 public:
  // Directions within 1e-9 of unit length are renormalized; anything worse is
  // rejected (NonUnitDirection). Negative weights are rejected outright.
  static SpectralMeasure atomic(int n, std::vector<Atom> atoms);

  // n in {1,2,3}. For n=1 this is the counting measure on {+1,-1}.
  static SpectralMeasure uniform(int n);

  // n=2, `values[j]` at angle 2*pi*j/values.size(); all values >= 0.
  static SpectralMeasure density_on_circle(std::vector<double> values);

  // n=3, polar_count Gauss-Legendre nodes in cos(polar), 2*polar_count
  // azimuths; values indexed polar-major. All values >= 0.
  static SpectralMeasure density_on_sphere(int polar_count, std::vector<double> values);

  int dim() const { return n_; }
  MeasureKind kind() const { return kind_; }

  // Re-runs the construction invariants and reports every violation instead
  // of throwing on the first. When `s` is given, the ellipticity at that
  // exponent is computed and checked against lambda_min.
  ValidationReport validate(std::optional<double> s = {}, double lambda_min = 0.0) const;

  // Strictly positive; NullMeasure if the measure has mass zero.
  double total_mass() const;

  // m_ij = integral of omega_i * omega_j. Symmetric PSD with trace equal to
  // the total mass. `resolution` overrides the spherical rule for the uniform
  // kind (0 = default); atomic and density-grid sums are exact.
  Matrix second_moment(int resolution = 0) const;

  // inf over unit directions of integral |omega . e|^{2s} d a(omega),
  // located by a global grid scan plus local golden-section refinement.
  // n <= 3 only (UnsupportedDimension above).
  double ellipticity(double s, int grid = 0) const;

  // integral f(omega) d a(omega) for smooth f. For the uniform kind a product
  // sphere rule of the given resolution is used (0 = default, accurate for
  // smooth integrands); otherwise the measure's own node sum, which is exact.
  double integrate(const std::function<double(std::span<const double>)>& f,
                   int resolution = 0) const;

  // integral |k . omega|^p d a(omega). The uniform kind reduces to a 1-D
  // profile integral evaluated adaptively, so the |.|^p kink costs no
  // accuracy; node-based kinds sum exactly over their nodes.
  double directional_moment(std::span<const double> k, double p) const;

  // Draw a direction distributed as a / total_mass. Atomic: categorical over
  // atoms. Density-grid: categorical over cells, uniform jitter inside the
  // cell. Uniform: isotropic.
  Vec sample_direction(RngState& rng) const;

  // Node view used by serialization and reporting. For the uniform kind the
  // list is empty (n >= 2) and the default rule is used for integration.
  const std::vector<Atom>& nodes() const { return nodes_; }

  // Density-grid metadata; empty/0 for other kinds.
  const std::string& grid_desc() const { return grid_desc_; }
  const std::vector<double>& density_values() const { return density_values_; }

 private:
  SpectralMeasure() = default;
  void finalize();

  int n_ = 0;
  MeasureKind kind_ = MeasureKind::atomic;
  std::vector<Atom> nodes_;            // atomic, density-grid, uniform n=1
  std::vector<double> density_values_; // density-grid raw values
  std::string grid_desc_;
  int polar_count_ = 0;                // density n=3
  Vec polar_bounds_;                   // density n=3 cell edges in cos(polar)
  double mass_ = 0.0;
  Vec cumulative_;                     // sampling table over nodes_
  SphereRule uniform_rule_;            // uniform n in {2,3}
};

// Default spherical resolution used when a caller passes 0.
inline constexpr int kDefaultSphereResolution = 64;

}  // namespace aniso
