#pragma once

#include <string>

#include "anisomean/measure.hpp"

namespace aniso {

// Measure file format (JSON), exact field names, unknown fields rejected:
//   {"n": int, "kind": "atomic" | "density-grid" | "uniform",
//    "atoms": [{"dir": [..n..], "w": real}, ...],        (atomic only)
//    "density": {"grid": "...", "values": [...]}}         (density-grid only)
// Grid strings: "equispaced:<M>" for the circle (M cell values),
// "product:<P>x<A>" for the sphere with A = 2P (P*A cell values, polar-major).
SpectralMeasure load_measure_json(const std::string& text);
SpectralMeasure load_measure_file(const std::string& path);

std::string save_measure_json(const SpectralMeasure& m);
void save_measure_file(const SpectralMeasure& m, const std::string& path);

}  // namespace aniso
