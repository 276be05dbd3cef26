#include "anisomean/errors.hpp"

namespace aniso {

const char* errc_name(errc c) {
  switch (c) {
    case errc::ok: return "Ok";
    case errc::non_unit_direction: return "NonUnitDirection";
    case errc::negative_weight: return "NegativeWeight";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::null_measure: return "NullMeasure";
    case errc::quadrature_under_resolved: return "QuadratureUnderResolved";
    case errc::unsupported_dimension: return "UnsupportedDimension";
    case errc::unknown_function: return "UnknownFunction";
    case errc::bad_parameter: return "BadParameter";
    case errc::bad_exponent: return "BadExponent";
    case errc::overflow: return "Overflow";
    case errc::not_c2_at_point: return "NotC2AtPoint";
    case errc::nonfinite_value: return "NonfiniteValue";
    case errc::domain_error: return "DomainError";
    case errc::unbounded_support: return "UnboundedSupport";
    case errc::start_outside_domain: return "StartOutsideDomain";
    case errc::degenerate_radius: return "DegenerateRadius";
    case errc::tolerance_exceeded: return "ToleranceExceeded";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace aniso
