#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

// Error taxonomy shared by the C++ core and the C API. Codes are stable:
// the C header mirrors them one-to-one, so only append.
enum class errc : int {
  ok = 0,
  non_unit_direction,
  negative_weight,
  dimension_mismatch,
  null_measure,
  quadrature_under_resolved,
  unsupported_dimension,
  unknown_function,
  bad_parameter,
  bad_exponent,
  overflow,
  not_c2_at_point,
  nonfinite_value,
  domain_error,
  unbounded_support,
  start_outside_domain,
  degenerate_radius,
  tolerance_exceeded,
  parse_error,
  io_error,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace aniso
