#pragma once

#include <string>
#include <string_view>

namespace aniso {

// 17 significant digits: enough to round-trip any double exactly.
std::string fmt_g17(double v);

// Appends v as a JSON number; nonfinite values become the quoted tokens
// "inf", "-inf", "nan" since JSON has no literal for them.
void append_json_number(std::string& out, double v);

void append_json_string(std::string& out, std::string_view s);

}  // namespace aniso
