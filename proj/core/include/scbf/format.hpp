#pragma once

#include <string>

namespace scbf {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

}  // namespace scbf
