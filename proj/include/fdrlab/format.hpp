#pragma once

#include <string>

namespace fdrlab {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

} // namespace fdrlab
