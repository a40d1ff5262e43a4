#pragma once

#include <string>

namespace hconvex {

// Shortest decimal text that round-trips to the same double; "inf", "-inf"
// and "nan" for non-finite values.
std::string format_double(double v);

}  // namespace hconvex
