#pragma once

#include <string>

namespace halfspace {

/// Shortest round-trip-safe text for a double: "%.17g", with -0 printed as 0.
std::string fmt17(double x);

}  // namespace halfspace
