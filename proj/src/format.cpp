#include "halfspace/format.hpp"

#include <cstdio>

namespace halfspace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);
  return buf;
}

}  // namespace halfspace
