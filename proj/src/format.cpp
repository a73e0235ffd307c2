#include "thermo/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace thermo {

std::string FormatNumber(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double RoundSignificant(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(FormatNumber(x).c_str(), nullptr);
}

}  // namespace thermo
