#ifndef THERMO_FORMAT_HPP
#define THERMO_FORMAT_HPP

#include <string>

namespace thermo {

/// Fixed 12-significant-digit rendering used for every CSV/JSON number.
std::string FormatNumber(double x);

/// Rounds to 12 significant digits so JSON output is stable across runs.
double RoundSignificant(double x);

}  // namespace thermo

#endif  // THERMO_FORMAT_HPP
