#ifndef THERMO_CLI_HPP
#define THERMO_CLI_HPP

// Command-line front end: pressure, thermo, catmap and wave subcommands.
// Exit codes: 0 ok, 2 usage/input, 3 numeric failure, 4 invariant violation.

#include <string>
#include <string_view>
#include <vector>

#include "thermo/graph_io.hpp"

namespace thermo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitInvariant = 4;

/// Names accepted by --builtin.
std::vector<std::string> BuiltinNames();

/// full2, golden-mean, two-loops-path or catmap (the fixed-point damping at
/// refinement 4 with potential (1/2) log J^u). Throws InputError otherwise.
GraphFile Builtin(std::string_view name);

int Run(int argc, char** argv);
/// Convenience overload; args exclude the program name.
int Run(const std::vector<std::string>& args);

}  // namespace thermo::cli

#endif  // THERMO_CLI_HPP
