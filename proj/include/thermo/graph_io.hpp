#ifndef THERMO_GRAPH_IO_HPP
#define THERMO_GRAPH_IO_HPP

// Text format for a transition graph carrying two edge potentials:
//
//   n
//   i j a_ij phi_ij      (one allowed edge per line, 0-based states)
//
// `a` is the damping and `phi` the base potential. Absent edges are
// forbidden; blank lines and '#' comments are ignored.

#include <istream>
#include <string>

#include "thermo/sft.hpp"

namespace thermo {

struct GraphFile {
  TransitionGraph graph;
  EdgePotential damping;
  EdgePotential potential;
};

/// Throws InputError naming the offending line.
GraphFile ParseGraphFile(std::istream& in);
GraphFile ReadGraphFile(const std::string& path);
std::string FormatGraphFile(const GraphFile& file);

}  // namespace thermo

#endif  // THERMO_GRAPH_IO_HPP
