#ifndef THERMO_ERGOPT_HPP
#define THERMO_ERGOPT_HPP

// Ergodic optimization of edge potentials: the minimal ergodic average a0,
// the undamped set K (support of minimizing measures), the non-controlled set
// N, and pressure restricted to an invariant edge set.

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "thermo/sft.hpp"

namespace thermo {

/// An edge is critical when it lies on a cycle of reduced mean within this
/// band of zero.
inline constexpr double kZeroCycleTolerance = 1e-9;

struct MinMeanCycle {
  double mean = 0.0;
  CyclicWord cycle;
};

/// Karp's minimum mean cycle. The returned mean is the mean of the witness
/// cycle, its edge weights summed in ascending order.
MinMeanCycle MinimumMeanCycle(const TransitionGraph& graph,
                              const EdgePotential& a);

/// a0 = min over invariant measures of the integral of a.
double MinAverage(const TransitionGraph& graph, const EdgePotential& a);

/// Edges on some cycle of mean a0: the discrete undamped set K.
EdgeSet UndampedSet(const TransitionGraph& graph, const EdgePotential& a);

/// Zero-weight edges through which a bi-infinite zero-weight path passes.
/// Requires a >= 0 and a0 = 0.
EdgeSet NoncontrolledSet(const TransitionGraph& graph, const EdgePotential& a);

/// Pesin-Pitskel pressure of f on the invariant set carried by `edges`: the
/// largest log Perron root over strongly connected pieces with a cycle.
double PressureOnSet(const TransitionGraph& graph, const EdgePotential& f,
                     const EdgeSet& edges);

struct MinimizationResult {
  double a0 = 0.0;
  CyclicWord witness_cycle;
  EdgeSet critical_edges;
  /// Present when a >= 0 and a0 = 0.
  std::optional<EdgeSet> noncontrolled_edges;
};

MinimizationResult Minimize(const TransitionGraph& graph,
                            const EdgePotential& a);

/// Mean of `values` summed in ascending order; shared canonical summation so
/// that two routes to the same cycle produce bitwise-equal means.
double CanonicalMean(std::vector<double> values);

/// "i j" per line, sorted.
std::string FormatEdgeSet(const EdgeSet& edges);
nlohmann::json ToJson(const MinimizationResult& result);

}  // namespace thermo

#endif  // THERMO_ERGOPT_HPP
