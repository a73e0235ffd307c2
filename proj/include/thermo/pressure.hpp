#ifndef THERMO_PRESSURE_HPP
#define THERMO_PRESSURE_HPP

// Topological pressure of edge potentials on irreducible subshifts, computed
// three ways: the Perron root of the weighted transfer matrix (exact oracle),
// weighted periodic-orbit sums, and Bowen sums over separated sets.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "thermo/sft.hpp"

namespace thermo {

enum class PressureMethod { kTransfer, kPeriodicOrbits, kBowen };

const char* MethodName(PressureMethod method);

struct PressureReport {
  double value = 0.0;
  PressureMethod method = PressureMethod::kTransfer;
  /// (T, estimate) pairs; empty for the transfer method.
  std::vector<std::pair<int, double>> trace;
  double tolerance = 0.0;
  /// Description of the boundary term used by the Bowen sum.
  std::string convention;
};

struct PowerIterationOptions {
  double relative_tolerance = 1e-13;
  int max_iterations = 1'000'000;
};

/// Perron data of a nonnegative irreducible matrix given as `log_scale` +
/// log of `matrix` (entries of `matrix` are usually <= 1 so that large
/// potentials do not overflow).
struct PerronData {
  double log_radius = 0.0;
  Eigen::VectorXd right;
  Eigen::VectorXd left;
  int iterations = 0;
};

/// Power iteration on M + s_k I, where s_k is the current Collatz-Wielandt
/// lower bound; the shift keeps periodic matrices convergent without changing
/// eigenvectors. Stops when max_i (Mr)_i/r_i <= (1 + tol) min_i (Mr)_i/r_i.
/// Vectors are sup-normalized. Throws NumericError on non-convergence.
PerronData PerronRoot(const Eigen::MatrixXd& matrix, bool want_left,
                      const PowerIterationOptions& options = {});

/// exp(f_ij - max f) on allowed edges, 0 elsewhere; the max is returned in
/// `log_scale`.
Eigen::MatrixXd WeightedTransferMatrix(const TransitionGraph& graph,
                                       const EdgePotential& f,
                                       double* log_scale);

PressureReport PressureTransfer(const TransitionGraph& graph,
                                const EdgePotential& f,
                                const PowerIterationOptions& options = {});

/// P_T = (1/T) log sum over cyclic words of length T of exp(S_T f). Words are
/// enumerated while n^T <= cap; beyond that trace(L^T) is used. Periods with
/// no cycles (periodic graphs) are left out of the trace.
PressureReport PressurePeriodicOrbits(
    const TransitionGraph& graph, const EdgePotential& f, int t_max,
    std::int64_t cap = kDefaultEnumerationCap);

/// Z_T = (1/T) log sum over admissible T-words of exp(S_T f), S_T being the
/// T-1 interior edges plus the largest outgoing weight of the last state.
/// With the shift metric at scale 1/4, T-cylinders are exactly the maximal
/// (eps, T)-separated sets.
PressureReport PressureBowen(const TransitionGraph& graph,
                             const EdgePotential& f, int t_max);

struct EquilibriumState {
  MarkovMeasure measure;
  /// log of the Perron eigenvalue of L_ij = allowed_ij exp(f_ij).
  double log_lambda = 0.0;
  Eigen::VectorXd left;
  Eigen::VectorXd right;
};

/// Gibbs-Markov measure P_ij = L_ij r_j / (L r)_i, p_i ~ l_i r_i.
EquilibriumState ComputeEquilibriumState(
    const TransitionGraph& graph, const EdgePotential& f,
    const PowerIterationOptions& options = {});

nlohmann::json ToJson(const PressureReport& report);
/// "T,estimate" rows, 12 significant digits.
std::string TraceCsv(const PressureReport& report);

}  // namespace thermo

#endif  // THERMO_PRESSURE_HPP
