#ifndef THERMO_THERMO_LIMIT_HPP
#define THERMO_THERMO_LIMIT_HPP

// Strong-damping limit of the pressure: beta -> Pr(-beta a + phi) + beta a0,
// its convergence to the pressure of phi on the undamped set K, and the
// search for a damping strength making Pr(-beta a + phi) negative.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thermo/sft.hpp"

namespace thermo {

/// Pointwise slack allowed on the monotonicity and sandwich inequalities.
inline constexpr double kInvariantSlack = 1e-9;

struct ThermoCurve {
  std::vector<double> betas;
  /// Pr(-beta a + phi) + beta a0.
  std::vector<double> values;
  /// Integral of a against the equilibrium state of -beta a + phi.
  std::vector<double> eq_averages;
  std::vector<double> eq_entropies;
  /// Integral of phi against the same equilibrium state.
  std::vector<double> eq_phi_averages;
  double a0 = 0.0;
  /// Pr_K(phi), K = UndampedSet(a).
  double limit_target = 0.0;
  /// Pr(phi), the upper end of the sandwich.
  double pressure_phi = 0.0;
  EdgeSet undamped_edges;
};

/// beta_n = n * step for n = 0 .. floor(beta_max / step).
std::vector<double> DefaultBetaSchedule(double beta_max = 40.0,
                                        double step = 0.5);

/// Requires an irreducible graph, a >= 0 and a strictly increasing schedule.
/// Per-beta work runs in parallel.
ThermoCurve ComputeThermoCurve(const TransitionGraph& graph,
                               const EdgePotential& a, const EdgePotential& phi,
                               const std::vector<double>& betas);

struct LimitVerdict {
  bool holds = false;
  /// "ok", "limit gap", "monotonicity", "sandwich lower" or "sandwich upper".
  std::string diagnostic;
  std::string detail;
  /// |values.back() - limit_target|.
  double final_gap = 0.0;
  /// Index of the first beta violating an inequality, if any.
  std::optional<int> violation_index;
};

LimitVerdict VerifyLimit(const ThermoCurve& curve, double tol);

struct ConvergenceReport {
  /// |eq_averages.back() - a0|.
  double final_average_gap = 0.0;
  bool averages_converged = false;  // final gap <= 1e-6
  bool averages_above_a0 = false;
  bool averages_nonincreasing = false;
  /// h(mu_beta) + int phi dmu_beta >= values[k] for every k.
  bool lower_bound_holds = false;
  std::optional<int> lower_bound_violation;
  std::vector<double> entropies;
};

ConvergenceReport MeasureConvergence(const ThermoCurve& curve);

/// Smallest beta* in [0, beta_max] (to 1e-6, bisection) with
/// Pr(-beta* a + ju) < 0, or nullopt if beta_max is not enough. Throws
/// InputError when Pr_K(ju) >= 0.
std::optional<double> FindGapBeta(const TransitionGraph& graph,
                                  const EdgePotential& a,
                                  const EdgePotential& ju, double beta_max);

/// Columns: beta, pressure_plus_beta_a0, eq_average_a, eq_entropy,
/// limit_target.
std::string CurveCsv(const ThermoCurve& curve);
nlohmann::json ToJson(const LimitVerdict& verdict);

}  // namespace thermo

#endif  // THERMO_THERMO_LIMIT_HPP
