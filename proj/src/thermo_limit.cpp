#include "thermo/thermo_limit.hpp"

#include <cmath>
#include <sstream>

#include "thermo/ergopt.hpp"
#include "thermo/error.hpp"
#include "thermo/format.hpp"
#include "thermo/parallel.hpp"
#include "thermo/pressure.hpp"

namespace thermo {

namespace {

constexpr double kBisectionWidth = 1e-6;
constexpr double kAverageConvergence = 1e-6;

struct BetaSample {
  double value = 0.0;
  double eq_average = 0.0;
  double eq_entropy = 0.0;
  double eq_phi_average = 0.0;
};

}  // namespace

std::vector<double> DefaultBetaSchedule(double beta_max, double step) {
  if (!(step > 0.0)) throw InputError("beta step must be positive");
  if (beta_max < 0.0) throw InputError("beta_max must be nonnegative");
  std::vector<double> betas;
  const int count = static_cast<int>(std::floor(beta_max / step + 1e-9));
  for (int k = 0; k <= count; ++k) betas.push_back(k * step);
  return betas;
}

ThermoCurve ComputeThermoCurve(const TransitionGraph& graph,
                               const EdgePotential& a, const EdgePotential& phi,
                               const std::vector<double>& betas) {
  if (!graph.irreducible()) throw InputError("thermo curve needs an irreducible graph");
  if (a.min() < 0.0) throw InputError("damping must be nonnegative");
  if (betas.empty()) throw InputError("beta schedule is empty");
  for (std::size_t k = 1; k < betas.size(); ++k) {
    if (!(betas[k] > betas[k - 1])) {
      throw InputError("beta schedule must be strictly increasing");
    }
  }

  ThermoCurve curve;
  curve.betas = betas;
  curve.a0 = MinAverage(graph, a);
  curve.undamped_edges = UndampedSet(graph, a);
  curve.limit_target = PressureOnSet(graph, phi, curve.undamped_edges);
  curve.pressure_phi = PressureTransfer(graph, phi).value;

  // Pr(-beta a + phi) + beta a0 = Pr(-beta (a - a0) + phi).
  const EdgePotential reduced = a + (-curve.a0);
  const auto samples = ParallelMap<BetaSample>(
      static_cast<int>(betas.size()), [&](int k) {
        const EdgePotential f = phi - reduced * betas[k];
        const EquilibriumState eq = ComputeEquilibriumState(graph, f);
        return BetaSample{PressureTransfer(graph, f).value,
                          Integrate(a, eq.measure), KsEntropy(eq.measure),
                          Integrate(phi, eq.measure)};
      });
  for (const BetaSample& s : samples) {
    curve.values.push_back(s.value);
    curve.eq_averages.push_back(s.eq_average);
    curve.eq_entropies.push_back(s.eq_entropy);
    curve.eq_phi_averages.push_back(s.eq_phi_average);
  }
  return curve;
}

LimitVerdict VerifyLimit(const ThermoCurve& curve, double tol) {
  LimitVerdict verdict;
  verdict.final_gap = std::abs(curve.values.back() - curve.limit_target);
  auto fail = [&](int k, const char* kind, const std::string& detail) {
    verdict.holds = false;
    verdict.diagnostic = kind;
    verdict.detail = detail;
    verdict.violation_index = k;
    return verdict;
  };
  for (int k = 0; k < static_cast<int>(curve.values.size()); ++k) {
    const double v = curve.values[k];
    const std::string at = "at beta = " + FormatNumber(curve.betas[k]);
    if (v < curve.limit_target - kInvariantSlack) {
      return fail(k, "sandwich lower",
                  "Pr(-beta a + phi) + beta a0 = " + FormatNumber(v) +
                      " < Pr_K(phi) = " + FormatNumber(curve.limit_target) +
                      " " + at);
    }
    if (v > curve.pressure_phi + kInvariantSlack) {
      return fail(k, "sandwich upper",
                  "Pr(-beta a + phi) + beta a0 = " + FormatNumber(v) +
                      " > Pr(phi) = " + FormatNumber(curve.pressure_phi) + " " +
                      at);
    }
    if (k > 0 && v > curve.values[k - 1] + kInvariantSlack) {
      return fail(k, "monotonicity",
                  "curve increases from " + FormatNumber(curve.values[k - 1]) +
                      " to " + FormatNumber(v) + " " + at);
    }
  }
  if (!(verdict.final_gap <= tol)) {
    verdict.holds = false;
    verdict.diagnostic = "limit gap";
    verdict.detail = "|value - Pr_K(phi)| = " + FormatNumber(verdict.final_gap) +
                     " > tol = " + FormatNumber(tol) + " at beta_max = " +
                     FormatNumber(curve.betas.back());
    return verdict;
  }
  verdict.holds = true;
  verdict.diagnostic = "ok";
  return verdict;
}

ConvergenceReport MeasureConvergence(const ThermoCurve& curve) {
  ConvergenceReport report;
  report.entropies = curve.eq_entropies;
  report.final_average_gap = std::abs(curve.eq_averages.back() - curve.a0);
  report.averages_converged = report.final_average_gap <= kAverageConvergence;
  report.averages_above_a0 = true;
  report.averages_nonincreasing = true;
  report.lower_bound_holds = true;
  for (std::size_t k = 0; k < curve.values.size(); ++k) {
    if (curve.eq_averages[k] < curve.a0 - kInvariantSlack) {
      report.averages_above_a0 = false;
    }
    if (k > 0 && curve.eq_averages[k] > curve.eq_averages[k - 1] + 1e-10) {
      report.averages_nonincreasing = false;
    }
    const double lower = curve.eq_entropies[k] + curve.eq_phi_averages[k];
    if (report.lower_bound_holds && lower < curve.values[k] - kInvariantSlack) {
      report.lower_bound_holds = false;
      report.lower_bound_violation = static_cast<int>(k);
    }
  }
  return report;
}

std::optional<double> FindGapBeta(const TransitionGraph& graph,
                                  const EdgePotential& a,
                                  const EdgePotential& ju, double beta_max) {
  if (a.min() < 0.0) throw InputError("damping must be nonnegative");
  if (beta_max < 0.0) throw InputError("beta_max must be nonnegative");
  const double on_k = PressureOnSet(graph, ju, UndampedSet(graph, a));
  if (!(on_k < 0.0)) {
    throw InputError("Corollary hypothesis fails: Pr_K(ju) = " +
                     FormatNumber(on_k) + " is not negative");
  }
  auto pressure = [&](double beta) {
    return PressureTransfer(graph, ju - a * beta).value;
  };
  if (pressure(0.0) < 0.0) return 0.0;
  if (!(pressure(beta_max) < 0.0)) return std::nullopt;
  double lo = 0.0, hi = beta_max;
  while (hi - lo > kBisectionWidth) {
    const double mid = 0.5 * (lo + hi);
    (pressure(mid) < 0.0 ? hi : lo) = mid;
  }
  return hi;
}

std::string CurveCsv(const ThermoCurve& curve) {
  std::ostringstream out;
  out << "beta,pressure_plus_beta_a0,eq_average_a,eq_entropy,limit_target\n";
  for (std::size_t k = 0; k < curve.betas.size(); ++k) {
    out << FormatNumber(curve.betas[k]) << ',' << FormatNumber(curve.values[k])
        << ',' << FormatNumber(curve.eq_averages[k]) << ','
        << FormatNumber(curve.eq_entropies[k]) << ','
        << FormatNumber(curve.limit_target) << '\n';
  }
  return out.str();
}

nlohmann::json ToJson(const LimitVerdict& verdict) {
  return {{"holds", verdict.holds},
          {"diagnostic", verdict.diagnostic},
          {"detail", verdict.detail},
          {"final_gap", RoundSignificant(verdict.final_gap)},
          {"violation_index", verdict.violation_index
                                  ? nlohmann::json(*verdict.violation_index)
                                  : nlohmann::json(nullptr)}};
}

}  // namespace thermo
