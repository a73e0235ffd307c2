#include "thermo/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <sstream>

#include <Eigen/Dense>

#include "thermo/error.hpp"
#include "thermo/format.hpp"

namespace thermo {

namespace {

constexpr double kStochasticTolerance = 1e-10;

// log(sum_k exp(x_k)) accumulated one term at a time.
class LogSumExp {
 public:
  void Add(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }
  double value() const {
    return sum_ > 0.0 ? max_ + std::log(sum_)
                      : -std::numeric_limits<double>::infinity();
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

void RequireIrreducible(const TransitionGraph& graph) {
  if (!graph.irreducible()) {
    throw InputError(
        "graph is not irreducible; compute the pressure per component with "
        "PressureOnSet");
  }
}

struct PowerResult {
  Eigen::VectorXd vector;
  double log_radius;
  int iterations;
};

// Power iteration stalls when a second eigenvalue sits next to the Perron
// root (two weakly coupled loops at large beta). Past this many steps we
// switch to inverse iteration.
constexpr int kInverseIterationSwitch = 10'000;
constexpr int kInverseIterationSteps = 200;

// Collatz-Wielandt bounds min/max (m r)_i / r_i.
std::pair<double, double> CwBounds(const Eigen::MatrixXd& m,
                                   const Eigen::VectorXd& r,
                                   Eigen::VectorXd& y) {
  y.noalias() = m * r;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    const double ratio = y(i) / r(i);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo, hi};
}

bool Converged(double lo, double hi, const PowerIterationOptions& options) {
  return lo > 0.0 && hi <= lo * (1.0 + options.relative_tolerance);
}

// For sigma above the Perron root, (sigma - m)^-1 is a positive matrix whose
// top eigenvector is the Perron vector, so iterating it keeps r > 0. sigma
// comes from a dense eigenvalue estimate.
std::optional<PowerResult> InverseIterate(const Eigen::MatrixXd& m,
                                          const PowerIterationOptions& options) {
  const int n = static_cast<int>(m.rows());
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  double rho = 0.0;
  for (int i = 0; i < n; ++i) rho = std::max(rho, es.eigenvalues()(i).real());
  if (!(rho > 0.0) || !std::isfinite(rho)) return std::nullopt;
  Eigen::VectorXd y(n);
  for (double offset = 1e-10; offset <= 1e-4; offset *= 100.0) {
    const double sigma = rho * (1.0 + offset);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(
        sigma * Eigen::MatrixXd::Identity(n, n) - m);
    Eigen::VectorXd r = Eigen::VectorXd::Ones(n);
    bool positive = true;
    for (int it = 1; it <= kInverseIterationSteps && positive; ++it) {
      r = lu.solve(r);
      r /= r.maxCoeff();
      positive = r.allFinite() && (r.array() > 0.0).all();
      if (!positive) break;
      const auto [lo, hi] = CwBounds(m, r, y);
      if (Converged(lo, hi, options)) {
        return PowerResult{r, 0.5 * (std::log(lo) + std::log(hi)), it};
      }
    }
  }
  return std::nullopt;
}

PowerResult PowerIterate(const Eigen::MatrixXd& m,
                         const PowerIterationOptions& options) {
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXd r = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd y(n);
  const int budget = std::min(options.max_iterations, kInverseIterationSwitch);
  for (int it = 1; it <= budget; ++it) {
    const auto [lo, hi] = CwBounds(m, r, y);
    if (!(hi > 0.0) || !std::isfinite(hi)) {
      throw NumericError("transfer matrix has no mass (all weights underflow)");
    }
    if (Converged(lo, hi, options)) {
      const double log_radius = 0.5 * (std::log(lo) + std::log(hi));
      return {r, log_radius, it};
    }
    const double shift = lo > 0.0 ? lo : 1e-3 * hi;
    r = y + shift * r;
    r /= r.maxCoeff();
    for (int i = 0; i < n; ++i) {
      if (!(r(i) > 0.0)) {
        throw NumericError("Perron vector lost positivity (matrix reducible?)");
      }
    }
  }
  if (auto inv = InverseIterate(m, options)) {
    inv->iterations += budget;
    return *inv;
  }
  throw NumericError("power iteration did not converge after " +
                     std::to_string(budget) + " iterations");
}

// log trace(m^T) for T = 1..t_max, renormalizing each power.
std::vector<double> LogTracesOfPowers(const Eigen::MatrixXd& m, int t_max) {
  std::vector<double> out;
  out.reserve(t_max);
  Eigen::MatrixXd power = m;
  double log_scale = 0.0;
  for (int t = 1; t <= t_max; ++t) {
    if (t > 1) power = power * m;
    const double top = power.maxCoeff();
    if (!(top > 0.0)) {
      throw NumericError("matrix power underflowed to zero");
    }
    power /= top;
    log_scale += std::log(top);
    const double tr = power.trace();
    out.push_back(tr > 0.0 ? log_scale + std::log(tr)
                           : -std::numeric_limits<double>::infinity());
  }
  return out;
}

}  // namespace

const char* MethodName(PressureMethod method) {
  switch (method) {
    case PressureMethod::kTransfer:
      return "transfer";
    case PressureMethod::kPeriodicOrbits:
      return "periodic-orbits";
    case PressureMethod::kBowen:
      return "bowen";
  }
  return "unknown";
}

PerronData PerronRoot(const Eigen::MatrixXd& matrix, bool want_left,
                      const PowerIterationOptions& options) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw InputError("Perron root needs a non-empty square matrix");
  }
  PowerResult right = PowerIterate(matrix, options);
  PerronData out;
  out.log_radius = right.log_radius;
  out.right = std::move(right.vector);
  out.iterations = right.iterations;
  if (want_left) {
    PowerResult left = PowerIterate(matrix.transpose(), options);
    out.left = std::move(left.vector);
    out.iterations += left.iterations;
  }
  return out;
}

Eigen::MatrixXd WeightedTransferMatrix(const TransitionGraph& graph,
                                       const EdgePotential& f,
                                       double* log_scale) {
  const double top = f.max();
  const int n = graph.size();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  const auto& values = f.values();
  for (int k = 0; k < graph.num_edges(); ++k) {
    const Edge& e = graph.edges()[k];
    l(e.from, e.to) = std::exp(values[k] - top);
  }
  if (log_scale != nullptr) *log_scale = top;
  return l;
}

PressureReport PressureTransfer(const TransitionGraph& graph,
                                const EdgePotential& f,
                                const PowerIterationOptions& options) {
  RequireIrreducible(graph);
  double log_scale = 0.0;
  const Eigen::MatrixXd l = WeightedTransferMatrix(graph, f, &log_scale);
  const PerronData perron = PerronRoot(l, false, options);
  PressureReport report;
  report.method = PressureMethod::kTransfer;
  report.value = perron.log_radius + log_scale;
  report.tolerance = options.relative_tolerance;
  if (!std::isfinite(report.value)) {
    throw NumericError("transfer pressure is not finite");
  }
  return report;
}

PressureReport PressurePeriodicOrbits(const TransitionGraph& graph,
                                      const EdgePotential& f, int t_max,
                                      std::int64_t cap) {
  RequireIrreducible(graph);
  if (t_max < 2) throw InputError("T_max must be >= 2");

  double log_scale = 0.0;
  const Eigen::MatrixXd l = WeightedTransferMatrix(graph, f, &log_scale);
  std::vector<double> traces;  // filled lazily once enumeration stops fitting

  PressureReport report;
  report.method = PressureMethod::kPeriodicOrbits;
  for (int t = 1; t <= t_max; ++t) {
    double log_mass;
    if (EnumerationFits(graph.size(), t, cap)) {
      LogSumExp acc;
      for (const CyclicWord& w : EnumerateCycles(graph, t, cap)) {
        acc.Add(BirkhoffSum(f, w));
      }
      log_mass = acc.value();
    } else {
      if (traces.empty()) traces = LogTracesOfPowers(l, t_max);
      log_mass = traces[t - 1] + t * log_scale;
    }
    if (std::isfinite(log_mass)) report.trace.emplace_back(t, log_mass / t);
  }
  if (report.trace.empty()) {
    throw NumericError("no cycle of length <= T_max carries positive mass");
  }
  report.value = report.trace.back().second;
  report.tolerance =
      report.trace.size() > 1
          ? std::abs(report.trace.back().second -
                     report.trace[report.trace.size() - 2].second)
          : std::numeric_limits<double>::infinity();
  return report;
}

PressureReport PressureBowen(const TransitionGraph& graph,
                             const EdgePotential& f, int t_max) {
  RequireIrreducible(graph);
  if (t_max < 1) throw InputError("T_max must be >= 1");

  const int n = graph.size();
  double log_scale = 0.0;
  const Eigen::MatrixXd l = WeightedTransferMatrix(graph, f, &log_scale);

  // Closing term: the largest outgoing weight of the last state.
  Eigen::VectorXd closing(n);
  for (int i = 0; i < n; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j : graph.successors(i)) best = std::max(best, f(i, j));
    closing(i) = best;
  }
  const double closing_top = closing.maxCoeff();
  Eigen::VectorXd v = (closing.array() - closing_top).exp().matrix();
  double log_norm = closing_top;

  PressureReport report;
  report.method = PressureMethod::kBowen;
  report.convention =
      "T-1 interior edges + max outgoing weight of the last state; eps = 1/4";
  for (int t = 1; t <= t_max; ++t) {
    if (t > 1) {
      v = l * v;
      log_norm += log_scale;
    }
    const double top = v.maxCoeff();
    if (!(top > 0.0)) throw NumericError("Bowen sum underflowed to zero mass");
    v /= top;
    log_norm += std::log(top);
    const double log_mass = log_norm + std::log(v.sum());
    report.trace.emplace_back(t, log_mass / t);
  }
  report.value = report.trace.back().second;
  report.tolerance =
      report.trace.size() > 1
          ? std::abs(report.trace.back().second -
                     report.trace[report.trace.size() - 2].second)
          : std::numeric_limits<double>::infinity();
  return report;
}

EquilibriumState ComputeEquilibriumState(const TransitionGraph& graph,
                                         const EdgePotential& f,
                                         const PowerIterationOptions& options) {
  RequireIrreducible(graph);
  const int n = graph.size();
  double log_scale = 0.0;
  const Eigen::MatrixXd l = WeightedTransferMatrix(graph, f, &log_scale);
  const PerronData perron = PerronRoot(l, true, options);
  const Eigen::VectorXd& r = perron.right;
  const Eigen::VectorXd lr = l * r;

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : graph.edges()) {
    p(e.from, e.to) = l(e.from, e.to) * r(e.to) / lr(e.from);
  }
  Eigen::VectorXd pi = perron.left.cwiseProduct(r);
  pi /= pi.sum();
  const double drift = (p.transpose() * pi - pi).lpNorm<Eigen::Infinity>();
  if (!(drift <= kStochasticTolerance)) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    pi = StationaryDistribution(p, all);
  }
  return {MarkovMeasure(graph, std::move(p), std::move(pi)),
          perron.log_radius + log_scale, perron.left, perron.right};
}

nlohmann::json ToJson(const PressureReport& report) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& [t, estimate] : report.trace) {
    trace.push_back({t, RoundSignificant(estimate)});
  }
  nlohmann::json out = {{"method", MethodName(report.method)},
                        {"value", RoundSignificant(report.value)},
                        {"tolerance", RoundSignificant(report.tolerance)},
                        {"trace", std::move(trace)}};
  if (!report.convention.empty()) out["convention"] = report.convention;
  return out;
}

std::string TraceCsv(const PressureReport& report) {
  std::ostringstream out;
  out << "T,estimate\n";
  for (const auto& [t, estimate] : report.trace) {
    out << t << ',' << FormatNumber(estimate) << '\n';
  }
  return out.str();
}

}  // namespace thermo
