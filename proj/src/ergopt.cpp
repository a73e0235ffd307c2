#include "thermo/ergopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "thermo/error.hpp"
#include "thermo/format.hpp"
#include "thermo/pressure.hpp"

namespace thermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Simple cycles obtained by cutting a walk at repeated vertices.
std::vector<std::vector<int>> CyclesOnWalk(const std::vector<int>& walk) {
  std::vector<std::vector<int>> cycles;
  std::vector<int> stack;
  for (int v : walk) {
    auto it = std::find(stack.begin(), stack.end(), v);
    if (it != stack.end()) {
      cycles.emplace_back(it, stack.end());
      stack.erase(it + 1, stack.end());
    } else {
      stack.push_back(v);
    }
  }
  return cycles;
}

double CycleMean(const EdgePotential& a, const std::vector<int>& cycle) {
  std::vector<double> w;
  const std::size_t t = cycle.size();
  for (std::size_t k = 0; k < t; ++k) w.push_back(a(cycle[k], cycle[(k + 1) % t]));
  return CanonicalMean(std::move(w));
}

// Shortest-path distances for weights a - a0 (no negative cycles).
std::vector<double> ReducedDistances(const TransitionGraph& graph,
                                     const EdgePotential& a, double a0) {
  const int n = graph.size();
  std::vector<double> d(static_cast<std::size_t>(n) * n, kInf);
  for (int i = 0; i < n; ++i) d[i * n + i] = 0.0;
  for (const Edge& e : graph.edges()) {
    d[e.from * n + e.to] = std::min(d[e.from * n + e.to], a(e.from, e.to) - a0);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const double dik = d[i * n + k];
      if (dik == kInf) continue;
      for (int j = 0; j < n; ++j) {
        const double via = dik + d[k * n + j];
        if (via < d[i * n + j]) d[i * n + j] = via;
      }
    }
  }
  return d;
}

EdgeSet CriticalEdges(const TransitionGraph& graph, const EdgePotential& a,
                      double a0) {
  const int n = graph.size();
  const std::vector<double> d = ReducedDistances(graph, a, a0);
  EdgeSet out;
  for (const Edge& e : graph.edges()) {
    const double back = d[e.to * n + e.from];
    if (back == kInf) continue;
    if (a(e.from, e.to) - a0 + back <= kZeroCycleTolerance) out.push_back(e);
  }
  return out;  // row-major order is already sorted
}

}  // namespace

double CanonicalMean(std::vector<double> values) {
  if (values.empty()) throw InputError("mean of an empty cycle");
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

MinMeanCycle MinimumMeanCycle(const TransitionGraph& graph,
                              const EdgePotential& a) {
  const int n = graph.size();
  if (graph.num_edges() == 0) throw InputError("graph has no cycle");
  // dist[k][v]: lightest walk with exactly k edges ending at v, from anywhere.
  std::vector<std::vector<double>> dist(n + 1, std::vector<double>(n, kInf));
  std::vector<std::vector<int>> pred(n + 1, std::vector<int>(n, -1));
  std::fill(dist[0].begin(), dist[0].end(), 0.0);
  for (int k = 1; k <= n; ++k) {
    for (const Edge& e : graph.edges()) {
      if (dist[k - 1][e.from] == kInf) continue;
      const double cand = dist[k - 1][e.from] + a(e.from, e.to);
      if (cand < dist[k][e.to]) {
        dist[k][e.to] = cand;
        pred[k][e.to] = e.from;
      }
    }
  }
  double best = kInf;
  int best_v = -1;
  for (int v = 0; v < n; ++v) {
    if (dist[n][v] == kInf) continue;
    double worst = -kInf;
    for (int k = 0; k < n; ++k) {
      if (dist[k][v] == kInf) continue;
      worst = std::max(worst, (dist[n][v] - dist[k][v]) / (n - k));
    }
    if (worst < best) {
      best = worst;
      best_v = v;
    }
  }
  if (best_v < 0) throw InputError("graph has no cycle");

  std::vector<int> walk(n + 1);
  walk[n] = best_v;
  for (int k = n; k > 0; --k) walk[k - 1] = pred[k][walk[k]];

  std::vector<int> witness;
  double witness_mean = kInf;
  for (auto& cycle : CyclesOnWalk(walk)) {
    const double m = CycleMean(a, cycle);
    if (m < witness_mean) {
      witness_mean = m;
      witness = std::move(cycle);
    }
  }
  if (witness.empty() || witness_mean - best > kZeroCycleTolerance) {
    // Follow critical edges until a state repeats.
    const EdgeSet critical = CriticalEdges(graph, a, best);
    if (critical.empty()) throw NumericError("no cycle attains the Karp mean");
    std::vector<int> next(n, -1);
    for (const Edge& e : critical) {
      if (next[e.from] < 0) next[e.from] = e.to;
    }
    std::vector<int> path{critical.front().from};
    while (true) {
      const int v = next[path.back()];
      auto it = std::find(path.begin(), path.end(), v);
      if (it != path.end()) {
        witness.assign(it, path.end());
        break;
      }
      path.push_back(v);
    }
    witness_mean = CycleMean(a, witness);
  }
  // Rotate so the smallest state comes first.
  std::rotate(witness.begin(), std::min_element(witness.begin(), witness.end()),
              witness.end());
  return {witness_mean, CyclicWord(graph, std::move(witness))};
}

double MinAverage(const TransitionGraph& graph, const EdgePotential& a) {
  return MinimumMeanCycle(graph, a).mean;
}

EdgeSet UndampedSet(const TransitionGraph& graph, const EdgePotential& a) {
  return CriticalEdges(graph, a, MinAverage(graph, a));
}

EdgeSet NoncontrolledSet(const TransitionGraph& graph, const EdgePotential& a) {
  if (a.min() < 0.0) {
    throw InputError("non-controlled set needs a nonnegative damping");
  }
  const double a0 = MinAverage(graph, a);
  if (std::abs(a0) > kZeroCycleTolerance) {
    throw InputError("non-controlled set needs a0 = 0 (got " +
                     FormatNumber(a0) + ")");
  }
  const int n = graph.size();
  std::vector<Edge> zero;
  for (const Edge& e : graph.edges()) {
    if (a(e.from, e.to) <= kZeroCycleTolerance) zero.push_back(e);
  }
  std::vector<char> cyclic(n, 0);
  for (const auto& comp : StronglyConnectedComponents(n, zero)) {
    if (!ComponentHasCycle(comp, zero)) continue;
    for (int v : comp) cyclic[v] = 1;
  }
  // forward: reachable from a zero cycle; backward: reaches a zero cycle.
  auto reach = [&](bool forward) {
    std::vector<char> seen = cyclic;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Edge& e : zero) {
        const int src = forward ? e.from : e.to;
        const int dst = forward ? e.to : e.from;
        if (seen[src] && !seen[dst]) {
          seen[dst] = 1;
          changed = true;
        }
      }
    }
    return seen;
  };
  const auto from_cycle = reach(true);
  const auto to_cycle = reach(false);
  EdgeSet out;
  for (const Edge& e : zero) {
    if (from_cycle[e.from] && to_cycle[e.to]) out.push_back(e);
  }
  return out;
}

double PressureOnSet(const TransitionGraph& graph, const EdgePotential& f,
                     const EdgeSet& edges) {
  for (const Edge& e : edges) {
    if (!graph.allowed(e.from, e.to)) {
      throw InputError("edge set contains forbidden edge " +
                       std::to_string(e.from) + "->" + std::to_string(e.to));
    }
  }
  const int n = graph.size();
  double best = -kInf;
  bool any = false;
  for (const auto& comp : StronglyConnectedComponents(n, edges)) {
    if (!ComponentHasCycle(comp, edges)) continue;
    any = true;
    const int m = static_cast<int>(comp.size());
    std::vector<int> local(n, -1);
    for (int k = 0; k < m; ++k) local[comp[k]] = k;
    double top = -kInf;
    for (const Edge& e : edges) {
      if (local[e.from] >= 0 && local[e.to] >= 0) top = std::max(top, f(e.from, e.to));
    }
    Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(m, m);
    for (const Edge& e : edges) {
      if (local[e.from] >= 0 && local[e.to] >= 0) {
        sub(local[e.from], local[e.to]) = std::exp(f(e.from, e.to) - top);
      }
    }
    best = std::max(best, PerronRoot(sub, false).log_radius + top);
  }
  if (!any) throw InputError("no invariant measure lives on the edge set (no cycle)");
  return best;
}

MinimizationResult Minimize(const TransitionGraph& graph,
                            const EdgePotential& a) {
  MinMeanCycle mmc = MinimumMeanCycle(graph, a);
  MinimizationResult out{mmc.mean, std::move(mmc.cycle),
                         CriticalEdges(graph, a, mmc.mean), std::nullopt};
  if (a.min() >= 0.0 && std::abs(out.a0) <= kZeroCycleTolerance) {
    out.noncontrolled_edges = NoncontrolledSet(graph, a);
  }
  return out;
}

std::string FormatEdgeSet(const EdgeSet& edges) {
  std::ostringstream out;
  for (const Edge& e : edges) out << e.from << ' ' << e.to << '\n';
  return out.str();
}

namespace {

nlohmann::json EdgesJson(const EdgeSet& edges) {
  nlohmann::json out = nlohmann::json::array();
  for (const Edge& e : edges) out.push_back({e.from, e.to});
  return out;
}

}  // namespace

nlohmann::json ToJson(const MinimizationResult& result) {
  return {{"a0", RoundSignificant(result.a0)},
          {"witness_cycle", result.witness_cycle.states()},
          {"critical_edges", EdgesJson(result.critical_edges)},
          {"noncontrolled_edges", result.noncontrolled_edges
                                      ? EdgesJson(*result.noncontrolled_edges)
                                      : nlohmann::json(nullptr)}};
}

}  // namespace thermo
