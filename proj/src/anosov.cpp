#include "thermo/anosov.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "thermo/ergopt.hpp"
#include "thermo/error.hpp"
#include "thermo/format.hpp"
#include "thermo/pressure.hpp"
#include "thermo/thermo_limit.hpp"

namespace thermo {

namespace {

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;
// Lattice translates searched when locating points and rectangle images.
constexpr int kLatticeReach = 8;

// Eigen-coordinates of the lattice vector n1*e1 + n2*e2.
GoldenInt LatticeS(int n1, int n2) { return GoldenInt(-n1) + GoldenInt(0, n2); }
GoldenInt LatticeU(int n1, int n2) { return GoldenInt(n2) + GoldenInt(0, n1); }

bool OverlapsWithArea(const EigenRect& a, const EigenRect& b) {
  return std::max(a.s0, b.s0) < std::min(a.s1, b.s1) &&
         std::max(a.u0, b.u0) < std::min(a.u1, b.u1);
}

}  // namespace

// ---------------------------------------------------------------------------
// GoldenInt

double GoldenInt::value() const {
  return static_cast<double>(a_) + static_cast<double>(b_) * kGolden;
}

int GoldenInt::sign() const {
  // a + b phi = ((2a + b) + b sqrt5) / 2
  const std::int64_t x = 2 * a_ + b_;
  const std::int64_t y = b_;
  if (x >= 0 && y >= 0) return (x == 0 && y == 0) ? 0 : 1;
  if (x <= 0 && y <= 0) return -1;
  const std::int64_t x2 = x * x;
  const std::int64_t y2 = 5 * y * y;
  if (x > 0) return x2 > y2 ? 1 : -1;  // y < 0; x^2 = 5y^2 impossible
  return y2 > x2 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// ToralMap

int ToralMap::determinant() const {
  return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
}

int ToralMap::trace() const { return matrix[0][0] + matrix[1][1]; }

std::array<double, 2> ToralMap::Apply(std::array<double, 2> p) const {
  auto wrap = [](double v) {
    v -= std::floor(v);
    return v >= 1.0 ? 0.0 : v;
  };
  return {wrap(matrix[0][0] * p[0] + matrix[0][1] * p[1]),
          wrap(matrix[1][0] * p[0] + matrix[1][1] * p[1])};
}

ToralMap MakeToralMap(const std::array<std::array<int, 2>, 2>& matrix) {
  ToralMap map;
  map.matrix = matrix;
  const int det = map.determinant();
  const int tr = map.trace();
  if (det != 1 && det != -1) throw InputError("toral map must have determinant +-1");
  if (std::abs(tr) <= 2) throw InputError("toral map is not hyperbolic (|trace| <= 2)");
  const double disc = std::sqrt(static_cast<double>(tr) * tr - 4.0 * det);
  map.lyapunov = std::log((std::abs(tr) + disc) / 2.0);
  return map;
}

// ---------------------------------------------------------------------------
// Markov coding

std::vector<std::vector<int>> RectangleTransitionCounts(
    const std::vector<EigenRect>& rectangles) {
  const GoldenInt contract(2, -1);  // phi^-2
  const GoldenInt expand(1, 1);     // phi^2
  const int m = static_cast<int>(rectangles.size());
  std::vector<std::vector<int>> counts(m, std::vector<int>(m, 0));
  for (int i = 0; i < m; ++i) {
    const EigenRect& r = rectangles[i];
    const EigenRect image{r.s0 * contract, r.s1 * contract, r.u0 * expand,
                          r.u1 * expand};
    for (int j = 0; j < m; ++j) {
      for (int n1 = -kLatticeReach; n1 <= kLatticeReach; ++n1) {
        for (int n2 = -kLatticeReach; n2 <= kLatticeReach; ++n2) {
          const GoldenInt ds = LatticeS(n1, n2);
          const GoldenInt du = LatticeU(n1, n2);
          const EigenRect& t = rectangles[j];
          const EigenRect moved{t.s0 + ds, t.s1 + ds, t.u0 + du, t.u1 + du};
          if (OverlapsWithArea(image, moved)) ++counts[i][j];
        }
      }
    }
  }
  return counts;
}

int MarkovCoding::CellOf(std::array<double, 2> point) const {
  const double s = -point[0] + kGolden * point[1];
  const double u = kGolden * point[0] + point[1];
  for (int n1 = -kLatticeReach; n1 <= kLatticeReach; ++n1) {
    for (int n2 = -kLatticeReach; n2 <= kLatticeReach; ++n2) {
      const double ps = s - LatticeS(n1, n2).value();
      const double pu = u - LatticeU(n1, n2).value();
      for (int k = 0; k < static_cast<int>(rectangles_.size()); ++k) {
        const EigenRect& r = rectangles_[k];
        if (r.s0.value() <= ps && ps < r.s1.value() && r.u0.value() <= pu &&
            pu < r.u1.value()) {
          return k;
        }
      }
    }
  }
  return -1;
}

int MarkovCoding::ContainmentCount(std::array<double, 2> point) const {
  const double s = -point[0] + kGolden * point[1];
  const double u = kGolden * point[0] + point[1];
  int count = 0;
  for (int n1 = -kLatticeReach; n1 <= kLatticeReach; ++n1) {
    for (int n2 = -kLatticeReach; n2 <= kLatticeReach; ++n2) {
      const double ps = s - LatticeS(n1, n2).value();
      const double pu = u - LatticeU(n1, n2).value();
      for (const EigenRect& r : rectangles_) {
        if (r.s0.value() <= ps && ps < r.s1.value() && r.u0.value() <= pu &&
            pu < r.u1.value()) {
          ++count;
        }
      }
    }
  }
  return count;
}

CatMapModel BuildCatMap() {
  const GoldenInt zero(0), one(1), phi = GoldenInt::Phi();
  std::vector<EigenRect> rects = {
      {zero, phi, zero, phi - one},    // lower part of the large square
      {zero, phi, phi - one, phi},     // upper part of the large square
      {phi, phi + one, zero, one},     // small square
  };
  const auto counts = RectangleTransitionCounts(rects);
  std::vector<Edge> edges;
  for (int i = 0; i < static_cast<int>(counts.size()); ++i) {
    for (int j = 0; j < static_cast<int>(counts.size()); ++j) {
      if (counts[i][j] > 1) {
        throw InvariantError("rectangle image meets a rectangle twice");
      }
      if (counts[i][j] == 1) edges.push_back({i, j});
    }
  }
  const int n = static_cast<int>(rects.size());
  return {MakeToralMap({{{2, 1}, {1, 1}}}),
          MarkovCoding(std::move(rects), TransitionGraph::FromEdges(n, edges))};
}

// ---------------------------------------------------------------------------
// Block recoding

int BlockCoding::StateOf(const std::vector<int>& word) const {
  auto it = std::lower_bound(words.begin(), words.end(), word);
  if (it == words.end() || *it != word) return -1;
  return static_cast<int>(it - words.begin());
}

BlockCoding BlockRecoding(const TransitionGraph& base, int level) {
  if (level < 0) throw InputError("refinement level must be >= 0");
  // Admissible words of length level + 1, lexicographic.
  std::vector<std::vector<int>> words;
  for (int s = 0; s < base.size(); ++s) words.push_back({s});
  for (int len = 1; len <= level; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : words) {
      for (int t : base.successors(w.back())) {
        next.push_back(w);
        next.back().push_back(t);
      }
    }
    words = std::move(next);
  }
  std::sort(words.begin(), words.end());
  auto state_of = [&words](const std::vector<int>& w) {
    return static_cast<int>(std::lower_bound(words.begin(), words.end(), w) -
                            words.begin());
  };

  std::vector<Edge> edges;
  for (int i = 0; i < static_cast<int>(words.size()); ++i) {
    const auto& w = words[i];
    for (int t : base.successors(w.back())) {
      std::vector<int> target(w.begin() + 1, w.end());
      target.push_back(t);
      edges.push_back({i, state_of(target)});
    }
  }
  TransitionGraph graph =
      TransitionGraph::FromEdges(static_cast<int>(words.size()), edges);
  return {level, std::move(graph), std::move(words)};
}

int RefinementForEpsilon(double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  int k = 0;
  while (std::ldexp(1.0, -k) > epsilon) ++k;
  return k;
}

// ---------------------------------------------------------------------------
// Potentials and damping

EdgePotential UnstableJacobianLog(const ToralMap& map,
                                  const TransitionGraph& graph) {
  const double log_ju = -map.lyapunov;
  if (!(log_ju < 0.0)) throw InvariantError("log J^u must be negative");
  return EdgePotential::Constant(graph, log_ju);
}

EdgePotential HalfUnstableJacobianLog(const ToralMap& map,
                                      const TransitionGraph& graph) {
  return UnstableJacobianLog(map, graph) * 0.5;
}

CyclicWord LiftOrbit(const BlockCoding& coding, const CyclicWord& orbit) {
  const auto& s = orbit.states();
  const int p = orbit.length();
  std::vector<int> lifted;
  for (int r = 0; r < p; ++r) {
    std::vector<int> w;
    for (int i = 0; i <= coding.level; ++i) w.push_back(s[(r + i) % p]);
    const int state = coding.StateOf(w);
    if (state < 0) throw InputError("orbit is not admissible in the coding");
    lifted.push_back(state);
  }
  return CyclicWord(coding.graph, std::move(lifted));
}

DampedCoding DampingFromOrbit(const TransitionGraph& base,
                              const CyclicWord& orbit, double epsilon,
                              double strength) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (epsilon > 1.0) {
    throw InputError("epsilon exceeds the symbolic diameter of the torus (1)");
  }
  if (strength < 0.0) throw InputError("damping strength must be nonnegative");
  const int level = RefinementForEpsilon(epsilon);
  BlockCoding coding = BlockRecoding(base, level);
  // Validates admissibility of the orbit in the base graph.
  CyclicWord checked(base, orbit.states());
  const auto& s = checked.states();
  const int p = checked.length();

  auto follows_orbit = [&](const std::vector<int>& word) {
    for (int r = 0; r < p; ++r) {
      bool match = true;
      for (int i = 0; i < level && match; ++i) match = word[i] == s[(r + i) % p];
      if (match) return true;
    }
    return false;
  };
  std::vector<double> values;
  for (const Edge& e : coding.graph.edges()) {
    std::vector<int> word = coding.words[e.from];
    word.push_back(coding.words[e.to].back());
    values.push_back(follows_orbit(word) ? 0.0 : strength);
  }
  EdgePotential damping(coding.graph, std::move(values));
  return {std::move(coding), std::move(damping), std::ldexp(1.0, -level)};
}

double OrbitPressureBound(const ToralMap& map, const TransitionGraph& graph,
                          const CyclicWord& orbit) {
  const EdgeSet edges = MakeEdgeSet(orbit.edges());
  const double value =
      PressureOnSet(graph, HalfUnstableJacobianLog(map, graph), edges);
  // Zero entropy on a periodic orbit: the pressure is the orbit average
  // of (1/2) log J^u, which is -lyapunov/2 for a linear map.
  if (!(value < 0.0) || value > -0.5 * map.lyapunov + 1e-12) {
    throw InvariantError("orbit pressure " + FormatNumber(value) +
                         " is not <= -lyapunov/2");
  }
  return value;
}

// ---------------------------------------------------------------------------
// Pipeline

Theorem1Report RunTheorem1Pipeline(double epsilon, double beta_max,
                                   double strength) {
  if (beta_max < 0.0) throw InputError("beta_max must be nonnegative");
  const CatMapModel model = BuildCatMap();
  const TransitionGraph& base = model.coding.graph();
  const int fixed_cell = model.coding.CellOf({0.0, 0.0});
  const CyclicWord orbit(base, {fixed_cell});

  Theorem1Report report;
  report.epsilon = epsilon;
  report.lyapunov = model.map.lyapunov;

  const DampedCoding damped = DampingFromOrbit(base, orbit, epsilon, strength);
  const TransitionGraph& graph = damped.coding.graph;
  report.refinement = damped.coding.level;
  report.symbolic_radius = damped.symbolic_radius;
  report.entropy = PressureTransfer(graph, EdgePotential::Constant(graph, 0.0)).value;

  const CyclicWord lifted = LiftOrbit(damped.coding, orbit);
  const EdgeSet orbit_edges = MakeEdgeSet(lifted.edges());
  report.k_edges = UndampedSet(graph, damped.damping);
  report.k_is_orbit = report.k_edges == orbit_edges;
  report.epsilon_regime = report.k_is_orbit ? "below-eps0" : "above-eps0";

  const EdgePotential half_ju = HalfUnstableJacobianLog(model.map, graph);
  report.orbit_pressure = OrbitPressureBound(model.map, graph, lifted);
  report.pressure_on_k = PressureOnSet(graph, half_ju, report.k_edges);
  report.pressure_at_beta0 = PressureTransfer(graph, half_ju).value;

  if (!(report.pressure_on_k < 0.0)) {
    report.message = "epsilon above eps0: K is larger than the orbit and "
                     "Pr_K((1/2) log J^u) >= 0";
    return report;
  }
  report.beta_star = FindGapBeta(graph, damped.damping, half_ju, beta_max);
  if (report.beta_star) {
    report.final_pressure =
        PressureTransfer(graph, half_ju - damped.damping * *report.beta_star).value;
    report.message = report.k_is_orbit
                         ? "K is the orbit; Pr(-beta a + (1/2) log J^u) < 0 "
                           "from beta_star on"
                         : "epsilon above eps0, but Pr_K((1/2) log J^u) < 0";
  } else {
    report.message = "no beta <= beta_max makes Pr(-beta a + (1/2) log J^u) "
                     "negative";
  }
  return report;
}

nlohmann::json ToJson(const Theorem1Report& report) {
  nlohmann::json k_edges = nlohmann::json::array();
  for (const Edge& e : report.k_edges) k_edges.push_back({e.from, e.to});
  auto optional = [](const std::optional<double>& v) {
    return v ? nlohmann::json(RoundSignificant(*v)) : nlohmann::json(nullptr);
  };
  return {{"lyapunov", RoundSignificant(report.lyapunov)},
          {"entropy", RoundSignificant(report.entropy)},
          {"K_edges", std::move(k_edges)},
          {"K_is_orbit", report.k_is_orbit},
          {"pressure_on_K", RoundSignificant(report.pressure_on_k)},
          {"orbit_pressure", RoundSignificant(report.orbit_pressure)},
          {"pressure_at_beta0", RoundSignificant(report.pressure_at_beta0)},
          {"beta_star", optional(report.beta_star)},
          {"final_pressure", optional(report.final_pressure)},
          {"epsilon", RoundSignificant(report.epsilon)},
          {"refinement", report.refinement},
          {"symbolic_radius", RoundSignificant(report.symbolic_radius)},
          {"epsilon_regime", report.epsilon_regime},
          {"message", report.message}};
}

}  // namespace thermo
