#ifndef THERMO_ANOSOV_HPP
#define THERMO_ANOSOV_HPP

// Hyperbolic toral automorphism [[2,1],[1,1]] with its Markov coding, the
// unstable-Jacobian potential, dampings vanishing near a periodic orbit, and
// the end-to-end strong-damping pipeline on that model.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thermo/sft.hpp"

namespace thermo {

/// Exact element a + b*phi of Z[phi], phi the golden ratio (phi^2 = phi + 1).
class GoldenInt {
 public:
  constexpr GoldenInt() = default;
  constexpr GoldenInt(std::int64_t a, std::int64_t b = 0) : a_(a), b_(b) {}

  static constexpr GoldenInt Phi() { return {0, 1}; }

  std::int64_t rational_part() const { return a_; }
  std::int64_t phi_part() const { return b_; }
  double value() const;
  /// -1, 0 or +1, computed without rounding.
  int sign() const;

  GoldenInt operator+(const GoldenInt& o) const { return {a_ + o.a_, b_ + o.b_}; }
  GoldenInt operator-(const GoldenInt& o) const { return {a_ - o.a_, b_ - o.b_}; }
  GoldenInt operator-() const { return {-a_, -b_}; }
  GoldenInt operator*(const GoldenInt& o) const {
    return {a_ * o.a_ + b_ * o.b_, a_ * o.b_ + b_ * o.a_ + b_ * o.b_};
  }
  bool operator==(const GoldenInt&) const = default;
  std::strong_ordering operator<=>(const GoldenInt& o) const {
    const int s = (*this - o).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

 private:
  std::int64_t a_ = 0;
  std::int64_t b_ = 0;
};

/// Axis-aligned rectangle in unnormalized eigen-coordinates
/// s = x.(-1, phi) (stable), u = x.(phi, 1) (unstable).
struct EigenRect {
  GoldenInt s0, s1, u0, u1;
};

struct ToralMap {
  std::array<std::array<int, 2>, 2> matrix{};
  /// log of the larger eigenvalue modulus.
  double lyapunov = 0.0;

  int determinant() const;
  int trace() const;
  /// Applies the map on R^2 / Z^2.
  std::array<double, 2> Apply(std::array<double, 2> point) const;
};

/// Validates det = +-1 and |trace| > 2 and fills in the Lyapunov exponent.
ToralMap MakeToralMap(const std::array<std::array<int, 2>, 2>& matrix);

class MarkovCoding {
 public:
  MarkovCoding(std::vector<EigenRect> rectangles, TransitionGraph graph)
      : rectangles_(std::move(rectangles)), graph_(std::move(graph)) {}

  const std::vector<EigenRect>& rectangles() const { return rectangles_; }
  const TransitionGraph& graph() const { return graph_; }
  /// Index of the half-open rectangle containing the torus point, or -1.
  int CellOf(std::array<double, 2> point) const;
  /// Number of half-open rectangles (over all lattice translates) containing
  /// the point; 1 away from measure-zero accidents.
  int ContainmentCount(std::array<double, 2> point) const;

 private:
  std::vector<EigenRect> rectangles_;
  TransitionGraph graph_;
};

struct CatMapModel {
  ToralMap map;
  MarkovCoding coding;
};

/// [[2,1],[1,1]] with the three-rectangle partition obtained from the
/// two-square tiling of the torus (squares of side phi and 1 in eigen
/// coordinates), the large square cut at u = phi - 1. Transitions are
/// computed exactly in Z[phi]; construction fails if any image meets a
/// rectangle in more than one piece.
CatMapModel BuildCatMap();

/// Transitions between rectangles computed from exact geometry: entry (i, j)
/// counts the connected pieces of F(R_i) meeting the interior of R_j.
std::vector<std::vector<int>> RectangleTransitionCounts(
    const std::vector<EigenRect>& rectangles);

/// k-block recoding: states are admissible words of length k+1, ordered
/// lexicographically; level 0 is the base graph itself.
struct BlockCoding {
  int level = 0;
  TransitionGraph graph;
  std::vector<std::vector<int>> words;

  int StateOf(const std::vector<int>& word) const;
};

BlockCoding BlockRecoding(const TransitionGraph& base, int level);

/// Smallest k with 2^-k <= epsilon (0 for epsilon >= 1).
int RefinementForEpsilon(double epsilon);

/// log J^u on every edge: the time-1 Jacobian of the inverse map along the
/// unstable direction, -lyapunov for a linear map.
EdgePotential UnstableJacobianLog(const ToralMap& map,
                                  const TransitionGraph& graph);
/// (1/2) log J^u.
EdgePotential HalfUnstableJacobianLog(const ToralMap& map,
                                      const TransitionGraph& graph);

struct DampedCoding {
  BlockCoding coding;
  EdgePotential damping;
  /// Symbolic radius 2^-level actually used for the neighbourhood.
  double symbolic_radius = 1.0;
};

/// a = 0 on the refined edges whose first `level` symbols follow the orbit
/// (the cylinders meeting the epsilon-neighbourhood of the orbit in the
/// symbolic metric d = 2^-(first disagreement)), a = strength elsewhere.
/// `orbit` is a cycle of the base graph. Throws InputError for epsilon <= 0
/// or epsilon > 1 (the symbolic diameter).
DampedCoding DampingFromOrbit(const TransitionGraph& base,
                              const CyclicWord& orbit, double epsilon,
                              double strength);

/// The orbit lifted to the k-block graph.
CyclicWord LiftOrbit(const BlockCoding& coding, const CyclicWord& orbit);

/// Pr_gamma((1/2) log J^u) = -lyapunov / 2 for a periodic orbit; throws
/// InvariantError if the computed value is not below zero.
double OrbitPressureBound(const ToralMap& map, const TransitionGraph& graph,
                          const CyclicWord& orbit);

struct Theorem1Report {
  double epsilon = 0.0;
  int refinement = 0;
  double symbolic_radius = 1.0;
  double lyapunov = 0.0;
  double entropy = 0.0;
  EdgeSet k_edges;
  bool k_is_orbit = false;
  /// "below-eps0" when K is the orbit loop, "above-eps0" otherwise.
  std::string epsilon_regime;
  double pressure_on_k = 0.0;
  double orbit_pressure = 0.0;
  double pressure_at_beta0 = 0.0;
  std::optional<double> beta_star;
  std::optional<double> final_pressure;
  std::string message;
};

/// Cat map, fixed-point orbit, damping at the given epsilon, then K, the
/// orbit pressure bound and the gap-condition search up to beta_max.
Theorem1Report RunTheorem1Pipeline(double epsilon, double beta_max,
                                   double strength = 1.0);

nlohmann::json ToJson(const Theorem1Report& report);

}  // namespace thermo

#endif  // THERMO_ANOSOV_HPP
