#ifndef THERMO_SFT_HPP
#define THERMO_SFT_HPP

// Subshifts of finite type: transition graphs, edge potentials, cyclic
// words, Markov measures, and the elementary ergodic quantities on them.

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace thermo {

struct Edge {
  int from = 0;
  int to = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Sorted, duplicate-free list of edges.
using EdgeSet = std::vector<Edge>;

EdgeSet MakeEdgeSet(std::vector<Edge> edges);

/// Strongly connected components of the digraph on `n` vertices restricted to
/// `edges`. Components are returned in a deterministic order (by smallest
/// vertex), each sorted ascending.
std::vector<std::vector<int>> StronglyConnectedComponents(
    int n, std::span<const Edge> edges);

/// True if the component (as returned above) carries at least one cycle.
bool ComponentHasCycle(std::span<const int> component,
                       std::span<const Edge> edges);

/// 0-1 transition structure of a subshift of finite type. Every state has at
/// least one incoming and one outgoing edge.
class TransitionGraph {
 public:
  static TransitionGraph FromAdjacency(
      const std::vector<std::vector<bool>>& allowed);
  static TransitionGraph FromEdges(int n_states, std::span<const Edge> edges);

  int size() const { return n_; }
  bool allowed(int from, int to) const;
  bool irreducible() const { return irreducible_; }

  /// Edges in row-major order; the position of an edge in this list is its
  /// edge index.
  const std::vector<Edge>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  /// -1 when the edge is forbidden.
  int edge_index(int from, int to) const;
  std::span<const int> successors(int state) const;

  Eigen::MatrixXd adjacency_matrix() const;

 private:
  TransitionGraph() = default;
  void Finalize();

  int n_ = 0;
  std::vector<int> index_;  // n*n, -1 for forbidden
  std::vector<Edge> edges_;
  std::vector<int> succ_offsets_;
  std::vector<int> succ_;
  bool irreducible_ = false;
};

/// Real weight per allowed edge, in nats per step.
class EdgePotential {
 public:
  EdgePotential(const TransitionGraph& graph, std::vector<double> per_edge);

  static EdgePotential Constant(const TransitionGraph& graph, double c);
  static EdgePotential FromFunction(const TransitionGraph& graph,
                                    const std::function<double(int, int)>& f);

  int size() const { return n_; }
  /// Throws InputError on a forbidden edge.
  double operator()(int from, int to) const;
  /// Weights indexed like TransitionGraph::edges().
  const std::vector<double>& values() const { return values_; }
  double max() const;
  double min() const;

  EdgePotential operator+(const EdgePotential& other) const;
  EdgePotential operator+(double c) const;
  EdgePotential operator*(double c) const;
  EdgePotential operator-() const { return *this * -1.0; }
  EdgePotential operator-(const EdgePotential& other) const {
    return *this + (-other);
  }

 private:
  int n_ = 0;
  std::vector<int> index_;
  std::vector<double> values_;
};

inline EdgePotential operator*(double c, const EdgePotential& f) {
  return f * c;
}

/// Cyclically admissible word: allowed[w_k][w_{k+1 mod T}] for all k.
class CyclicWord {
 public:
  CyclicWord(const TransitionGraph& graph, std::vector<int> states);

  int length() const { return static_cast<int>(states_.size()); }
  const std::vector<int>& states() const { return states_; }
  /// The T edges w_k -> w_{k+1 mod T}, in order.
  std::vector<Edge> edges() const;

  bool operator==(const CyclicWord&) const = default;

 private:
  std::vector<int> states_;
};

/// Shift-invariant Markov measure: row-stochastic P on allowed edges and a
/// stationary probability vector p. Rows of states with p_i = 0 may be zero.
class MarkovMeasure {
 public:
  MarkovMeasure(const TransitionGraph& graph, Eigen::MatrixXd transitions,
                Eigen::VectorXd stationary);

  /// Builds P by normalizing nonnegative edge weights row by row and solves
  /// for the stationary vector. Rows with zero weight become zero rows, and
  /// the chain restricted to positive rows must have a unique stationary law.
  static MarkovMeasure FromWeights(const TransitionGraph& graph,
                                   const Eigen::MatrixXd& weights);

  const Eigen::MatrixXd& transitions() const { return transitions_; }
  const Eigen::VectorXd& stationary() const { return stationary_; }

 private:
  Eigen::MatrixXd transitions_;
  Eigen::VectorXd stationary_;
};

/// Stationary law of a row-stochastic matrix supported on `active` states
/// (states outside get mass 0). Solves the linear system directly.
Eigen::VectorXd StationaryDistribution(const Eigen::MatrixXd& transitions,
                                       std::span<const int> active);

inline constexpr std::int64_t kDefaultEnumerationCap = 10'000'000;

/// All cyclically admissible words of length exactly `period`, one per
/// starting index; the count equals trace(A^period). Throws InputError when
/// n_states^period exceeds `cap`.
std::vector<CyclicWord> EnumerateCycles(
    const TransitionGraph& graph, int period,
    std::int64_t cap = kDefaultEnumerationCap);

/// True if n^period <= cap, i.e. EnumerateCycles would accept the request.
bool EnumerationFits(int n_states, int period, std::int64_t cap);

double BirkhoffSum(const EdgePotential& f, const CyclicWord& word);

/// Kolmogorov-Sinai entropy -sum_i p_i sum_j P_ij log P_ij (0 log 0 = 0).
double KsEntropy(const MarkovMeasure& mu);

/// sum_ij p_i P_ij f_ij.
double Integrate(const EdgePotential& f, const MarkovMeasure& mu);

}  // namespace thermo

#endif  // THERMO_SFT_HPP
