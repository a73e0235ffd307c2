#include "thermo/sft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "thermo/error.hpp"

namespace thermo {

namespace {

constexpr double kRowSumTolerance = 1e-12;
constexpr double kStationaryTolerance = 1e-10;

struct Tarjan {
  const std::vector<std::vector<int>>& adj;
  std::vector<int> index, low;
  std::vector<bool> on_stack;
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int counter = 0;

  explicit Tarjan(const std::vector<std::vector<int>>& a)
      : adj(a), index(a.size(), -1), low(a.size(), 0), on_stack(a.size()) {}

  void Visit(int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        Visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      components.push_back(std::move(comp));
    }
  }
};

}  // namespace

EdgeSet MakeEdgeSet(std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

std::vector<std::vector<int>> StronglyConnectedComponents(
    int n, std::span<const Edge> edges) {
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : edges) adj[e.from].push_back(e.to);
  Tarjan tarjan(adj);
  for (int v = 0; v < n; ++v) {
    if (tarjan.index[v] < 0) tarjan.Visit(v);
  }
  auto comps = std::move(tarjan.components);
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

bool ComponentHasCycle(std::span<const int> component,
                       std::span<const Edge> edges) {
  if (component.size() > 1) return true;
  const int v = component.front();
  return std::any_of(edges.begin(), edges.end(),
                     [v](const Edge& e) { return e.from == v && e.to == v; });
}

// ---------------------------------------------------------------------------
// TransitionGraph

TransitionGraph TransitionGraph::FromAdjacency(
    const std::vector<std::vector<bool>>& allowed) {
  const int n = static_cast<int>(allowed.size());
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(allowed[i].size()) != n) {
      throw InputError("adjacency matrix is not square");
    }
    for (int j = 0; j < n; ++j) {
      if (allowed[i][j]) edges.push_back({i, j});
    }
  }
  return FromEdges(n, edges);
}

TransitionGraph TransitionGraph::FromEdges(int n_states,
                                           std::span<const Edge> edges) {
  if (n_states <= 0) throw InputError("graph needs at least one state");
  TransitionGraph g;
  g.n_ = n_states;
  g.index_.assign(static_cast<std::size_t>(n_states) * n_states, -1);
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= n_states || e.to < 0 || e.to >= n_states) {
      throw InputError("edge " + std::to_string(e.from) + "->" +
                       std::to_string(e.to) + " references a missing state");
    }
    g.index_[e.from * n_states + e.to] = 0;
  }
  g.Finalize();
  return g;
}

void TransitionGraph::Finalize() {
  edges_.clear();
  std::vector<int> in_degree(n_, 0), out_degree(n_, 0);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      int& slot = index_[i * n_ + j];
      if (slot < 0) continue;
      slot = static_cast<int>(edges_.size());
      edges_.push_back({i, j});
      ++out_degree[i];
      ++in_degree[j];
    }
  }
  for (int i = 0; i < n_; ++i) {
    if (out_degree[i] == 0 || in_degree[i] == 0) {
      throw InputError("state " + std::to_string(i) +
                       " is dead (needs an incoming and an outgoing edge)");
    }
  }
  succ_offsets_.assign(n_ + 1, 0);
  succ_.clear();
  for (const Edge& e : edges_) {
    succ_.push_back(e.to);
    ++succ_offsets_[e.from + 1];
  }
  std::partial_sum(succ_offsets_.begin(), succ_offsets_.end(),
                   succ_offsets_.begin());
  irreducible_ = StronglyConnectedComponents(n_, edges_).size() == 1;
}

bool TransitionGraph::allowed(int from, int to) const {
  return edge_index(from, to) >= 0;
}

int TransitionGraph::edge_index(int from, int to) const {
  if (from < 0 || from >= n_ || to < 0 || to >= n_) return -1;
  return index_[from * n_ + to];
}

std::span<const int> TransitionGraph::successors(int state) const {
  return {succ_.data() + succ_offsets_[state],
          succ_.data() + succ_offsets_[state + 1]};
}

Eigen::MatrixXd TransitionGraph::adjacency_matrix() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const Edge& e : edges_) a(e.from, e.to) = 1.0;
  return a;
}

// ---------------------------------------------------------------------------
// EdgePotential

EdgePotential::EdgePotential(const TransitionGraph& graph,
                             std::vector<double> per_edge)
    : n_(graph.size()), values_(std::move(per_edge)) {
  if (static_cast<int>(values_.size()) != graph.num_edges()) {
    throw InputError("potential has " + std::to_string(values_.size()) +
                     " values for " + std::to_string(graph.num_edges()) +
                     " edges");
  }
  index_.assign(static_cast<std::size_t>(n_) * n_, -1);
  for (int k = 0; k < graph.num_edges(); ++k) {
    const Edge& e = graph.edges()[k];
    index_[e.from * n_ + e.to] = k;
  }
}

EdgePotential EdgePotential::Constant(const TransitionGraph& graph, double c) {
  return {graph, std::vector<double>(graph.num_edges(), c)};
}

EdgePotential EdgePotential::FromFunction(
    const TransitionGraph& graph, const std::function<double(int, int)>& f) {
  std::vector<double> values;
  values.reserve(graph.num_edges());
  for (const Edge& e : graph.edges()) values.push_back(f(e.from, e.to));
  return {graph, std::move(values)};
}

double EdgePotential::operator()(int from, int to) const {
  const int k = (from >= 0 && from < n_ && to >= 0 && to < n_)
                    ? index_[from * n_ + to]
                    : -1;
  if (k < 0) {
    throw InputError("potential queried on forbidden edge " +
                     std::to_string(from) + "->" + std::to_string(to));
  }
  return values_[k];
}

double EdgePotential::max() const {
  return *std::max_element(values_.begin(), values_.end());
}

double EdgePotential::min() const {
  return *std::min_element(values_.begin(), values_.end());
}

EdgePotential EdgePotential::operator+(const EdgePotential& other) const {
  if (other.index_ != index_) {
    throw InputError("potentials live on different graphs");
  }
  EdgePotential out = *this;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    out.values_[k] += other.values_[k];
  }
  return out;
}

EdgePotential EdgePotential::operator+(double c) const {
  EdgePotential out = *this;
  for (double& v : out.values_) v += c;
  return out;
}

EdgePotential EdgePotential::operator*(double c) const {
  EdgePotential out = *this;
  for (double& v : out.values_) v *= c;
  return out;
}

// ---------------------------------------------------------------------------
// CyclicWord

CyclicWord::CyclicWord(const TransitionGraph& graph, std::vector<int> states)
    : states_(std::move(states)) {
  if (states_.empty()) throw InputError("cyclic word must be non-empty");
  const int t = length();
  for (int k = 0; k < t; ++k) {
    if (!graph.allowed(states_[k], states_[(k + 1) % t])) {
      throw InputError("cyclic word is not admissible at position " +
                       std::to_string(k));
    }
  }
}

std::vector<Edge> CyclicWord::edges() const {
  const int t = length();
  std::vector<Edge> out;
  out.reserve(t);
  for (int k = 0; k < t; ++k) out.push_back({states_[k], states_[(k + 1) % t]});
  return out;
}

// ---------------------------------------------------------------------------
// MarkovMeasure

MarkovMeasure::MarkovMeasure(const TransitionGraph& graph,
                             Eigen::MatrixXd transitions,
                             Eigen::VectorXd stationary)
    : transitions_(std::move(transitions)), stationary_(std::move(stationary)) {
  const int n = graph.size();
  if (transitions_.rows() != n || transitions_.cols() != n ||
      stationary_.size() != n) {
    throw InputError("Markov measure dimensions do not match the graph");
  }
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double pij = transitions_(i, j);
      if (pij < 0.0) throw InputError("negative transition probability");
      if (pij > 0.0 && !graph.allowed(i, j)) {
        throw InputError("transition probability on forbidden edge " +
                         std::to_string(i) + "->" + std::to_string(j));
      }
      row += pij;
    }
    if (stationary_(i) < 0.0) throw InputError("negative stationary mass");
    const bool degenerate_ok = stationary_(i) == 0.0 && row == 0.0;
    if (!degenerate_ok && std::abs(row - 1.0) > kRowSumTolerance) {
      throw InputError("row " + std::to_string(i) + " of P sums to " +
                       std::to_string(row));
    }
  }
  if (std::abs(stationary_.sum() - 1.0) > kRowSumTolerance) {
    throw InputError("stationary vector does not sum to 1");
  }
  const Eigen::VectorXd drift =
      transitions_.transpose() * stationary_ - stationary_;
  if (drift.lpNorm<Eigen::Infinity>() > kStationaryTolerance) {
    throw InputError("stationary vector is not invariant (||pP - p|| = " +
                     std::to_string(drift.lpNorm<Eigen::Infinity>()) + ")");
  }
}

MarkovMeasure MarkovMeasure::FromWeights(const TransitionGraph& graph,
                                         const Eigen::MatrixXd& weights) {
  const int n = graph.size();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j : graph.successors(i)) row += std::max(weights(i, j), 0.0);
    if (row <= 0.0) continue;
    active.push_back(i);
    for (int j : graph.successors(i)) p(i, j) = std::max(weights(i, j), 0.0) / row;
  }
  if (active.empty()) throw InputError("all transition weights are zero");
  Eigen::VectorXd pi = StationaryDistribution(p, active);
  return {graph, std::move(p), std::move(pi)};
}

Eigen::VectorXd StationaryDistribution(const Eigen::MatrixXd& transitions,
                                       std::span<const int> active) {
  const int n = static_cast<int>(transitions.rows());
  const int m = static_cast<int>(active.size());
  // Solve pi (P_AA - I) = 0 with sum(pi) = 1 as a least-squares system, which
  // also tolerates active states that are transient (they get mass ~0).
  Eigen::MatrixXd system(m + 1, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      system(b, a) = transitions(active[a], active[b]) - (a == b ? 1.0 : 0.0);
    }
    system(m, a) = 1.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
  rhs(m) = 1.0;
  Eigen::VectorXd sol = system.colPivHouseholderQr().solve(rhs);
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < m; ++a) pi(active[a]) = std::max(sol(a), 0.0);
  const double total = pi.sum();
  if (!(total > 0.0)) throw NumericError("stationary distribution is degenerate");
  pi /= total;
  return pi;
}

// ---------------------------------------------------------------------------
// Operations

bool EnumerationFits(int n_states, int period, std::int64_t cap) {
  double count = 1.0;
  for (int k = 0; k < period; ++k) {
    count *= n_states;
    if (count > static_cast<double>(cap)) return false;
  }
  return true;
}

std::vector<CyclicWord> EnumerateCycles(const TransitionGraph& graph,
                                        int period, std::int64_t cap) {
  if (period < 1) throw InputError("cycle length must be >= 1");
  if (!EnumerationFits(graph.size(), period, cap)) {
    throw InputError("enumeration too large: " + std::to_string(graph.size()) +
                     "^" + std::to_string(period) + " exceeds the cap of " +
                     std::to_string(cap));
  }
  std::vector<CyclicWord> out;
  std::vector<int> word(period);
  // Iterative depth-first extension over successor lists.
  std::vector<std::size_t> cursor(period, 0);
  for (int start = 0; start < graph.size(); ++start) {
    word[0] = start;
    int depth = 1;
    cursor[1 % period] = 0;
    if (period == 1) {
      if (graph.allowed(start, start)) out.emplace_back(graph, word);
      continue;
    }
    while (depth > 0) {
      if (depth == period) {
        if (graph.allowed(word[period - 1], start)) out.emplace_back(graph, word);
        --depth;
        continue;
      }
      const auto succ = graph.successors(word[depth - 1]);
      if (cursor[depth] < succ.size()) {
        word[depth] = succ[cursor[depth]++];
        ++depth;
        if (depth < period) cursor[depth] = 0;
      } else {
        --depth;
      }
    }
  }
  return out;
}

double BirkhoffSum(const EdgePotential& f, const CyclicWord& word) {
  const auto& s = word.states();
  const int t = word.length();
  double sum = 0.0;
  for (int k = 0; k < t; ++k) sum += f(s[k], s[(k + 1) % t]);
  return sum;
}

double KsEntropy(const MarkovMeasure& mu) {
  const auto& p = mu.transitions();
  const auto& pi = mu.stationary();
  double h = 0.0;
  for (int i = 0; i < p.rows(); ++i) {
    if (pi(i) == 0.0) continue;
    double row = 0.0;
    for (int j = 0; j < p.cols(); ++j) {
      const double pij = p(i, j);
      if (pij > 0.0) row -= pij * std::log(pij);
    }
    h += pi(i) * row;
  }
  return std::max(h, 0.0);
}

double Integrate(const EdgePotential& f, const MarkovMeasure& mu) {
  const auto& p = mu.transitions();
  const auto& pi = mu.stationary();
  double sum = 0.0;
  for (int i = 0; i < p.rows(); ++i) {
    if (pi(i) == 0.0) continue;
    for (int j = 0; j < p.cols(); ++j) {
      if (p(i, j) > 0.0) sum += pi(i) * p(i, j) * f(i, j);
    }
  }
  return sum;
}

}  // namespace thermo
