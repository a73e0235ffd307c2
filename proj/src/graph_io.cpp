#include "thermo/graph_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "thermo/error.hpp"
#include "thermo/format.hpp"

namespace thermo {

namespace {

std::string StripComment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool IsBlank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

[[noreturn]] void Fail(int line_no, const std::string& what) {
  throw InputError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

GraphFile ParseGraphFile(std::istream& in) {
  std::string raw;
  int line_no = 0;
  int n = -1;
  std::map<std::pair<int, int>, std::pair<double, double>> weights;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = StripComment(raw);
    if (IsBlank(line)) continue;
    std::istringstream fields(line);
    std::string extra;
    if (n < 0) {
      if (!(fields >> n) || n <= 0 || (fields >> extra)) {
        Fail(line_no, "expected a positive state count");
      }
      continue;
    }
    int i = 0, j = 0;
    double a = 0.0, phi = 0.0;
    if (!(fields >> i >> j >> a >> phi) || (fields >> extra)) {
      Fail(line_no, "expected `i j a phi`");
    }
    if (i < 0 || i >= n || j < 0 || j >= n) {
      Fail(line_no, "state index out of range [0, " + std::to_string(n) + ")");
    }
    if (!weights.emplace(std::make_pair(i, j), std::make_pair(a, phi)).second) {
      Fail(line_no, "duplicate edge " + std::to_string(i) + " " +
                        std::to_string(j));
    }
  }
  if (n < 0) throw InputError("line 1: missing state count");
  if (weights.empty()) throw InputError("graph file has no edges");

  std::vector<Edge> edges;
  for (const auto& [key, value] : weights) edges.push_back({key.first, key.second});
  TransitionGraph graph = TransitionGraph::FromEdges(n, edges);
  std::vector<double> a, phi;
  for (const Edge& e : graph.edges()) {
    const auto& w = weights.at({e.from, e.to});
    a.push_back(w.first);
    phi.push_back(w.second);
  }
  EdgePotential damping(graph, std::move(a));
  EdgePotential potential(graph, std::move(phi));
  return {std::move(graph), std::move(damping), std::move(potential)};
}

GraphFile ReadGraphFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file " + path);
  return ParseGraphFile(in);
}

std::string FormatGraphFile(const GraphFile& file) {
  std::ostringstream out;
  out << file.graph.size() << '\n';
  for (const Edge& e : file.graph.edges()) {
    out << e.from << ' ' << e.to << ' ' << FormatNumber(file.damping(e.from, e.to))
        << ' ' << FormatNumber(file.potential(e.from, e.to)) << '\n';
  }
  return out.str();
}

}  // namespace thermo
