#include "neardgd/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "neardgd/error.hpp"
#include "neardgd/rng.hpp"

namespace neardgd {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), adjacency_(n) {
  if (n == 0) throw InvalidTopology("graph must have at least one node");
  for (auto& [i, j] : edges) {
    if (i >= n || j >= n) {
      throw InvalidTopology("edge (" + std::to_string(i) + "," + std::to_string(j) +
                            ") references a node outside 0.." + std::to_string(n - 1));
    }
    if (i == j) throw InvalidTopology("self-loop at node " + std::to_string(i));
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
    throw InvalidTopology("duplicate edge (" + std::to_string(dup->first) + "," +
                          std::to_string(dup->second) + ")");
  }
  edges_ = std::move(edges);
  for (const auto& [i, j] : edges_) {
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_ || i == j) return false;
  if (i > j) std::swap(i, j);
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
}

Graph build_ring(std::size_t n) {
  if (n < 3) throw InvalidTopology("ring requires n >= 3, got " + std::to_string(n));
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(edges));
}

Graph build_star(std::size_t n) {
  if (n < 2) throw InvalidTopology("star requires n >= 2, got " + std::to_string(n));
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(0, i);
  return Graph(n, std::move(edges));
}

Graph build_complete(std::size_t n) {
  if (n < 2) throw InvalidTopology("complete graph requires n >= 2");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

Graph build_erdos_renyi(std::size_t n, double edge_probability, std::uint64_t seed,
                        int max_attempts) {
  if (n < 2) throw InvalidTopology("Erdos-Renyi graph requires n >= 2");
  if (!(edge_probability > 0.0 && edge_probability <= 1.0))
    throw InvalidTopology("edge probability must lie in (0, 1]");
  Rng rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.canonical() < edge_probability) edges.emplace_back(i, j);
    Graph g(n, std::move(edges));
    if (is_connected(g)) return g;
  }
  throw InvalidTopology("no connected Erdos-Renyi sample after " + std::to_string(max_attempts) +
                        " attempts (n=" + std::to_string(n) +
                        ", p=" + std::to_string(edge_probability) + ")");
}

bool is_connected(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  seen[0] = true;
  frontier.push(0);
  std::size_t reached = 1;
  while (!frontier.empty()) {
    std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n;
}

void require_connected(const Graph& g) {
  if (!is_connected(g)) throw InvalidTopology("graph is not connected");
}

std::vector<std::size_t> degrees(const Graph& g) {
  std::vector<std::size_t> d(g.node_count());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = g.neighbors(i).size();
  return d;
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream os;
  for (const auto& [i, j] : g.edges()) os << i << ' ' << j << '\n';
  return os.str();
}

Graph parse_edge_list(std::size_t n, std::string_view text) {
  std::vector<Edge> edges;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long i = -1, j = -1;
    std::string rest;
    if (!(ls >> i >> j) || (ls >> rest) || i < 0 || j < 0) {
      throw InvalidTopology("edge list line " + std::to_string(lineno) +
                            ": expected two non-negative node ids, got '" + line + "'");
    }
    edges.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return Graph(n, std::move(edges));
}

}  // namespace neardgd
