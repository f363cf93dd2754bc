#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace neardgd {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected simple graph on nodes 0..n-1. Edges are stored canonically as
/// (min, max) pairs in sorted order, so two graphs with the same edge set
/// compare and serialize identically.
class Graph {
 public:
  /// Throws InvalidTopology on n == 0, self-loops, duplicate edges or
  /// out-of-range endpoints. Connectivity is NOT required here; use
  /// is_connected() or require_connected().
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(std::size_t i, std::size_t j) const;
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_[i]; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

Graph build_ring(std::size_t n);
Graph build_star(std::size_t n);
Graph build_complete(std::size_t n);

/// G(n, p) resampled until connected; gives up with InvalidTopology after
/// max_attempts draws.
Graph build_erdos_renyi(std::size_t n, double edge_probability, std::uint64_t seed,
                        int max_attempts = 1000);

bool is_connected(const Graph& g);
void require_connected(const Graph& g);
std::vector<std::size_t> degrees(const Graph& g);

/// One "i j" pair per line.
std::string to_edge_list(const Graph& g);
Graph parse_edge_list(std::size_t n, std::string_view text);

}  // namespace neardgd
