#pragma once

#include <cstdint>
#include <vector>

namespace fractspec {

/// Undirected simple graph on vertices 0..n-1 stored as adjacency bitsets.
class Graph {
 public:
  explicit Graph(std::size_t n);

  std::size_t size() const { return n_; }
  void add_edge(std::size_t a, std::size_t b);
  bool adjacent(std::size_t a, std::size_t b) const;
  std::size_t degree(std::size_t v) const;

 private:
  friend struct CliqueSearch;
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

struct CliqueResult {
  /// Vertices of one maximum clique, ascending.
  std::vector<std::size_t> vertices;
  std::uint64_t explored_nodes = 0;
};

/// Exact maximum clique: branch and bound over vertices ordered by degree,
/// pruned with a greedy colouring bound. Deterministic.
CliqueResult max_clique(const Graph& g);

}  // namespace fractspec
