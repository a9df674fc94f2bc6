#include "fractspec/clique.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace fractspec {

Graph::Graph(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

void Graph::add_edge(std::size_t a, std::size_t b) {
  if (a >= n_ || b >= n_) throw std::out_of_range("graph vertex out of range");
  if (a == b) return;
  bits_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
  bits_[b * words_ + a / 64] |= std::uint64_t{1} << (a % 64);
}

bool Graph::adjacent(std::size_t a, std::size_t b) const {
  return (bits_[a * words_ + b / 64] >> (b % 64)) & 1u;
}

std::size_t Graph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (std::size_t w = 0; w < words_; ++w) d += static_cast<std::size_t>(std::popcount(bits_[v * words_ + w]));
  return d;
}

// Works on a relabelled copy where vertex i is the i-th in descending degree order.
struct CliqueSearch {
  using Set = std::vector<std::uint64_t>;

  std::size_t n;
  std::size_t words;
  std::vector<Set> adj;
  std::vector<std::size_t> current, best;
  std::uint64_t nodes = 0;

  explicit CliqueSearch(const Graph& g, const std::vector<std::size_t>& order) : n(g.n_), words(g.words_) {
    adj.assign(n, Set(words, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && g.adjacent(order[i], order[j])) adj[i][j / 64] |= std::uint64_t{1} << (j % 64);
  }

  static bool empty(const Set& s) {
    return std::all_of(s.begin(), s.end(), [](std::uint64_t w) { return w == 0; });
  }

  // Greedy sequential colouring of `cand`; returns vertices in colour order with
  // their colour numbers, so colour[k] bounds the clique size within the first k+1.
  void colour(const Set& cand, std::vector<std::size_t>& verts, std::vector<std::size_t>& colours) const {
    verts.clear();
    colours.clear();
    Set uncoloured = cand;
    std::size_t c = 0;
    while (!empty(uncoloured)) {
      ++c;
      Set q = uncoloured;
      while (!empty(q)) {
        std::size_t w = 0;
        while (q[w] == 0) ++w;
        const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(q[w]));
        q[w] &= q[w] - 1;
        uncoloured[v / 64] &= ~(std::uint64_t{1} << (v % 64));
        for (std::size_t k = 0; k < words; ++k) q[k] &= ~adj[v][k];
        verts.push_back(v);
        colours.push_back(c);
      }
    }
  }

  void expand(Set cand) {
    ++nodes;
    std::vector<std::size_t> verts, colours;
    colour(cand, verts, colours);
    for (std::size_t idx = verts.size(); idx-- > 0;) {
      if (current.size() + colours[idx] <= best.size()) return;
      const std::size_t v = verts[idx];
      current.push_back(v);
      Set next(words);
      for (std::size_t k = 0; k < words; ++k) next[k] = cand[k] & adj[v][k];
      if (empty(next)) {
        if (current.size() > best.size()) best = current;
      } else {
        expand(next);
      }
      current.pop_back();
      cand[v / 64] &= ~(std::uint64_t{1} << (v % 64));
    }
  }
};

CliqueResult max_clique(const Graph& g) {
  CliqueResult result;
  if (g.size() == 0) return result;
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });
  CliqueSearch search(g, order);
  CliqueSearch::Set all(search.words, 0);
  for (std::size_t i = 0; i < g.size(); ++i) all[i / 64] |= std::uint64_t{1} << (i % 64);
  search.expand(all);
  for (std::size_t v : search.best) result.vertices.push_back(order[v]);
  std::sort(result.vertices.begin(), result.vertices.end());
  result.explored_nodes = search.nodes;
  return result;
}

}  // namespace fractspec
