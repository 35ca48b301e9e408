#include "attnbias/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace attnbias {

RelationalGraph::RelationalGraph(MaskMatrix adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols()) {
    throw shape_error("relational graph adjacency must be square, got " +
                      std::to_string(adjacency_.rows()) + "x" +
                      std::to_string(adjacency_.cols()));
  }
  for (std::size_t i = 0; i < adjacency_.rows(); ++i) {
    if (adjacency_.row_support(i) == 0) {
      throw empty_neighborhood_error(
          i, "vertex " + std::to_string(i) + " has an empty neighborhood");
    }
  }
}

namespace {

void require_positive(std::size_t n, const char* what) {
  if (n < 1) {
    throw std::invalid_argument(std::string(what) + " must be >= 1");
  }
}

}  // namespace

RelationalGraph build_graph(const MechanismSpec& spec) {
  return std::visit(
      [](const auto& s) -> RelationalGraph {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Full>) {
          require_positive(s.n, "Full.n");
          MaskMatrix adj(s.n, s.n);
          for (std::size_t i = 0; i < s.n; ++i)
            for (std::size_t j = 0; j < s.n; ++j) adj.set(i, j, true);
          return RelationalGraph(adj);
        } else if constexpr (std::is_same_v<T, Causal>) {
          require_positive(s.n, "Causal.n");
          MaskMatrix adj(s.n, s.n);
          for (std::size_t i = 0; i < s.n; ++i)
            for (std::size_t j = 0; j <= i; ++j) adj.set(i, j, true);
          return RelationalGraph(adj);
        } else if constexpr (std::is_same_v<T, Strided>) {
          require_positive(s.n, "Strided.n");
          require_positive(s.p, "Strided.p");
          MaskMatrix adj(s.n, s.n);
          for (std::size_t i = 0; i < s.n; ++i) {
            const std::size_t t = i + 1 > s.p ? i + 1 - s.p : 0;
            for (std::size_t j = t; j <= i; ++j) adj.set(i, j, true);
          }
          return RelationalGraph(adj);
        } else if constexpr (std::is_same_v<T, Bipartite>) {
          require_positive(s.n_x, "Bipartite.n_x");
          require_positive(s.n_y, "Bipartite.n_y");
          const std::size_t n = s.n_x + s.n_y;
          MaskMatrix adj(n, n);
          for (std::size_t i = 0; i < s.n_x; ++i) adj.set(i, i, true);
          for (std::size_t i = s.n_x; i < n; ++i)
            for (std::size_t j = 0; j < s.n_x; ++j) adj.set(i, j, true);
          return RelationalGraph(adj);
        } else {
          static_assert(std::is_same_v<T, CustomGraph>);
          return s.graph;
        }
      },
      spec);
}

MaskMatrix graph_to_mask(const RelationalGraph& g) { return g.adjacency(); }

bool verify_total_order(const RelationalGraph& g) {
  const std::size_t n = g.n_vertices();
  for (std::size_t i = 0; i < n; ++i) {
    if (!g.edge(i, i)) return false;  // reflexivity
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (g.edge(i, j) && g.edge(j, i)) return false;   // antisymmetry
      if (!g.edge(i, j) && !g.edge(j, i)) return false; // comparability
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!g.edge(i, j)) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (g.edge(j, k) && !g.edge(i, k)) return false;  // transitivity
      }
    }
  }
  return true;
}

bool verify_dag_of_proper_edges(const RelationalGraph& g) {
  const std::size_t n = g.n_vertices();
  // Kahn's algorithm over the graph with self-loops removed.
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && g.edge(i, j)) ++indegree[j];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.back();
    ready.pop_back();
    ++visited;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != v && g.edge(v, j) && --indegree[j] == 0) ready.push_back(j);
    }
  }
  return visited == n;
}

RelationalGraph random_graph(std::size_t n, Rng& rng) {
  MaskMatrix adj(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      adj.set(i, j, (rng.next_u64() & 1ULL) != 0);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (adj.row_support(i) == 0) {
      adj.set(i, static_cast<std::size_t>(rng.next_below(n)), true);
    }
  }
  return RelationalGraph(adj);
}

}  // namespace attnbias
