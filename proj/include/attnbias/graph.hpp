#pragma once

#include <cstddef>
#include <variant>

#include "attnbias/matrix.hpp"
#include "attnbias/rng.hpp"

namespace attnbias {

// Directed relational graph over entity indices: edge (i, j) means vertex i
// may attend to vertex j. Every vertex must keep a non-empty neighborhood;
// this is enforced at construction.
class RelationalGraph {
 public:
  RelationalGraph() = default;
  explicit RelationalGraph(MaskMatrix adjacency);

  std::size_t n_vertices() const noexcept { return adjacency_.rows(); }
  const MaskMatrix& adjacency() const noexcept { return adjacency_; }
  bool edge(std::size_t i, std::size_t j) const { return adjacency_(i, j); }

  friend bool operator==(const RelationalGraph& a, const RelationalGraph& b) noexcept {
    return a.adjacency_ == b.adjacency_;
  }

 private:
  MaskMatrix adjacency_;
};

// Mechanism selection; fixes how the mask is built.
struct Full {
  std::size_t n;
};
struct Causal {
  std::size_t n;
};
struct Strided {
  std::size_t n;
  std::size_t p;  // window: the p most recent entities including self
};
struct Bipartite {
  std::size_t n_x;
  std::size_t n_y;
};
struct CustomGraph {
  RelationalGraph graph;
};

using MechanismSpec = std::variant<Full, Causal, Strided, Bipartite, CustomGraph>;

// Full      -> all n^2 edges.
// Causal    -> edge (i, j) iff j <= i.
// Strided   -> edge (i, j) iff max(0, i - p + 1) <= j <= i.
// Bipartite -> vertices indexed X first, then Y; every Y vertex attends to
//              every X vertex; X vertices carry only a self-loop and are
//              treated as non-output rows by the attention layer.
// CustomGraph -> pass-through.
RelationalGraph build_graph(const MechanismSpec& spec);

// Bit-identical copy of the adjacency in mask form.
MaskMatrix graph_to_mask(const RelationalGraph& g);

// True iff the edge relation is a total order on vertex indices: reflexive,
// antisymmetric, transitive, and any two vertices are related in at least
// one direction.
bool verify_total_order(const RelationalGraph& g);

// True iff the subgraph of non-self-loop edges is acyclic.
bool verify_dag_of_proper_edges(const RelationalGraph& g);

// Random directed graph with edge probability 1/2; rows that come out empty
// get one random edge so the neighborhood invariant holds.
RelationalGraph random_graph(std::size_t n, Rng& rng);

}  // namespace attnbias
