#pragma once

#include <optional>
#include <vector>

#include "attnbias/graph.hpp"
#include "attnbias/matrix.hpp"
#include "attnbias/rng.hpp"

namespace attnbias {

// Projection maps for queries, keys and values: d x d weights with optional
// length-d bias rows. Biases default to absent (pure linear projections).
struct AttentionParams {
  Matrix w_q;
  Matrix w_k;
  Matrix w_v;
  std::optional<Matrix> b_q;  // 1 x d
  std::optional<Matrix> b_k;
  std::optional<Matrix> b_v;
  std::size_t d = 0;

  static AttentionParams identity(std::size_t d);
  static AttentionParams random(std::size_t d, Rng& rng, bool with_bias = false);

  void validate() const;
};

// One row of h per output entity. alpha is row-stochastic on its support;
// masked entries are exactly 0. For Bipartite, h holds only the Y rows and
// alpha is the n_y x n_x block.
struct AttentionOutput {
  Matrix h;
  Matrix alpha;
};

struct AttentionGrads {
  Matrix d_x;
  std::optional<Matrix> d_y;
  Matrix d_wq;
  Matrix d_wk;
  Matrix d_wv;
  std::optional<Matrix> d_bq;
  std::optional<Matrix> d_bk;
  std::optional<Matrix> d_bv;
};

// x . w (+ broadcast bias row).
Matrix project(const Matrix& x, const Matrix& w, const std::optional<Matrix>& b);

// The unified layer: builds the mechanism's graph, masks the score matrix per
// the graph, and aggregates values under the row-stochastic attention matrix.
// y must be given exactly when spec is Bipartite (queries come from y, keys
// and values from x).
AttentionOutput attend(const Matrix& x, const AttentionParams& params,
                       const MechanismSpec& spec,
                       const std::optional<Matrix>& y = std::nullopt);

// Gradients of <upstream, h> with respect to inputs and parameters.
// Hand-derived reverse mode; gradients through masked entries are exactly 0.
AttentionGrads attend_backward(const Matrix& x, const AttentionParams& params,
                               const MechanismSpec& spec,
                               const std::optional<Matrix>& y,
                               const Matrix& upstream);

// Per-edge message alpha_ij * psi_v(x_j), keyed by (output row, source
// vertex), plus the per-row sums. The sums reproduce attend(...).h
// bit-for-bit: same terms, same ascending-j order.
struct Message {
  std::size_t query;  // output row index
  std::size_t key;    // source entity index
  std::vector<double> value;
};

struct MessageDecomposition {
  std::vector<Message> messages;
  Matrix aggregates;
};

MessageDecomposition message_decomposition(const Matrix& x,
                                           const AttentionParams& params,
                                           const MechanismSpec& spec,
                                           const std::optional<Matrix>& y = std::nullopt);

}  // namespace attnbias
