#include "attnbias/attention.hpp"

#include <cmath>
#include <string>

#include "attnbias/kernels.hpp"

namespace attnbias {

AttentionParams AttentionParams::identity(std::size_t d) {
  AttentionParams p;
  p.w_q = Matrix::identity(d);
  p.w_k = Matrix::identity(d);
  p.w_v = Matrix::identity(d);
  p.d = d;
  return p;
}

AttentionParams AttentionParams::random(std::size_t d, Rng& rng, bool with_bias) {
  AttentionParams p;
  p.w_q = random_matrix(d, d, rng);
  p.w_k = random_matrix(d, d, rng);
  p.w_v = random_matrix(d, d, rng);
  if (with_bias) {
    p.b_q = random_matrix(1, d, rng);
    p.b_k = random_matrix(1, d, rng);
    p.b_v = random_matrix(1, d, rng);
  }
  p.d = d;
  return p;
}

void AttentionParams::validate() const {
  auto check_w = [&](const Matrix& w, const char* name) {
    if (w.rows() != d || w.cols() != d) {
      throw shape_error(std::string(name) + " must be " + std::to_string(d) + "x" +
                        std::to_string(d) + ", got " + w.shape_string());
    }
  };
  check_w(w_q, "w_q");
  check_w(w_k, "w_k");
  check_w(w_v, "w_v");
  auto check_b = [&](const std::optional<Matrix>& b, const char* name) {
    if (b && (b->rows() != 1 || b->cols() != d)) {
      throw shape_error(std::string(name) + " must be 1x" + std::to_string(d) +
                        ", got " + b->shape_string());
    }
  };
  check_b(b_q, "b_q");
  check_b(b_k, "b_k");
  check_b(b_v, "b_v");
}

Matrix project(const Matrix& x, const Matrix& w, const std::optional<Matrix>& b) {
  if (x.cols() != w.rows()) {
    throw shape_error("project: x " + x.shape_string() + " vs w " + w.shape_string());
  }
  Matrix out = matmul(x, w);
  if (b) {
    if (b->rows() != 1 || b->cols() != out.cols()) {
      throw shape_error("project: bias " + b->shape_string() + " vs output " +
                        out.shape_string());
    }
    for (std::size_t i = 0; i < out.rows(); ++i) {
      for (std::size_t j = 0; j < out.cols(); ++j) {
        out(i, j) += (*b)(0, j);
      }
    }
  }
  return out;
}

namespace {

// Shared forward state: the square computation over all entities, plus the
// output window (all rows, or the Y block for Bipartite).
struct Forward {
  Matrix entities;
  MaskMatrix mask;
  Matrix q, k, v;
  Matrix scores;
  Matrix alpha_full;  // n x n
  Matrix h_full;      // n x d
  std::size_t out_first = 0;
  std::size_t out_rows = 0;
  std::size_t n_x = 0;  // only meaningful for bipartite
  bool bipartite = false;
};

Forward run_forward(const Matrix& x, const AttentionParams& params,
                    const MechanismSpec& spec, const std::optional<Matrix>& y) {
  params.validate();
  if (x.cols() != params.d) {
    throw shape_error("attend: x " + x.shape_string() + " vs d=" +
                      std::to_string(params.d));
  }

  Forward f;
  const auto* bip = std::get_if<Bipartite>(&spec);
  if (bip != nullptr) {
    if (!y) {
      throw shape_error("attend: Bipartite requires y (decoder entities)");
    }
    if (y->cols() != params.d) {
      throw shape_error("attend: y " + y->shape_string() + " vs d=" +
                        std::to_string(params.d));
    }
    if (x.rows() != bip->n_x || y->rows() != bip->n_y) {
      throw shape_error("attend: Bipartite{" + std::to_string(bip->n_x) + "," +
                        std::to_string(bip->n_y) + "} vs x " + x.shape_string() +
                        ", y " + y->shape_string());
    }
    f.entities = vstack(x, *y);
    f.bipartite = true;
    f.n_x = bip->n_x;
    f.out_first = bip->n_x;
    f.out_rows = bip->n_y;
  } else {
    if (y) {
      throw shape_error("attend: y is only accepted with the Bipartite mechanism");
    }
    f.entities = x;
    f.out_first = 0;
    f.out_rows = x.rows();
  }

  const RelationalGraph graph = build_graph(spec);
  if (graph.n_vertices() != f.entities.rows()) {
    throw shape_error("attend: mechanism over " +
                      std::to_string(graph.n_vertices()) + " vertices vs " +
                      std::to_string(f.entities.rows()) + " entity rows");
  }

  f.mask = graph_to_mask(graph);
  f.q = project(f.entities, params.w_q, params.b_q);
  f.k = project(f.entities, params.w_k, params.b_k);
  f.v = project(f.entities, params.w_v, params.b_v);
  f.scores = score_matrix(f.q, f.k, params.d);
  f.alpha_full = masked_row_softmax(f.scores, f.mask);
  f.h_full = matmul(f.alpha_full, f.v);
  return f;
}

AttentionOutput to_output(const Forward& f) {
  AttentionOutput out;
  out.h = slice_rows(f.h_full, f.out_first, f.out_rows);
  out.alpha = f.bipartite
                  ? slice_cols(slice_rows(f.alpha_full, f.out_first, f.out_rows), 0, f.n_x)
                  : f.alpha_full;
  return out;
}

}  // namespace

AttentionOutput attend(const Matrix& x, const AttentionParams& params,
                       const MechanismSpec& spec, const std::optional<Matrix>& y) {
  return to_output(run_forward(x, params, spec, y));
}

AttentionGrads attend_backward(const Matrix& x, const AttentionParams& params,
                               const MechanismSpec& spec,
                               const std::optional<Matrix>& y,
                               const Matrix& upstream) {
  const Forward f = run_forward(x, params, spec, y);
  if (upstream.rows() != f.out_rows || upstream.cols() != params.d) {
    throw shape_error("attend_backward: upstream " + upstream.shape_string() +
                      " vs h " + std::to_string(f.out_rows) + "x" +
                      std::to_string(params.d));
  }

  // Loss is <upstream, h>. Non-output rows (the X block for bipartite)
  // receive zero upstream gradient.
  Matrix d_h_full(f.h_full.rows(), f.h_full.cols());
  for (std::size_t i = 0; i < f.out_rows; ++i) {
    for (std::size_t j = 0; j < upstream.cols(); ++j) {
      d_h_full(f.out_first + i, j) = upstream(i, j);
    }
  }

  const Matrix d_alpha = matmul(d_h_full, transpose(f.v));
  Matrix d_v = matmul(transpose(f.alpha_full), d_h_full);
  const Matrix d_scores = masked_softmax_grad(f.alpha_full, d_alpha, f.mask);

  const double root_d = std::sqrt(static_cast<double>(params.d));
  Matrix d_q = scale(matmul(d_scores, f.k), 1.0 / root_d);
  Matrix d_k = scale(matmul(transpose(d_scores), f.q), 1.0 / root_d);

  Matrix d_entities = add(add(matmul(d_q, transpose(params.w_q)),
                              matmul(d_k, transpose(params.w_k))),
                          matmul(d_v, transpose(params.w_v)));

  AttentionGrads g;
  const Matrix entities_t = transpose(f.entities);
  g.d_wq = matmul(entities_t, d_q);
  g.d_wk = matmul(entities_t, d_k);
  g.d_wv = matmul(entities_t, d_v);
  if (params.b_q) g.d_bq = colsum(d_q);
  if (params.b_k) g.d_bk = colsum(d_k);
  if (params.b_v) g.d_bv = colsum(d_v);
  if (f.bipartite) {
    g.d_x = slice_rows(d_entities, 0, f.n_x);
    g.d_y = slice_rows(d_entities, f.n_x, d_entities.rows() - f.n_x);
  } else {
    g.d_x = d_entities;
  }
  return g;
}

MessageDecomposition message_decomposition(const Matrix& x,
                                           const AttentionParams& params,
                                           const MechanismSpec& spec,
                                           const std::optional<Matrix>& y) {
  const Forward f = run_forward(x, params, spec, y);
  MessageDecomposition out;
  out.aggregates = Matrix(f.out_rows, params.d);
  for (std::size_t r = 0; r < f.out_rows; ++r) {
    const std::size_t i = f.out_first + r;
    for (std::size_t j = 0; j < f.entities.rows(); ++j) {
      if (!f.mask(i, j)) continue;
      Message m;
      m.query = r;
      m.key = j;
      m.value.resize(params.d);
      for (std::size_t c = 0; c < params.d; ++c) {
        m.value[c] = f.alpha_full(i, j) * f.v(j, c);
        out.aggregates(r, c) += m.value[c];
      }
      out.messages.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace attnbias
