#pragma once

#include <functional>

#include "attnbias/matrix.hpp"

namespace attnbias {

// Row-parallel kernels. Each output row is produced by one serial inner loop
// in ascending index order, so results are bit-identical to the serial
// reference in attnbias::serial regardless of thread count.

// Standard product, f64 accumulation in ascending-k order.
Matrix matmul(const Matrix& a, const Matrix& b);

// Row softmax over the kept entries of the mask. Masked entries of the output
// are exactly 0.0; kept entries are exp(s - rowmax) / sum over kept entries,
// with rowmax taken over the kept entries only. A row with no kept entry
// raises empty_neighborhood_error with that row index.
Matrix masked_row_softmax(const Matrix& scores, const MaskMatrix& mask);

// K[i,j] = <q_i, k_j> / sqrt(d). The kernel is generalized: no symmetry is
// assumed between queries and keys.
Matrix score_matrix(const Matrix& q, const Matrix& k, std::size_t d);

// Reverse-mode softmax rows: given alpha = masked_row_softmax(s, mask) and
// d_alpha, returns d_s with d_s[i,j] = alpha[i,j] * (d_alpha[i,j] - row_dot)
// on kept entries and exactly 0.0 on masked ones.
Matrix masked_softmax_grad(const Matrix& alpha, const Matrix& d_alpha,
                           const MaskMatrix& mask);

// Central differences: element-wise (f(x + h e_ij) - f(x - h e_ij)) / (2h).
// Raises numeric_error if f evaluates to a non-finite value.
Matrix central_difference_grad(const std::function<double(const Matrix&)>& f,
                               const Matrix& at, double h = 1e-5);

namespace serial {

// Plain-loop reference implementations, kept for testing the parallel
// kernels and for the benchmark. Arithmetic is expression-for-expression
// the same as the row-parallel versions.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix masked_row_softmax(const Matrix& scores, const MaskMatrix& mask);
Matrix score_matrix(const Matrix& q, const Matrix& k, std::size_t d);
Matrix masked_softmax_grad(const Matrix& alpha, const Matrix& d_alpha,
                           const MaskMatrix& mask);

}  // namespace serial

}  // namespace attnbias
