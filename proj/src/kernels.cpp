#include "attnbias/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace attnbias {

namespace {

// Rows below this run without an OpenMP region; spawning threads for a
// handful of rows costs more than the loop itself.
constexpr std::ptrdiff_t kParallelRowThreshold = 64;

void require_matmul_shapes(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw shape_error("matmul: " + a.shape_string() + " x " + b.shape_string());
  }
}

void require_softmax_shapes(const Matrix& scores, const MaskMatrix& mask) {
  if (scores.rows() != mask.rows() || scores.cols() != mask.cols()) {
    throw shape_error("masked_row_softmax: scores " + scores.shape_string() +
                      " vs mask " + std::to_string(mask.rows()) + "x" +
                      std::to_string(mask.cols()));
  }
}

void require_score_shapes(const Matrix& q, const Matrix& k, std::size_t d) {
  if (q.cols() != d || k.cols() != d) {
    throw shape_error("score_matrix: q " + q.shape_string() + ", k " +
                      k.shape_string() + ", d=" + std::to_string(d));
  }
}

void require_grad_shapes(const Matrix& alpha, const Matrix& d_alpha,
                         const MaskMatrix& mask) {
  if (alpha.rows() != d_alpha.rows() || alpha.cols() != d_alpha.cols() ||
      alpha.rows() != mask.rows() || alpha.cols() != mask.cols()) {
    throw shape_error("masked_softmax_grad: alpha " + alpha.shape_string() +
                      ", d_alpha " + d_alpha.shape_string());
  }
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  require_matmul_shapes(a, b);
  Matrix out(a.rows(), b.cols());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static) if (n >= kParallelRowThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        acc += a(i, k) * b(k, j);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix masked_row_softmax(const Matrix& scores, const MaskMatrix& mask) {
  require_softmax_shapes(scores, mask);
  // Empty rows are reported before any parallel work starts.
  for (std::size_t i = 0; i < mask.rows(); ++i) {
    if (mask.row_support(i) == 0) {
      throw empty_neighborhood_error(
          i, "masked_row_softmax: row " + std::to_string(i) + " is fully masked");
    }
  }
  Matrix out(scores.rows(), scores.cols());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(scores.rows());
#pragma omp parallel for schedule(static) if (n >= kParallelRowThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double row_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < scores.cols(); ++j) {
      if (mask(i, j) && scores(i, j) > row_max) row_max = scores(i, j);
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < scores.cols(); ++j) {
      if (mask(i, j)) {
        const double e = std::exp(scores(i, j) - row_max);
        out(i, j) = e;
        denom += e;
      } else {
        out(i, j) = 0.0;
      }
    }
    for (std::size_t j = 0; j < scores.cols(); ++j) {
      if (mask(i, j)) out(i, j) /= denom;
    }
  }
  return out;
}

Matrix score_matrix(const Matrix& q, const Matrix& k, std::size_t d) {
  require_score_shapes(q, k, d);
  const double root_d = std::sqrt(static_cast<double>(d));
  Matrix out(q.rows(), k.rows());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(q.rows());
#pragma omp parallel for schedule(static) if (n >= kParallelRowThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k.rows(); ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        acc += q(i, c) * k(j, c);
      }
      out(i, j) = acc / root_d;
    }
  }
  return out;
}

Matrix masked_softmax_grad(const Matrix& alpha, const Matrix& d_alpha,
                           const MaskMatrix& mask) {
  require_grad_shapes(alpha, d_alpha, mask);
  Matrix out(alpha.rows(), alpha.cols());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(alpha.rows());
#pragma omp parallel for schedule(static) if (n >= kParallelRowThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double row_dot = 0.0;
    for (std::size_t j = 0; j < alpha.cols(); ++j) {
      row_dot += alpha(i, j) * d_alpha(i, j);
    }
    for (std::size_t j = 0; j < alpha.cols(); ++j) {
      out(i, j) = mask(i, j) ? alpha(i, j) * (d_alpha(i, j) - row_dot) : 0.0;
    }
  }
  return out;
}

Matrix central_difference_grad(const std::function<double(const Matrix&)>& f,
                               const Matrix& at, double h) {
  if (!(h > 0.0)) {
    throw numeric_error("central_difference_grad: step must be positive");
  }
  Matrix grad(at.rows(), at.cols());
  Matrix probe = at;
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double x0 = probe.data()[i];
    probe.data()[i] = x0 + h;
    const double fp = f(probe);
    probe.data()[i] = x0 - h;
    const double fm = f(probe);
    probe.data()[i] = x0;
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw numeric_error("central_difference_grad: non-finite evaluation at entry " +
                          std::to_string(i));
    }
    grad.data()[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
  require_matmul_shapes(a, b);
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        acc += a(i, k) * b(k, j);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix masked_row_softmax(const Matrix& scores, const MaskMatrix& mask) {
  require_softmax_shapes(scores, mask);
  Matrix out(scores.rows(), scores.cols());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    if (mask.row_support(i) == 0) {
      throw empty_neighborhood_error(
          i, "masked_row_softmax: row " + std::to_string(i) + " is fully masked");
    }
    double row_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < scores.cols(); ++j) {
      if (mask(i, j) && scores(i, j) > row_max) row_max = scores(i, j);
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < scores.cols(); ++j) {
      if (mask(i, j)) {
        const double e = std::exp(scores(i, j) - row_max);
        out(i, j) = e;
        denom += e;
      } else {
        out(i, j) = 0.0;
      }
    }
    for (std::size_t j = 0; j < scores.cols(); ++j) {
      if (mask(i, j)) out(i, j) /= denom;
    }
  }
  return out;
}

Matrix score_matrix(const Matrix& q, const Matrix& k, std::size_t d) {
  require_score_shapes(q, k, d);
  const double root_d = std::sqrt(static_cast<double>(d));
  Matrix out(q.rows(), k.rows());
  for (std::size_t i = 0; i < q.rows(); ++i) {
    for (std::size_t j = 0; j < k.rows(); ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        acc += q(i, c) * k(j, c);
      }
      out(i, j) = acc / root_d;
    }
  }
  return out;
}

Matrix masked_softmax_grad(const Matrix& alpha, const Matrix& d_alpha,
                           const MaskMatrix& mask) {
  require_grad_shapes(alpha, d_alpha, mask);
  Matrix out(alpha.rows(), alpha.cols());
  for (std::size_t i = 0; i < alpha.rows(); ++i) {
    double row_dot = 0.0;
    for (std::size_t j = 0; j < alpha.cols(); ++j) {
      row_dot += alpha(i, j) * d_alpha(i, j);
    }
    for (std::size_t j = 0; j < alpha.cols(); ++j) {
      out(i, j) = mask(i, j) ? alpha(i, j) * (d_alpha(i, j) - row_dot) : 0.0;
    }
  }
  return out;
}

}  // namespace serial

}  // namespace attnbias
