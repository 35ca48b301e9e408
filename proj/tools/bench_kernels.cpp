// Times the OpenMP kernels against their serial references and confirms the
// outputs stay bit-identical. Row-parallel scheduling must not change a
// single bit, so the check is exact equality.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "attnbias/graph.hpp"
#include "attnbias/kernels.hpp"
#include "attnbias/rng.hpp"

using namespace attnbias;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-22s serial %9.2f ms   openmp %9.2f ms   speedup %5.2fx   bit-identical: %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "yes" : "NO");
  if (!identical) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 768;
  int reps = 3;
  if (argc > 1) n = static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10));
  if (argc > 2) reps = std::atoi(argv[2]);

#ifdef _OPENMP
  std::printf("threads: %d, n = %zu, reps = %d\n", omp_get_max_threads(), n, reps);
#else
  std::printf("built without OpenMP, n = %zu, reps = %d\n", n, reps);
#endif

  Rng rng(42);
  const Matrix a = random_matrix(n, n, rng);
  const Matrix b = random_matrix(n, n, rng);

  Matrix out_s, out_p;
  const double mm_s = time_ms([&] { out_s = serial::matmul(a, b); }, reps);
  const double mm_p = time_ms([&] { out_p = matmul(a, b); }, reps);
  report("matmul", mm_s, mm_p, out_s == out_p);

  const MaskMatrix mask = graph_to_mask(build_graph(Causal{n}));
  const double sm_s = time_ms([&] { out_s = serial::masked_row_softmax(a, mask); }, reps);
  const double sm_p = time_ms([&] { out_p = masked_row_softmax(a, mask); }, reps);
  report("masked_row_softmax", sm_s, sm_p, out_s == out_p);

  const std::size_t d = 64;
  const Matrix q = random_matrix(n, d, rng);
  const Matrix k = random_matrix(n, d, rng);
  const double sc_s = time_ms([&] { out_s = serial::score_matrix(q, k, d); }, reps);
  const double sc_p = time_ms([&] { out_p = score_matrix(q, k, d); }, reps);
  report("score_matrix", sc_s, sc_p, out_s == out_p);

  const Matrix alpha = masked_row_softmax(score_matrix(q, k, d), mask);
  const Matrix d_alpha = random_matrix(n, n, rng);
  const double sg_s =
      time_ms([&] { out_s = serial::masked_softmax_grad(alpha, d_alpha, mask); }, reps);
  const double sg_p =
      time_ms([&] { out_p = masked_softmax_grad(alpha, d_alpha, mask); }, reps);
  report("masked_softmax_grad", sg_s, sg_p, out_s == out_p);

  return 0;
}
