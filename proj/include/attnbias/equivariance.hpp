#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "attnbias/attention.hpp"
#include "attnbias/graph.hpp"
#include "attnbias/matrix.hpp"
#include "attnbias/rng.hpp"

namespace attnbias {

// Group actions used by the property checks.
struct Permutation {
  std::vector<std::size_t> sigma;  // bijection on 0..n-1
};
struct BlockPermutation {
  std::vector<std::size_t> sigma_x;
  std::vector<std::size_t> sigma_y;
};
struct Shift {
  std::size_t m = 0;
};

using GroupAction = std::variant<Permutation, BlockPermutation, Shift>;

// Permutation: row i of the result is row sigma[i] of x (y passes through).
// BlockPermutation: x rows by sigma_x, y rows by sigma_y.
// Shift: identity on fixed-length inputs; the suffix alignment it denotes is
// constructed inside check_translation_equivariance.
std::pair<Matrix, std::optional<Matrix>> apply_action(
    const GroupAction& action, const Matrix& x,
    const std::optional<Matrix>& y = std::nullopt);

struct PropertyReport {
  std::string name;
  std::size_t trials = 0;
  double tolerance = 0.0;
  double max_violation = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
};

PropertyReport make_report(std::string name, std::size_t trials, double tolerance,
                           double max_violation, std::uint64_t seed);

// Fixed-parameter checks. Trials draw fresh instances from per-trial splits
// of rng, so parallel and serial execution produce identical reports.
PropertyReport check_permutation_equivariance(const AttentionParams& params,
                                              std::size_t n, std::size_t d,
                                              std::size_t trials, const Rng& rng);

PropertyReport check_block_permutation_equivariance(const AttentionParams& params,
                                                    std::size_t n_x, std::size_t n_y,
                                                    std::size_t d, std::size_t trials,
                                                    const Rng& rng);

// (a) causal prefix causality and (b) strided interior shift-match with m
// fresh prefix rows; reports the max violation over both.
PropertyReport check_translation_equivariance(const AttentionParams& params,
                                              std::size_t n, std::size_t p,
                                              std::size_t m, std::size_t d,
                                              std::size_t trials, const Rng& rng);

// The five mask-identity collapses (CustomGraph vs Full/Causal/Strided/
// Bipartite, and Strided{p=n} vs Causal), required to hold bit-exactly.
PropertyReport check_hierarchy(const AttentionParams& params, std::size_t n,
                               std::size_t d, std::size_t trials, const Rng& rng);

// Suite runner used by the CLI and the acceptance tests. Samples instances
// (sizes, parameters, inputs) per trial unless the config pins them.
enum class Mechanism { full, causal, strided, bipartite, graph };

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 0;  // 0 = per-check default
  std::optional<std::size_t> n;
  std::optional<std::size_t> d;
  std::optional<std::size_t> p;
  std::optional<std::size_t> n_x;
  std::optional<std::size_t> n_y;
  std::optional<RelationalGraph> custom;  // used by graph-mechanism checks
  bool negative_control = false;
};

// All checks applicable to the mechanism (every check when unset). The
// negative control is appended only when cfg.negative_control is set; its
// report has pass=false by construction (the suite must be able to fail) and
// callers treat max_violation > 1e-3 as the control succeeding.
std::vector<PropertyReport> run_suite(std::optional<Mechanism> mechanism,
                                      const SuiteConfig& cfg);

inline constexpr double kNegativeControlThreshold = 1e-3;
inline constexpr const char* kNegativeControlName = "permutation_negative_control_causal";

}  // namespace attnbias
