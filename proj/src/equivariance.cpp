#include "attnbias/equivariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "attnbias/kernels.hpp"

namespace attnbias {

namespace {

void validate_bijection(const std::vector<std::size_t>& sigma, std::size_t n,
                        const char* what) {
  if (sigma.size() != n) {
    throw shape_error(std::string(what) + ": permutation over " +
                      std::to_string(sigma.size()) + " indices vs " +
                      std::to_string(n) + " rows");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t v : sigma) {
    if (v >= n || seen[v]) {
      throw shape_error(std::string(what) + ": not a bijection on 0.." +
                        std::to_string(n == 0 ? 0 : n - 1));
    }
    seen[v] = true;
  }
}

Matrix permute_rows(const Matrix& x, const std::vector<std::size_t>& sigma) {
  validate_bijection(sigma, x.rows(), "permute_rows");
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out(i, j) = x(sigma[i], j);
    }
  }
  return out;
}

// Single violation metric per report: an entry that must be exactly zero but
// is not scores at least twice the tolerance, so it can never pass.
double exactness_violation(double v, double tolerance) {
  if (v == 0.0) return 0.0;
  return std::max(std::fabs(v), 2.0 * tolerance + 1e-300);
}

double inner(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

double max_rel_err(const Matrix& reference, const Matrix& candidate) {
  double v = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double a = reference.data()[i];
    const double b = candidate.data()[i];
    v = std::max(v, std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)}));
  }
  return v;
}

template <typename TrialFn>
PropertyReport run_trials(const char* name, std::size_t trials, double tolerance,
                          std::uint64_t report_seed, const Rng& root, TrialFn&& fn) {
  double maxv = 0.0;
  const std::ptrdiff_t t_end = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(static) reduction(max : maxv) if (t_end > 1)
  for (std::ptrdiff_t t = 0; t < t_end; ++t) {
    Rng trial_rng = root.split(static_cast<std::uint64_t>(t));
    maxv = std::max(maxv, fn(trial_rng, static_cast<std::size_t>(t)));
  }
  return make_report(name, trials, tolerance, maxv, report_seed);
}

// ---- per-trial violation kernels shared by the fixed-parameter checks and
// ---- the randomized suite

double perm_equivariance_violation(const AttentionParams& params, const Matrix& x,
                                   const std::vector<std::size_t>& sigma,
                                   const MechanismSpec& spec) {
  const Matrix lhs = attend(permute_rows(x, sigma), params, spec).h;
  const Matrix rhs = permute_rows(attend(x, params, spec).h, sigma);
  return max_abs_diff(lhs, rhs);
}

double block_perm_violation(const AttentionParams& params, const Matrix& x,
                            const Matrix& y, const std::vector<std::size_t>& sx,
                            const std::vector<std::size_t>& sy) {
  const MechanismSpec spec = Bipartite{x.rows(), y.rows()};
  const Matrix lhs = attend(permute_rows(x, sx), params, spec, permute_rows(y, sy)).h;
  const Matrix rhs = permute_rows(attend(x, params, spec, y).h, sy);
  return max_abs_diff(lhs, rhs);
}

double x_perm_invariance_violation(const AttentionParams& params, const Matrix& x,
                                   const Matrix& y,
                                   const std::vector<std::size_t>& sx) {
  const MechanismSpec spec = Bipartite{x.rows(), y.rows()};
  const Matrix lhs = attend(permute_rows(x, sx), params, spec, y).h;
  const Matrix rhs = attend(x, params, spec, y).h;
  return max_abs_diff(lhs, rhs);
}

double prefix_causality_violation(const AttentionParams& params, const Matrix& x) {
  const std::size_t n = x.rows();
  const Matrix full = attend(x, params, Causal{n}).h;
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix h_prefix = attend(slice_rows(x, 0, i + 1), params, Causal{i + 1}).h;
    for (std::size_t c = 0; c < x.cols(); ++c) {
      v = std::max(v, std::fabs(h_prefix(i, c) - full(i, c)));
    }
  }
  return v;
}

double strided_locality_violation(const AttentionParams& params, const Matrix& x,
                                  std::size_t p, Rng& rng) {
  const std::size_t n = x.rows();
  const MechanismSpec spec = Strided{n, p};
  const Matrix base = attend(x, params, spec).h;
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = i + 1 > p ? i + 1 - p : 0;
    Matrix probe = x;
    bool changed = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (j >= t && j <= i) continue;
      for (std::size_t c = 0; c < x.cols(); ++c) probe(j, c) = rng.uniform_pm1();
      changed = true;
    }
    if (!changed) continue;
    const Matrix h = attend(probe, params, spec).h;
    for (std::size_t c = 0; c < x.cols(); ++c) {
      v = std::max(v, std::fabs(h(i, c) - base(i, c)));
    }
  }
  return v;
}

double strided_shift_violation(const AttentionParams& params, const Matrix& x,
                               std::size_t p, std::size_t m, Rng& rng) {
  const std::size_t n = x.rows();
  const Matrix base = attend(x, params, Strided{n, p}).h;
  const Matrix prefix = random_matrix(m, x.cols(), rng);
  const Matrix shifted = attend(vstack(prefix, x), params, Strided{n + m, p}).h;
  double v = 0.0;
  for (std::size_t i = p - 1; i < n; ++i) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      v = std::max(v, std::fabs(shifted(i + m, c) - base(i, c)));
    }
  }
  return v;
}

double hierarchy_violation(const AttentionParams& params, const Matrix& x,
                           std::size_t n_x, std::size_t p) {
  const std::size_t n = x.rows();
  double v = 0.0;
  auto compare = [&](const AttentionOutput& a, const AttentionOutput& b) {
    v = std::max(v, max_abs_diff(a.h, b.h));
    v = std::max(v, max_abs_diff(a.alpha, b.alpha));
  };
  auto via_graph = [&](const MechanismSpec& s) {
    return MechanismSpec(CustomGraph{build_graph(s)});
  };

  compare(attend(x, params, via_graph(Full{n})), attend(x, params, Full{n}));
  compare(attend(x, params, via_graph(Causal{n})), attend(x, params, Causal{n}));
  compare(attend(x, params, via_graph(Strided{n, p})), attend(x, params, Strided{n, p}));
  compare(attend(x, params, Strided{n, n}), attend(x, params, Causal{n}));

  const std::size_t n_y = n - n_x;
  const Matrix xa = slice_rows(x, 0, n_x);
  const Matrix ya = slice_rows(x, n_x, n_y);
  const AttentionOutput bip = attend(xa, params, Bipartite{n_x, n_y}, ya);
  const AttentionOutput via =
      attend(x, params, via_graph(Bipartite{n_x, n_y}));
  v = std::max(v, max_abs_diff(bip.h, slice_rows(via.h, n_x, n_y)));
  v = std::max(v, max_abs_diff(bip.alpha,
                               slice_cols(slice_rows(via.alpha, n_x, n_y), 0, n_x)));
  return v;
}

// ---- randomized-instance sampling for the suite

std::size_t sample_range(Rng& rng, const std::optional<std::size_t>& fixed,
                         std::size_t lo, std::size_t hi) {
  if (fixed) return *fixed;
  return lo + static_cast<std::size_t>(rng.next_below(hi - lo + 1));
}

struct Instance {
  MechanismSpec spec;
  AttentionParams params;
  Matrix x;
  std::optional<Matrix> y;
};

// Draw order is fixed: dimensions, graph (if any), parameters, x, y.
Instance sample_instance(Mechanism mech, const SuiteConfig& cfg, Rng& rng,
                         bool with_bias) {
  Instance inst;
  const std::size_t d = sample_range(rng, cfg.d, 1, 4);
  if (mech == Mechanism::bipartite) {
    const std::size_t n_x = sample_range(rng, cfg.n_x, 1, 6);
    const std::size_t n_y = sample_range(rng, cfg.n_y, 1, 6);
    inst.spec = Bipartite{n_x, n_y};
    inst.params = AttentionParams::random(d, rng, with_bias);
    inst.x = random_matrix(n_x, d, rng);
    inst.y = random_matrix(n_y, d, rng);
    return inst;
  }
  std::size_t n = sample_range(rng, cfg.n, 2, 8);
  switch (mech) {
    case Mechanism::full:
      inst.spec = Full{n};
      break;
    case Mechanism::causal:
      inst.spec = Causal{n};
      break;
    case Mechanism::strided: {
      const std::size_t p = cfg.p ? *cfg.p : 1 + static_cast<std::size_t>(rng.next_below(n));
      n = std::max(n, p);
      inst.spec = Strided{n, p};
      break;
    }
    case Mechanism::graph:
      inst.spec = cfg.custom ? CustomGraph{*cfg.custom}
                             : CustomGraph{random_graph(n, rng)};
      n = std::get<CustomGraph>(inst.spec).graph.n_vertices();
      break;
    default:
      throw std::logic_error("unreachable mechanism");
  }
  inst.params = AttentionParams::random(d, rng, with_bias);
  inst.x = random_matrix(n, d, rng);
  return inst;
}

double alpha_stochastic_violation(Mechanism mech, const SuiteConfig& cfg, Rng& rng,
                                  double tolerance) {
  const Instance inst = sample_instance(mech, cfg, rng, false);
  const AttentionOutput out = attend(inst.x, inst.params, inst.spec, inst.y);
  double v = 0.0;
  for (std::size_t i = 0; i < out.alpha.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < out.alpha.cols(); ++j) sum += out.alpha(i, j);
    v = std::max(v, std::fabs(sum - 1.0));
  }
  if (!std::holds_alternative<Bipartite>(inst.spec)) {
    const MaskMatrix mask = graph_to_mask(build_graph(inst.spec));
    for (std::size_t i = 0; i < mask.rows(); ++i) {
      for (std::size_t j = 0; j < mask.cols(); ++j) {
        if (!mask(i, j)) {
          v = std::max(v, exactness_violation(out.alpha(i, j), tolerance));
        }
      }
    }
  }
  return v;
}

double mask_zero_pattern_violation(const SuiteConfig& cfg, Rng& rng) {
  const std::size_t d = sample_range(rng, cfg.d, 1, 4);
  const std::size_t n = sample_range(rng, cfg.n, 2, 8);
  const RelationalGraph g = cfg.custom ? *cfg.custom : random_graph(n, rng);
  AttentionParams params = AttentionParams::random(d, rng, false);
  const Matrix x = random_matrix(g.n_vertices(), d, rng);
  const AttentionOutput out = attend(x, params, CustomGraph{g});
  double v = 0.0;
  for (std::size_t i = 0; i < g.n_vertices(); ++i) {
    for (std::size_t j = 0; j < g.n_vertices(); ++j) {
      const bool zero = out.alpha(i, j) == 0.0;
      if (g.edge(i, j) && zero) v = std::max(v, 1.0);
      if (!g.edge(i, j) && !zero) v = std::max(v, std::max(1.0, std::fabs(out.alpha(i, j))));
    }
  }
  return v;
}

double gradient_violation(Mechanism mech, const SuiteConfig& cfg, Rng& rng,
                          bool with_bias) {
  const Instance inst = sample_instance(mech, cfg, rng, with_bias);
  const std::size_t out_rows =
      inst.y ? inst.y->rows() : inst.x.rows();
  const Matrix upstream = random_matrix(out_rows, inst.params.d, rng);
  const AttentionGrads grads =
      attend_backward(inst.x, inst.params, inst.spec, inst.y, upstream);

  double v = 0.0;
  auto fd_check = [&](const Matrix& at, const Matrix& analytic, auto&& rebuild) {
    auto f = [&](const Matrix& m) {
      Instance probe = inst;
      rebuild(probe, m);
      return inner(upstream, attend(probe.x, probe.params, probe.spec, probe.y).h);
    };
    const Matrix fd = central_difference_grad(f, at);
    v = std::max(v, max_rel_err(fd, analytic));
  };

  fd_check(inst.x, grads.d_x, [](Instance& q, const Matrix& m) { q.x = m; });
  if (inst.y) {
    fd_check(*inst.y, *grads.d_y, [](Instance& q, const Matrix& m) { q.y = m; });
  }
  fd_check(inst.params.w_q, grads.d_wq,
           [](Instance& q, const Matrix& m) { q.params.w_q = m; });
  fd_check(inst.params.w_k, grads.d_wk,
           [](Instance& q, const Matrix& m) { q.params.w_k = m; });
  fd_check(inst.params.w_v, grads.d_wv,
           [](Instance& q, const Matrix& m) { q.params.w_v = m; });
  if (with_bias) {
    fd_check(*inst.params.b_q, *grads.d_bq,
             [](Instance& q, const Matrix& m) { q.params.b_q = m; });
    fd_check(*inst.params.b_k, *grads.d_bk,
             [](Instance& q, const Matrix& m) { q.params.b_k = m; });
    fd_check(*inst.params.b_v, *grads.d_bv,
             [](Instance& q, const Matrix& m) { q.params.b_v = m; });
  }
  return v;
}

PropertyReport order_structure_report(std::uint64_t seed) {
  std::size_t cases = 0;
  std::size_t failures = 0;
  auto expect = [&](bool got, bool want) {
    ++cases;
    if (got != want) ++failures;
  };
  for (std::size_t n = 1; n <= 10; ++n) {
    expect(verify_total_order(build_graph(Causal{n})), true);
    expect(verify_dag_of_proper_edges(build_graph(Causal{n})), true);
    // Full{1} coincides with Causal{1}; the non-order claim needs n >= 2.
    if (n >= 2) expect(verify_total_order(build_graph(Full{n})), false);
    for (std::size_t p = 1; p <= n; ++p) {
      expect(verify_dag_of_proper_edges(build_graph(Strided{n, p})), true);
      if (p < n) expect(verify_total_order(build_graph(Strided{n, p})), false);
    }
  }
  return make_report("order_structure", cases, 0.0,
                     static_cast<double>(failures), seed);
}

}  // namespace

std::pair<Matrix, std::optional<Matrix>> apply_action(const GroupAction& action,
                                                      const Matrix& x,
                                                      const std::optional<Matrix>& y) {
  return std::visit(
      [&](const auto& a) -> std::pair<Matrix, std::optional<Matrix>> {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Permutation>) {
          return {permute_rows(x, a.sigma), y};
        } else if constexpr (std::is_same_v<T, BlockPermutation>) {
          if (!y) {
            throw shape_error("apply_action: BlockPermutation requires y");
          }
          return {permute_rows(x, a.sigma_x), permute_rows(*y, a.sigma_y)};
        } else {
          static_assert(std::is_same_v<T, Shift>);
          return {x, y};
        }
      },
      action);
}

PropertyReport make_report(std::string name, std::size_t trials, double tolerance,
                           double max_violation, std::uint64_t seed) {
  PropertyReport r;
  r.name = std::move(name);
  r.trials = trials;
  r.tolerance = tolerance;
  r.max_violation = max_violation;
  r.pass = max_violation <= tolerance;
  r.seed = seed;
  return r;
}

PropertyReport check_permutation_equivariance(const AttentionParams& params,
                                              std::size_t n, std::size_t d,
                                              std::size_t trials, const Rng& rng) {
  if (n < 2) throw std::invalid_argument("check_permutation_equivariance: n >= 2");
  params.validate();
  return run_trials("permutation_equivariance", trials, 1e-10, rng.seed(), rng,
                    [&](Rng& r, std::size_t) {
                      const Matrix x = random_matrix(n, d, r);
                      const auto sigma = random_permutation(n, r);
                      return perm_equivariance_violation(params, x, sigma, Full{n});
                    });
}

PropertyReport check_block_permutation_equivariance(const AttentionParams& params,
                                                    std::size_t n_x, std::size_t n_y,
                                                    std::size_t d, std::size_t trials,
                                                    const Rng& rng) {
  if (n_x < 1 || n_y < 1) {
    throw std::invalid_argument("check_block_permutation_equivariance: n_x, n_y >= 1");
  }
  params.validate();
  return run_trials("block_permutation_equivariance", trials, 1e-10, rng.seed(), rng,
                    [&](Rng& r, std::size_t) {
                      const Matrix x = random_matrix(n_x, d, r);
                      const Matrix y = random_matrix(n_y, d, r);
                      const auto sx = random_permutation(n_x, r);
                      const auto sy = random_permutation(n_y, r);
                      return block_perm_violation(params, x, y, sx, sy);
                    });
}

PropertyReport check_translation_equivariance(const AttentionParams& params,
                                              std::size_t n, std::size_t p,
                                              std::size_t m, std::size_t d,
                                              std::size_t trials, const Rng& rng) {
  if (p < 1 || n < p) {
    throw std::invalid_argument("check_translation_equivariance: n >= p >= 1");
  }
  params.validate();
  return run_trials("translation_equivariance", trials, 1e-12, rng.seed(), rng,
                    [&](Rng& r, std::size_t) {
                      const Matrix x = random_matrix(n, d, r);
                      double v = prefix_causality_violation(params, x);
                      if (m > 0) {
                        v = std::max(v, strided_shift_violation(params, x, p, m, r));
                      }
                      return v;
                    });
}

PropertyReport check_hierarchy(const AttentionParams& params, std::size_t n,
                               std::size_t d, std::size_t trials, const Rng& rng) {
  if (n < 2) throw std::invalid_argument("check_hierarchy: n >= 2");
  params.validate();
  return run_trials("hierarchy_collapse", trials, 0.0, rng.seed(), rng,
                    [&](Rng& r, std::size_t) {
                      const Matrix x = random_matrix(n, d, r);
                      const std::size_t n_x =
                          1 + static_cast<std::size_t>(r.next_below(n - 1));
                      const std::size_t p =
                          1 + static_cast<std::size_t>(r.next_below(n));
                      return hierarchy_violation(params, x, n_x, p);
                    });
}

std::vector<PropertyReport> run_suite(std::optional<Mechanism> mechanism,
                                      const SuiteConfig& cfg) {
  std::vector<PropertyReport> reports;
  auto wanted = [&](std::initializer_list<Mechanism> mechs) {
    if (!mechanism) return true;
    return std::find(mechs.begin(), mechs.end(), *mechanism) != mechs.end();
  };
  auto trials_for = [&](std::size_t default_trials) {
    return cfg.trials > 0 ? cfg.trials : default_trials;
  };
  auto named_root = [&](const char* name) {
    return Rng(cfg.seed).split(fnv1a64(name));
  };
  auto add = [&](PropertyReport r) { reports.push_back(std::move(r)); };

  struct MechEntry {
    Mechanism mech;
    const char* stochastic_name;
    const char* gradient_name;
  };
  static const MechEntry kMechs[] = {
      {Mechanism::full, "alpha_row_stochastic_full", "gradient_check_full"},
      {Mechanism::causal, "alpha_row_stochastic_causal", "gradient_check_causal"},
      {Mechanism::strided, "alpha_row_stochastic_strided", "gradient_check_strided"},
      {Mechanism::bipartite, "alpha_row_stochastic_bipartite", "gradient_check_bipartite"},
      {Mechanism::graph, "alpha_row_stochastic_graph", "gradient_check_graph"},
  };

  for (const auto& entry : kMechs) {
    if (!wanted({entry.mech})) continue;
    add(run_trials(entry.stochastic_name, trials_for(100), 1e-12, cfg.seed,
                   named_root(entry.stochastic_name), [&](Rng& r, std::size_t) {
                     return alpha_stochastic_violation(entry.mech, cfg, r, 1e-12);
                   }));
  }

  if (wanted({Mechanism::graph})) {
    add(run_trials("mask_zero_pattern_custom_graphs", trials_for(50), 0.0, cfg.seed,
                   named_root("mask_zero_pattern_custom_graphs"),
                   [&](Rng& r, std::size_t) { return mask_zero_pattern_violation(cfg, r); }));
  }

  if (wanted({Mechanism::full})) {
    add(run_trials("permutation_equivariance_full", trials_for(100), 1e-10, cfg.seed,
                   named_root("permutation_equivariance_full"),
                   [&](Rng& r, std::size_t) {
                     const Instance inst = sample_instance(Mechanism::full, cfg, r, false);
                     const auto sigma = random_permutation(inst.x.rows(), r);
                     return perm_equivariance_violation(inst.params, inst.x, sigma,
                                                        inst.spec);
                   }));
  }

  if (wanted({Mechanism::bipartite})) {
    add(run_trials("block_permutation_equivariance_encdec", trials_for(100), 1e-10,
                   cfg.seed, named_root("block_permutation_equivariance_encdec"),
                   [&](Rng& r, std::size_t) {
                     const Instance inst =
                         sample_instance(Mechanism::bipartite, cfg, r, false);
                     const auto sx = random_permutation(inst.x.rows(), r);
                     const auto sy = random_permutation(inst.y->rows(), r);
                     return block_perm_violation(inst.params, inst.x, *inst.y, sx, sy);
                   }));
    add(run_trials("x_permutation_invariance_encdec", trials_for(100), 1e-12,
                   cfg.seed, named_root("x_permutation_invariance_encdec"),
                   [&](Rng& r, std::size_t) {
                     const Instance inst =
                         sample_instance(Mechanism::bipartite, cfg, r, false);
                     const auto sx = random_permutation(inst.x.rows(), r);
                     return x_perm_invariance_violation(inst.params, inst.x, *inst.y, sx);
                   }));
  }

  if (wanted({Mechanism::causal})) {
    add(run_trials("prefix_causality_causal", trials_for(100), 1e-12, cfg.seed,
                   named_root("prefix_causality_causal"), [&](Rng& r, std::size_t) {
                     const Instance inst =
                         sample_instance(Mechanism::causal, cfg, r, false);
                     return prefix_causality_violation(inst.params, inst.x);
                   }));
  }

  if (wanted({Mechanism::strided})) {
    add(run_trials("windowed_locality_strided", trials_for(100), 1e-12, cfg.seed,
                   named_root("windowed_locality_strided"), [&](Rng& r, std::size_t) {
                     const Instance inst =
                         sample_instance(Mechanism::strided, cfg, r, false);
                     const auto& s = std::get<Strided>(inst.spec);
                     return strided_locality_violation(inst.params, inst.x, s.p, r);
                   }));
    add(run_trials("shift_match_strided", trials_for(100), 1e-12, cfg.seed,
                   named_root("shift_match_strided"), [&](Rng& r, std::size_t) {
                     const Instance inst =
                         sample_instance(Mechanism::strided, cfg, r, false);
                     const auto& s = std::get<Strided>(inst.spec);
                     const std::size_t m = 1 + static_cast<std::size_t>(r.next_below(3));
                     return strided_shift_violation(inst.params, inst.x, s.p, m, r);
                   }));
  }

  if (!mechanism) {
    add(run_trials("hierarchy_collapse", trials_for(50), 0.0, cfg.seed,
                   named_root("hierarchy_collapse"), [&](Rng& r, std::size_t) {
                     const std::size_t d = sample_range(r, cfg.d, 1, 4);
                     const std::size_t n = sample_range(r, cfg.n, 2, 8);
                     const AttentionParams params = AttentionParams::random(d, r, false);
                     const Matrix x = random_matrix(n, d, r);
                     const std::size_t n_x =
                         1 + static_cast<std::size_t>(r.next_below(n - 1));
                     const std::size_t p = 1 + static_cast<std::size_t>(r.next_below(n));
                     return hierarchy_violation(params, x, n_x, p);
                   }));
    add(order_structure_report(cfg.seed));
  }

  for (const auto& entry : kMechs) {
    if (!wanted({entry.mech})) continue;
    add(run_trials(entry.gradient_name, trials_for(20), 1e-5, cfg.seed,
                   named_root(entry.gradient_name), [&](Rng& r, std::size_t t) {
                     return gradient_violation(entry.mech, cfg, r, t % 2 == 1);
                   }));
  }

  if (cfg.negative_control && wanted({Mechanism::causal})) {
    add(run_trials(kNegativeControlName, trials_for(100), 1e-10, cfg.seed,
                   named_root(kNegativeControlName), [&](Rng& r, std::size_t) {
                     const Instance inst =
                         sample_instance(Mechanism::causal, cfg, r, false);
                     std::vector<std::size_t> swap_ends(inst.x.rows());
                     for (std::size_t i = 0; i < swap_ends.size(); ++i) swap_ends[i] = i;
                     std::swap(swap_ends.front(), swap_ends.back());
                     return perm_equivariance_violation(inst.params, inst.x, swap_ends,
                                                        inst.spec);
                   }));
  }

  return reports;
}

}  // namespace attnbias
