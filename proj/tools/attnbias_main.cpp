// attnbias command line: property verification and figure-style artifacts
// for attention mechanisms viewed as masked message passing.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "attnbias/emit.hpp"
#include "attnbias/equivariance.hpp"

namespace {

using namespace attnbias;

struct Options {
  std::string mechanism;
  std::size_t n = 4;
  std::size_t d = 2;
  std::size_t p = 0;
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  std::string adjacency;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::string out_dir = ".";
  bool negative_control = false;
  // set after parsing from option counts
  bool n_given = false;
  bool d_given = false;
  bool seed_given = false;
};

int usage_error(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  return 2;
}

std::optional<Mechanism> parse_mechanism(const std::string& name) {
  if (name == "full") return Mechanism::full;
  if (name == "causal") return Mechanism::causal;
  if (name == "strided") return Mechanism::strided;
  if (name == "bipartite") return Mechanism::bipartite;
  if (name == "graph") return Mechanism::graph;
  return std::nullopt;
}

// --seed wins; otherwise ATTNBIAS_SEED; otherwise 0.
int resolve_seed(Options& opt) {
  if (opt.seed_given) return 0;
  const char* env = std::getenv("ATTNBIAS_SEED");
  if (env == nullptr) return 0;
  const std::string text(env);
  auto res = std::from_chars(text.data(), text.data() + text.size(), opt.seed);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    return usage_error("ATTNBIAS_SEED is not a valid unsigned integer: " + text);
  }
  return 0;
}

// Mechanism-specific flags must match the mechanism; --p is required for
// strided, --nx/--ny for bipartite, --adjacency for graph (emit only).
int validate_flags(const Options& opt, const std::optional<Mechanism>& mech,
                   bool adjacency_required) {
  const bool strided = mech && *mech == Mechanism::strided;
  const bool bipartite = mech && *mech == Mechanism::bipartite;
  const bool graph = mech && *mech == Mechanism::graph;
  if (opt.p != 0 && !strided) return usage_error("--p is only valid with --mechanism strided");
  if (strided && opt.p == 0) return usage_error("--mechanism strided requires --p");
  if ((opt.n_x != 0 || opt.n_y != 0) && !bipartite) {
    return usage_error("--nx/--ny are only valid with --mechanism bipartite");
  }
  if (bipartite && (opt.n_x == 0 || opt.n_y == 0)) {
    return usage_error("--mechanism bipartite requires --nx and --ny");
  }
  if (!opt.adjacency.empty() && !graph) {
    return usage_error("--adjacency is only valid with --mechanism graph");
  }
  if (graph && adjacency_required && opt.adjacency.empty()) {
    return usage_error("--mechanism graph requires --adjacency");
  }
  return 0;
}

int run_verify(Options& opt) {
  std::optional<Mechanism> mech;
  if (!opt.mechanism.empty()) {
    mech = parse_mechanism(opt.mechanism);
    if (!mech) return usage_error("unknown mechanism: " + opt.mechanism);
  }
  if (int rc = validate_flags(opt, mech, /*adjacency_required=*/false); rc != 0) return rc;
  if (int rc = resolve_seed(opt); rc != 0) return rc;

  SuiteConfig cfg;
  cfg.seed = opt.seed;
  cfg.trials = opt.trials;
  if (opt.n_given) cfg.n = opt.n;
  if (opt.d_given) cfg.d = opt.d;
  if (opt.p != 0) cfg.p = opt.p;
  if (opt.n_x != 0) cfg.n_x = opt.n_x;
  if (opt.n_y != 0) cfg.n_y = opt.n_y;
  cfg.negative_control = opt.negative_control;
  if (!opt.adjacency.empty()) {
    cfg.custom = load_adjacency(opt.adjacency);
  }

  const auto reports = run_suite(mech, cfg);

  bool all_pass = true;
  bool control_ok = true;
  for (const auto& r : reports) {
    if (r.name == kNegativeControlName) {
      control_ok = r.max_violation > kNegativeControlThreshold;
      std::printf("[%s] %s trials=%zu max_violation=%s (control: expected to exceed %s)\n",
                  control_ok ? "PASS" : "FAIL", r.name.c_str(), r.trials,
                  format_double(r.max_violation).c_str(),
                  format_double(kNegativeControlThreshold).c_str());
    } else {
      all_pass = all_pass && r.pass;
      std::printf("[%s] %s trials=%zu max_violation=%s tolerance=%s\n",
                  r.pass ? "PASS" : "FAIL", r.name.c_str(), r.trials,
                  format_double(r.max_violation).c_str(),
                  format_double(r.tolerance).c_str());
    }
  }

  std::filesystem::create_directories(opt.out_dir);
  const auto report_path = std::filesystem::path(opt.out_dir) / "report.json";
  std::ofstream out(report_path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", report_path.string().c_str());
    return 1;
  }
  out << report_to_json(opt.seed, reports);
  out.close();

  return (all_pass && control_ok) ? 0 : 1;
}

int run_emit(Options& opt) {
  if (opt.mechanism.empty()) return usage_error("emit requires --mechanism");
  const auto mech = parse_mechanism(opt.mechanism);
  if (!mech) return usage_error("unknown mechanism: " + opt.mechanism);
  if (int rc = validate_flags(opt, mech, /*adjacency_required=*/true); rc != 0) return rc;
  if (int rc = resolve_seed(opt); rc != 0) return rc;
  if (opt.d == 0) return usage_error("--d must be >= 1");
  if (opt.n == 0 && *mech != Mechanism::bipartite && *mech != Mechanism::graph) {
    return usage_error("--n must be >= 1");
  }

  // Seed substreams: 0 -> parameters, 1 -> x, 2 -> y.
  const Rng root(opt.seed);
  Rng params_rng = root.split(0);
  Rng x_rng = root.split(1);

  EmitInputs inputs;
  inputs.params = AttentionParams::random(opt.d, params_rng, false);
  switch (*mech) {
    case Mechanism::full:
      inputs.spec = Full{opt.n};
      inputs.x = random_matrix(opt.n, opt.d, x_rng);
      break;
    case Mechanism::causal:
      inputs.spec = Causal{opt.n};
      inputs.x = random_matrix(opt.n, opt.d, x_rng);
      break;
    case Mechanism::strided:
      inputs.spec = Strided{opt.n, opt.p};
      inputs.x = random_matrix(opt.n, opt.d, x_rng);
      break;
    case Mechanism::bipartite: {
      inputs.spec = Bipartite{opt.n_x, opt.n_y};
      inputs.x = random_matrix(opt.n_x, opt.d, x_rng);
      Rng y_rng = root.split(2);
      inputs.y = random_matrix(opt.n_y, opt.d, y_rng);
      break;
    }
    case Mechanism::graph: {
      RelationalGraph g = load_adjacency(opt.adjacency);
      inputs.x = random_matrix(g.n_vertices(), opt.d, x_rng);
      inputs.spec = CustomGraph{std::move(g)};
      break;
    }
  }

  emit_artifacts(opt.out_dir, inputs);
  std::printf("wrote alpha.csv, mask.csv, graph.dot to %s\n", opt.out_dir.c_str());
  return 0;
}

struct SubcommandFlags {
  CLI::Option* n = nullptr;
  CLI::Option* d = nullptr;
  CLI::Option* seed = nullptr;
};

SubcommandFlags add_common_flags(CLI::App* cmd, Options& opt) {
  SubcommandFlags flags;
  cmd->add_option("--mechanism", opt.mechanism,
                  "full | causal | strided | bipartite | graph");
  flags.n = cmd->add_option("--n", opt.n, "entity count");
  flags.d = cmd->add_option("--d", opt.d, "model width");
  cmd->add_option("--p", opt.p, "strided window (attended predecessors incl. self)");
  cmd->add_option("--nx", opt.n_x, "encoder entity count (bipartite)");
  cmd->add_option("--ny", opt.n_y, "decoder entity count (bipartite)");
  cmd->add_option("--adjacency", opt.adjacency, "0/1 CSV adjacency file (graph)");
  flags.seed = cmd->add_option("--seed", opt.seed, "PRNG seed (fallback: ATTNBIAS_SEED)");
  cmd->add_option("--trials", opt.trials, "override per-check trial counts");
  cmd->add_option("--out", opt.out_dir, "output directory");
  return flags;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attention relational-bias verifier and artifact emitter"};
  app.require_subcommand(1);

  Options verify_opt;
  Options emit_opt;

  CLI::App* verify = app.add_subcommand("verify", "run property checks, write report.json");
  const SubcommandFlags verify_flags = add_common_flags(verify, verify_opt);
  verify->add_flag("--negative-control", verify_opt.negative_control,
                   "include the causal permutation counterexample");

  CLI::App* emit = app.add_subcommand("emit", "write alpha.csv, mask.csv, graph.dot");
  const SubcommandFlags emit_flags = add_common_flags(emit, emit_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  verify_opt.n_given = verify_flags.n->count() > 0;
  verify_opt.d_given = verify_flags.d->count() > 0;
  verify_opt.seed_given = verify_flags.seed->count() > 0;
  emit_opt.n_given = emit_flags.n->count() > 0;
  emit_opt.d_given = emit_flags.d->count() > 0;
  emit_opt.seed_given = emit_flags.seed->count() > 0;

  try {
    if (verify->parsed()) return run_verify(verify_opt);
    return run_emit(emit_opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
