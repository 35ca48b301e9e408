#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "attnbias/attention.hpp"
#include "attnbias/equivariance.hpp"
#include "attnbias/graph.hpp"
#include "attnbias/matrix.hpp"

namespace attnbias {

// Shortest decimal representation that round-trips the double (never more
// than 17 significant digits).
std::string format_double(double v);

// Comma-separated, no header, LF line endings.
std::string matrix_to_csv(const Matrix& m);
std::string mask_to_csv(const MaskMatrix& m);

// Directed graph, nodes x0.., one edge line per kept mask entry in row-major
// order.
std::string graph_to_dot(const RelationalGraph& g);

// Bipartite form: x*/y* nodes in two ranks and only the Y->X edges. The
// synthetic X self-loops of the square convention are an implementation
// device, not relations, and are left out of the drawing.
std::string bipartite_to_dot(std::size_t n_x, std::size_t n_y);

// Square 0/1 CSV -> graph. Raises parse_error on non-square, non-binary or
// unreadable input; an all-zero row surfaces as empty_neighborhood_error.
RelationalGraph load_adjacency(const std::filesystem::path& path);
RelationalGraph parse_adjacency_csv(const std::string& text);

// report.json: {"version": 1, "seed": ..., "checks": [...]}.
std::string report_to_json(std::uint64_t seed,
                           const std::vector<PropertyReport>& checks);

// Writes alpha.csv, mask.csv and graph.dot for one concrete instance.
struct EmitInputs {
  MechanismSpec spec;
  AttentionParams params;
  Matrix x;
  std::optional<Matrix> y;
};

void emit_artifacts(const std::filesystem::path& out_dir, const EmitInputs& inputs);

}  // namespace attnbias
