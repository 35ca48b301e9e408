#include "attnbias/emit.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

namespace attnbias {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out.push_back(',');
      out += format_double(m(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

std::string mask_to_csv(const MaskMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out.push_back(',');
      out.push_back(m(i, j) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

std::string graph_to_dot(const RelationalGraph& g) {
  std::string out = "digraph relational_graph {\n";
  for (std::size_t i = 0; i < g.n_vertices(); ++i) {
    out += "  x" + std::to_string(i) + ";\n";
  }
  for (std::size_t i = 0; i < g.n_vertices(); ++i) {
    for (std::size_t j = 0; j < g.n_vertices(); ++j) {
      if (g.edge(i, j)) {
        out += "  x" + std::to_string(i) + " -> x" + std::to_string(j) + ";\n";
      }
    }
  }
  out += "}\n";
  return out;
}

std::string bipartite_to_dot(std::size_t n_x, std::size_t n_y) {
  std::string out = "digraph relational_graph {\n";
  out += "  { rank=same;";
  for (std::size_t i = 0; i < n_x; ++i) out += " x" + std::to_string(i) + ";";
  out += " }\n";
  out += "  { rank=same;";
  for (std::size_t i = 0; i < n_y; ++i) out += " y" + std::to_string(i) + ";";
  out += " }\n";
  for (std::size_t i = 0; i < n_y; ++i) {
    for (std::size_t j = 0; j < n_x; ++j) {
      out += "  y" + std::to_string(i) + " -> x" + std::to_string(j) + ";\n";
    }
  }
  out += "}\n";
  return out;
}

RelationalGraph parse_adjacency_csv(const std::string& text) {
  std::vector<std::vector<bool>> rows;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<bool> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      const std::string cell = line.substr(pos, comma - pos);
      if (cell == "0") {
        row.push_back(false);
      } else if (cell == "1") {
        row.push_back(true);
      } else {
        throw parse_error("adjacency: line " + std::to_string(line_no) +
                          ": expected 0 or 1, got \"" + cell + "\"");
      }
      pos = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw parse_error("adjacency: file holds no rows");
  }
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw parse_error("adjacency: not square: row " + std::to_string(i + 1) +
                        " has " + std::to_string(rows[i].size()) +
                        " columns, expected " + std::to_string(n));
    }
  }
  MaskMatrix adj(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) adj.set(i, j, rows[i][j]);
  }
  return RelationalGraph(adj);  // empty_neighborhood_error names the vertex
}

RelationalGraph load_adjacency(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw parse_error("adjacency: cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_adjacency_csv(buf.str());
}

std::string report_to_json(std::uint64_t seed,
                           const std::vector<PropertyReport>& checks) {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["seed"] = seed;
  doc["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    doc["checks"].push_back({{"name", c.name},
                             {"trials", c.trials},
                             {"tolerance", c.tolerance},
                             {"max_violation", c.max_violation},
                             {"pass", c.pass}});
  }
  return doc.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::system_error(errno, std::generic_category(),
                            "cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw std::system_error(errno, std::generic_category(),
                            "short write to " + path.string());
  }
}

}  // namespace

void emit_artifacts(const std::filesystem::path& out_dir, const EmitInputs& inputs) {
  const AttentionOutput out = attend(inputs.x, inputs.params, inputs.spec, inputs.y);
  const RelationalGraph graph = build_graph(inputs.spec);

  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "alpha.csv", matrix_to_csv(out.alpha));
  write_file(out_dir / "mask.csv", mask_to_csv(graph_to_mask(graph)));
  if (const auto* bip = std::get_if<Bipartite>(&inputs.spec)) {
    write_file(out_dir / "graph.dot", bipartite_to_dot(bip->n_x, bip->n_y));
  } else {
    write_file(out_dir / "graph.dot", graph_to_dot(graph));
  }
}

}  // namespace attnbias
