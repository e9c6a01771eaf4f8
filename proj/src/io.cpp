#include "dagbuild/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace dagbuild {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("short write to " + path);
}

bool has_csv_extension(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string edge_list_to_string(const WeightedDag& dag) {
  std::ostringstream out;
  out << "# nodes: " << dag.n << "\n";
  for (int i = 0; i < dag.n; ++i) {
    for (int j = 0; j < dag.n; ++j) {
      if (dag.weights(i, j) != 0.0) {
        out << i << '\t' << j << '\t' << format_double(dag.weights(i, j))
            << '\n';
      }
    }
  }
  return out.str();
}

WeightedDag edge_list_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int declared_n = -1;
  struct Edge {
    int child;
    int parent;
    double weight;
  };
  std::vector<Edge> edges;
  int max_id = -1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream header(line.substr(1));
      std::string key;
      header >> key;
      if (key == "nodes:") header >> declared_n;
      continue;
    }
    std::istringstream fields(line);
    Edge e{};
    if (!(fields >> e.child >> e.parent >> e.weight))
      throw IoError("edge list: malformed line " + std::to_string(line_no));
    if (e.child < 0 || e.parent < 0)
      throw IoError("edge list: negative node id on line " +
                    std::to_string(line_no));
    max_id = std::max(max_id, std::max(e.child, e.parent));
    edges.push_back(e);
  }
  const int n = declared_n >= 0 ? declared_n : max_id + 1;
  if (max_id >= n)
    throw IoError("edge list: node id exceeds declared node count");
  WeightedDag dag(std::max(n, 0));
  for (const Edge& e : edges) dag.weights(e.child, e.parent) = e.weight;
  return dag;
}

void write_edge_list(const WeightedDag& dag, const std::string& path) {
  write_file(path, edge_list_to_string(dag));
}

WeightedDag read_edge_list(const std::string& path) {
  return edge_list_from_string(read_file(path));
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
  write_file(path, out.str());
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("matrix csv: bad cell '" + cell + "' in " + path);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("matrix csv: ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index m = n > 0 ? static_cast<Eigen::Index>(rows.front().size()) : 0;
  Eigen::MatrixXd out(n, m);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      out(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return out;
}

void write_matrix_bin(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  const std::int64_t dims[2] = {static_cast<std::int64_t>(m.rows()),
                                static_cast<std::int64_t>(m.cols())};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }
  }
  if (!out) throw IoError("short write to " + path);
}

Eigen::MatrixXd read_matrix_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::int64_t dims[2] = {0, 0};
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!in || dims[0] < 0 || dims[1] < 0)
    throw IoError("matrix bin: bad header in " + path);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(dims[0]),
                      static_cast<Eigen::Index>(dims[1]));
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      double v = 0.0;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      out(r, c) = v;
    }
  }
  if (!in) throw IoError("matrix bin: truncated data in " + path);
  return out;
}

void write_matrix(const Eigen::MatrixXd& m, const std::string& path) {
  if (has_csv_extension(path))
    write_matrix_csv(m, path);
  else
    write_matrix_bin(m, path);
}

Eigen::MatrixXd read_matrix(const std::string& path) {
  if (has_csv_extension(path)) return read_matrix_csv(path);
  return read_matrix_bin(path);
}

}  // namespace dagbuild
