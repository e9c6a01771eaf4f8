#pragma once

#include <Eigen/Dense>
#include <string>

#include "dagbuild/dag.hpp"

namespace dagbuild {

// Edge-list text format: one line per edge, tab-separated
// child<TAB>parent<TAB>weight, weight printed with 17 significant digits so
// the round trip is bit exact. Lines starting with '#' are comments; the
// writer emits "# nodes: N" so isolated nodes survive the trip.
std::string edge_list_to_string(const WeightedDag& dag);
WeightedDag edge_list_from_string(const std::string& text);
void write_edge_list(const WeightedDag& dag, const std::string& path);
WeightedDag read_edge_list(const std::string& path);

// Matrix dumps: CSV is row-major, one row per line, comma separated, 17
// significant digits. The binary form is two little-endian int64 dimensions
// followed by row-major doubles. write/read_matrix pick the format from the
// file extension (.csv vs anything else).
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);
Eigen::MatrixXd read_matrix_csv(const std::string& path);
void write_matrix_bin(const Eigen::MatrixXd& m, const std::string& path);
Eigen::MatrixXd read_matrix_bin(const std::string& path);
void write_matrix(const Eigen::MatrixXd& m, const std::string& path);
Eigen::MatrixXd read_matrix(const std::string& path);

// printf-style %.17g, the library-wide float-to-text convention
std::string format_double(double value);

}  // namespace dagbuild
