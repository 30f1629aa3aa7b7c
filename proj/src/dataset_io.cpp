#include "bif/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace bif {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, const std::string& path, int line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw DatasetParseError(path, line_no, "non-numeric field '" + field + "'");
  return value;
}

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string describe_state(const Grid& grid, int flat) {
  std::string s = "(";
  for (int d = 0; d < grid.dims(); ++d) {
    if (d > 0) s += ", ";
    s += format_coord(grid.coord(d, grid.component(flat, d)));
  }
  return s + ")";
}

}  // namespace

std::unique_ptr<Environment> load_env_csv(const std::string& path, double beta) {
  std::ifstream in(path);
  if (!in) throw DatasetParseError(path, 0, "cannot open file");

  std::string line;
  if (!std::getline(in, line)) throw DatasetParseError(path, 0, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_csv(line);
  int dims = 0;
  while (dims < static_cast<int>(header.size()) && header[dims] == "dim" + std::to_string(dims))
    ++dims;
  const int expected_cols = 2 * dims + 1;
  if (dims == 0 || static_cast<int>(header.size()) != expected_cols ||
      header[dims] != "parent")
    throw DatasetParseError(path, 1,
                            "header must read dim0,..,parent,child0,.. with matching counts");
  for (int d = 0; d < dims; ++d) {
    if (header[dims + 1 + d] != "child" + std::to_string(d))
      throw DatasetParseError(path, 1, "expected column child" + std::to_string(d));
  }

  struct Row {
    std::vector<double> coords;
    double parent;
    std::vector<double> children;
    int line_no;
  };
  std::vector<Row> rows;
  std::vector<std::set<double>> axis_values(dims);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (static_cast<int>(fields.size()) != expected_cols)
      throw DatasetParseError(path, line_no,
                              "expected " + std::to_string(expected_cols) + " fields, found " +
                                  std::to_string(fields.size()));
    Row row;
    row.line_no = line_no;
    for (int d = 0; d < dims; ++d) {
      row.coords.push_back(parse_number(fields[d], path, line_no));
      axis_values[d].insert(row.coords.back());
    }
    row.parent = parse_number(fields[dims], path, line_no);
    for (int d = 0; d < dims; ++d)
      row.children.push_back(parse_number(fields[dims + 1 + d], path, line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DatasetParseError(path, 0, "no data rows");

  std::vector<std::vector<double>> axes(dims);
  std::vector<std::map<double, int>> axis_index(dims);
  for (int d = 0; d < dims; ++d) {
    axes[d].assign(axis_values[d].begin(), axis_values[d].end());
    for (int i = 0; i < static_cast<int>(axes[d].size()); ++i) axis_index[d][axes[d][i]] = i;
  }
  Grid grid(axes);

  std::vector<double> parent_rows(grid.size());
  std::vector<int> seen_at(grid.size(), 0);  // line number of the first row per state
  // Child responses keyed by axis index; rows sharing an axis value are
  // averaged (they coincide for files written by generate_dataset_file).
  std::vector<std::vector<double>> child_sum(dims), child_cnt(dims);
  for (int d = 0; d < dims; ++d) {
    child_sum[d].assign(grid.axis_size(d), 0.0);
    child_cnt[d].assign(grid.axis_size(d), 0.0);
  }

  for (const Row& row : rows) {
    std::vector<int> idx(dims);
    for (int d = 0; d < dims; ++d) idx[d] = axis_index[d].at(row.coords[d]);
    const int flat = grid.flatten(idx);
    if (seen_at[flat] != 0)
      throw DatasetParseError(path, row.line_no,
                              "duplicate state " + describe_state(grid, flat) +
                                  " (first seen on line " + std::to_string(seen_at[flat]) + ")");
    seen_at[flat] = row.line_no;
    parent_rows[flat] = row.parent;
    for (int d = 0; d < dims; ++d) {
      child_sum[d][idx[d]] += row.children[d];
      child_cnt[d][idx[d]] += 1.0;
    }
  }
  for (int flat = 0; flat < grid.size(); ++flat) {
    if (seen_at[flat] == 0)
      throw DatasetParseError(path, 0, "missing state " + describe_state(grid, flat));
  }

  std::vector<std::vector<double>> child_rows(dims);
  for (int d = 0; d < dims; ++d) {
    child_rows[d].resize(grid.axis_size(d));
    for (int i = 0; i < grid.axis_size(d); ++i) child_rows[d][i] = child_sum[d][i] / child_cnt[d][i];
  }
  return std::make_unique<DatasetEnv>(std::move(grid), std::move(parent_rows),
                                      std::move(child_rows), beta);
}

void generate_dataset_file(const Environment& env, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("generate_dataset_file: cannot open " + path);

  const Grid& grid = env.grid();
  for (int d = 0; d < grid.dims(); ++d) out << "dim" << d << ",";
  out << "parent";
  for (int d = 0; d < grid.dims(); ++d) out << ",child" << d;
  out << "\n";

  for (int flat = 0; flat < grid.size(); ++flat) {
    for (int d = 0; d < grid.dims(); ++d)
      out << format_coord(grid.coord(d, grid.component(flat, d))) << ",";
    out << format_coord(env.parent_value(flat));
    for (int d = 0; d < grid.dims(); ++d)
      out << "," << format_coord(env.child_value(d, grid.component(flat, d)));
    out << "\n";
  }
  if (!out) throw std::runtime_error("generate_dataset_file: write failed for " + path);
}

}  // namespace bif
