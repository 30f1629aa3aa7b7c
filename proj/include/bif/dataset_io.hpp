#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "bif/environment.hpp"

namespace bif {

// Parse failure in a dataset CSV; line is 1-based, 0 for file-scope problems
// (missing file, bad header, incomplete grid coverage).
struct DatasetParseError : std::runtime_error {
  DatasetParseError(std::string path, int line_no, const std::string& what)
      : std::runtime_error(path + (line_no > 0 ? ":" + std::to_string(line_no) : "") + ": " +
                           what),
        file(std::move(path)),
        line(line_no) {}

  std::string file;
  int line;
};

// Reads the dataset format documented in the README: header
// `dim0,...,parent,child0,...`, one row per joint grid state, grid inferred
// from the distinct coordinate values.
std::unique_ptr<Environment> load_env_csv(const std::string& path, double beta = 0.0);

// Enumerates env's grid and writes its noiseless parent and child responses
// in the same format.
void generate_dataset_file(const Environment& env, const std::string& path);

}  // namespace bif
