// include/spdot/io.hpp

// Copyright 2026  The spdot Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

// File formats shared by the command-line tool and the bindings.
//
// Dataset JSON:
//   {"kind": "spd", "dim": d, "matrices": [[d*d row-major], ...], "labels": [...]}
//   {"kind": "timeseries", "channels": d, "samples": M,
//    "trials": [[d*M row-major], ...], "labels": [...]}
// "labels" is optional. Plans and sweeps are plain CSV. Floats are written
// with 17 significant digits.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spdot/errors.hpp"
#include "spdot/manifold.hpp"

namespace spdot::io {

enum class DatasetKind { kSpd, kTimeseries };

struct DatasetFile {
  DatasetKind kind = DatasetKind::kSpd;
  int dim = 0;      // matrix size, or channel count for time series
  int samples = 0;  // time series only
  std::vector<SpdMatrix> matrices;
  std::vector<Matrix> trials;
  std::optional<std::vector<int>> labels;

  std::size_t count() const {
    return kind == DatasetKind::kSpd ? matrices.size() : trials.size();
  }
};

/// Raised for unreadable or malformed input files. The message names the
/// file and the first offending record.
class InputError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

DatasetFile parse_dataset(std::string_view text, const std::string& origin);
DatasetFile load_dataset(const std::filesystem::path& path);

std::string dump_dataset(const DatasetFile& data);
void save_dataset(const std::filesystem::path& path, const DatasetFile& data);

std::string format_double(double value);

std::string plan_to_csv(const Matrix& gamma);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Comma-separated records without quoting. Every row must have the width of
/// the header (or of the first row when there is none).
CsvTable parse_csv(std::string_view text, const std::string& origin, bool has_header);
double parse_number(const std::string& field, const std::string& origin, std::size_t row);
/// Headerless numeric CSV, e.g. a plan.
Matrix parse_csv_matrix(std::string_view text, const std::string& origin);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace spdot::io
