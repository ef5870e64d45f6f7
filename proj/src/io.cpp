// src/io.cpp

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

#include "spdot/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include <openssl/evp.h>

namespace spdot::io {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw InputError(origin + ": " + what);
}

int require_positive_int(const json& doc, const char* key, const std::string& origin) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 1) {
    fail(origin, std::string("\"") + key + "\" must be a positive integer");
  }
  return doc[key].get<int>();
}

std::vector<double> numbers(const json& record, std::size_t expected, const std::string& origin,
                            const std::string& where) {
  if (!record.is_array()) fail(origin, where + ": expected an array of numbers");
  if (record.size() != expected) {
    fail(origin, where + ": expected " + std::to_string(expected) + " values, got " +
                     std::to_string(record.size()));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const json& v : record) {
    if (!v.is_number()) fail(origin, where + ": non-numeric entry");
    out.push_back(v.get<double>());
  }
  return out;
}

Matrix row_major(const std::vector<double>& values, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  }
  return m;
}

void write_row_major(std::ostream& os, const Matrix& m) {
  os << '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != 0 || j != 0) os << ", ";
      os << format_double(m(i, j));
    }
  }
  os << ']';
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

DatasetFile parse_dataset(std::string_view text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, std::string("not valid JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) fail(origin, "top level must be a JSON object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    fail(origin, "missing string field \"kind\"");
  }

  DatasetFile out;
  const std::string kind = doc["kind"].get<std::string>();
  const char* records_key = nullptr;
  if (kind == "spd") {
    out.kind = DatasetKind::kSpd;
    out.dim = require_positive_int(doc, "dim", origin);
    records_key = "matrices";
  } else if (kind == "timeseries") {
    out.kind = DatasetKind::kTimeseries;
    out.dim = require_positive_int(doc, "channels", origin);
    out.samples = require_positive_int(doc, "samples", origin);
    records_key = "trials";
  } else {
    fail(origin, "unknown kind \"" + kind + "\"");
  }
  if (!doc.contains(records_key) || !doc[records_key].is_array()) {
    fail(origin, std::string("missing array \"") + records_key + "\"");
  }
  const json& records = doc[records_key];
  if (records.empty()) fail(origin, std::string("\"") + records_key + "\" is empty");

  for (std::size_t r = 0; r < records.size(); ++r) {
    const std::string where = std::string(records_key) + "[" + std::to_string(r) + "]";
    if (out.kind == DatasetKind::kSpd) {
      const auto values = numbers(records[r], static_cast<std::size_t>(out.dim) * out.dim,
                                  origin, where);
      try {
        out.matrices.emplace_back(row_major(values, out.dim, out.dim));
      } catch (const Error& e) {
        fail(origin, where + ": " + e.what());
      }
    } else {
      const auto values = numbers(records[r], static_cast<std::size_t>(out.dim) * out.samples,
                                  origin, where);
      out.trials.push_back(row_major(values, out.dim, out.samples));
    }
  }

  if (doc.contains("labels") && !doc["labels"].is_null()) {
    const json& labels = doc["labels"];
    if (!labels.is_array()) fail(origin, "\"labels\" must be an array of integers");
    if (labels.size() != records.size()) {
      fail(origin, "\"labels\" has " + std::to_string(labels.size()) + " entries for " +
                       std::to_string(records.size()) + " records");
    }
    std::vector<int> values;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!labels[i].is_number_integer()) {
        fail(origin, "labels[" + std::to_string(i) + "]: not an integer");
      }
      values.push_back(labels[i].get<int>());
    }
    out.labels = std::move(values);
  }
  return out;
}

DatasetFile load_dataset(const std::filesystem::path& path) {
  return parse_dataset(read_file(path), path.string());
}

std::string dump_dataset(const DatasetFile& data) {
  std::ostringstream os;
  os << "{\n";
  if (data.kind == DatasetKind::kSpd) {
    os << "  \"kind\": \"spd\",\n  \"dim\": " << data.dim << ",\n  \"matrices\": [";
    for (std::size_t r = 0; r < data.matrices.size(); ++r) {
      os << (r == 0 ? "\n    " : ",\n    ");
      write_row_major(os, data.matrices[r].matrix());
    }
  } else {
    os << "  \"kind\": \"timeseries\",\n  \"channels\": " << data.dim
       << ",\n  \"samples\": " << data.samples << ",\n  \"trials\": [";
    for (std::size_t r = 0; r < data.trials.size(); ++r) {
      os << (r == 0 ? "\n    " : ",\n    ");
      write_row_major(os, data.trials[r]);
    }
  }
  os << "\n  ]";
  if (data.labels) {
    os << ",\n  \"labels\": [";
    for (std::size_t i = 0; i < data.labels->size(); ++i) {
      if (i != 0) os << ", ";
      os << (*data.labels)[i];
    }
    os << "]";
  }
  os << "\n}\n";
  return os.str();
}

void save_dataset(const std::filesystem::path& path, const DatasetFile& data) {
  write_file(path, dump_dataset(data));
}

std::string plan_to_csv(const Matrix& gamma) {
  std::string out;
  for (Eigen::Index i = 0; i < gamma.rows(); ++i) {
    for (Eigen::Index j = 0; j < gamma.cols(); ++j) {
      if (j != 0) out += ',';
      out += format_double(gamma(i, j));
    }
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(std::string_view text, const std::string& origin, bool has_header) {
  CsvTable table;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    while (true) {
      const std::size_t comma = line.find(',');
      fields.emplace_back(line.substr(0, comma));
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (has_header && line_no == 1) {
      table.header = std::move(fields);
      continue;
    }
    const std::size_t width =
        !table.header.empty() ? table.header.size()
                              : (table.rows.empty() ? fields.size() : table.rows[0].size());
    if (fields.size() != width) {
      fail(origin, "line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                       " fields, got " + std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

double parse_number(const std::string& field, const std::string& origin, std::size_t row) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    fail(origin, "row " + std::to_string(row) + ": bad number \"" + field + "\"");
  }
  return v;
}

Matrix parse_csv_matrix(std::string_view text, const std::string& origin) {
  const CsvTable table = parse_csv(text, origin, false);
  if (table.rows.empty()) fail(origin, "no rows");
  Matrix m(static_cast<Eigen::Index>(table.rows.size()),
           static_cast<Eigen::Index>(table.rows[0].size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = 0; j < table.rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_number(table.rows[i][j], origin, i);
    }
  }
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw InputError(path.string() + ": write failed");
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalFailure("sha256_hex: digest computation failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

}  // namespace spdot::io
