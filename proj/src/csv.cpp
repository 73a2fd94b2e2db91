// Copyright 2026 The hetnet-assoc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hetnet/csv.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hetnet::csv {

std::string format(double value, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
  return buf;
}

void write_matrix(std::ostream& out, const std::string& corner, const std::vector<int>& row_ids,
                  const std::vector<int>& col_ids, const Matrix& values,
                  int significant_digits) {
  if (static_cast<Eigen::Index>(row_ids.size()) != values.rows() ||
      static_cast<Eigen::Index>(col_ids.size()) != values.cols()) {
    throw InvalidInput("matrix shape does not match its ids");
  }
  out << corner;
  for (int id : col_ids) out << ',' << id;
  out << '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    out << row_ids[r];
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      out << ',' << format(values(r, c), significant_digits);
    }
    out << '\n';
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split(line));
  }
  return rows;
}

Matrix read_matrix(std::istream& in, std::vector<int>* row_ids, std::vector<int>* col_ids) {
  const auto rows = read_rows(in);
  if (rows.empty()) throw InvalidInput("empty CSV matrix");
  const auto& header = rows.front();
  const auto cols = static_cast<Eigen::Index>(header.size()) - 1;
  Matrix m(static_cast<Eigen::Index>(rows.size()) - 1, cols);
  std::vector<int> cids, rids;
  try {
    for (Eigen::Index c = 0; c < cols; ++c) cids.push_back(std::stoi(header[c + 1]));
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (static_cast<Eigen::Index>(rows[r].size()) != cols + 1) {
        throw InvalidInput("ragged CSV row " + std::to_string(r));
      }
      rids.push_back(std::stoi(rows[r][0]));
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(static_cast<Eigen::Index>(r) - 1, c) = std::stod(rows[r][c + 1]);
      }
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const InvalidInput*>(&e) != nullptr) throw;
    throw InvalidInput(std::string("malformed CSV number: ") + e.what());
  }
  if (row_ids) *row_ids = std::move(rids);
  if (col_ids) *col_ids = std::move(cids);
  return m;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << contents;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace hetnet::csv
