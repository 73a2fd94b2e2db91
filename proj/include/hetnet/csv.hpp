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

#ifndef HETNET_CSV_HPP_
#define HETNET_CSV_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "hetnet/types.hpp"

namespace hetnet::csv {

/// Formats a value with the given number of significant digits.
std::string format(double value, int significant_digits = 12);

/// Writes a keyed matrix: header "corner,<col ids>", then "<row id>,<values>".
void write_matrix(std::ostream& out, const std::string& corner, const std::vector<int>& row_ids,
                  const std::vector<int>& col_ids, const Matrix& values,
                  int significant_digits = 12);

/// Reads a matrix written by write_matrix.
Matrix read_matrix(std::istream& in, std::vector<int>* row_ids, std::vector<int>* col_ids);

/// Splits one CSV line on commas (no quoting; none of our files need it).
std::vector<std::string> split(const std::string& line);

std::vector<std::vector<std::string>> read_rows(std::istream& in);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace hetnet::csv

#endif  // HETNET_CSV_HPP_
