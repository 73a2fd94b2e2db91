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

#include "hetnet/assoc_core.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "hetnet/csv.hpp"
#include "hetnet/local_policy.hpp"

namespace hetnet {

Fairness::Fairness(double gamma) : gamma_(gamma) {
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    throw InvalidInput("fairness gamma must be a finite value >= 1");
  }
}

Instance::Instance(Matrix r, IntVector s)
    : rates(std::move(r)), streams(std::move(s)) {
  allowed = BoolMatrix::Constant(rates.rows(), rates.cols(), true);
}

Instance::Instance(Matrix r, IntVector s, BoolMatrix a)
    : rates(std::move(r)), streams(std::move(s)), allowed(std::move(a)) {}

void Instance::validate() const {
  if (rates.rows() < 1 || rates.cols() < 1) throw InvalidInput("empty rate matrix");
  if (streams.size() != rates.cols()) throw InvalidInput("stream vector does not match rates");
  if (allowed.rows() != rates.rows() || allowed.cols() != rates.cols()) {
    throw InvalidInput("allowed mask does not match rates");
  }
  for (Eigen::Index j = 0; j < streams.size(); ++j) {
    if (streams(j) < 1) throw InvalidInput("every BS needs S_j >= 1");
  }
  for (Eigen::Index k = 0; k < rates.rows(); ++k) {
    bool any = false;
    for (Eigen::Index j = 0; j < rates.cols(); ++j) {
      if (!allowed(k, j)) continue;
      any = true;
      if (!(rates(k, j) > 0.0) || !std::isfinite(rates(k, j))) {
        throw InvalidInput("rates must be positive and finite on allowed pairs");
      }
    }
    if (!any) throw InvalidInput("user " + std::to_string(k) + " has no allowed BS");
  }
}

Vector throughput_of(const Matrix& alpha, const Matrix& rates) {
  if (alpha.rows() != rates.rows() || alpha.cols() != rates.cols()) {
    throw InvalidInput("alpha and rates differ in shape");
  }
  return alpha.cwiseProduct(rates).rowwise().sum();
}

double utility(const Vector& throughputs, const Fairness& fairness) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < throughputs.size(); ++k) {
    const double r = throughputs(k);
    if (r < 0.0) throw InvalidInput("throughputs must be non-negative");
    if (r == 0.0) return kUtilityMinusInfinity;
    total += fairness.phi(r);
  }
  return total;
}

std::string Violation::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Negative:
      out << "alpha(" << user << "," << bs << ") is negative";
      break;
    case Kind::AboveOne:
      out << "alpha(" << user << "," << bs << ") exceeds 1";
      break;
    case Kind::Disallowed:
      out << "alpha(" << user << "," << bs << ") is positive on a disallowed pair";
      break;
    case Kind::UserRow:
      out << "user " << user << " activity sum exceeds 1";
      break;
    case Kind::BsColumn:
      out << "BS " << bs << " activity sum exceeds its streams";
      break;
  }
  out << " by " << excess;
  return out.str();
}

std::vector<Violation> feasibility_report(const Matrix& alpha, const IntVector& streams,
                                          const BoolMatrix& allowed, double tol) {
  if (streams.size() != alpha.cols() || allowed.rows() != alpha.rows() ||
      allowed.cols() != alpha.cols()) {
    throw InvalidInput("feasibility inputs differ in shape");
  }
  std::vector<Violation> out;
  for (Eigen::Index k = 0; k < alpha.rows(); ++k) {
    for (Eigen::Index j = 0; j < alpha.cols(); ++j) {
      const double a = alpha(k, j);
      const int ki = static_cast<int>(k), ji = static_cast<int>(j);
      if (a < -tol) out.push_back({Violation::Kind::Negative, ki, ji, -a});
      if (a > 1.0 + tol) out.push_back({Violation::Kind::AboveOne, ki, ji, a - 1.0});
      if (!allowed(k, j) && a > tol) out.push_back({Violation::Kind::Disallowed, ki, ji, a});
    }
    const double row = alpha.row(k).sum();
    if (row > 1.0 + tol) {
      out.push_back({Violation::Kind::UserRow, static_cast<int>(k), -1, row - 1.0});
    }
  }
  for (Eigen::Index j = 0; j < alpha.cols(); ++j) {
    const double col = alpha.col(j).sum();
    if (col > streams(j) + tol) {
      out.push_back({Violation::Kind::BsColumn, -1, static_cast<int>(j), col - streams(j)});
    }
  }
  return out;
}

std::vector<std::vector<int>> Partition::cells(int num_bs) const {
  std::vector<std::vector<int>> out(num_bs);
  for (int k = 0; k < num_users(); ++k) {
    const int j = assoc[k];
    if (j < 0 || j >= num_bs) throw InvalidInput("partition refers to an unknown BS");
    out[j].push_back(k);
  }
  return out;
}

void Partition::validate(const BoolMatrix& allowed) const {
  if (static_cast<Eigen::Index>(assoc.size()) != allowed.rows()) {
    throw InvalidInput("partition size does not match the user count");
  }
  for (int k = 0; k < num_users(); ++k) {
    const int j = assoc[k];
    if (j < 0 || j >= allowed.cols()) throw InvalidInput("partition refers to an unknown BS");
    if (!allowed(k, j)) {
      throw InvalidInput("user " + std::to_string(k) + " is attached to a disallowed BS");
    }
  }
}

Matrix partition_to_alpha(const Partition& partition, const std::vector<CellAllocation>& cells,
                          int num_bs) {
  Matrix alpha = Matrix::Zero(partition.num_users(), num_bs);
  for (const auto& cell : cells) {
    if (cell.bs < 0 || cell.bs >= num_bs) throw InvalidInput("cell refers to an unknown BS");
    if (cell.members.size() != cell.alpha.size()) throw InvalidInput("malformed cell allocation");
    for (std::size_t i = 0; i < cell.members.size(); ++i) {
      const int k = cell.members[i];
      if (k < 0 || k >= partition.num_users() || partition.assoc[k] != cell.bs) {
        throw InvalidInput("cell member is not attached to that BS in the partition");
      }
      alpha(k, cell.bs) = cell.alpha[i];
    }
  }
  return alpha;
}

void save_alpha_csv(const std::string& path, const std::vector<int>& user_ids,
                    const std::vector<int>& bs_ids, const Matrix& alpha) {
  std::ostringstream out;
  csv::write_matrix(out, "user_id", user_ids, bs_ids, alpha, 12);
  csv::write_file(path, out.str());
}

Matrix load_alpha_csv(const std::string& path) {
  std::istringstream in(csv::read_file(path));
  return csv::read_matrix(in, nullptr, nullptr);
}

void save_throughputs_csv(const std::string& path, const std::vector<int>& user_ids,
                          const Vector& throughputs) {
  if (static_cast<Eigen::Index>(user_ids.size()) != throughputs.size()) {
    throw InvalidInput("throughput vector does not match user ids");
  }
  std::ostringstream out;
  out << "user_id,throughput\n";
  for (std::size_t k = 0; k < user_ids.size(); ++k) {
    out << user_ids[k] << ',' << csv::format(throughputs(static_cast<Eigen::Index>(k))) << '\n';
  }
  csv::write_file(path, out.str());
}

void save_partition_csv(const std::string& path, const std::vector<int>& user_ids,
                        const std::vector<int>& bs_ids, const Partition& partition) {
  if (user_ids.size() != partition.assoc.size()) {
    throw InvalidInput("partition does not match user ids");
  }
  std::ostringstream out;
  out << "user_id,bs_id\n";
  for (std::size_t k = 0; k < user_ids.size(); ++k) {
    out << user_ids[k] << ',' << bs_ids.at(partition.assoc[k]) << '\n';
  }
  csv::write_file(path, out.str());
}

Partition load_partition_csv(const std::string& path, const std::vector<int>& user_ids,
                             const std::vector<int>& bs_ids) {
  std::istringstream in(csv::read_file(path));
  auto rows = csv::read_rows(in);
  if (rows.empty() || rows.front().size() != 2) throw InvalidInput("malformed partition CSV");
  std::map<int, int> user_index, bs_index;
  for (std::size_t k = 0; k < user_ids.size(); ++k) user_index[user_ids[k]] = static_cast<int>(k);
  for (std::size_t j = 0; j < bs_ids.size(); ++j) bs_index[bs_ids[j]] = static_cast<int>(j);
  Partition p;
  p.assoc.assign(user_ids.size(), -1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2) throw InvalidInput("malformed partition CSV row");
    const int uid = std::stoi(rows[r][0]);
    const int bid = std::stoi(rows[r][1]);
    if (!user_index.contains(uid) || !bs_index.contains(bid)) {
      throw InvalidInput("partition CSV refers to unknown ids");
    }
    p.assoc[user_index[uid]] = bs_index[bid];
  }
  for (int j : p.assoc) {
    if (j < 0) throw InvalidInput("partition CSV misses users");
  }
  return p;
}

}  // namespace hetnet
