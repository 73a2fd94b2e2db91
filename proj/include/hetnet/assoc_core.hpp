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

// Association domain shared by the centralized and decentralized schemes:
// activity fractions alpha (K x J), throughputs, gamma-fair utility,
// feasibility and unique-association partitions.

#ifndef HETNET_ASSOC_CORE_HPP_
#define HETNET_ASSOC_CORE_HPP_

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hetnet/types.hpp"

namespace hetnet {

/// Fairness exponent gamma >= 1 of the utility family; rho = 1 / gamma.
class Fairness {
 public:
  explicit Fairness(double gamma = 1.0);

  double gamma() const { return gamma_; }
  double rho() const { return 1.0 / gamma_; }
  bool proportional() const { return gamma_ == 1.0; }
  /// phi(r) = log r for gamma = 1, r^{1-gamma} / (1-gamma) otherwise; r > 0.
  double phi(double r) const {
    return proportional() ? std::log(r) : std::pow(r, 1.0 - gamma_) / (1.0 - gamma_);
  }

 private:
  double gamma_;
};

/// Utility value standing for minus infinity (a zero throughput under
/// gamma >= 1). Compared by value, never produced by a floating-point trap.
inline constexpr double kUtilityMinusInfinity = -std::numeric_limits<double>::infinity();

/// The data of one association problem: peak rates, stream budgets and
/// the allowed user/BS pairs.
struct Instance {
  Matrix rates;        // R_{k,j}, bit/dimension
  IntVector streams;   // S_j
  BoolMatrix allowed;  // true where j is in J_k

  Instance() = default;
  Instance(Matrix rates, IntVector streams);
  Instance(Matrix rates, IntVector streams, BoolMatrix allowed);

  int num_users() const { return static_cast<int>(rates.rows()); }
  int num_bs() const { return static_cast<int>(rates.cols()); }

  /// Positive finite rates on allowed pairs, S_j >= 1, every user with at
  /// least one allowed BS.
  void validate() const;
};

/// r_k = sum_j alpha_{k,j} R_{k,j}.
Vector throughput_of(const Matrix& alpha, const Matrix& rates);

/// Sum of log r_k for gamma = 1, sum of r_k^{1-gamma}/(1-gamma) otherwise.
double utility(const Vector& throughputs, const Fairness& fairness);

struct Violation {
  enum class Kind { Negative, AboveOne, Disallowed, UserRow, BsColumn };
  Kind kind;
  int user = -1;
  int bs = -1;
  double excess = 0.0;

  std::string describe() const;
};

/// Constraint violations of alpha beyond tol; empty iff alpha is feasible.
std::vector<Violation> feasibility_report(const Matrix& alpha, const IntVector& streams,
                                          const BoolMatrix& allowed,
                                          double tol = kFeasibilityTol);

/// Unique association: user k is attached to BS assoc[k] (a column index).
struct Partition {
  std::vector<int> assoc;

  int num_users() const { return static_cast<int>(assoc.size()); }

  /// Members of every cell, in increasing user order.
  std::vector<std::vector<int>> cells(int num_bs) const;

  /// Every user on an allowed BS.
  void validate(const BoolMatrix& allowed) const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

struct CellAllocation;

/// Places every cell's local fractions in column j; zero elsewhere.
Matrix partition_to_alpha(const Partition& partition, const std::vector<CellAllocation>& cells,
                          int num_bs);

void save_alpha_csv(const std::string& path, const std::vector<int>& user_ids,
                    const std::vector<int>& bs_ids, const Matrix& alpha);
Matrix load_alpha_csv(const std::string& path);
void save_throughputs_csv(const std::string& path, const std::vector<int>& user_ids,
                          const Vector& throughputs);
void save_partition_csv(const std::string& path, const std::vector<int>& user_ids,
                        const std::vector<int>& bs_ids, const Partition& partition);
Partition load_partition_csv(const std::string& path, const std::vector<int>& user_ids,
                             const std::vector<int>& bs_ids);

}  // namespace hetnet

#endif  // HETNET_ASSOC_CORE_HPP_
