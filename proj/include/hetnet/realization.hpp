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

// Decomposition of a feasible activity matrix into a convex combination of
// integer scheduling configurations, and a slot schedule realizing it.

#ifndef HETNET_REALIZATION_HPP_
#define HETNET_REALIZATION_HPP_

#include <string>
#include <vector>

#include "hetnet/assoc_core.hpp"

namespace hetnet {

/// 0/1 configuration: row sums <= 1, column j sum <= S_j.
struct IntegerSchedule {
  Eigen::MatrixXi sigma;

  /// Exact check of integrality, the row and column budgets and, when
  /// given, the allowed pairs.
  bool valid(const IntVector& streams, const BoolMatrix* allowed = nullptr) const;
};

struct ScheduleComponent {
  double weight = 0.0;
  IntegerSchedule schedule;
};

struct ScheduleDecomposition {
  int num_users = 0;
  int num_bs = 0;
  std::vector<ScheduleComponent> components;

  /// sum_i weight_i sigma_i.
  Matrix reconstruct() const;
  double total_weight() const;
};

/// Tolerance classifying a row or column of alpha as tight.
inline constexpr double kTightTol = 1e-7;

/// Integer sigma on support(alpha) covering every tight user once and every
/// tight BS with exactly S_j users. Throws NumericalError if none exists.
IntegerSchedule extreme_config(const Matrix& alpha, const IntVector& streams,
                               double tol = kTightTol);

/// Peels extreme configurations off alpha until nothing remains; the last
/// component is the all-zero configuration when weight is left over.
ScheduleDecomposition decompose(const Matrix& alpha, const IntVector& streams,
                                double tol = kTightTol);

/// Component index for each of T slots under the largest-deficit rule.
std::vector<int> schedule_stream(const ScheduleDecomposition& decomposition, long slots);

/// Empirical activity fractions of a slot sequence.
Matrix empirical_fractions(const ScheduleDecomposition& decomposition,
                           const std::vector<int>& sequence);

/// "decomposition K J C", then per component a weight line and a line
/// "n k_1 j_1 ... k_n j_n" listing the active pairs.
std::string serialize(const ScheduleDecomposition& decomposition);
ScheduleDecomposition deserialize_decomposition(const std::string& text);

}  // namespace hetnet

#endif  // HETNET_REALIZATION_HPP_
