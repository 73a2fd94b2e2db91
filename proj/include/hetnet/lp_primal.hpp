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

// Dense two-phase tableau simplex and the max-min LP that recovers the
// optimal activity fractions from the optimal throughputs.

#ifndef HETNET_LP_PRIMAL_HPP_
#define HETNET_LP_PRIMAL_HPP_

#include <optional>
#include <string>

#include "hetnet/assoc_core.hpp"

namespace hetnet {

/// maximize c'x subject to A x <= b, x >= 0.
struct LinearProgram {
  Vector objective;
  Matrix constraints;
  Vector rhs;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  void validate() const;

  /// Plain-text dump: "lp <rows> <vars>", the objective line, then one
  /// "<coefficients> <= <rhs>" line per row.
  std::string dump() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  Vector x;
  double objective_value = 0.0;
  LpStatus status = LpStatus::Infeasible;
  bool is_vertex = false;
};

/// Optimal basic feasible solution under Bland's rule. Throws NumericalError
/// when the pivot budget is exhausted.
LpSolution solve_lp(const LinearProgram& lp, double tol = 1e-9);

struct RecoveryOptions {
  double band_tol = 1e-3;     // accepted |theta_max - 1|
  double support_tol = 1e-6;  // relative bang-per-buck margin kept by pruning
  // The margin grows tenfold up to this cap while theta_max misses the band.
  double max_support_tol = 1e-2;
  // Prices enabling support pruning; all pairs stay when absent.
  std::optional<Vector> p;
  std::optional<Vector> lambda;
};

struct Recovery {
  Matrix alpha;
  double theta_max = 0.0;
  int lp_vars = 0;  // alpha variables left after pruning
  double support_tol_used = 0.0;  // 0 when no pruning was applied
};

/// Builds the LP that maximizes theta subject to theta <= sum_j alpha R / r*
/// and the user/BS budgets. With prices, pairs outside the bang-per-buck
/// margin are fixed to 0; the margin widens until theta_max enters the band,
/// and a final unpruned solve follows. Throws NumericalError if theta_max
/// still leaves the band.
Recovery recover_alpha(const Instance& instance, const Vector& r_star,
                       const RecoveryOptions& options = {});

/// Pairs (k, j) within support_tol of user k's best R/(p_j + lambda_k).
BoolMatrix bang_per_buck_support(const Instance& instance, const Vector& p, const Vector& lambda,
                                 double support_tol);

}  // namespace hetnet

#endif  // HETNET_LP_PRIMAL_HPP_
