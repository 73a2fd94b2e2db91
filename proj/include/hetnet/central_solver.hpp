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

// Centralized network utility maximization by projected dual subgradient
// descent over BS prices p and user prices lambda.
//
// For prices (p, lambda) every user k buys from the BS with the best
// bang-per-buck R_{k,j} / (p_j + lambda_k). The dual function is
//
//   D(p, lambda) = sum_j S_j p_j + sum_k lambda_k + sum_k phi*(beta_k),
//   beta_k = min_j (p_j + lambda_k) / R_{k,j},
//
// with phi*(beta) = beta^{1-rho} / (rho - 1) for gamma > 1 and
// -log(beta) - 1 for gamma = 1. Optimal throughputs follow from the optimal
// prices as r*_k = (max_j R_{k,j} / (p_j + lambda_k))^rho.
//
// The iteration keeps each fraction alpha_{k,j} in [0, 1] inside the user
// subproblem. The box is redundant in the primal, so the optimal prices are
// unchanged, while every subgradient stays bounded.

#ifndef HETNET_CENTRAL_SOLVER_HPP_
#define HETNET_CENTRAL_SOLVER_HPP_

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hetnet/assoc_core.hpp"

namespace hetnet {

struct DualState {
  Vector p;       // BS prices, >= 0
  Vector lambda;  // user prices, >= 0
  long iter = 0;
  double step_a = 1.0;
  double step_b = 10.0;
  double best_dual = std::numeric_limits<double>::infinity();

  /// s = a / (b + iter).
  double step() const { return step_a / (step_b + static_cast<double>(iter)); }
};

struct DualOptions {
  long i_max = 200000;
  double a = 5.0;
  double b = 10.0;
  double init_p = 1.0;
  double init_lambda = 1.0;
  long log_every = 100;  // trace interval; 0 disables the trace
  // Stop once best_dual improved by less than early_stop_tol over
  // early_stop_window iterations; disabled when the window is 0.
  long early_stop_window = 0;
  double early_stop_tol = 1e-10;

  void validate() const;
};

struct TraceRow {
  long iteration = 0;
  double dual = 0.0;
  double best_dual = 0.0;
  double max_price_change = 0.0;
};

struct DualSolution {
  DualState state;
  Vector r_star;  // user_demand throughputs at the final prices
  std::vector<TraceRow> trace;
};

/// Initial state with every price set to the given positive values.
DualState initial_dual_state(const Instance& instance, const DualOptions& options);

/// Best response of user k to prices (p, lambda) with every fraction kept
/// in [0, 1]: maximizes phi(sum_j alpha_j R_{k,j}) - sum_j alpha_j (p_j +
/// lambda_k) by filling BSs in increasing cost per unit rate. When the
/// best BS alone meets the demand this is alpha = R^{rho-1} / (p + lambda)^rho
/// on that BS.
struct UserDemand {
  Vector alpha;  // J-vector
  double throughput = 0.0;
};
UserDemand user_demand(int k, const Vector& p, const Vector& lambda, const Instance& instance,
                       const Fairness& fairness);

/// D(p, lambda) in the conjugate form above; an upper bound on the optimal
/// utility at any non-negative prices. Throws NumericalError when
/// p_j + lambda_k = 0 on an allowed pair.
double dual_objective(const Vector& p, const Vector& lambda, const Instance& instance,
                      const Fairness& fairness);

/// Index of user k's best bang-per-buck BS; ties go to the lower index.
int best_bs(int k, const Vector& p, const Vector& lambda, const Instance& instance);

/// One projected subgradient step driven by the user demands. p is
/// clipped at 0 and lambda_k at the smallest value keeping
/// p_j + lambda_k >= R_{k,j} Rmax_k^{-gamma}, a bound met by every optimum.
/// best_dual absorbs D at the incoming prices, also reported through
/// dual_value.
DualState subgradient_step(const DualState& state, const Instance& instance,
                           const Fairness& fairness, double* max_price_change = nullptr,
                           double* dual_value = nullptr);

/// r*_k = (max_j R_{k,j} / (p_j + lambda_k))^rho.
Vector throughputs_from_prices(const Vector& p, const Vector& lambda, const Instance& instance,
                               const Fairness& fairness);

/// Runs i_max steps, takes r* from the final user demands and then lifts
/// each lambda_k to the least value with (R_{k,j} / (p_j + lambda_k))^rho <=
/// r*_k on every allowed pair.
DualSolution solve_dual(const Instance& instance, const Fairness& fairness,
                        const DualOptions& options = {});

void save_trace_csv(const std::string& path, const std::vector<TraceRow>& trace);

struct KktReport {
  Vector bang_per_buck_gap;  // |r_k - b*_k| / b*_k
  Vector support_violation;  // max over alpha > tol of (b*_k - b_{k,j}) / b*_k
  Vector slackness_bs;       // p_j |sum_k alpha_{k,j} - S_j| / S_j
  Vector slackness_user;     // lambda_k |sum_j alpha_{k,j} - 1|
  double max_residual = 0.0;
};

/// Residuals of the optimality conditions at (alpha, p, lambda). b*_k is
/// user k's best bang-per-buck (R_{k,j} / (p_j + lambda_k))^rho.
KktReport kkt_report(const Matrix& alpha, const Vector& p, const Vector& lambda,
                     const Instance& instance, const Fairness& fairness, double tol = 1e-6);

/// p_j = ((1 / S_j) sum_{k in K_j} R_{k,j}^{rho-1})^{1/rho}, lambda = 0.
std::pair<Vector, Vector> closed_form_unique_prices(const Partition& partition,
                                                    const Instance& instance,
                                                    const Fairness& fairness);

}  // namespace hetnet

#endif  // HETNET_CENTRAL_SOLVER_HPP_
