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

#include "hetnet/central_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "hetnet/csv.hpp"

namespace hetnet {

namespace {

void check_prices(const Vector& p, const Vector& lambda, const Instance& instance) {
  if (p.size() != instance.num_bs() || lambda.size() != instance.num_users()) {
    throw InvalidInput("price vectors do not match the instance");
  }
  if ((p.array() < 0.0).any() || (lambda.array() < 0.0).any()) {
    throw InvalidInput("prices must be non-negative");
  }
}

// phi*(beta) of the utility family.
double conjugate(double beta, const Fairness& fairness) {
  if (fairness.proportional()) return -std::log(beta) - 1.0;
  const double rho = fairness.rho();
  return std::pow(beta, 1.0 - rho) / (rho - 1.0);
}

// Smallest lambda_k with p_j + lambda_k >= R_{k,j} Rmax_k^{-gamma} on every
// allowed pair. Every dual optimum satisfies these bounds since
// r*_k <= Rmax_k, and they keep every price sum strictly positive.
double lambda_floor(int k, const Vector& p, const Instance& instance, const Fairness& fairness) {
  double rmax = 0.0;
  for (int j = 0; j < instance.num_bs(); ++j) {
    if (instance.allowed(k, j)) rmax = std::max(rmax, instance.rates(k, j));
  }
  const double scale = std::pow(rmax, -fairness.gamma());
  double floor = 0.0;
  for (int j = 0; j < instance.num_bs(); ++j) {
    if (instance.allowed(k, j)) floor = std::max(floor, instance.rates(k, j) * scale - p(j));
  }
  return floor;
}

}  // namespace

void DualOptions::validate() const {
  if (i_max < 1) throw InvalidInput("i_max must be >= 1");
  if (!(a > 0.0) || !(b >= 0.0)) throw InvalidInput("step parameters need a > 0 and b >= 0");
  if (!(init_p > 0.0) || !(init_lambda > 0.0)) throw InvalidInput("initial prices must be > 0");
  if (log_every < 0 || early_stop_window < 0) throw InvalidInput("intervals must be >= 0");
}

DualState initial_dual_state(const Instance& instance, const DualOptions& options) {
  options.validate();
  DualState s;
  s.p = Vector::Constant(instance.num_bs(), options.init_p);
  s.lambda = Vector::Constant(instance.num_users(), options.init_lambda);
  s.step_a = options.a;
  s.step_b = options.b;
  return s;
}

int best_bs(int k, const Vector& p, const Vector& lambda, const Instance& instance) {
  int best = -1;
  double best_value = -1.0;
  for (int j = 0; j < instance.num_bs(); ++j) {
    if (!instance.allowed(k, j)) continue;
    const double price = p(j) + lambda(k);
    if (!(price > 0.0)) throw NumericalError("p_j + lambda_k = 0 on an allowed pair");
    const double v = instance.rates(k, j) / price;
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  if (best < 0) throw InvalidInput("user without an allowed BS");
  return best;
}

UserDemand user_demand(int k, const Vector& p, const Vector& lambda, const Instance& instance,
                       const Fairness& fairness) {
  const int J = instance.num_bs();
  const double gamma = fairness.gamma();
  std::vector<int> order;
  for (int j = 0; j < J; ++j) {
    if (!instance.allowed(k, j)) continue;
    if (!(p(j) + lambda(k) > 0.0)) throw NumericalError("p_j + lambda_k = 0 on an allowed pair");
    order.push_back(j);
  }
  if (order.empty()) throw InvalidInput("user without an allowed BS");
  // Cheapest cost per unit rate first; ties go to the lower index.
  auto unit_cost = [&](int j) { return (p(j) + lambda(k)) / instance.rates(k, j); };
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return unit_cost(x) < unit_cost(y); });
  UserDemand d;
  d.alpha = Vector::Zero(J);
  double r = 0.0;
  for (int j : order) {
    const double rate = instance.rates(k, j);
    // phi'(r) = r^{-gamma} meets the unit cost at r = unit_cost^{-rho}.
    const double target = std::pow(unit_cost(j), -1.0 / gamma);
    if (target <= r) break;
    const double a = std::min(1.0, (target - r) / rate);
    d.alpha(j) = a;
    r += a * rate;
    if (a < 1.0) break;
  }
  d.throughput = r;
  return d;
}

double dual_objective(const Vector& p, const Vector& lambda, const Instance& instance,
                      const Fairness& fairness) {
  check_prices(p, lambda, instance);
  double total = 0.0;
  for (int j = 0; j < instance.num_bs(); ++j) total += instance.streams(j) * p(j);
  for (int k = 0; k < instance.num_users(); ++k) {
    const int j = best_bs(k, p, lambda, instance);
    total += lambda(k) + conjugate((p(j) + lambda(k)) / instance.rates(k, j), fairness);
  }
  return total;
}

DualState subgradient_step(const DualState& state, const Instance& instance,
                           const Fairness& fairness, double* max_price_change,
                           double* dual_value) {
  const int K = instance.num_users();
  const int J = instance.num_bs();
  const double s = state.step();
  Vector load = Vector::Zero(J);
  Vector used(K);
  for (int k = 0; k < K; ++k) {
    const UserDemand d = user_demand(k, state.p, state.lambda, instance, fairness);
    load += d.alpha;
    used(k) = d.alpha.sum();
  }
  const double dual = dual_objective(state.p, state.lambda, instance, fairness);

  DualState next = state;
  double change = 0.0;
  for (int j = 0; j < J; ++j) {
    next.p(j) = std::max(0.0, state.p(j) + s * (load(j) - instance.streams(j)));
    change = std::max(change, std::abs(next.p(j) - state.p(j)));
  }
  for (int k = 0; k < K; ++k) {
    next.lambda(k) = std::max(state.lambda(k) + s * (used(k) - 1.0),
                              lambda_floor(k, next.p, instance, fairness));
    change = std::max(change, std::abs(next.lambda(k) - state.lambda(k)));
  }
  next.iter = state.iter + 1;
  next.best_dual = std::min(state.best_dual, dual);
  if (max_price_change) *max_price_change = change;
  if (dual_value) *dual_value = dual;
  return next;
}

Vector throughputs_from_prices(const Vector& p, const Vector& lambda, const Instance& instance,
                               const Fairness& fairness) {
  check_prices(p, lambda, instance);
  Vector r(instance.num_users());
  for (int k = 0; k < instance.num_users(); ++k) {
    const int j = best_bs(k, p, lambda, instance);
    r(k) = std::pow(instance.rates(k, j) / (p(j) + lambda(k)), fairness.rho());
  }
  return r;
}

DualSolution solve_dual(const Instance& instance, const Fairness& fairness,
                        const DualOptions& options) {
  instance.validate();
  DualSolution out;
  out.state = initial_dual_state(instance, options);
  double window_start = out.state.best_dual;
  for (long i = 0; i < options.i_max; ++i) {
    double change = 0.0;
    double dual = 0.0;
    out.state = subgradient_step(out.state, instance, fairness, &change, &dual);
    if (options.log_every > 0 && (out.state.iter % options.log_every == 0 || i == 0)) {
      out.trace.push_back({out.state.iter, dual, out.state.best_dual, change});
    }
    if (options.early_stop_window > 0 && out.state.iter % options.early_stop_window == 0) {
      if (std::isfinite(window_start) &&
          window_start - out.state.best_dual < options.early_stop_tol) {
        break;
      }
      window_start = out.state.best_dual;
    }
  }
  const int K = instance.num_users();
  out.r_star.resize(K);
  for (int k = 0; k < K; ++k) {
    out.r_star(k) = user_demand(k, out.state.p, out.state.lambda, instance, fairness).throughput;
  }
  // A capped demand leaves lambda_k free below a threshold. Raising it to
  // max_j (R_{k,j} r_k^{-gamma} - p_j) makes r*_k the best bang-per-buck.
  for (int k = 0; k < K; ++k) {
    const double w = std::pow(out.r_star(k), -fairness.gamma());
    for (int j = 0; j < instance.num_bs(); ++j) {
      if (!instance.allowed(k, j)) continue;
      out.state.lambda(k) =
          std::max(out.state.lambda(k), instance.rates(k, j) * w - out.state.p(j));
    }
  }
  out.state.best_dual = std::min(
      out.state.best_dual, dual_objective(out.state.p, out.state.lambda, instance, fairness));
  return out;
}

void save_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "iteration,dual,best_dual,max_price_change\n";
  for (const auto& row : trace) {
    out << row.iteration << ',' << csv::format(row.dual) << ',' << csv::format(row.best_dual)
        << ',' << csv::format(row.max_price_change) << '\n';
  }
  csv::write_file(path, out.str());
}

KktReport kkt_report(const Matrix& alpha, const Vector& p, const Vector& lambda,
                     const Instance& instance, const Fairness& fairness, double tol) {
  check_prices(p, lambda, instance);
  const int K = instance.num_users();
  const int J = instance.num_bs();
  if (alpha.rows() != K || alpha.cols() != J) throw InvalidInput("alpha does not match");
  const double rho = fairness.rho();
  const Vector r = throughput_of(alpha, instance.rates);
  KktReport rep;
  rep.bang_per_buck_gap = Vector::Zero(K);
  rep.support_violation = Vector::Zero(K);
  rep.slackness_bs = Vector::Zero(J);
  rep.slackness_user = Vector::Zero(K);
  for (int k = 0; k < K; ++k) {
    Vector bpb = Vector::Zero(J);
    double best = 0.0;
    for (int j = 0; j < J; ++j) {
      if (!instance.allowed(k, j)) continue;
      bpb(j) = std::pow(instance.rates(k, j) / (p(j) + lambda(k)), rho);
      best = std::max(best, bpb(j));
    }
    rep.bang_per_buck_gap(k) = std::abs(r(k) - best) / best;
    for (int j = 0; j < J; ++j) {
      if (alpha(k, j) > tol) {
        rep.support_violation(k) = std::max(rep.support_violation(k), (best - bpb(j)) / best);
      }
    }
    rep.slackness_user(k) = lambda(k) * std::abs(alpha.row(k).sum() - 1.0);
  }
  for (int j = 0; j < J; ++j) {
    rep.slackness_bs(j) =
        p(j) * std::abs(alpha.col(j).sum() - instance.streams(j)) / instance.streams(j);
  }
  rep.max_residual = std::max({rep.bang_per_buck_gap.maxCoeff(), rep.support_violation.maxCoeff(),
                               rep.slackness_bs.maxCoeff(), rep.slackness_user.maxCoeff()});
  return rep;
}

std::pair<Vector, Vector> closed_form_unique_prices(const Partition& partition,
                                                    const Instance& instance,
                                                    const Fairness& fairness) {
  partition.validate(instance.allowed);
  const double rho = fairness.rho();
  const auto cells = partition.cells(instance.num_bs());
  Vector p = Vector::Zero(instance.num_bs());
  for (int j = 0; j < instance.num_bs(); ++j) {
    double sum = 0.0;
    for (int k : cells[j]) {
      sum += fairness.proportional() ? 1.0 : std::pow(instance.rates(k, j), rho - 1.0);
    }
    if (sum > 0.0) p(j) = std::pow(sum / instance.streams(j), 1.0 / rho);
  }
  return {p, Vector::Zero(instance.num_users())};
}

}  // namespace hetnet
