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

#include "hetnet/lp_primal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "hetnet/csv.hpp"

namespace hetnet {

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPivotEps = 1e-11;

// Row 0 holds reduced costs (enter on negative), column `cols` holds values.
class Simplex {
 public:
  Simplex(Tableau t, std::vector<int> basis, double tol)
      : t_(std::move(t)), basis_(std::move(basis)), tol_(tol) {
    budget_ = 50000 + 50 * static_cast<long>(t_.rows() + t_.cols());
  }

  // Runs Bland pivots over columns [0, allowed_cols). False when unbounded.
  bool optimize(int allowed_cols) {
    const int m = static_cast<int>(t_.rows()) - 1;
    const int rhs = static_cast<int>(t_.cols()) - 1;
    while (true) {
      int enter = -1;
      for (int c = 0; c < allowed_cols; ++c) {
        if (t_(0, c) < -tol_) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 1; r <= m; ++r) {
        const double a = t_(r, enter);
        if (a <= kPivotEps) continue;
        const double ratio = t_(r, rhs) / a;
        if (ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && basis_[r - 1] < basis_[leave - 1])) {
          best = std::min(best, ratio);
          leave = r;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(int r, int c) {
    if (--budget_ < 0) throw NumericalError("simplex pivot budget exhausted");
    t_.row(r) /= t_(r, c);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[r - 1] = c;
  }

  Tableau& tableau() { return t_; }
  std::vector<int>& basis() { return basis_; }

 private:
  Tableau t_;
  std::vector<int> basis_;
  double tol_;
  long budget_;
};

}  // namespace

void LinearProgram::validate() const {
  if (constraints.rows() != rhs.size() || constraints.cols() != objective.size()) {
    throw InvalidInput("linear program dimensions are inconsistent");
  }
  if (!objective.allFinite() || !constraints.allFinite() || !rhs.allFinite()) {
    throw InvalidInput("linear program coefficients must be finite");
  }
}

std::string LinearProgram::dump() const {
  std::ostringstream out;
  out << "lp " << num_rows() << ' ' << num_vars() << '\n';
  for (int c = 0; c < num_vars(); ++c) out << (c ? " " : "") << csv::format(objective(c), 17);
  out << '\n';
  for (int r = 0; r < num_rows(); ++r) {
    for (int c = 0; c < num_vars(); ++c) out << csv::format(constraints(r, c), 17) << ' ';
    out << "<= " << csv::format(rhs(r), 17) << '\n';
  }
  return out.str();
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

LpSolution solve_lp(const LinearProgram& lp, double tol) {
  lp.validate();
  const int m = lp.num_rows();
  const int n = lp.num_vars();
  std::vector<int> negative;
  for (int r = 0; r < m; ++r) {
    if (lp.rhs(r) < 0.0) negative.push_back(r);
  }
  const int na = static_cast<int>(negative.size());
  // Columns: originals [0, n), slacks [n, n+m), artificials [n+m, n+m+na), rhs.
  const int cols = n + m + na;
  Tableau t = Tableau::Zero(m + 1, cols + 1);
  std::vector<int> basis(m);
  int next_art = 0;
  for (int r = 0; r < m; ++r) {
    const double sign = lp.rhs(r) < 0.0 ? -1.0 : 1.0;
    t.row(r + 1).head(n) = sign * lp.constraints.row(r);
    t(r + 1, n + r) = sign;
    t(r + 1, cols) = sign * lp.rhs(r);
    if (sign < 0.0) {
      const int a = n + m + next_art++;
      t(r + 1, a) = 1.0;
      basis[r] = a;
    } else {
      basis[r] = n + r;
    }
  }

  Simplex sx(std::move(t), std::move(basis), tol);
  Tableau& tab = sx.tableau();
  LpSolution sol;
  sol.x = Vector::Zero(n);

  if (na > 0) {
    // Phase 1: maximize -sum(artificials).
    tab.row(0).setZero();
    for (int a = 0; a < na; ++a) tab(0, n + m + a) = 1.0;
    for (int r = 0; r < m; ++r) {
      if (sx.basis()[r] >= n + m) tab.row(0) -= tab.row(r + 1);
    }
    sx.optimize(cols);
    const double scale = 1.0 + lp.rhs.cwiseAbs().maxCoeff();
    if (tab(0, cols) < -tol * scale) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (sx.basis()[r] < n + m) continue;
      for (int c = 0; c < n + m; ++c) {
        if (std::abs(tab(r + 1, c)) > 1e-9) {
          sx.pivot(r + 1, c);
          break;
        }
      }
    }
  }

  // Phase 2 over original and slack columns only.
  tab.row(0).setZero();
  tab.row(0).head(n) = -lp.objective.transpose();
  for (int r = 0; r < m; ++r) {
    const int b = sx.basis()[r];
    const double f = tab(0, b);
    if (f != 0.0) tab.row(0) -= f * tab.row(r + 1);
  }
  if (!sx.optimize(n + m)) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  for (int r = 0; r < m; ++r) {
    const int b = sx.basis()[r];
    if (b < n) sol.x(b) = std::max(0.0, tab(r + 1, cols));
  }
  sol.objective_value = lp.objective.dot(sol.x);
  sol.status = LpStatus::Optimal;
  sol.is_vertex = true;
  return sol;
}

BoolMatrix bang_per_buck_support(const Instance& instance, const Vector& p, const Vector& lambda,
                                 double support_tol) {
  const int K = instance.num_users();
  const int J = instance.num_bs();
  if (p.size() != J || lambda.size() != K) throw InvalidInput("price vectors do not match");
  BoolMatrix keep = BoolMatrix::Constant(K, J, false);
  for (int k = 0; k < K; ++k) {
    double best = 0.0;
    Vector bpb = Vector::Zero(J);
    for (int j = 0; j < J; ++j) {
      if (!instance.allowed(k, j)) continue;
      const double price = p(j) + lambda(k);
      if (!(price > 0.0)) throw NumericalError("zero price in bang-per-buck evaluation");
      bpb(j) = instance.rates(k, j) / price;
      best = std::max(best, bpb(j));
    }
    for (int j = 0; j < J; ++j) {
      keep(k, j) = instance.allowed(k, j) && bpb(j) >= best * (1.0 - support_tol);
    }
  }
  return keep;
}

namespace {

Recovery solve_recovery_lp(const Instance& instance, const Vector& r_star, const BoolMatrix& keep) {
  const int K = instance.num_users();
  const int J = instance.num_bs();
  std::vector<std::pair<int, int>> vars;
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) {
      if (keep(k, j)) vars.emplace_back(k, j);
    }
  }
  // Variables: theta, then one alpha per kept pair.
  const int n = 1 + static_cast<int>(vars.size());
  const int m = 2 * K + J;
  LinearProgram lp;
  lp.objective = Vector::Zero(n);
  lp.objective(0) = 1.0;
  lp.constraints = Matrix::Zero(m, n);
  lp.rhs = Vector::Zero(m);
  for (int k = 0; k < K; ++k) {
    lp.constraints(k, 0) = 1.0;
    lp.rhs(K + k) = 1.0;
  }
  for (int j = 0; j < J; ++j) lp.rhs(2 * K + j) = instance.streams(j);
  for (int v = 1; v < n; ++v) {
    const auto [k, j] = vars[v - 1];
    lp.constraints(k, v) = -instance.rates(k, j) / r_star(k);
    lp.constraints(K + k, v) = 1.0;
    lp.constraints(2 * K + j, v) = 1.0;
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) {
    throw NumericalError("throughput recovery LP is " + to_string(sol.status));
  }
  Recovery out;
  out.theta_max = sol.objective_value;
  out.lp_vars = n - 1;
  out.alpha = Matrix::Zero(K, J);
  for (int v = 1; v < n; ++v) {
    const auto [k, j] = vars[v - 1];
    out.alpha(k, j) = std::clamp(sol.x(v), 0.0, 1.0);
  }
  return out;
}

}  // namespace

Recovery recover_alpha(const Instance& instance, const Vector& r_star,
                       const RecoveryOptions& options) {
  instance.validate();
  const int K = instance.num_users();
  if (r_star.size() != K) throw InvalidInput("r* does not match the user count");
  for (int k = 0; k < K; ++k) {
    if (!(r_star(k) > 0.0) || !std::isfinite(r_star(k))) {
      throw InvalidInput("r* must be positive and finite");
    }
  }
  if (options.p.has_value() != options.lambda.has_value()) {
    throw InvalidInput("support pruning needs both price vectors");
  }
  if (!(options.support_tol > 0.0) || options.max_support_tol < options.support_tol) {
    throw InvalidInput("support margins need 0 < support_tol <= max_support_tol");
  }
  auto in_band = [&](const Recovery& r) {
    return std::abs(r.theta_max - 1.0) <= options.band_tol;
  };
  Recovery last;
  if (options.p) {
    for (double tol = options.support_tol;; tol *= 10.0) {
      const double used = std::min(tol, options.max_support_tol);
      last = solve_recovery_lp(
          instance, r_star, bang_per_buck_support(instance, *options.p, *options.lambda, used));
      last.support_tol_used = used;
      if (in_band(last) || used >= options.max_support_tol) break;
    }
  }
  if (!options.p || !in_band(last)) {
    last = solve_recovery_lp(instance, r_star, instance.allowed);
    last.support_tol_used = 0.0;
  }
  if (!in_band(last)) {
    throw NumericalError("theta_max = " + csv::format(last.theta_max) +
                         " is outside the accepted band; r* is inconsistent with the rates");
  }
  return last;
}

}  // namespace hetnet
