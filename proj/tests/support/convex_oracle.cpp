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

#include "convex_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hetnet::oracle {

namespace {

struct Problem {
  const Instance& inst;
  double gamma;
  std::vector<std::pair<int, int>> vars;
  int K = 0;
  int J = 0;
};

// phi(r) and its first two derivatives.
void utility_terms(double r, double gamma, double* f, double* d1, double* d2) {
  if (gamma == 1.0) {
    *f = std::log(r);
  } else {
    *f = std::pow(r, 1.0 - gamma) / (1.0 - gamma);
  }
  *d1 = std::pow(r, -gamma);
  *d2 = -gamma * std::pow(r, -gamma - 1.0);
}

// Slacks of every barrier term; empty when x is outside the interior.
bool slacks(const Problem& pb, const Vector& x, Vector* rows, Vector* cols) {
  *rows = Vector::Ones(pb.K);
  *cols = pb.inst.streams.cast<double>();
  for (std::size_t v = 0; v < pb.vars.size(); ++v) {
    if (!(x(v) > 0.0)) return false;
    (*rows)(pb.vars[v].first) -= x(v);
    (*cols)(pb.vars[v].second) -= x(v);
  }
  return (rows->array() > 0.0).all() && (cols->array() > 0.0).all();
}

Vector throughputs(const Problem& pb, const Vector& x) {
  Vector r = Vector::Zero(pb.K);
  for (std::size_t v = 0; v < pb.vars.size(); ++v) {
    r(pb.vars[v].first) += x(v) * pb.inst.rates(pb.vars[v].first, pb.vars[v].second);
  }
  return r;
}

// t * U(x) + sum log(slacks); -inf outside the domain.
double barrier_objective(const Problem& pb, const Vector& x, double t) {
  Vector rows, cols;
  if (!slacks(pb, x, &rows, &cols)) return -std::numeric_limits<double>::infinity();
  const Vector r = throughputs(pb, x);
  double val = 0.0;
  for (int k = 0; k < pb.K; ++k) {
    if (!(r(k) > 0.0)) return -std::numeric_limits<double>::infinity();
    double f, d1, d2;
    utility_terms(r(k), pb.gamma, &f, &d1, &d2);
    val += t * f;
  }
  for (int v = 0; v < x.size(); ++v) val += std::log(x(v));
  for (int k = 0; k < pb.K; ++k) val += std::log(rows(k));
  for (int j = 0; j < pb.J; ++j) val += std::log(cols(j));
  return val;
}

}  // namespace

PrimalResult solve_primal(const Instance& instance, double gamma, double gap_tol) {
  instance.validate();
  Problem pb{instance, gamma, {}, instance.num_users(), instance.num_bs()};
  std::vector<int> degree(pb.K, 0);
  for (int k = 0; k < pb.K; ++k) {
    for (int j = 0; j < pb.J; ++j) {
      if (instance.allowed(k, j)) {
        pb.vars.emplace_back(k, j);
        ++degree[k];
      }
    }
  }
  const int n = static_cast<int>(pb.vars.size());
  // Strictly interior start.
  Vector x(n);
  for (int v = 0; v < n; ++v) {
    const auto [k, j] = pb.vars[v];
    x(v) = 0.5 * std::min(1.0 / degree[k], static_cast<double>(instance.streams(j)) / pb.K);
  }
  const double m = n + pb.K + pb.J;
  double t = 1.0;
  while (true) {
    // Newton iterations on the barrier problem at parameter t.
    for (int it = 0; it < 200; ++it) {
      Vector rows, cols;
      slacks(pb, x, &rows, &cols);
      const Vector r = throughputs(pb, x);
      Vector grad = Vector::Zero(n);
      Matrix hess = Matrix::Zero(n, n);
      std::vector<double> d1(pb.K), d2(pb.K);
      for (int k = 0; k < pb.K; ++k) {
        double f;
        utility_terms(r(k), gamma, &f, &d1[k], &d2[k]);
      }
      for (int a = 0; a < n; ++a) {
        const auto [ka, ja] = pb.vars[a];
        const double Ra = instance.rates(ka, ja);
        grad(a) = t * d1[ka] * Ra + 1.0 / x(a) - 1.0 / rows(ka) - 1.0 / cols(ja);
        for (int b = 0; b < n; ++b) {
          const auto [kb, jb] = pb.vars[b];
          double h = 0.0;
          if (ka == kb) h += t * d2[ka] * Ra * instance.rates(kb, jb) - 1.0 / (rows(ka) * rows(ka));
          if (ja == jb) h -= 1.0 / (cols(ja) * cols(ja));
          if (a == b) h -= 1.0 / (x(a) * x(a));
          hess(a, b) = h;
        }
      }
      // Ascent direction for a concave objective: -H^{-1} g.
      const Vector dx = (-hess).ldlt().solve(grad);
      const double decrement = grad.dot(dx);
      if (decrement / 2.0 < 1e-12) break;
      double step = 1.0;
      const double f0 = barrier_objective(pb, x, t);
      while (step > 1e-16) {
        const Vector xn = x + step * dx;
        const double f1 = barrier_objective(pb, xn, t);
        if (std::isfinite(f1) && f1 >= f0 + 0.25 * step * decrement) break;
        step *= 0.5;
      }
      x += step * dx;
    }
    if (m / t < gap_tol) break;
    t *= 8.0;
  }
  PrimalResult out;
  out.alpha = Matrix::Zero(pb.K, pb.J);
  for (int v = 0; v < n; ++v) out.alpha(pb.vars[v].first, pb.vars[v].second) = x(v);
  out.duality_gap_bound = m / t;
  double u = 0.0;
  const Vector r = throughputs(pb, x);
  for (int k = 0; k < pb.K; ++k) {
    double f, d1, d2;
    utility_terms(r(k), gamma, &f, &d1, &d2);
    u += f;
  }
  out.utility = u;
  return out;
}

std::vector<double> bisection_cell(const std::vector<double>& rates, int streams, double gamma) {
  const int n = static_cast<int>(rates.size());
  if (n <= streams) return std::vector<double>(n, 1.0);
  const double rho = 1.0 / gamma;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = std::pow(rates[i], rho - 1.0);
  auto total = [&](double mu) {
    double s = 0.0;
    for (double wi : w) s += std::min(1.0, wi / mu);
    return s;
  };
  // total is non-increasing in mu; bracket sum = S.
  double lo = 0.0;
  double hi = 0.0;
  for (double wi : w) hi += wi;
  hi /= streams;  // total(hi) <= S
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (total(mid) > streams) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = std::min(1.0, w[i] / hi);
  return out;
}

std::vector<Eigen::MatrixXi> enumerate_configurations(const IntVector& streams,
                                                      const BoolMatrix& allowed) {
  const int K = static_cast<int>(allowed.rows());
  const int J = static_cast<int>(allowed.cols());
  std::vector<Eigen::MatrixXi> out;
  // choice[k] in {-1, 0..J-1}: BS serving user k, -1 when idle.
  std::vector<int> choice(K, -1);
  while (true) {
    bool ok = true;
    Eigen::MatrixXi sigma = Eigen::MatrixXi::Zero(K, J);
    for (int k = 0; k < K && ok; ++k) {
      if (choice[k] < 0) continue;
      if (!allowed(k, choice[k])) ok = false;
      sigma(k, choice[k]) = 1;
    }
    for (int j = 0; j < J && ok; ++j) ok = sigma.col(j).sum() <= streams(j);
    if (ok) out.push_back(sigma);
    int k = 0;
    while (k < K && ++choice[k] == J) choice[k++] = -1;
    if (k == K) break;
  }
  return out;
}

Instance random_instance(std::uint64_t seed, int K, int J, int s_max, double r_lo, double r_hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rate(r_lo, r_hi);
  std::uniform_int_distribution<int> s(1, s_max);
  Matrix R(K, J);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) R(k, j) = rate(rng);
  }
  IntVector S(J);
  for (int j = 0; j < J; ++j) S(j) = s(rng);
  return Instance(R, S);
}

}  // namespace hetnet::oracle
