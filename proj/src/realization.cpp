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

#include "hetnet/realization.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <queue>
#include <sstream>

namespace hetnet {

namespace {

constexpr double kZeroSnap = 1e-12;

class Dinic {
 public:
  explicit Dinic(int n) : graph_(n), level_(n), next_(n) {}

  // Returns the index of the forward edge.
  int add_edge(int from, int to, int cap) {
    graph_[from].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, cap});
    graph_[to].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0});
    return static_cast<int>(edges_.size()) - 2;
  }

  int max_flow(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (int f = dfs(s, t, std::numeric_limits<int>::max())) flow += f;
    }
    return flow;
  }

  // Flow carried by a forward edge.
  int flow(int e) const { return edges_[e ^ 1].cap; }

 private:
  struct Edge {
    int to;
    int cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int e : graph_[v]) {
        if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[v] + 1;
          q.push(edges_[e].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  int dfs(int v, int t, int pushed) {
    if (v == t) return pushed;
    for (int& i = next_[v]; i < static_cast<int>(graph_[v].size()); ++i) {
      const int e = graph_[v][i];
      const int to = edges_[e].to;
      if (edges_[e].cap <= 0 || level_[to] != level_[v] + 1) continue;
      if (int f = dfs(to, t, std::min(pushed, edges_[e].cap))) {
        edges_[e].cap -= f;
        edges_[e ^ 1].cap += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> graph_;
  std::vector<int> level_;
  std::vector<int> next_;
};

void check_shapes(const Matrix& alpha, const IntVector& streams) {
  if (streams.size() != alpha.cols()) throw InvalidInput("streams do not match alpha");
  for (int j = 0; j < streams.size(); ++j) {
    if (streams(j) < 1) throw InvalidInput("every BS needs S_j >= 1");
  }
}

// Integer sigma on the support of `remaining` (scaled by `mass`), covering
// rows and columns that are tight relative to mass.
IntegerSchedule extreme_config_scaled(const Matrix& remaining, double mass,
                                      const IntVector& streams, double tol) {
  const int K = static_cast<int>(remaining.rows());
  const int J = static_cast<int>(remaining.cols());
  // Nodes: users [0, K), BSs [K, K+J), source, sink, super source, super sink.
  const int s = K + J, t = s + 1, ss = s + 2, st = s + 3;
  Dinic g(K + J + 4);
  std::vector<int> excess(K + J + 2, 0);
  auto bounded_edge = [&](int from, int to, int lower, int upper) {
    if (upper > lower) g.add_edge(from, to, upper - lower);
    excess[to] += lower;
    excess[from] -= lower;
  };
  for (int k = 0; k < K; ++k) {
    const bool tight = remaining.row(k).sum() >= mass * (1.0 - tol);
    bounded_edge(s, k, tight ? 1 : 0, 1);
  }
  std::vector<std::vector<int>> edge_of(K, std::vector<int>(J, -1));
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) {
      if (remaining(k, j) > 0.0) edge_of[k][j] = g.add_edge(k, K + j, 1);
    }
  }
  for (int j = 0; j < J; ++j) {
    const bool tight = remaining.col(j).sum() >= mass * (streams(j) - tol);
    bounded_edge(K + j, t, tight ? streams(j) : 0, streams(j));
  }
  g.add_edge(t, s, std::numeric_limits<int>::max() / 4);
  int required = 0;
  for (int v = 0; v < K + J + 2; ++v) {
    if (excess[v] > 0) {
      g.add_edge(ss, v, excess[v]);
      required += excess[v];
    } else if (excess[v] < 0) {
      g.add_edge(v, st, -excess[v]);
    }
  }
  if (g.max_flow(ss, st) != required) {
    throw NumericalError("no integer configuration covers the tight constraints");
  }
  IntegerSchedule out;
  out.sigma = Eigen::MatrixXi::Zero(K, J);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) {
      if (edge_of[k][j] >= 0) out.sigma(k, j) = g.flow(edge_of[k][j]);
    }
  }
  return out;
}

}  // namespace

bool IntegerSchedule::valid(const IntVector& streams, const BoolMatrix* allowed) const {
  if (streams.size() != sigma.cols()) return false;
  if (allowed && (allowed->rows() != sigma.rows() || allowed->cols() != sigma.cols())) {
    return false;
  }
  for (int k = 0; k < sigma.rows(); ++k) {
    int row = 0;
    for (int j = 0; j < sigma.cols(); ++j) {
      const int v = sigma(k, j);
      if (v != 0 && v != 1) return false;
      if (v == 1 && allowed && !(*allowed)(k, j)) return false;
      row += v;
    }
    if (row > 1) return false;
  }
  for (int j = 0; j < sigma.cols(); ++j) {
    if (sigma.col(j).sum() > streams(j)) return false;
  }
  return true;
}

Matrix ScheduleDecomposition::reconstruct() const {
  Matrix out = Matrix::Zero(num_users, num_bs);
  for (const auto& c : components) out += c.weight * c.schedule.sigma.cast<double>();
  return out;
}

double ScheduleDecomposition::total_weight() const {
  double w = 0.0;
  for (const auto& c : components) w += c.weight;
  return w;
}

IntegerSchedule extreme_config(const Matrix& alpha, const IntVector& streams, double tol) {
  check_shapes(alpha, streams);
  return extreme_config_scaled(alpha, 1.0, streams, tol);
}

ScheduleDecomposition decompose(const Matrix& alpha, const IntVector& streams, double tol) {
  check_shapes(alpha, streams);
  const int K = static_cast<int>(alpha.rows());
  const int J = static_cast<int>(alpha.cols());
  const BoolMatrix all = BoolMatrix::Constant(K, J, true);
  if (!feasibility_report(alpha, streams, all).empty()) {
    throw InvalidInput("decompose needs a feasible alpha");
  }
  ScheduleDecomposition out;
  out.num_users = K;
  out.num_bs = J;

  // remaining = mass * (normalized residual alpha).
  Matrix remaining = alpha.cwiseMax(0.0);
  remaining = (remaining.array() < kZeroSnap).select(0.0, remaining);
  double mass = 1.0;
  const int bound = K * J + K + J + 2;
  int rounds = 0;
  while (remaining.maxCoeff() > 0.0 && mass > 0.0) {
    if (++rounds > bound) throw NumericalError("decomposition exceeded its iteration bound");
    IntegerSchedule sigma = extreme_config_scaled(remaining, mass, streams, tol);
    double theta = 1.0;
    for (int k = 0; k < K; ++k) {
      const int row = sigma.sigma.row(k).sum();
      for (int j = 0; j < J; ++j) {
        if (sigma.sigma(k, j)) theta = std::min(theta, remaining(k, j) / mass);
      }
      if (row == 0) theta = std::min(theta, 1.0 - remaining.row(k).sum() / mass);
    }
    for (int j = 0; j < J; ++j) {
      const int col = sigma.sigma.col(j).sum();
      if (col < streams(j)) {
        theta = std::min(theta,
                         (streams(j) - remaining.col(j).sum() / mass) / (streams(j) - col));
      }
    }
    if (!(theta > 0.0)) throw NumericalError("decomposition step made no progress");
    const double weight = std::min(mass, theta * mass);
    remaining -= weight * sigma.sigma.cast<double>();
    remaining = (remaining.array() < kZeroSnap).select(0.0, remaining);
    mass -= weight;
    if (mass < kZeroSnap) mass = 0.0;
    out.components.push_back({weight, std::move(sigma)});
  }
  if (mass > 0.0) {
    out.components.push_back({mass, IntegerSchedule{Eigen::MatrixXi::Zero(K, J)}});
  }
  return out;
}

std::vector<int> schedule_stream(const ScheduleDecomposition& decomposition, long slots) {
  if (slots < 1) throw InvalidInput("schedule needs at least one slot");
  const auto& comps = decomposition.components;
  if (comps.empty()) throw InvalidInput("empty decomposition");
  std::vector<long> count(comps.size(), 0);
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(slots));
  for (long t = 1; t <= slots; ++t) {
    int pick = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const double deficit = static_cast<double>(t) * comps[i].weight - count[i];
      if (deficit > best) {
        best = deficit;
        pick = static_cast<int>(i);
      }
    }
    ++count[pick];
    seq.push_back(pick);
  }
  return seq;
}

Matrix empirical_fractions(const ScheduleDecomposition& decomposition,
                           const std::vector<int>& sequence) {
  if (sequence.empty()) throw InvalidInput("empty slot sequence");
  std::vector<long> count(decomposition.components.size(), 0);
  for (int i : sequence) ++count.at(i);
  Matrix out = Matrix::Zero(decomposition.num_users, decomposition.num_bs);
  for (std::size_t i = 0; i < count.size(); ++i) {
    out += static_cast<double>(count[i]) * decomposition.components[i].schedule.sigma.cast<double>();
  }
  return out / static_cast<double>(sequence.size());
}

std::string serialize(const ScheduleDecomposition& d) {
  std::ostringstream out;
  out << "decomposition " << d.num_users << ' ' << d.num_bs << ' ' << d.components.size() << '\n';
  out << std::setprecision(17);
  for (const auto& c : d.components) {
    out << c.weight << '\n';
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k < d.num_users; ++k) {
      for (int j = 0; j < d.num_bs; ++j) {
        if (c.schedule.sigma(k, j)) pairs.emplace_back(k, j);
      }
    }
    out << pairs.size();
    for (const auto& [k, j] : pairs) out << ' ' << k << ' ' << j;
    out << '\n';
  }
  return out.str();
}

ScheduleDecomposition deserialize_decomposition(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  ScheduleDecomposition d;
  std::size_t n = 0;
  if (!(in >> tag >> d.num_users >> d.num_bs >> n) || tag != "decomposition" || d.num_users < 0 ||
      d.num_bs < 0) {
    throw InvalidInput("malformed decomposition header");
  }
  for (std::size_t c = 0; c < n; ++c) {
    ScheduleComponent comp;
    std::size_t pairs = 0;
    if (!(in >> comp.weight >> pairs)) throw InvalidInput("malformed decomposition component");
    comp.schedule.sigma = Eigen::MatrixXi::Zero(d.num_users, d.num_bs);
    for (std::size_t p = 0; p < pairs; ++p) {
      int k = -1, j = -1;
      if (!(in >> k >> j) || k < 0 || k >= d.num_users || j < 0 || j >= d.num_bs) {
        throw InvalidInput("malformed decomposition pair");
      }
      comp.schedule.sigma(k, j) = 1;
    }
    d.components.push_back(std::move(comp));
  }
  return d;
}

}  // namespace hetnet
