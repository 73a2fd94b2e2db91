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

#include "hetnet/local_policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hetnet {

namespace {

// Scans k* = 1, 2, ... for w_{k*-1} >= level > w_{k*}, with w_0 = +inf.
// slack relaxes both comparisons by a relative margin.
bool scan_pivot(std::span<const double> w, const std::vector<double>& suffix, int streams,
                double slack, WaterLevel* out) {
  const int n = static_cast<int>(w.size());
  const int last = std::min(n, streams);
  for (int k = 1; k <= last; ++k) {
    const double level = suffix[k - 1] / (streams - k + 1);
    const double left = k == 1 ? std::numeric_limits<double>::infinity() : w[k - 2];
    if (left >= level * (1.0 - slack) && level * (1.0 + slack) > w[k - 1]) {
      out->k_star = k;
      out->level = level;
      out->saturated = false;
      return true;
    }
  }
  return false;
}

}  // namespace

WaterLevel water_level(std::span<const double> sorted_weights, int streams) {
  if (streams <= 0) throw InvalidInput("a cell needs S >= 1");
  const int n = static_cast<int>(sorted_weights.size());
  if (n <= streams) {
    WaterLevel all;
    all.k_star = n + 1;
    all.level = 0.0;
    all.saturated = true;
    return all;
  }
  // suffix[i] = sum of w[i..n-1], accumulated from the smallest weight up.
  std::vector<double> suffix(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + sorted_weights[i];

  WaterLevel wl;
  if (scan_pivot(sorted_weights, suffix, streams, 0.0, &wl)) return wl;
  if (scan_pivot(sorted_weights, suffix, streams, 1e-12, &wl)) return wl;
  throw NumericalError("no pivot satisfies the water-filling condition");
}

double fairness_weight(double rate, const Fairness& fairness) {
  if (fairness.proportional()) return 1.0;
  return std::pow(rate, fairness.rho() - 1.0);
}

CellAllocation local_alpha(std::span<const double> cell_rates, int streams,
                           const Fairness& fairness, std::span<const int> member_ids) {
  if (streams <= 0) throw InvalidInput("a cell needs S >= 1");
  if (cell_rates.empty()) throw InvalidInput("a cell needs at least one member");
  if (!member_ids.empty() && member_ids.size() != cell_rates.size()) {
    throw InvalidInput("member ids do not match the cell rates");
  }
  const int n = static_cast<int>(cell_rates.size());
  std::vector<double> weight(n);
  for (int i = 0; i < n; ++i) {
    if (!(cell_rates[i] > 0.0)) throw InvalidInput("cell rates must be positive");
    weight[i] = fairness_weight(cell_rates[i], fairness);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto id_of = [&](int i) { return member_ids.empty() ? i : member_ids[i]; };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (weight[a] != weight[b]) return weight[a] > weight[b];
    return id_of(a) < id_of(b);
  });
  std::vector<double> sorted(n);
  for (int i = 0; i < n; ++i) sorted[i] = weight[order[i]];

  const WaterLevel wl = water_level(sorted, streams);
  CellAllocation cell;
  cell.k_star = wl.k_star;
  cell.alpha.resize(n);
  for (int pos = 0; pos < n; ++pos) {
    const int i = order[pos];
    cell.alpha[i] = (wl.saturated || pos + 1 < wl.k_star) ? 1.0 : wl.share(weight[i]);
  }
  cell.members.resize(n);
  for (int i = 0; i < n; ++i) cell.members[i] = id_of(i);
  return cell;
}

bool heavy_load_holds(std::span<const double> cell_rates, int streams, const Fairness& fairness) {
  double total = 0.0;
  std::vector<double> w;
  w.reserve(cell_rates.size());
  for (double r : cell_rates) {
    w.push_back(fairness_weight(r, fairness));
    total += w.back();
  }
  for (double wk : w) {
    if (streams * wk / total > 1.0) return false;
  }
  return true;
}

std::vector<double> local_throughputs(const CellAllocation& allocation,
                                      std::span<const double> cell_rates) {
  if (allocation.alpha.size() != cell_rates.size()) {
    throw InvalidInput("allocation does not match the cell rates");
  }
  std::vector<double> r(cell_rates.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = allocation.alpha[i] * cell_rates[i];
  return r;
}

std::vector<CellAllocation> allocate_cells(const Partition& partition, const Instance& instance,
                                           const Fairness& fairness) {
  partition.validate(instance.allowed);
  const auto members = partition.cells(instance.num_bs());
  std::vector<CellAllocation> cells;
  for (int j = 0; j < instance.num_bs(); ++j) {
    if (members[j].empty()) continue;
    std::vector<double> rates;
    for (int k : members[j]) rates.push_back(instance.rates(k, j));
    CellAllocation cell = local_alpha(rates, instance.streams(j), fairness, members[j]);
    cell.bs = j;
    cells.push_back(std::move(cell));
  }
  return cells;
}

Matrix unique_association_alpha(const Partition& partition, const Instance& instance,
                                const Fairness& fairness) {
  return partition_to_alpha(partition, allocate_cells(partition, instance, fairness),
                            instance.num_bs());
}

}  // namespace hetnet
