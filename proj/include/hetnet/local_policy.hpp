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

// Gamma-fair split of one BS's S_j streams among its uniquely associated
// users.
//
// With weights w_k = R_k^{rho-1} sorted non-increasingly, the optimal share
// is a water-filling: the k*-1 heaviest users are saturated at alpha = 1 and
// the rest receive (S - k* + 1) w_k / sum_{i >= k*} w_i. For gamma = 1 all
// weights are one and the split is min(1, S / |K_j|).

#ifndef HETNET_LOCAL_POLICY_HPP_
#define HETNET_LOCAL_POLICY_HPP_

#include <span>
#include <vector>

#include "hetnet/assoc_core.hpp"

namespace hetnet {

struct CellAllocation {
  int bs = -1;
  std::vector<int> members;   // user indices, in the caller's order
  std::vector<double> alpha;  // share of each member, aligned with members
  int k_star = 0;             // 1-based pivot in sorted order; |K_j| + 1 when all saturate
};

/// Water level of a cell given its weights sorted non-increasingly.
struct WaterLevel {
  int k_star = 1;
  double level = 0.0;  // mu^rho; members with weight >= level get alpha = 1
  bool saturated = false;  // |K_j| <= S: every member gets alpha = 1

  double share(double weight) const {
    if (saturated || weight >= level) return 1.0;
    return weight / level;
  }
};

/// Smallest pivot k* of the sorted weights; throws NumericalError if none.
WaterLevel water_level(std::span<const double> sorted_weights, int streams);

/// R^{rho-1} for one member.
double fairness_weight(double rate, const Fairness& fairness);

/// Optimal local shares for a cell. member_ids break ties in the sort
/// (lower id first); positions are used when member_ids is empty.
CellAllocation local_alpha(std::span<const double> cell_rates, int streams,
                           const Fairness& fairness, std::span<const int> member_ids = {});

/// True iff S w_k / sum_i w_i <= 1 for every member.
bool heavy_load_holds(std::span<const double> cell_rates, int streams, const Fairness& fairness);

/// r_k = alpha_k R_k for each member.
std::vector<double> local_throughputs(const CellAllocation& allocation,
                                      std::span<const double> cell_rates);

/// Local allocation of every cell of a partition.
std::vector<CellAllocation> allocate_cells(const Partition& partition, const Instance& instance,
                                           const Fairness& fairness);

/// Unique-association alpha induced by a partition under the local policy.
Matrix unique_association_alpha(const Partition& partition, const Instance& instance,
                                const Fairness& fairness);

}  // namespace hetnet

#endif  // HETNET_LOCAL_POLICY_HPP_
