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

// Deterministic large-antenna downlink rates with pilot contamination, for
// conjugate (CBF) and zero-forcing (ZFBF) beamforming.
//
// Every rate is the large-system limit of the per-slot rate, so R_{k,j}
// depends only on large-scale gains, powers, spatial loads and the pilot
// plan, never on a channel draw.

#ifndef HETNET_PHY_RATES_HPP_
#define HETNET_PHY_RATES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/topology.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

enum class Precoder { CBF, ZFBF };
enum class PilotPolicy { SharedPerTier, HotZoneReuse };

std::string to_string(Precoder precoder);
Precoder precoder_from_string(const std::string& name);

double dbm_to_watts(double dbm);

/// Thermal noise floor over the given bandwidth, in dBm.
double thermal_noise_dbm(double bandwidth_hz);

/// Assignment of mutually orthogonal uplink pilots to base stations.
///
/// BS j owns S_j distinct pilots; pilots shared between BSs contaminate each
/// other's channel estimates.
struct PilotPlan {
  int num_pilots = 0;
  std::vector<std::vector<int>> per_bs;         // pilot ids owned by BS index j
  std::vector<std::vector<int>> contamination;  // BS indices using pilot q
  std::vector<int> user_ids;                    // user id of row k

  /// Pilot user k would use on BS j: the (hash(id) mod S_j)-th pilot of BS j.
  int pilot_of(int k, int j) const;

  /// BSs sharing the pilot of user k on BS j (j included).
  const std::vector<int>& sharing(int k, int j) const { return contamination[pilot_of(k, j)]; }

  void validate() const;
};

PilotPlan allocate_pilots(const NetworkTopology& topology, PilotPolicy policy);

struct RateModelParams {
  double noise_power_w = dbm_to_watts(thermal_noise_dbm(180e3));
  int slot_dimension = 196;                // T
  std::optional<int> pilot_dimension;      // Q; the plan's pilot count when unset
  double uplink_pilot_power_w = dbm_to_watts(23.0);
  double eta = 1.0;
  Precoder precoder = Precoder::ZFBF;

  void validate() const;
};

/// Per-BS quantities entering the SINR expressions.
struct LinkBudget {
  Vector snr;           // P_j / N0
  Vector spatial_load;  // nu_j = S_j / M_j
  double sigma2 = 0.0;  // projected pilot noise N0 / (Q P_u)
  double eta = 1.0;
};

LinkBudget link_budget(const NetworkTopology& topology, const RateModelParams& params,
                       int pilot_dimension);

double sinr_cbf(int k, int j, const Matrix& gains, const PilotPlan& plan,
                const LinkBudget& budget);

double sinr_zfbf(int k, int j, const Matrix& gains, const PilotPlan& plan,
                 const LinkBudget& budget);

/// K x J matrix of R_{k,j} = (1 - Q/T) log2(1 + SINR_{k,j}), bit/dimension.
Matrix rate_matrix(const NetworkTopology& topology, const Matrix& gains, const PilotPlan& plan,
                   const RateModelParams& params);

void save_rate_matrix(const NetworkTopology& topology, const Matrix& rates,
                      const std::string& path);

/// Reads a rate CSV; returns the matrix and fills the row/column ids.
Matrix load_rate_matrix(const std::string& path, std::vector<int>* user_ids = nullptr,
                        std::vector<int>* bs_ids = nullptr);

}  // namespace hetnet

#endif  // HETNET_PHY_RATES_HPP_
