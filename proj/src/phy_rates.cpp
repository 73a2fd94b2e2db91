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

#include "hetnet/phy_rates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "hetnet/csv.hpp"

namespace hetnet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_link(int k, int j, const Matrix& gains, const PilotPlan& plan,
                const LinkBudget& budget) {
  if (k < 0 || k >= gains.rows() || j < 0 || j >= gains.cols()) {
    throw InvalidInput("user/BS index out of range");
  }
  if (budget.snr.size() != gains.cols() || budget.spatial_load.size() != gains.cols()) {
    throw InvalidInput("link budget does not match the gain matrix");
  }
  if (static_cast<Eigen::Index>(plan.per_bs.size()) != gains.cols()) {
    throw InvalidInput("pilot plan does not match the gain matrix");
  }
}

}  // namespace

std::string to_string(Precoder precoder) { return precoder == Precoder::CBF ? "cbf" : "zfbf"; }

Precoder precoder_from_string(const std::string& name) {
  if (name == "cbf") return Precoder::CBF;
  if (name == "zfbf") return Precoder::ZFBF;
  throw InvalidInput("unknown precoder '" + name + "'");
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double thermal_noise_dbm(double bandwidth_hz) {
  return -174.0 + 10.0 * std::log10(bandwidth_hz);
}

int PilotPlan::pilot_of(int k, int j) const {
  const auto& owned = per_bs.at(j);
  const auto h = splitmix64(static_cast<std::uint64_t>(static_cast<std::int64_t>(user_ids.at(k))));
  return owned[h % owned.size()];
}

void PilotPlan::validate() const {
  if (num_pilots < 1) throw InvalidInput("pilot plan has no pilots");
  if (static_cast<int>(contamination.size()) != num_pilots) {
    throw InvalidInput("contamination sets do not cover every pilot");
  }
  std::vector<std::set<int>> expected(num_pilots);
  for (int j = 0; j < static_cast<int>(per_bs.size()); ++j) {
    std::set<int> seen;
    if (per_bs[j].empty()) throw InvalidInput("BS without pilots");
    for (int q : per_bs[j]) {
      if (q < 0 || q >= num_pilots) throw InvalidInput("pilot id out of range");
      if (!seen.insert(q).second) throw InvalidInput("BS pilots must be distinct");
      expected[q].insert(j);
    }
  }
  for (int q = 0; q < num_pilots; ++q) {
    const std::set<int> got(contamination[q].begin(), contamination[q].end());
    if (got != expected[q]) throw InvalidInput("contamination sets inconsistent with BS pilots");
  }
}

PilotPlan allocate_pilots(const NetworkTopology& topology, PilotPolicy policy) {
  const int J = topology.num_bs();
  int macro_pool = 0;
  int small_pool = 0;
  for (const auto& bs : topology.base_stations) {
    int& pool = bs.tier == Tier::Macro ? macro_pool : small_pool;
    pool = std::max(pool, bs.streams);
  }

  PilotPlan plan;
  plan.per_bs.resize(J);
  for (const auto& u : topology.users) plan.user_ids.push_back(u.id);

  for (int j = 0; j < J; ++j) {
    const auto& bs = topology.base_stations[j];
    if (bs.tier != Tier::Macro) continue;
    for (int s = 0; s < bs.streams; ++s) plan.per_bs[j].push_back(s);
  }

  if (policy == PilotPolicy::SharedPerTier) {
    for (int j = 0; j < J; ++j) {
      const auto& bs = topology.base_stations[j];
      if (bs.tier != Tier::Small) continue;
      for (int s = 0; s < bs.streams; ++s) plan.per_bs[j].push_back(macro_pool + s);
    }
    plan.num_pilots = macro_pool + small_pool;
  } else {
    // Within a zone, small cells take consecutive pilot blocks in BS order;
    // the same block layout is reused by every zone.
    std::map<int, int> zone_offset;
    int zone_block = 0;
    for (int j = 0; j < J; ++j) {
      const auto& bs = topology.base_stations[j];
      if (bs.tier != Tier::Small) continue;
      if (bs.zone < 0) {
        throw InvalidInput("hot-zone pilot reuse needs zone metadata on small cell " +
                           std::to_string(bs.id));
      }
      int& offset = zone_offset[bs.zone];
      for (int s = 0; s < bs.streams; ++s) plan.per_bs[j].push_back(macro_pool + offset + s);
      offset += bs.streams;
      zone_block = std::max(zone_block, offset);
    }
    plan.num_pilots = macro_pool + zone_block;
  }

  plan.contamination.assign(plan.num_pilots, {});
  for (int j = 0; j < J; ++j) {
    for (int q : plan.per_bs[j]) plan.contamination[q].push_back(j);
  }
  return plan;
}

void RateModelParams::validate() const {
  if (!(noise_power_w > 0.0)) throw InvalidInput("noise power must be positive");
  if (slot_dimension < 1) throw InvalidInput("slot dimension must be >= 1");
  if (pilot_dimension && (*pilot_dimension < 1 || *pilot_dimension > slot_dimension)) {
    throw InvalidInput("pilot dimension must satisfy 0 < Q <= T");
  }
  if (!(uplink_pilot_power_w > 0.0)) throw InvalidInput("uplink pilot power must be positive");
  if (!(eta >= 1.0)) throw InvalidInput("eta must be >= 1");
}

LinkBudget link_budget(const NetworkTopology& topology, const RateModelParams& params,
                       int pilot_dimension) {
  params.validate();
  if (pilot_dimension < 1) throw InvalidInput("pilot dimension must be >= 1");
  LinkBudget b;
  const int J = topology.num_bs();
  b.snr.resize(J);
  b.spatial_load.resize(J);
  for (int j = 0; j < J; ++j) {
    const auto& bs = topology.base_stations[j];
    b.snr(j) = dbm_to_watts(bs.tx_power_dbm) / params.noise_power_w;
    b.spatial_load(j) = bs.spatial_load();
  }
  b.sigma2 = params.noise_power_w / (pilot_dimension * params.uplink_pilot_power_w);
  b.eta = params.eta;
  return b;
}

double sinr_cbf(int k, int j, const Matrix& gains, const PilotPlan& plan,
                const LinkBudget& budget) {
  check_link(k, j, gains, plan, budget);
  const auto& nu = budget.spatial_load;
  const auto& snr = budget.snr;
  if (!(nu(j) > 0.0)) throw InvalidInput("spatial load of the serving BS must be positive");
  const double g = gains(k, j);
  const double signal = g * g * snr(j) / nu(j);
  double denom = budget.eta;
  for (Eigen::Index l = 0; l < gains.cols(); ++l) denom += gains(k, l) * snr(l);
  for (int l : plan.sharing(k, j)) {
    if (l == j) continue;
    if (!(nu(l) > 0.0)) throw InvalidInput("spatial load of a contaminating BS must be positive");
    denom += gains(k, l) * gains(k, l) * snr(l) / nu(l);
  }
  return signal / denom;
}

double sinr_zfbf(int k, int j, const Matrix& gains, const PilotPlan& plan,
                 const LinkBudget& budget) {
  check_link(k, j, gains, plan, budget);
  const auto& nu = budget.spatial_load;
  const auto& snr = budget.snr;
  if (!(nu(j) > 0.0) || !(nu(j) < 1.0)) {
    throw InvalidInput("zero-forcing needs 0 < nu_j < 1");
  }
  const double g = gains(k, j);
  const double signal = (1.0 - nu(j)) * g * g * snr(j) / nu(j);
  double denom = budget.eta + budget.sigma2 * g * snr(j);
  for (Eigen::Index l = 0; l < gains.cols(); ++l) {
    if (l != j) denom += gains(k, l) * snr(l);
  }
  for (int l : plan.sharing(k, j)) {
    if (l == j) continue;
    if (!(nu(l) > 0.0)) throw InvalidInput("spatial load of a contaminating BS must be positive");
    denom += (1.0 - nu(l)) * gains(k, l) * gains(k, l) * snr(l) / nu(l);
  }
  return signal / denom;
}

Matrix rate_matrix(const NetworkTopology& topology, const Matrix& gains, const PilotPlan& plan,
                   const RateModelParams& params) {
  params.validate();
  if (gains.rows() != topology.num_users() || gains.cols() != topology.num_bs()) {
    throw InvalidInput("gain matrix shape does not match the topology");
  }
  const int q = params.pilot_dimension.value_or(plan.num_pilots);
  if (q < 1 || q > params.slot_dimension) throw InvalidInput("pilot dimension must satisfy 0 < Q <= T");
  const LinkBudget budget = link_budget(topology, params, q);
  const double data_fraction = 1.0 - static_cast<double>(q) / params.slot_dimension;
  Matrix rates(gains.rows(), gains.cols());
  for (Eigen::Index k = 0; k < gains.rows(); ++k) {
    for (Eigen::Index j = 0; j < gains.cols(); ++j) {
      const double sinr = params.precoder == Precoder::CBF
                              ? sinr_cbf(static_cast<int>(k), static_cast<int>(j), gains, plan, budget)
                              : sinr_zfbf(static_cast<int>(k), static_cast<int>(j), gains, plan, budget);
      rates(k, j) = data_fraction * std::log2(1.0 + sinr);
    }
  }
  return rates;
}

void save_rate_matrix(const NetworkTopology& topology, const Matrix& rates,
                      const std::string& path) {
  std::vector<int> users, bss;
  for (const auto& u : topology.users) users.push_back(u.id);
  for (const auto& bs : topology.base_stations) bss.push_back(bs.id);
  std::ostringstream out;
  csv::write_matrix(out, "user_id", users, bss, rates, 12);
  csv::write_file(path, out.str());
}

Matrix load_rate_matrix(const std::string& path, std::vector<int>* user_ids,
                        std::vector<int>* bs_ids) {
  std::istringstream in(csv::read_file(path));
  return csv::read_matrix(in, user_ids, bs_ids);
}

}  // namespace hetnet
