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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "hetnet/phy_rates.hpp"

namespace hetnet {
namespace {

// J BSs, one user; every BS owns pilot 0 when shared, else its own pilot.
PilotPlan single_pilot_plan(int J, bool shared) {
  PilotPlan plan;
  plan.user_ids = {0};
  plan.per_bs.resize(J);
  plan.num_pilots = shared ? 1 : J;
  plan.contamination.assign(plan.num_pilots, {});
  for (int j = 0; j < J; ++j) {
    const int q = shared ? 0 : j;
    plan.per_bs[j] = {q};
    plan.contamination[q].push_back(j);
  }
  return plan;
}

LinkBudget budget(const Vector& snr, const Vector& nu, double sigma2 = 0.0) {
  LinkBudget b;
  b.snr = snr;
  b.spatial_load = nu;
  b.sigma2 = sigma2;
  b.eta = 1.0;
  return b;
}

TEST(Sinr, CbfSingleCellHandValue) {
  const Matrix g = Matrix::Constant(1, 1, 1.0);
  const auto b = budget(Vector::Constant(1, 10.0), Vector::Constant(1, 0.1));
  EXPECT_NEAR(sinr_cbf(0, 0, g, single_pilot_plan(1, true), b), 100.0 / 11.0, 1e-12);
}

TEST(Sinr, ZfbfSingleCellHandValue) {
  const Matrix g = Matrix::Constant(1, 1, 1.0);
  const auto b = budget(Vector::Constant(1, 10.0), Vector::Constant(1, 0.1));
  EXPECT_NEAR(sinr_zfbf(0, 0, g, single_pilot_plan(1, true), b), 90.0, 1e-12);
}

TEST(Sinr, ZeroGainGivesZero) {
  Matrix g(1, 2);
  g << 0.0, 0.5;
  const auto b = budget(Vector::Constant(2, 10.0), Vector::Constant(2, 0.1));
  const auto plan = single_pilot_plan(2, true);
  EXPECT_EQ(sinr_cbf(0, 0, g, plan, b), 0.0);
  EXPECT_EQ(sinr_zfbf(0, 0, g, plan, b), 0.0);
}

TEST(Sinr, PilotContaminationLimit) {
  Matrix g(1, 2);
  g << 1.0, 0.5;
  const auto b = budget(Vector::Constant(2, 10.0), Vector::Constant(2, 1e-9));
  const auto plan = single_pilot_plan(2, true);
  EXPECT_NEAR(sinr_cbf(0, 0, g, plan, b), 4.0, 4.0 * 1e-6);
  EXPECT_NEAR(sinr_zfbf(0, 0, g, plan, b), 4.0, 4.0 * 1e-6);
}

TEST(Sinr, ZfbfHasNoIntraCellInterference) {
  // One cell, sigma^2 = 0: the denominator is the noise term alone.
  const Matrix g = Matrix::Constant(1, 1, 0.3);
  const auto b = budget(Vector::Constant(1, 50.0), Vector::Constant(1, 0.25));
  EXPECT_NEAR(sinr_zfbf(0, 0, g, single_pilot_plan(1, true), b),
              0.75 * 0.09 * 50.0 / 0.25, 1e-12);
}

TEST(Sinr, OrthogonalPilotsRemoveContamination) {
  Matrix g(1, 2);
  g << 1.0, 0.5;
  const auto b = budget(Vector::Constant(2, 10.0), Vector::Constant(2, 0.1));
  // CBF: 1 * 10 / 0.1 over 1 + 10 + 5.
  EXPECT_NEAR(sinr_cbf(0, 0, g, single_pilot_plan(2, false), b), 100.0 / 16.0, 1e-12);
}

TEST(Sinr, ZfbfRejectsFullSpatialLoad) {
  const Matrix g = Matrix::Constant(1, 1, 1.0);
  const auto b = budget(Vector::Constant(1, 10.0), Vector::Constant(1, 1.0));
  EXPECT_THROW(sinr_zfbf(0, 0, g, single_pilot_plan(1, true), b), InvalidInput);
}

TEST(Pilots, SharedPerTierOnExperiment1) {
  const NetworkTopology t = gen_experiment1(Experiment1Params{}, 1);
  const PilotPlan plan = allocate_pilots(t, PilotPolicy::SharedPerTier);
  EXPECT_NO_THROW(plan.validate());
  EXPECT_EQ(plan.num_pilots, 14);
  std::set<int> macros;
  std::set<int> smalls;
  for (int j = 0; j < t.num_bs(); ++j) {
    (t.base_stations[j].tier == Tier::Macro ? macros : smalls).insert(j);
  }
  for (int q = 0; q < plan.num_pilots; ++q) {
    const std::set<int> users(plan.contamination[q].begin(), plan.contamination[q].end());
    EXPECT_EQ(users, q < 10 ? macros : smalls) << "pilot " << q;
  }
}

TEST(Pilots, SingleBsHasSingletonSets) {
  NetworkTopology t;
  t.region = {100.0, 100.0, false};
  BaseStation bs;
  bs.antennas = 8;
  bs.streams = 4;
  t.base_stations = {bs};
  t.users = {{0, {1.0, 1.0}, std::nullopt}};
  const PilotPlan plan = allocate_pilots(t, PilotPolicy::SharedPerTier);
  ASSERT_EQ(plan.num_pilots, 4);
  for (const auto& c : plan.contamination) EXPECT_EQ(c.size(), 1u);
}

TEST(Pilots, HotZoneReuseOnFullLayout) {
  const NetworkTopology t = gen_hetnet_3gpp(HetNet3gppParams{}, 2);
  const PilotPlan plan = allocate_pilots(t, PilotPolicy::HotZoneReuse);
  EXPECT_NO_THROW(plan.validate());
  EXPECT_EQ(plan.num_pilots, 26);
  for (int q = 0; q < 10; ++q) EXPECT_EQ(plan.contamination[q].size(), 7u);
  // Each zone pilot is reused once per zone: 7 sites x 3 zones.
  for (int q = 10; q < 26; ++q) EXPECT_EQ(plan.contamination[q].size(), 21u);
}

TEST(Pilots, PilotOfIsOwnedByTheBs) {
  const NetworkTopology t = gen_experiment1(Experiment1Params::desk_scale(), 4);
  const PilotPlan plan = allocate_pilots(t, PilotPolicy::SharedPerTier);
  for (int k = 0; k < t.num_users(); ++k) {
    for (int j = 0; j < t.num_bs(); ++j) {
      const auto& owned = plan.per_bs[j];
      EXPECT_NE(std::find(owned.begin(), owned.end(), plan.pilot_of(k, j)), owned.end());
    }
  }
}

TEST(Rates, PilotOverheadScalesRates) {
  const NetworkTopology t = gen_experiment1(Experiment1Params::desk_scale(), 1);
  const PilotPlan plan = allocate_pilots(t, PilotPolicy::SharedPerTier);
  const Matrix g = gain_matrix(t);
  RateModelParams p;
  p.pilot_dimension = p.slot_dimension;
  EXPECT_TRUE(rate_matrix(t, g, plan, p).isZero(0.0));
  RateModelParams half;
  half.pilot_dimension = half.slot_dimension / 2;
  const Matrix r = rate_matrix(t, g, plan, half);
  const LinkBudget b = link_budget(t, half, *half.pilot_dimension);
  const double sinr = sinr_zfbf(0, 0, g, plan, b);
  EXPECT_NEAR(r(0, 0), 0.5 * std::log2(1.0 + sinr), 1e-12);
}

TEST(Rates, MacroPreferredAtMacroSite) {
  NetworkTopology t = gen_experiment1(Experiment1Params::desk_scale(), 7);
  t.users.push_back({static_cast<int>(t.users.size()), t.base_stations[0].position,
                     std::nullopt});
  const PilotPlan plan = allocate_pilots(t, PilotPolicy::SharedPerTier);
  const Matrix r = rate_matrix(t, gain_matrix(t), plan, RateModelParams{});
  const int k = t.num_users() - 1;
  EXPECT_TRUE(r.allFinite());
  EXPECT_TRUE((r.array() > 0.0).all());
  for (int j = 1; j < t.num_bs(); ++j) EXPECT_GT(r(k, 0), r(k, j));
}

TEST(Rates, CsvRoundTrip) {
  const NetworkTopology t = gen_experiment1(Experiment1Params::desk_scale(), 2);
  const PilotPlan plan = allocate_pilots(t, PilotPolicy::SharedPerTier);
  const Matrix r = rate_matrix(t, gain_matrix(t), plan, RateModelParams{});
  const auto path = std::filesystem::temp_directory_path() / "hetnet_rates_test.csv";
  save_rate_matrix(t, r, path.string());
  std::vector<int> users, bss;
  const Matrix back = load_rate_matrix(path.string(), &users, &bss);
  std::filesystem::remove(path);
  ASSERT_EQ(back.rows(), r.rows());
  EXPECT_LE(((back - r).cwiseAbs().array() / r.cwiseAbs().array().max(1e-300)).maxCoeff(), 1e-11);
  EXPECT_EQ(users.size(), static_cast<std::size_t>(t.num_users()));
  EXPECT_EQ(bss.back(), t.base_stations.back().id);
}

TEST(Units, DecibelConversions) {
  EXPECT_NEAR(dbm_to_watts(30.0), 1.0, 1e-15);
  EXPECT_NEAR(thermal_noise_dbm(1.0), -174.0, 1e-12);
  EXPECT_EQ(precoder_from_string(to_string(Precoder::CBF)), Precoder::CBF);
  EXPECT_THROW(precoder_from_string("mmse"), InvalidInput);
}

}  // namespace
}  // namespace hetnet
