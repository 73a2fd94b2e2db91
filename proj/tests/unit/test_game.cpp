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
#include <random>

#include <gtest/gtest.h>

#include "hetnet/game.hpp"

namespace hetnet {
namespace {

// R = [[2, 1], [1, 2]], S = (1, 1).
Instance two_by_two() {
  Matrix r(2, 2);
  r << 2.0, 1.0, 1.0, 2.0;
  return Instance(r, IntVector::Ones(2));
}

TEST(Promised, ProportionalFairJoinsNineMembers) {
  Matrix r = Matrix::Constant(10, 2, 1.0);
  r(9, 1) = 2.0;
  const Instance inst(r, IntVector::Constant(2, 4));
  Partition part{std::vector<int>(10, 1)};
  part.assoc[9] = 0;
  EXPECT_NEAR(promised_throughput(9, 1, part, inst, Fairness(1.0)), 0.8, 1e-15);
}

TEST(Promised, EmptyCellAndGammaTwo) {
  Matrix r(3, 2);
  r << 3.0, 1.0, 9.0, 4.0, 9.0, 16.0;
  const Instance inst(r, IntVector::Constant(2, 2));
  const Partition empty_target{{0, 0, 0}};
  EXPECT_EQ(promised_throughput(0, 1, empty_target, inst, Fairness(2.0)), 1.0);
  // Cell {R = 4, R = 16} joined by R = 1: weights (1, 1/2, 1/4), k* = 2, the
  // newcomer is saturated.
  const Partition part{{0, 1, 1}};
  EXPECT_NEAR(promised_throughput(0, 1, part, inst, Fairness(2.0)), 1.0, 1e-15);
  EXPECT_THROW(promised_throughput(0, 0, part, inst, Fairness(2.0)), InvalidInput);
  EXPECT_THROW(promised_throughput(5, 1, part, inst, Fairness(2.0)), InvalidInput);
}

TEST(Promised, DecreasesWithTargetSize) {
  const Instance inst(Matrix::Constant(12, 2, 1.0), IntVector::Constant(2, 3));
  Partition part{std::vector<int>(12, 0)};
  double previous = 2.0;
  for (int n = 1; n < 12; ++n) {
    part.assoc[n] = 1;
    const double v = promised_throughput(0, 1, part, inst, Fairness(1.0));
    EXPECT_LE(v, previous);
    if (n >= 3) {
      EXPECT_LT(v, previous);
    }
    previous = v;
  }
}

TEST(Nash, TwoByTwoCases) {
  const Instance inst = two_by_two();
  const Fairness pf(1.0);
  EXPECT_TRUE(is_nash(Partition{{0, 1}}, inst, pf).nash);
  const NashCheck both = is_nash(Partition{{0, 0}}, inst, pf);
  EXPECT_FALSE(both.nash);
  EXPECT_EQ(both.user, 1);
  EXPECT_EQ(both.bs, 1);
  const auto all = enumerate_nash(inst, pf);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_NE(std::find(all.begin(), all.end(), Partition{{0, 1}}), all.end());
  EXPECT_NE(std::find(all.begin(), all.end(), Partition{{1, 0}}), all.end());
}

TEST(Nash, SingleBsAlwaysNash) {
  const Instance inst(Matrix::Constant(4, 1, 2.0), IntVector::Ones(1));
  EXPECT_TRUE(is_nash(Partition{{0, 0, 0, 0}}, inst, Fairness(2.0)).nash);
  EXPECT_EQ(enumerate_nash(inst, Fairness(2.0)).size(), 1u);
}

TEST(Nash, EnumerationBound) {
  const Instance inst(Matrix::Constant(12, 4, 1.0), IntVector::Ones(4));
  EXPECT_THROW(enumerate_nash(inst, Fairness(1.0), 1000), InvalidInput);
}

TEST(Dynamics, NashStateIsAbsorbing) {
  const Instance inst = two_by_two();
  GameState s;
  s.partition = Partition{{0, 1}};
  s.pi = 0.9;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(step_synchronous(s, inst, Fairness(1.0), rng).partition, s.partition);
    EXPECT_EQ(step_asynchronous(s, inst, Fairness(1.0), rng).partition, s.partition);
  }
  const GameResult res = run_game(s, inst, Fairness(1.0));
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.steps, 0);
}

TEST(Dynamics, CoinNearOneSwitchesImprovableUser) {
  const Instance inst = two_by_two();
  GameState s;
  s.partition = Partition{{0, 0}};
  s.pi = 1.0 - 1e-12;
  std::mt19937_64 rng(4);
  int switches = 0;
  const GameState next = step_synchronous(s, inst, Fairness(1.0), rng, &switches);
  EXPECT_EQ(switches, 1);
  EXPECT_EQ(next.partition, (Partition{{0, 1}}));
  EXPECT_EQ(next.step_count, 1);
}

TEST(Dynamics, TwoByTwoConvergesToSplit) {
  const Instance inst = two_by_two();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GameState s;
    s.partition = Partition{{0, 0}};
    s.rng_seed = seed;
    std::vector<GameTraceRow> trace;
    const GameResult res = run_game(s, inst, Fairness(1.0), {}, &trace);
    ASSERT_TRUE(res.converged);
    EXPECT_TRUE(res.nash_certified);
    EXPECT_EQ(res.final_partition, (Partition{{0, 1}}));
    EXPECT_EQ(static_cast<long>(trace.size()), res.steps + 1);
    EXPECT_TRUE(trace.back().nash);
    EXPECT_NEAR(res.throughputs(1), 2.0, 1e-15);
  }
}

TEST(Dynamics, DeterministicGivenSeed) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.5, 5.0);
  Matrix r(30, 4);
  for (int k = 0; k < 30; ++k)
    for (int j = 0; j < 4; ++j) r(k, j) = u(gen);
  const Instance inst(r, IntVector::Constant(4, 2));
  GameState s;
  s.partition = random_partition(inst, 3);
  s.rng_seed = 99;
  for (UpdateMode mode : {UpdateMode::Synchronous, UpdateMode::Asynchronous}) {
    GameOptions opt;
    opt.mode = mode;
    const GameResult a = run_game(s, inst, Fairness(1.0), opt);
    const GameResult b = run_game(s, inst, Fairness(1.0), opt);
    EXPECT_TRUE(a.converged);
    EXPECT_EQ(a.final_partition, b.final_partition);
    EXPECT_EQ(a.steps, b.steps);
  }
}

TEST(Dynamics, Validation) {
  const Instance inst = two_by_two();
  GameState s;
  s.partition = Partition{{0, 1}};
  s.pi = 1.0;
  EXPECT_THROW(run_game(s, inst, Fairness(1.0)), InvalidInput);
  s.pi = 0.5;
  GameOptions opt;
  opt.max_steps = 0;
  EXPECT_THROW(run_game(s, inst, Fairness(1.0), opt), InvalidInput);
  EXPECT_EQ(update_mode_from_string("async"), UpdateMode::Asynchronous);
  EXPECT_THROW(update_mode_from_string("sometimes"), InvalidInput);
}

}  // namespace
}  // namespace hetnet
