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

// Decentralized association game: every user picks one BS, every BS splits
// its streams by the local fair policy, and users move to the BS promising
// the highest throughput.

#ifndef HETNET_GAME_HPP_
#define HETNET_GAME_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hetnet/assoc_core.hpp"

namespace hetnet {

enum class UpdateMode { Synchronous, Asynchronous };

std::string to_string(UpdateMode mode);
UpdateMode update_mode_from_string(const std::string& name);

struct GameState {
  Partition partition;
  double pi = 0.1;  // switching probability, in (0, 1)
  long step_count = 0;
  std::uint64_t rng_seed = 0;

  void validate(const Instance& instance) const;
};

struct GameResult {
  bool converged = false;
  long steps = 0;
  Partition final_partition;
  Vector throughputs;
  bool nash_certified = false;
};

struct GameTraceRow {
  long round = 0;
  int switches = 0;
  double utility = 0.0;
  bool nash = false;
};

/// Throughput of every user under the local policy of its own cell.
Vector current_throughputs(const Partition& partition, const Instance& instance,
                           const Fairness& fairness);

/// Throughput user k would get after joining target_bs, whose members are
/// taken from the partition.
double promised_throughput(int k, int target_bs, const Partition& partition,
                           const Instance& instance, const Fairness& fairness);

/// Best alternative BS of user k and its promise; nullopt when k has no
/// alternative. Ties go to the lower BS index.
std::optional<std::pair<int, double>> best_alternative(int k, const Partition& partition,
                                                       const Instance& instance,
                                                       const Fairness& fairness);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double uniform01(std::mt19937_64& rng);

/// Every improvable user switches to its best alternative with probability pi.
GameState step_synchronous(const GameState& state, const Instance& instance,
                           const Fairness& fairness, std::mt19937_64& rng,
                           int* switches = nullptr);

/// One uniformly drawn user switches to its best alternative with
/// probability pi if that improves its throughput.
GameState step_asynchronous(const GameState& state, const Instance& instance,
                            const Fairness& fairness, std::mt19937_64& rng,
                            int* switches = nullptr);

struct NashCheck {
  bool nash = true;
  int user = -1;  // witness of a profitable deviation
  int bs = -1;
};

NashCheck is_nash(const Partition& partition, const Instance& instance, const Fairness& fairness);

struct GameOptions {
  long max_steps = 10000;
  UpdateMode mode = UpdateMode::Synchronous;
};

/// Iterates rounds from state until a Nash partition or max_steps. The
/// random stream is seeded with state.rng_seed. One trace row per round,
/// round 0 being the initial partition.
GameResult run_game(const GameState& state, const Instance& instance, const Fairness& fairness,
                    const GameOptions& options = {}, std::vector<GameTraceRow>* trace = nullptr);

/// Every Nash partition over the joint action space; throws InvalidInput
/// when that space exceeds max_states.
std::vector<Partition> enumerate_nash(const Instance& instance, const Fairness& fairness,
                                      long max_states = 1000000);

/// Uniformly random valid partition.
Partition random_partition(const Instance& instance, std::uint64_t seed);

void save_game_trace_csv(const std::string& path, const std::vector<GameTraceRow>& trace);

}  // namespace hetnet

#endif  // HETNET_GAME_HPP_
