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

#include "hetnet/game.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "hetnet/csv.hpp"
#include "hetnet/local_policy.hpp"

namespace hetnet {

namespace {

// Fairness weights of every cell, sorted non-increasingly.
class CellWeights {
 public:
  CellWeights(const Partition& partition, const Instance& instance, const Fairness& fairness)
      : instance_(instance), fairness_(fairness), sorted_(instance.num_bs()),
        levels_(instance.num_bs()) {
    for (int k = 0; k < partition.num_users(); ++k) {
      const int j = partition.assoc[k];
      sorted_[j].push_back(fairness_weight(instance.rates(k, j), fairness));
    }
    for (int j = 0; j < instance.num_bs(); ++j) {
      std::sort(sorted_[j].begin(), sorted_[j].end(), std::greater<>());
      if (!sorted_[j].empty()) levels_[j] = water_level(sorted_[j], instance.streams(j));
    }
  }

  // Throughput of member k of cell j.
  double current(int k, int j) const {
    const double r = instance_.rates(k, j);
    return levels_[j].share(fairness_weight(r, fairness_)) * r;
  }

  // Throughput of outsider k after joining cell j.
  double promised(int k, int j) const {
    const double r = instance_.rates(k, j);
    const double w = fairness_weight(r, fairness_);
    std::vector<double> merged;
    merged.reserve(sorted_[j].size() + 1);
    const auto pos = std::upper_bound(sorted_[j].begin(), sorted_[j].end(), w, std::greater<>());
    merged.insert(merged.end(), sorted_[j].begin(), pos);
    merged.push_back(w);
    merged.insert(merged.end(), pos, sorted_[j].end());
    return water_level(merged, instance_.streams(j)).share(w) * r;
  }

  std::optional<std::pair<int, double>> best_alternative(int k, int own) const {
    std::optional<std::pair<int, double>> best;
    for (int j = 0; j < instance_.num_bs(); ++j) {
      if (j == own || !instance_.allowed(k, j)) continue;
      const double v = promised(k, j);
      if (!best || v > best->second) best = std::make_pair(j, v);
    }
    return best;
  }

 private:
  const Instance& instance_;
  const Fairness& fairness_;
  std::vector<std::vector<double>> sorted_;
  std::vector<WaterLevel> levels_;
};

}  // namespace

std::string to_string(UpdateMode mode) {
  return mode == UpdateMode::Synchronous ? "synchronous" : "asynchronous";
}

UpdateMode update_mode_from_string(const std::string& name) {
  if (name == "synchronous" || name == "sync") return UpdateMode::Synchronous;
  if (name == "asynchronous" || name == "async") return UpdateMode::Asynchronous;
  throw InvalidInput("unknown update mode '" + name + "'");
}

void GameState::validate(const Instance& instance) const {
  if (!(pi > 0.0 && pi < 1.0)) throw InvalidInput("switching probability must lie in (0, 1)");
  partition.validate(instance.allowed);
}

Vector current_throughputs(const Partition& partition, const Instance& instance,
                           const Fairness& fairness) {
  partition.validate(instance.allowed);
  const CellWeights cells(partition, instance, fairness);
  Vector r(partition.num_users());
  for (int k = 0; k < partition.num_users(); ++k) r(k) = cells.current(k, partition.assoc[k]);
  return r;
}

double promised_throughput(int k, int target_bs, const Partition& partition,
                           const Instance& instance, const Fairness& fairness) {
  partition.validate(instance.allowed);
  if (k < 0 || k >= partition.num_users()) throw InvalidInput("user index out of range");
  if (target_bs < 0 || target_bs >= instance.num_bs() || !instance.allowed(k, target_bs)) {
    throw InvalidInput("target BS is not an allowed action");
  }
  if (target_bs == partition.assoc[k]) throw InvalidInput("target BS is the current BS");
  return CellWeights(partition, instance, fairness).promised(k, target_bs);
}

std::optional<std::pair<int, double>> best_alternative(int k, const Partition& partition,
                                                       const Instance& instance,
                                                       const Fairness& fairness) {
  partition.validate(instance.allowed);
  return CellWeights(partition, instance, fairness).best_alternative(k, partition.assoc.at(k));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

GameState step_synchronous(const GameState& state, const Instance& instance,
                           const Fairness& fairness, std::mt19937_64& rng, int* switches) {
  const CellWeights cells(state.partition, instance, fairness);
  GameState next = state;
  int moved = 0;
  for (int k = 0; k < state.partition.num_users(); ++k) {
    const int own = state.partition.assoc[k];
    const double coin = uniform01(rng);
    const auto alt = cells.best_alternative(k, own);
    if (alt && alt->second > cells.current(k, own) && coin < state.pi) {
      next.partition.assoc[k] = alt->first;
      ++moved;
    }
  }
  ++next.step_count;
  if (switches) *switches = moved;
  return next;
}

GameState step_asynchronous(const GameState& state, const Instance& instance,
                            const Fairness& fairness, std::mt19937_64& rng, int* switches) {
  const int K = state.partition.num_users();
  const int k = std::min(K - 1, static_cast<int>(uniform01(rng) * K));
  const double coin = uniform01(rng);
  GameState next = state;
  int moved = 0;
  const int own = state.partition.assoc[k];
  const CellWeights cells(state.partition, instance, fairness);
  const auto alt = cells.best_alternative(k, own);
  if (alt && alt->second > cells.current(k, own) && coin < state.pi) {
    next.partition.assoc[k] = alt->first;
    moved = 1;
  }
  ++next.step_count;
  if (switches) *switches = moved;
  return next;
}

NashCheck is_nash(const Partition& partition, const Instance& instance, const Fairness& fairness) {
  partition.validate(instance.allowed);
  const CellWeights cells(partition, instance, fairness);
  for (int k = 0; k < partition.num_users(); ++k) {
    const int own = partition.assoc[k];
    const double r = cells.current(k, own);
    for (int j = 0; j < instance.num_bs(); ++j) {
      if (j == own || !instance.allowed(k, j)) continue;
      if (cells.promised(k, j) > r) return {false, k, j};
    }
  }
  return {};
}

GameResult run_game(const GameState& state, const Instance& instance, const Fairness& fairness,
                    const GameOptions& options, std::vector<GameTraceRow>* trace) {
  instance.validate();
  state.validate(instance);
  if (options.max_steps < 1) throw InvalidInput("max_steps must be >= 1");
  std::mt19937_64 rng(state.rng_seed);
  GameState cur = state;
  GameResult res;
  bool nash = is_nash(cur.partition, instance, fairness).nash;
  auto record = [&](long round, int switches) {
    if (!trace) return;
    trace->push_back({round, switches,
                      utility(current_throughputs(cur.partition, instance, fairness), fairness),
                      nash});
  };
  record(0, 0);
  long steps = 0;
  while (!nash && steps < options.max_steps) {
    int switches = 0;
    cur = options.mode == UpdateMode::Synchronous
              ? step_synchronous(cur, instance, fairness, rng, &switches)
              : step_asynchronous(cur, instance, fairness, rng, &switches);
    ++steps;
    nash = is_nash(cur.partition, instance, fairness).nash;
    record(steps, switches);
  }
  res.converged = nash;
  res.nash_certified = nash;
  res.steps = steps;
  res.final_partition = cur.partition;
  res.throughputs = current_throughputs(cur.partition, instance, fairness);
  return res;
}

std::vector<Partition> enumerate_nash(const Instance& instance, const Fairness& fairness,
                                      long max_states) {
  instance.validate();
  const int K = instance.num_users();
  std::vector<std::vector<int>> actions(K);
  double states = 1.0;
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < instance.num_bs(); ++j) {
      if (instance.allowed(k, j)) actions[k].push_back(j);
    }
    states *= static_cast<double>(actions[k].size());
  }
  if (states > static_cast<double>(max_states)) {
    throw InvalidInput("joint action space too large to enumerate");
  }
  std::vector<Partition> out;
  std::vector<std::size_t> digit(K, 0);
  Partition p;
  p.assoc.resize(K);
  while (true) {
    for (int k = 0; k < K; ++k) p.assoc[k] = actions[k][digit[k]];
    if (is_nash(p, instance, fairness).nash) out.push_back(p);
    int k = 0;
    while (k < K && ++digit[k] == actions[k].size()) digit[k++] = 0;
    if (k == K) break;
  }
  return out;
}

Partition random_partition(const Instance& instance, std::uint64_t seed) {
  instance.validate();
  std::mt19937_64 rng(seed);
  Partition p;
  for (int k = 0; k < instance.num_users(); ++k) {
    std::vector<int> options;
    for (int j = 0; j < instance.num_bs(); ++j) {
      if (instance.allowed(k, j)) options.push_back(j);
    }
    const auto n = static_cast<int>(options.size());
    p.assoc.push_back(options[std::min(n - 1, static_cast<int>(uniform01(rng) * n))]);
  }
  return p;
}

void save_game_trace_csv(const std::string& path, const std::vector<GameTraceRow>& trace) {
  std::ostringstream out;
  out << "round,switches,utility,nash\n";
  for (const auto& row : trace) {
    out << row.round << ',' << row.switches << ',' << csv::format(row.utility) << ','
        << (row.nash ? 1 : 0) << '\n';
  }
  csv::write_file(path, out.str());
}

}  // namespace hetnet
