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

// Multi-realization harness comparing the centralized optimum, the
// decentralized game and max-peak-rate association.

#ifndef HETNET_EXPERIMENTS_HPP_
#define HETNET_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hetnet/assoc_core.hpp"
#include "hetnet/central_solver.hpp"
#include "hetnet/game.hpp"
#include "hetnet/phy_rates.hpp"
#include "hetnet/topology.hpp"

namespace hetnet {

enum class Algorithm { Centralized, Distributed, MaxPeakRate };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

struct ThroughputStats {
  double p5 = 0.0;
  double geo_mean = 0.0;
  double arith_mean = 0.0;
};

/// Nearest-rank 5th percentile, geometric and arithmetic means. Throws
/// InvalidInput on an empty vector or a non-positive entry.
ThroughputStats stats(const Vector& throughputs);

/// Each user on its highest-rate allowed BS; ties go to the lower index.
Partition max_peak_rate_assoc(const Instance& instance);

/// Serving BS of each user under a fractional alpha: the column holding the
/// user's largest fraction, ties to the lower index.
Partition dominant_association(const Matrix& alpha);

struct LoadEntry {
  int bs_id = 0;
  Tier tier = Tier::Macro;
  int count = 0;
};

/// Users per BS, macros first, each tier sorted by count descending and
/// then by BS id.
std::vector<LoadEntry> load_profile(const Partition& partition, const NetworkTopology& topology);

enum class Layout { Experiment1, HetNet3gpp };

std::string to_string(Layout layout);
Layout layout_from_string(const std::string& name);

struct ExperimentConfig {
  Layout layout = Layout::Experiment1;
  Experiment1Params experiment1 = Experiment1Params::desk_scale();
  HetNet3gppParams hetnet3gpp = HetNet3gppParams::desk_scale();
  RateModelParams rate;
  PilotPolicy pilot_policy = PilotPolicy::SharedPerTier;
  double gamma = 1.0;
  DualOptions dual;
  double pi = 0.1;
  GameOptions game;
  std::vector<Algorithm> algorithms{Algorithm::Centralized, Algorithm::Distributed,
                                    Algorithm::MaxPeakRate};
  int jobs = 1;

  void validate() const;
};

struct AlgorithmOutcome {
  Algorithm algorithm = Algorithm::MaxPeakRate;
  ThroughputStats stats;
  double utility = 0.0;
  std::vector<LoadEntry> loads;
  bool converged = true;  // game convergence; true for the other algorithms
  long steps = 0;         // game rounds
  double theta_max = 1.0;  // centralized recovery
};

struct RealizationResult {
  std::uint64_t seed = 0;
  int num_users = 0;
  int num_bs = 0;
  std::vector<AlgorithmOutcome> outcomes;  // in config.algorithms order

  const AlgorithmOutcome& outcome(Algorithm algorithm) const;
};

struct ExperimentReport {
  std::vector<RealizationResult> realizations;  // in seed order

  /// Ratio of `numerator` over `denominator` stats per realization for
  /// statistic "p5", "geo" or "arith".
  std::vector<double> ratios(Algorithm numerator, Algorithm denominator,
                             const std::string& statistic) const;
};

/// Builds the instance of one realization.
struct Realization {
  NetworkTopology topology;
  Instance instance;
};
Realization make_realization(const ExperimentConfig& config, std::uint64_t seed);

RealizationResult run_realization(const ExperimentConfig& config, std::uint64_t seed);

/// Runs every seed on a pool of config.jobs workers; deterministic in seeds.
ExperimentReport run_realizations(const ExperimentConfig& config,
                                  const std::vector<std::uint64_t>& seeds);

/// stats.csv: seed,algorithm,p5,geo,arith
void write_stats_csv(const std::string& path, const ExperimentReport& report);
/// gains.csv: seed,statistic,ratio (distributed over max-peak-rate)
void write_gains_csv(const std::string& path, const ExperimentReport& report);
/// loads.csv: seed,algorithm,bs_id,tier,count
void write_loads_csv(const std::string& path, const ExperimentReport& report);

}  // namespace hetnet

#endif  // HETNET_EXPERIMENTS_HPP_
