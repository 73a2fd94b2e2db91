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

#include "hetnet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "hetnet/csv.hpp"
#include "hetnet/local_policy.hpp"
#include "hetnet/lp_primal.hpp"

namespace hetnet {

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Centralized:
      return "centralized";
    case Algorithm::Distributed:
      return "distributed";
    case Algorithm::MaxPeakRate:
      return "max_peak_rate";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "centralized") return Algorithm::Centralized;
  if (name == "distributed") return Algorithm::Distributed;
  if (name == "max_peak_rate") return Algorithm::MaxPeakRate;
  throw InvalidInput("unknown algorithm '" + name + "'");
}

std::string to_string(Layout layout) {
  return layout == Layout::Experiment1 ? "exp1" : "hetnet3gpp";
}

Layout layout_from_string(const std::string& name) {
  if (name == "exp1") return Layout::Experiment1;
  if (name == "hetnet3gpp") return Layout::HetNet3gpp;
  throw InvalidInput("unknown layout '" + name + "'");
}

ThroughputStats stats(const Vector& throughputs) {
  const auto K = throughputs.size();
  if (K < 1) throw InvalidInput("statistics need at least one throughput");
  std::vector<double> r(throughputs.data(), throughputs.data() + K);
  double log_sum = 0.0;
  double sum = 0.0;
  for (double v : r) {
    if (!(v > 0.0)) throw InvalidInput("statistics need positive throughputs");
    log_sum += std::log(v);
    sum += v;
  }
  std::sort(r.begin(), r.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(K)));
  ThroughputStats s;
  s.p5 = r[std::max<std::size_t>(rank, 1) - 1];
  s.geo_mean = std::exp(log_sum / static_cast<double>(K));
  s.arith_mean = sum / static_cast<double>(K);
  // exp(mean log) can exceed the mean by rounding when all entries agree.
  s.geo_mean = std::min(s.geo_mean, s.arith_mean);
  return s;
}

Partition max_peak_rate_assoc(const Instance& instance) {
  instance.validate();
  Partition p;
  for (int k = 0; k < instance.num_users(); ++k) {
    int best = -1;
    for (int j = 0; j < instance.num_bs(); ++j) {
      if (!instance.allowed(k, j)) continue;
      if (best < 0 || instance.rates(k, j) > instance.rates(k, best)) best = j;
    }
    p.assoc.push_back(best);
  }
  return p;
}

Partition dominant_association(const Matrix& alpha) {
  Partition p;
  for (Eigen::Index k = 0; k < alpha.rows(); ++k) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < alpha.cols(); ++j) {
      if (alpha(k, j) > alpha(k, best)) best = j;
    }
    p.assoc.push_back(static_cast<int>(best));
  }
  return p;
}

std::vector<LoadEntry> load_profile(const Partition& partition, const NetworkTopology& topology) {
  const int J = topology.num_bs();
  std::vector<int> count(J, 0);
  for (int j : partition.assoc) {
    if (j < 0 || j >= J) throw InvalidInput("partition refers to an unknown BS");
    ++count[j];
  }
  std::vector<LoadEntry> out;
  for (int j = 0; j < J; ++j) {
    const auto& bs = topology.base_stations[j];
    out.push_back({bs.id, bs.tier, count[j]});
  }
  std::sort(out.begin(), out.end(), [](const LoadEntry& a, const LoadEntry& b) {
    if (a.tier != b.tier) return a.tier == Tier::Macro;
    if (a.count != b.count) return a.count > b.count;
    return a.bs_id < b.bs_id;
  });
  return out;
}

void ExperimentConfig::validate() const {
  if (layout == Layout::Experiment1) {
    experiment1.validate();
  } else {
    hetnet3gpp.validate();
  }
  rate.validate();
  (void)Fairness(gamma);
  dual.validate();
  if (!(pi > 0.0 && pi < 1.0)) throw InvalidInput("switching probability must lie in (0, 1)");
  if (game.max_steps < 1) throw InvalidInput("max_steps must be >= 1");
  if (algorithms.empty()) throw InvalidInput("no algorithm selected");
  if (jobs < 1) throw InvalidInput("jobs must be >= 1");
}

const AlgorithmOutcome& RealizationResult::outcome(Algorithm algorithm) const {
  for (const auto& o : outcomes) {
    if (o.algorithm == algorithm) return o;
  }
  throw InvalidInput("algorithm " + to_string(algorithm) + " was not run");
}

std::vector<double> ExperimentReport::ratios(Algorithm numerator, Algorithm denominator,
                                             const std::string& statistic) const {
  auto pick = [&](const ThroughputStats& s) {
    if (statistic == "p5") return s.p5;
    if (statistic == "geo") return s.geo_mean;
    if (statistic == "arith") return s.arith_mean;
    throw InvalidInput("unknown statistic '" + statistic + "'");
  };
  std::vector<double> out;
  for (const auto& r : realizations) {
    out.push_back(pick(r.outcome(numerator).stats) / pick(r.outcome(denominator).stats));
  }
  return out;
}

Realization make_realization(const ExperimentConfig& config, std::uint64_t seed) {
  Realization out;
  out.topology = config.layout == Layout::Experiment1 ? gen_experiment1(config.experiment1, seed)
                                                      : gen_hetnet_3gpp(config.hetnet3gpp, seed);
  const PilotPlan plan = allocate_pilots(out.topology, config.pilot_policy);
  const Matrix gains = gain_matrix(out.topology);
  out.instance = Instance(rate_matrix(out.topology, gains, plan, config.rate),
                          stream_counts(out.topology), eligibility(out.topology));
  return out;
}

RealizationResult run_realization(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  const Realization real = make_realization(config, seed);
  const Instance& inst = real.instance;
  inst.validate();
  const Fairness fairness(config.gamma);
  RealizationResult res;
  res.seed = seed;
  res.num_users = inst.num_users();
  res.num_bs = inst.num_bs();
  const Partition baseline = max_peak_rate_assoc(inst);

  for (Algorithm algorithm : config.algorithms) {
    AlgorithmOutcome o;
    o.algorithm = algorithm;
    Vector r;
    Partition served;
    if (algorithm == Algorithm::Centralized) {
      DualOptions dual = config.dual;
      dual.log_every = 0;
      const DualSolution sol = solve_dual(inst, fairness, dual);
      RecoveryOptions rec;
      rec.p = sol.state.p;
      rec.lambda = sol.state.lambda;
      const Recovery recovered = recover_alpha(inst, sol.r_star, rec);
      o.theta_max = recovered.theta_max;
      r = throughput_of(recovered.alpha, inst.rates);
      served = dominant_association(recovered.alpha);
    } else if (algorithm == Algorithm::Distributed) {
      GameState state;
      state.partition = baseline;
      state.pi = config.pi;
      state.rng_seed = seed;
      const GameResult game = run_game(state, inst, fairness, config.game);
      o.converged = game.converged;
      o.steps = game.steps;
      r = game.throughputs;
      served = game.final_partition;
    } else {
      r = current_throughputs(baseline, inst, fairness);
      served = baseline;
    }
    o.stats = stats(r);
    o.utility = utility(r, fairness);
    o.loads = load_profile(served, real.topology);
    res.outcomes.push_back(std::move(o));
  }
  return res;
}

ExperimentReport run_realizations(const ExperimentConfig& config,
                                  const std::vector<std::uint64_t>& seeds) {
  config.validate();
  if (seeds.empty()) throw InvalidInput("at least one seed is required");
  ExperimentReport report;
  report.realizations.resize(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        report.realizations[i] = run_realization(config, seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(config.jobs, static_cast<int>(seeds.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return report;
}

void write_stats_csv(const std::string& path, const ExperimentReport& report) {
  std::ostringstream out;
  out << "seed,algorithm,p5,geo,arith\n";
  for (const auto& r : report.realizations) {
    for (const auto& o : r.outcomes) {
      out << r.seed << ',' << to_string(o.algorithm) << ',' << csv::format(o.stats.p5) << ','
          << csv::format(o.stats.geo_mean) << ',' << csv::format(o.stats.arith_mean) << '\n';
    }
  }
  csv::write_file(path, out.str());
}

void write_gains_csv(const std::string& path, const ExperimentReport& report) {
  std::ostringstream out;
  out << "seed,statistic,ratio\n";
  for (const auto& r : report.realizations) {
    const auto& d = r.outcome(Algorithm::Distributed).stats;
    const auto& b = r.outcome(Algorithm::MaxPeakRate).stats;
    out << r.seed << ",p5," << csv::format(d.p5 / b.p5) << '\n';
    out << r.seed << ",geo," << csv::format(d.geo_mean / b.geo_mean) << '\n';
    out << r.seed << ",arith," << csv::format(d.arith_mean / b.arith_mean) << '\n';
  }
  csv::write_file(path, out.str());
}

void write_loads_csv(const std::string& path, const ExperimentReport& report) {
  std::ostringstream out;
  out << "seed,algorithm,bs_id,tier,count\n";
  for (const auto& r : report.realizations) {
    for (const auto& o : r.outcomes) {
      for (const auto& l : o.loads) {
        out << r.seed << ',' << to_string(o.algorithm) << ',' << l.bs_id << ','
            << to_string(l.tier) << ',' << l.count << '\n';
      }
    }
  }
  csv::write_file(path, out.str());
}

}  // namespace hetnet
