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

// hetnet: command-line driver for the association pipeline.
//
//   hetnet gen        layout -> topology.json
//   hetnet rates      topology -> rates.csv
//   hetnet solve      rates -> alpha.csv, throughputs.csv, prices.csv, trace.csv
//   hetnet game       rates -> partition.csv, throughputs.csv, game_trace.csv
//   hetnet decompose  alpha -> decomposition.txt, schedule.csv
//   hetnet experiment layout -> stats.csv, gains.csv, loads.csv
//
// Every command also writes manifest.json into its output directory.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hetnet/central_solver.hpp"
#include "hetnet/csv.hpp"
#include "hetnet/experiments.hpp"
#include "hetnet/game.hpp"
#include "hetnet/lp_primal.hpp"
#include "hetnet/phy_rates.hpp"
#include "hetnet/realization.hpp"
#include "json.hpp"

#ifndef HETNET_VERSION
#define HETNET_VERSION "unknown"
#endif

namespace {

using namespace hetnet;
using json = nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

struct RunConfig {
  ExperimentConfig exp;
  std::uint64_t seed = 1;
  int n = 1;
  UpdateMode mode = UpdateMode::Synchronous;
  std::string init = "max_peak_rate";  // or "random"
  std::string out = ".";
};

PilotPolicy pilot_policy_from_string(const std::string& name) {
  if (name == "shared") return PilotPolicy::SharedPerTier;
  if (name == "hotzone") return PilotPolicy::HotZoneReuse;
  throw InvalidInput("unknown pilot policy '" + name + "'");
}

std::string to_string(PilotPolicy policy) {
  return policy == PilotPolicy::SharedPerTier ? "shared" : "hotzone";
}

template <typename T>
void take(const json& j, const char* key, T& value) {
  if (j.contains(key)) value = j.at(key).get<T>();
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
  json j;
  try {
    j = json::parse(csv::read_file(path));
  } catch (const json::exception& e) {
    throw InvalidInput("config " + path + ": " + e.what());
  }
  auto& e = cfg.exp;
  if (j.contains("layout")) e.layout = layout_from_string(j["layout"].get<std::string>());
  if (j.contains("exp1")) {
    const json& x = j["exp1"];
    auto& p = e.experiment1;
    take(x, "width", p.width);
    take(x, "num_macros", p.num_macros);
    take(x, "num_small", p.num_small);
    take(x, "background_density", p.background_density);
    take(x, "hot_density", p.hot_density);
    take(x, "hot_radius", p.hot_radius);
    take(x, "wraparound", p.wraparound);
  }
  if (j.contains("hetnet3gpp")) {
    const json& x = j["hetnet3gpp"];
    auto& p = e.hetnet3gpp;
    take(x, "num_macro_sites", p.num_macro_sites);
    take(x, "inter_site_distance", p.inter_site_distance);
    take(x, "zones_per_macro", p.zones_per_macro);
    take(x, "small_per_zone", p.small_per_zone);
    take(x, "zone_radius", p.zone_radius);
    take(x, "users_per_zone", p.users_per_zone);
    take(x, "background_users_per_macro", p.background_users_per_macro);
  }
  if (j.contains("rate")) {
    const json& x = j["rate"];
    take(x, "slot_dimension", e.rate.slot_dimension);
    take(x, "noise_power_w", e.rate.noise_power_w);
    take(x, "eta", e.rate.eta);
    if (x.contains("pilot_dimension")) e.rate.pilot_dimension = x["pilot_dimension"].get<int>();
    if (x.contains("precoder")) e.rate.precoder = precoder_from_string(x["precoder"]);
  }
  if (j.contains("pilot_policy")) e.pilot_policy = pilot_policy_from_string(j["pilot_policy"]);
  take(j, "gamma", e.gamma);
  take(j, "pi", e.pi);
  if (j.contains("dual")) {
    take(j["dual"], "a", e.dual.a);
    take(j["dual"], "b", e.dual.b);
    take(j["dual"], "i_max", e.dual.i_max);
  }
  if (j.contains("game")) {
    take(j["game"], "max_steps", e.game.max_steps);
    if (j["game"].contains("mode")) cfg.mode = update_mode_from_string(j["game"]["mode"]);
  }
  take(j, "seed", cfg.seed);
  take(j, "n", cfg.n);
  take(j, "jobs", e.jobs);
}

json config_json(const RunConfig& cfg) {
  const auto& e = cfg.exp;
  const auto& x1 = e.experiment1;
  const auto& x2 = e.hetnet3gpp;
  json j;
  j["layout"] = to_string(e.layout);
  j["exp1"] = {{"width", x1.width},
               {"num_macros", x1.num_macros},
               {"num_small", x1.num_small},
               {"background_density", x1.background_density},
               {"hot_density", x1.hot_density},
               {"hot_radius", x1.hot_radius},
               {"wraparound", x1.wraparound}};
  j["hetnet3gpp"] = {{"num_macro_sites", x2.num_macro_sites},
                     {"inter_site_distance", x2.inter_site_distance},
                     {"zones_per_macro", x2.zones_per_macro},
                     {"small_per_zone", x2.small_per_zone},
                     {"zone_radius", x2.zone_radius},
                     {"users_per_zone", x2.users_per_zone},
                     {"background_users_per_macro", x2.background_users_per_macro}};
  j["rate"] = {{"slot_dimension", e.rate.slot_dimension},
               {"noise_power_w", e.rate.noise_power_w},
               {"eta", e.rate.eta},
               {"precoder", to_string(e.rate.precoder)}};
  if (e.rate.pilot_dimension) j["rate"]["pilot_dimension"] = *e.rate.pilot_dimension;
  j["pilot_policy"] = to_string(e.pilot_policy);
  j["gamma"] = e.gamma;
  j["pi"] = e.pi;
  j["dual"] = {{"a", e.dual.a}, {"b", e.dual.b}, {"i_max", e.dual.i_max}};
  j["game"] = {{"max_steps", e.game.max_steps}, {"mode", to_string(cfg.mode)}};
  j["seed"] = cfg.seed;
  j["n"] = cfg.n;
  j["jobs"] = e.jobs;
  return j;
}

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  const json config = config_json(cfg);
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(config.dump())));
  json m;
  m["command"] = command;
  m["version"] = HETNET_VERSION;
  m["seed"] = cfg.seed;
  m["config_hash"] = hash;
  m["config"] = config;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  csv::write_file((fs::path(cfg.out) / "manifest.json").string(), m.dump(2) + "\n");
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out) / name).string();
}

// ---------------------------------------------------------------- inputs

struct LoadedInstance {
  Instance instance;
  std::vector<int> user_ids;
  std::vector<int> bs_ids;
  std::optional<NetworkTopology> topology;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& field : csv::split(text)) {
    std::size_t used = 0;
    const int v = std::stoi(field, &used);
    if (used != field.size()) throw InvalidInput("bad integer '" + field + "'");
    out.push_back(v);
  }
  return out;
}

// Rates come from --rates, or are computed from --topology; S_j and J_k come
// from the topology when given, else from --streams with every pair allowed.
LoadedInstance load_instance(const RunConfig& cfg, const std::string& topology_path,
                             const std::string& rates_path, const std::string& streams) {
  LoadedInstance li;
  if (!topology_path.empty()) li.topology = load_topology(topology_path);
  Matrix rates;
  if (!rates_path.empty()) {
    rates = load_rate_matrix(rates_path, &li.user_ids, &li.bs_ids);
  } else if (li.topology) {
    const PilotPlan plan = allocate_pilots(*li.topology, cfg.exp.pilot_policy);
    rates = rate_matrix(*li.topology, gain_matrix(*li.topology), plan, cfg.exp.rate);
    for (const auto& u : li.topology->users) li.user_ids.push_back(u.id);
    for (const auto& b : li.topology->base_stations) li.bs_ids.push_back(b.id);
  } else {
    throw InvalidInput("need --rates or --topology");
  }
  if (li.topology) {
    std::vector<int> users, bss;
    for (const auto& u : li.topology->users) users.push_back(u.id);
    for (const auto& b : li.topology->base_stations) bss.push_back(b.id);
    if (users != li.user_ids || bss != li.bs_ids) {
      throw InvalidInput("rate matrix ids do not match the topology");
    }
    li.instance = Instance(rates, stream_counts(*li.topology), eligibility(*li.topology));
  } else {
    if (streams.empty()) throw InvalidInput("need --streams or --topology");
    std::vector<int> s = parse_int_list(streams);
    if (s.size() == 1) s.assign(li.bs_ids.size(), s[0]);
    if (s.size() != li.bs_ids.size()) throw InvalidInput("--streams needs one value per BS");
    li.instance = Instance(rates, Eigen::Map<IntVector>(s.data(), static_cast<Eigen::Index>(s.size())));
  }
  li.instance.validate();
  return li;
}

// ---------------------------------------------------------------- commands

NetworkTopology generate(const RunConfig& cfg) {
  return cfg.exp.layout == Layout::Experiment1 ? gen_experiment1(cfg.exp.experiment1, cfg.seed)
                                               : gen_hetnet_3gpp(cfg.exp.hetnet3gpp, cfg.seed);
}

void cmd_gen(const RunConfig& cfg) {
  cfg.exp.validate();
  const NetworkTopology topo = generate(cfg);
  const std::string path = out_path(cfg, "topology.json");
  save_topology(topo, path);
  int macros = 0;
  for (const auto& b : topo.base_stations) macros += b.tier == Tier::Macro;
  std::cout << "topology: " << topo.num_bs() << " BSs (" << macros << " macro, "
            << topo.num_bs() - macros << " small), " << topo.num_users() << " users\n";
  write_manifest(cfg, "gen", {}, {path});
}

void cmd_rates(const RunConfig& cfg, const std::string& topology_path) {
  const NetworkTopology topo = load_topology(topology_path);
  const PilotPlan plan = allocate_pilots(topo, cfg.exp.pilot_policy);
  const Matrix rates = rate_matrix(topo, gain_matrix(topo), plan, cfg.exp.rate);
  const std::string path = out_path(cfg, "rates.csv");
  save_rate_matrix(topo, rates, path);
  std::cout << "rates: " << rates.rows() << " x " << rates.cols() << ", " << plan.num_pilots
            << " pilots, max " << rates.maxCoeff() << " bit/dimension\n";
  write_manifest(cfg, "rates", {topology_path}, {path});
}

void save_vector_csv(const std::string& path, const std::string& header,
                     const std::vector<int>& ids, const Vector& v) {
  std::ostringstream out;
  out << header << '\n';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i] << ',' << csv::format(v(static_cast<Eigen::Index>(i))) << '\n';
  }
  csv::write_file(path, out.str());
}

void cmd_solve(const RunConfig& cfg, const LoadedInstance& li, const std::vector<std::string>& in) {
  const Fairness f(cfg.exp.gamma);
  DualOptions opt = cfg.exp.dual;
  opt.validate();
  const DualSolution sol = solve_dual(li.instance, f, opt);
  RecoveryOptions rec_opt;
  rec_opt.p = sol.state.p;
  rec_opt.lambda = sol.state.lambda;
  const Recovery rec = recover_alpha(li.instance, sol.r_star, rec_opt);
  const Vector r = throughput_of(rec.alpha, li.instance.rates);
  const std::vector<std::string> outs{out_path(cfg, "alpha.csv"), out_path(cfg, "throughputs.csv"),
                                      out_path(cfg, "r_star.csv"), out_path(cfg, "bs_prices.csv"),
                                      out_path(cfg, "user_prices.csv"), out_path(cfg, "trace.csv")};
  save_alpha_csv(outs[0], li.user_ids, li.bs_ids, rec.alpha);
  save_throughputs_csv(outs[1], li.user_ids, r);
  save_throughputs_csv(outs[2], li.user_ids, sol.r_star);
  save_vector_csv(outs[3], "bs_id,price", li.bs_ids, sol.state.p);
  save_vector_csv(outs[4], "user_id,price", li.user_ids, sol.state.lambda);
  save_trace_csv(outs[5], sol.trace);
  const KktReport kkt = kkt_report(rec.alpha, sol.state.p, sol.state.lambda, li.instance, f);
  std::cout << "solve: " << sol.state.iter << " iterations, best dual " << sol.state.best_dual
            << ", utility " << utility(r, f) << ", theta_max " << rec.theta_max
            << ", kkt residual " << kkt.max_residual << '\n';
  for (std::size_t k = 0; k < li.user_ids.size() && k < 10; ++k) {
    std::cout << "  r*[" << li.user_ids[k] << "] = " << sol.r_star(static_cast<Eigen::Index>(k))
              << '\n';
  }
  write_manifest(cfg, "solve", in, outs);
}

void cmd_game(const RunConfig& cfg, const LoadedInstance& li, const std::vector<std::string>& in) {
  const Fairness f(cfg.exp.gamma);
  GameState state;
  if (cfg.init == "max_peak_rate") {
    state.partition = max_peak_rate_assoc(li.instance);
  } else if (cfg.init == "random") {
    state.partition = random_partition(li.instance, cfg.seed);
  } else {
    throw InvalidInput("unknown initial partition '" + cfg.init + "'");
  }
  state.pi = cfg.exp.pi;
  state.rng_seed = cfg.seed;
  GameOptions opt = cfg.exp.game;
  opt.mode = cfg.mode;
  std::vector<GameTraceRow> trace;
  const GameResult res = run_game(state, li.instance, f, opt, &trace);
  const std::vector<std::string> outs{out_path(cfg, "partition.csv"),
                                      out_path(cfg, "throughputs.csv"),
                                      out_path(cfg, "game_trace.csv")};
  save_partition_csv(outs[0], li.user_ids, li.bs_ids, res.final_partition);
  save_throughputs_csv(outs[1], li.user_ids, res.throughputs);
  save_game_trace_csv(outs[2], trace);
  std::cout << "game: " << (res.converged ? "converged" : "not converged") << " after "
            << res.steps << " rounds, utility " << utility(res.throughputs, f) << '\n';
  write_manifest(cfg, "game", in, outs);
}

void cmd_decompose(const RunConfig& cfg, const LoadedInstance& li, const std::string& alpha_path,
                   long slots, const std::vector<std::string>& in) {
  std::vector<int> users, bss;
  std::istringstream text(csv::read_file(alpha_path));
  const Matrix alpha = csv::read_matrix(text, &users, &bss);
  if (users != li.user_ids || bss != li.bs_ids) {
    throw InvalidInput("alpha ids do not match the instance");
  }
  const ScheduleDecomposition d = decompose(alpha, li.instance.streams);
  std::vector<std::string> outs{out_path(cfg, "decomposition.txt")};
  csv::write_file(outs[0], serialize(d));
  double stream_err = 0.0;
  if (slots > 0) {
    const std::vector<int> seq = schedule_stream(d, slots);
    std::ostringstream out;
    out << "slot,component\n";
    for (std::size_t t = 0; t < seq.size(); ++t) out << t << ',' << seq[t] << '\n';
    outs.push_back(out_path(cfg, "schedule.csv"));
    csv::write_file(outs.back(), out.str());
    stream_err = (empirical_fractions(d, seq) - alpha).cwiseAbs().maxCoeff();
  }
  std::cout << "decompose: " << d.components.size() << " components, reconstruction error "
            << (d.reconstruct() - alpha).cwiseAbs().maxCoeff();
  if (slots > 0) std::cout << ", schedule error " << stream_err << " over " << slots << " slots";
  std::cout << '\n';
  write_manifest(cfg, "decompose", in, outs);
}

void cmd_experiment(const RunConfig& cfg) {
  if (cfg.n < 1) throw InvalidInput("--n must be >= 1");
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < cfg.n; ++i) seeds.push_back(cfg.seed + static_cast<std::uint64_t>(i));
  const ExperimentReport rep = run_realizations(cfg.exp, seeds);
  std::vector<std::string> outs{out_path(cfg, "stats.csv"), out_path(cfg, "loads.csv")};
  write_stats_csv(outs[0], rep);
  write_loads_csv(outs[1], rep);
  bool both = false, has_d = false, has_b = false;
  for (Algorithm a : cfg.exp.algorithms) {
    has_d = has_d || a == Algorithm::Distributed;
    has_b = has_b || a == Algorithm::MaxPeakRate;
  }
  both = has_d && has_b;
  if (both) {
    outs.push_back(out_path(cfg, "gains.csv"));
    write_gains_csv(outs.back(), rep);
  }
  std::cout << "experiment: " << rep.realizations.size() << " realizations\n";
  for (const auto& r : rep.realizations) {
    std::cout << "  seed " << r.seed << ": K=" << r.num_users << " J=" << r.num_bs;
    for (const auto& o : r.outcomes) {
      std::cout << "  " << to_string(o.algorithm) << " p5=" << o.stats.p5
                << " geo=" << o.stats.geo_mean;
    }
    std::cout << '\n';
  }
  write_manifest(cfg, "experiment", {}, outs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Massive MIMO HetNet user association pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HETNET_VERSION);

  RunConfig cfg;
  std::string config_path, layout, precoder, pilots, mode, algorithms;
  std::optional<double> gamma, pi, a;
  std::optional<long> iters, max_steps;
  std::optional<int> jobs, n, zones, smalls;
  std::optional<std::uint64_t> seed;
  bool full_scale = false;
  std::string topology_path, rates_path, streams, alpha_path;
  long slots = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Random seed (first seed for experiment)");
    sub->add_option("--out", cfg.out, "Output directory");
    sub->add_option("--layout", layout, "exp1 or hetnet3gpp");
    sub->add_option("--precoder", precoder, "cbf or zfbf");
    sub->add_option("--pilots", pilots, "Pilot policy: shared or hotzone");
    sub->add_option("--gamma", gamma, "Fairness parameter, >= 1");
    sub->add_flag("--full-scale", full_scale, "Full-size layouts instead of desk-scale");
  };
  auto instance_inputs = [&](CLI::App* sub) {
    sub->add_option("--topology", topology_path, "Topology JSON")->check(CLI::ExistingFile);
    sub->add_option("--rates", rates_path, "Rate matrix CSV")->check(CLI::ExistingFile);
    sub->add_option("--streams", streams, "S_j list, or one value for every BS");
  };

  auto* gen = app.add_subcommand("gen", "Generate a topology");
  common(gen);
  gen->add_option("--zones", zones, "Hot zones per macro site (hetnet3gpp)");
  gen->add_option("--small", smalls, "Small cells (exp1)");
  auto* rates = app.add_subcommand("rates", "Compute the rate matrix of a topology");
  common(rates);
  rates->add_option("--topology", topology_path, "Topology JSON")
      ->required()
      ->check(CLI::ExistingFile);
  auto* solve = app.add_subcommand("solve", "Centralized dual subgradient solve");
  common(solve);
  instance_inputs(solve);
  solve->add_option("--iters", iters, "Subgradient iterations i_max");
  solve->add_option("--step-a", a, "Step size numerator a");
  auto* game = app.add_subcommand("game", "Decentralized association game");
  common(game);
  instance_inputs(game);
  game->add_option("--pi", pi, "Switching probability");
  game->add_option("--max-steps", max_steps, "Round limit");
  game->add_option("--mode", mode, "synchronous or asynchronous");
  game->add_option("--init", cfg.init, "max_peak_rate or random");
  auto* dec = app.add_subcommand("decompose", "Decompose alpha into integer schedules");
  common(dec);
  instance_inputs(dec);
  dec->add_option("--alpha", alpha_path, "Alpha CSV")->required()->check(CLI::ExistingFile);
  dec->add_option("--slots", slots, "Emit a slot schedule of this length");
  auto* exp = app.add_subcommand("experiment", "Multi-realization experiment");
  common(exp);
  exp->add_option("--n", n, "Number of realizations");
  exp->add_option("--iters", iters, "Subgradient iterations i_max");
  exp->add_option("--pi", pi, "Switching probability");
  exp->add_option("--max-steps", max_steps, "Round limit");
  exp->add_option("--jobs", jobs, "Worker threads");
  exp->add_option("--algorithms", algorithms, "Comma list of centralized,distributed,max_peak_rate");

  CLI11_PARSE(app, argc, argv);

  try {
    auto& e = cfg.exp;
    if (full_scale) {
      e.experiment1 = Experiment1Params{};
      e.hetnet3gpp = HetNet3gppParams{};
    }
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    if (!layout.empty()) e.layout = layout_from_string(layout);
    if (!precoder.empty()) e.rate.precoder = precoder_from_string(precoder);
    if (!pilots.empty()) e.pilot_policy = pilot_policy_from_string(pilots);
    if (!mode.empty()) cfg.mode = update_mode_from_string(mode);
    if (gamma) e.gamma = *gamma;
    if (pi) e.pi = *pi;
    if (a) e.dual.a = *a;
    if (iters) e.dual.i_max = *iters;
    if (max_steps) e.game.max_steps = *max_steps;
    if (jobs) e.jobs = *jobs;
    if (n) cfg.n = *n;
    if (seed) cfg.seed = *seed;
    if (zones) e.hetnet3gpp.zones_per_macro = *zones;
    if (smalls) e.experiment1.num_small = *smalls;
    if (!algorithms.empty()) {
      e.algorithms.clear();
      for (const auto& name : csv::split(algorithms)) e.algorithms.push_back(algorithm_from_string(name));
    }
    if (e.layout == Layout::HetNet3gpp && pilots.empty()) e.pilot_policy = PilotPolicy::HotZoneReuse;
    e.validate();
    fs::create_directories(cfg.out);

    std::vector<std::string> inputs;
    for (const auto* p : {&config_path, &topology_path, &rates_path, &alpha_path}) {
      if (!p->empty()) inputs.push_back(*p);
    }
    if (*gen) {
      cmd_gen(cfg);
    } else if (*rates) {
      cmd_rates(cfg, topology_path);
    } else if (*solve) {
      cmd_solve(cfg, load_instance(cfg, topology_path, rates_path, streams), inputs);
    } else if (*game) {
      cmd_game(cfg, load_instance(cfg, topology_path, rates_path, streams), inputs);
    } else if (*dec) {
      cmd_decompose(cfg, load_instance(cfg, topology_path, rates_path, streams), alpha_path, slots,
                    inputs);
    } else if (*exp) {
      cmd_experiment(cfg);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
