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

// Acceptance suite: one PASS or FAIL line per criterion, exit status 1 on any
// failure. An optional argument names the directory receiving the
// experiment CSVs (default: acceptance_out).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "convex_oracle.hpp"
#include "hetnet/central_solver.hpp"
#include "hetnet/experiments.hpp"
#include "hetnet/game.hpp"
#include "hetnet/local_policy.hpp"
#include "hetnet/lp_primal.hpp"
#include "hetnet/phy_rates.hpp"
#include "hetnet/realization.hpp"

namespace {

using namespace hetnet;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Centralized pipeline outputs on the oracle suite, reused by realizability.
struct CentralCase {
  Instance instance;
  Matrix alpha;
  IntVector streams;
};
std::vector<CentralCase> g_central_alphas;

DualOptions acceptance_dual() {
  DualOptions d;
  d.i_max = 1000000;
  d.log_every = 0;
  return d;
}

Recovery run_central(const Instance& inst, const Fairness& f, const DualOptions& opt,
                     DualSolution* out) {
  *out = solve_dual(inst, f, opt);
  RecoveryOptions rec;
  rec.p = out->state.p;
  rec.lambda = out->state.lambda;
  return recover_alpha(inst, out->r_star, rec);
}

Instance oracle_suite_instance(int i, std::mt19937_64& meta) {
  const int K = 3 + static_cast<int>(meta() % 6);
  const int J = 2 + static_cast<int>(meta() % 2);
  return oracle::random_instance(1000 + i, K, J, 2, 0.5, 8.0);
}

// Oracle equivalence and KKT certification share one pass over 50 instances.
std::pair<Verdict, Verdict> oracle_and_kkt() {
  std::mt19937_64 meta(2024);
  double worst_rel = 0.0, worst_kkt = 0.0, worst_theta = 0.0;
  int ok_rel = 0, ok_kkt = 0;
  for (int i = 0; i < 50; ++i) {
    const Instance inst = oracle_suite_instance(i, meta);
    const double gamma = i % 2 ? 2.0 : 1.0;
    const Fairness f(gamma);
    const double u_ref = oracle::solve_primal(inst, gamma).utility;
    DualSolution sol;
    const Recovery rec = run_central(inst, f, acceptance_dual(), &sol);
    const double u = utility(throughput_of(rec.alpha, inst.rates), f);
    const double rel = std::abs(u - u_ref) / std::abs(u_ref);
    const KktReport kkt = kkt_report(rec.alpha, sol.state.p, sol.state.lambda, inst, f);
    const double dtheta = std::abs(rec.theta_max - 1.0);
    worst_rel = std::max(worst_rel, rel);
    worst_kkt = std::max(worst_kkt, kkt.max_residual);
    worst_theta = std::max(worst_theta, dtheta);
    ok_rel += rel <= 1e-3;
    ok_kkt += kkt.max_residual <= 1e-4 && dtheta <= 1e-3;
    g_central_alphas.push_back({inst, rec.alpha, inst.streams});
  }
  return {{ok_rel == 50, fmt("%.0f/50 within 1e-3, worst relative utility gap %.2e", ok_rel,
                             worst_rel)},
          {ok_kkt == 50, fmt("%.0f/50 certified, worst residual %.2e, worst |theta-1| %.2e",
                             ok_kkt, worst_kkt, worst_theta)}};
}

Verdict closed_form_cells() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rate(0.05, 20.0);
  std::uniform_int_distribution<int> size(1, 30);
  std::uniform_int_distribution<int> streams(1, 8);
  const double gammas[] = {1.0, 1.5, 2.0, 4.0};
  double worst_alpha = 0.0, worst_sum = 0.0;
  int ok = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> rates(size(rng));
    for (double& r : rates) r = rate(rng);
    const int s = streams(rng);
    const double gamma = gammas[t % 4];
    const CellAllocation cell = local_alpha(rates, s, Fairness(gamma));
    const std::vector<double> ref = oracle::bisection_cell(rates, s, gamma);
    double err = 0.0, total = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
      err = std::max(err, std::abs(cell.alpha[i] - ref[i]));
      total += cell.alpha[i];
    }
    const double sum_err = std::abs(total - std::min<double>(s, static_cast<double>(rates.size())));
    worst_alpha = std::max(worst_alpha, err);
    worst_sum = std::max(worst_sum, sum_err);
    ok += err <= 1e-8 && sum_err <= 1e-9;
  }
  return {ok == 200, fmt("%.0f/200 cells, worst alpha error %.2e, worst sum error %.2e", ok,
                         worst_alpha, worst_sum)};
}

Verdict realizability() {
  // 50 outputs of the oracle suite plus 50 larger instances.
  std::vector<CentralCase> cases = g_central_alphas;
  std::mt19937_64 meta(77);
  for (int i = 0; cases.size() < 100; ++i) {
    const int K = 3 + static_cast<int>(meta() % 10);
    const int J = 2 + static_cast<int>(meta() % 3);
    const Instance inst = oracle::random_instance(5000 + i, K, J, 3, 0.5, 8.0);
    DualSolution sol;
    const Recovery rec = run_central(inst, Fairness(i % 2 ? 2.0 : 1.0), acceptance_dual(), &sol);
    cases.push_back({inst, rec.alpha, inst.streams});
  }
  const long T = 100000;
  double worst_rec = 0.0, worst_stream = 0.0;
  int ok = 0;
  for (const auto& c : cases) {
    const ScheduleDecomposition d = decompose(c.alpha, c.streams);
    const int K = static_cast<int>(c.alpha.rows());
    const int J = static_cast<int>(c.alpha.cols());
    const double rec_err = (d.reconstruct() - c.alpha).cwiseAbs().maxCoeff();
    bool valid = std::abs(d.total_weight() - 1.0) <= 1e-9 &&
                 static_cast<int>(d.components.size()) <= K * J + K + J + 1;
    for (const auto& comp : d.components) valid = valid && comp.schedule.valid(c.streams);
    const Matrix frac = empirical_fractions(d, schedule_stream(d, T));
    const double stream_err = (frac - c.alpha).cwiseAbs().maxCoeff();
    const double bound = static_cast<double>(d.components.size()) / static_cast<double>(T);
    worst_rec = std::max(worst_rec, rec_err);
    worst_stream = std::max(worst_stream, stream_err / bound);
    ok += valid && rec_err <= 1e-9 && stream_err <= bound;
  }
  return {ok == 100, fmt("%.0f/100 decompositions, worst reconstruction %.2e, worst stream "
                         "error %.3f of components/T",
                         ok, worst_rec, worst_stream)};
}

Verdict game_convergence() {
  int found = 0, ok = 0;
  long worst_steps = 0;
  for (std::uint64_t seed = 1; found < 100; ++seed) {
    std::mt19937_64 meta(seed);
    const int K = 20 + static_cast<int>(meta() % 41);
    const int J = 2 + static_cast<int>(meta() % 4);
    const Instance inst = oracle::random_instance(90000 + seed, K, J, 4, 0.5, 8.0);
    const Partition base = max_peak_rate_assoc(inst);
    const auto cells = base.cells(J);
    bool heavy = true;
    for (int j = 0; j < J; ++j) heavy = heavy && static_cast<int>(cells[j].size()) > inst.streams(j);
    if (!heavy) continue;
    ++found;
    GameState state;
    state.partition = base;
    state.pi = 0.1;
    state.rng_seed = seed;
    const GameResult res = run_game(state, inst, Fairness(1.0));
    worst_steps = std::max(worst_steps, res.steps);
    ok += res.converged && is_nash(res.final_partition, inst, Fairness(1.0)).nash;
  }
  return {ok == 100, fmt("%.0f/100 converged to certified equilibria, max rounds %.0f", ok,
                         static_cast<double>(worst_steps))};
}

std::pair<Verdict, Verdict> experiment1(const std::string& out_dir) {
  ExperimentConfig cfg;
  std::vector<std::uint64_t> seeds(20);
  for (int i = 0; i < 20; ++i) seeds[i] = static_cast<std::uint64_t>(i + 1);
  const ExperimentReport rep = run_realizations(cfg, seeds);
  std::filesystem::create_directories(out_dir);
  write_stats_csv(out_dir + "/stats.csv", rep);
  write_gains_csv(out_dir + "/gains.csv", rep);
  write_loads_csv(out_dir + "/loads.csv", rep);

  const auto geo = rep.ratios(Algorithm::Distributed, Algorithm::Centralized, "geo");
  const int near = static_cast<int>(std::count_if(geo.begin(), geo.end(),
                                                  [](double r) { return r >= 0.95; }));
  auto p5 = rep.ratios(Algorithm::Distributed, Algorithm::MaxPeakRate, "p5");
  const int above = static_cast<int>(std::count_if(p5.begin(), p5.end(),
                                                   [](double r) { return r > 1.0; }));
  std::sort(p5.begin(), p5.end());
  const double median = 0.5 * (p5[9] + p5[10]);
  double users = 0.0;
  for (const auto& r : rep.realizations) users += r.num_users;
  return {{near >= 18, fmt("%.0f/20 seeds with geo ratio >= 0.95, min %.4f, mean K %.1f", near,
                           *std::min_element(geo.begin(), geo.end()), users / 20.0)},
          {median >= 1.2 && above >= 16,
           fmt("median p5 gain %.3f, %.0f/20 seeds above 1", median, above)}};
}

// Random contamination plan over J BSs: every pilot owned by at least two.
PilotPlan contaminated_plan(std::mt19937_64& rng, int K, int J) {
  const int Q = 1 + static_cast<int>(rng() % 4);
  PilotPlan plan;
  plan.num_pilots = Q;
  plan.per_bs.assign(J, {});
  plan.contamination.assign(Q, {});
  for (int q = 0; q < Q; ++q) {
    std::vector<int> owners(J);
    for (int j = 0; j < J; ++j) owners[j] = j;
    std::shuffle(owners.begin(), owners.end(), rng);
    const int n = 2 + static_cast<int>(rng() % (J - 1));
    for (int i = 0; i < n; ++i) plan.per_bs[owners[i]].push_back(q);
  }
  for (int j = 0; j < J; ++j) {
    if (plan.per_bs[j].empty()) plan.per_bs[j].push_back(static_cast<int>(rng() % Q));
    std::sort(plan.per_bs[j].begin(), plan.per_bs[j].end());
    for (int q : plan.per_bs[j]) plan.contamination[q].push_back(j);
  }
  for (int k = 0; k < K; ++k) plan.user_ids.push_back(static_cast<int>(rng() % 100000));
  plan.validate();
  return plan;
}

Verdict sinr_limit() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int ok = 0;
  for (int t = 0; t < 100; ++t) {
    const int K = 1 + static_cast<int>(rng() % 6);
    const int J = 2 + static_cast<int>(rng() % 5);
    const PilotPlan plan = contaminated_plan(rng, K, J);
    Matrix gains(K, J);
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < J; ++j) gains(k, j) = 0.5 + 0.5 * u(rng);
    LinkBudget budget;
    budget.snr = Vector::Constant(J, std::pow(10.0, 3.0 * u(rng)));
    budget.spatial_load.resize(J);
    for (int j = 0; j < J; ++j) budget.spatial_load(j) = std::pow(10.0, -6.0 + 2.0 * u(rng));
    budget.sigma2 = 0.0;
    const int k = static_cast<int>(rng() % K);
    const int j = static_cast<int>(rng() % J);
    const double cbf = sinr_cbf(k, j, gains, plan, budget);
    const double zf = sinr_zfbf(k, j, gains, plan, budget);
    const double rel = std::abs(zf - cbf) / cbf;
    worst = std::max(worst, rel);
    ok += rel <= 1e-3;
  }
  return {ok == 100, fmt("%.0f/100 draws, worst relative gap %.2e", ok, worst)};
}

// Oracle optimum as a unique association, or an empty partition.
Partition unique_optimum(const Instance& inst, double gamma) {
  const Matrix a = oracle::solve_primal(inst, gamma).alpha;
  Partition p = dominant_association(a);
  for (int k = 0; k < inst.num_users(); ++k) {
    for (int j = 0; j < inst.num_bs(); ++j) {
      if (j != p.assoc[k] && a(k, j) > 1e-6) return {};
    }
  }
  return p;
}

bool heavy_and_strict_bang(const Partition& p, const Instance& inst, const Fairness& f) {
  const int J = inst.num_bs();
  const auto cells = p.cells(J);
  Vector load = Vector::Zero(J);
  for (int j = 0; j < J; ++j) {
    if (cells[j].empty()) return false;
    std::vector<double> rates;
    for (int k : cells[j]) rates.push_back(inst.rates(k, j));
    if (!heavy_load_holds(rates, inst.streams(j), f)) return false;
    for (double r : rates) load(j) += std::pow(r, f.rho() - 1.0);
  }
  for (int k = 0; k < p.num_users(); ++k) {
    auto value = [&](int j) { return inst.streams(j) * std::pow(inst.rates(k, j), f.rho()) / load(j); };
    for (int l = 0; l < J; ++l) {
      if (l != p.assoc[k] && !(value(p.assoc[k]) > value(l))) return false;
    }
  }
  return true;
}

Verdict unique_optimum_nash() {
  int found = 0, ok = 0, scanned = 0;
  double worst_kkt = 0.0;
  for (std::uint64_t seed = 1; found < 20 && seed < 20000; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int J = 2 + static_cast<int>(rng() % 2);
    const int K = 2 * J + static_cast<int>(rng() % (9 - 2 * J));
    const double gamma = seed % 2 ? 1.0 : 2.0;
    // Home-BS affinity makes unique optima common.
    Matrix r(K, J);
    for (int k = 0; k < K; ++k) {
      const int home = static_cast<int>(rng() % J);
      for (int j = 0; j < J; ++j) r(k, j) = j == home ? 4.0 + 4.0 * u(rng) : 0.5 + u(rng);
    }
    const Instance inst(r, IntVector::Ones(J));
    ++scanned;
    const Partition p = unique_optimum(inst, gamma);
    const Fairness f(gamma);
    if (p.assoc.empty() || !heavy_and_strict_bang(p, inst, f)) continue;
    ++found;
    const auto [prices, lambda] = closed_form_unique_prices(p, inst, f);
    const double kkt =
        kkt_report(unique_association_alpha(p, inst, f), prices, lambda, inst, f).max_residual;
    worst_kkt = std::max(worst_kkt, kkt);
    const auto nash = enumerate_nash(inst, f);
    ok += std::find(nash.begin(), nash.end(), p) != nash.end() && kkt <= 1e-9;
  }
  return {found == 20 && ok == 20,
          fmt("%.0f/%.0f optima found among the Nash equilibria (%.0f instances scanned), "
              "closed-form KKT residual %.1e",
              ok, found, scanned, worst_kkt)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_dir = argc > 1 ? argv[1] : "acceptance_out";
  int failures = 0;
  auto report = [&](const char* name, const Verdict& v, double seconds) {
    std::printf("%s %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), seconds);
    std::fflush(stdout);
    failures += !v.pass;
  };
  auto timed = [](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = fn();
    return std::make_pair(std::move(result),
                          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  };
  try {
    const auto [central, t_central] = timed(oracle_and_kkt);
    report("oracle-equivalence", central.first, t_central);
    report("kkt-certification", central.second, t_central);
    const auto [cells, t_cells] = timed(closed_form_cells);
    report("closed-form-cells", cells, t_cells);
    const auto [real, t_real] = timed(realizability);
    report("realizability", real, t_real);
    const auto [game, t_game] = timed(game_convergence);
    report("game-convergence", game, t_game);
    const auto [exp1, t_exp1] = timed([&] { return experiment1(out_dir); });
    report("near-optimality", exp1.first, t_exp1);
    report("baseline-gain", exp1.second, t_exp1);
    const auto [sinr, t_sinr] = timed(sinr_limit);
    report("sinr-limit", sinr, t_sinr);
    const auto [nash, t_nash] = timed(unique_optimum_nash);
    report("unique-optimum-is-nash", nash, t_nash);
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
