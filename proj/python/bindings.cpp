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

// Python bindings. Matrices cross as NumPy arrays; users are rows, BSs are
// columns. Partitions are lists of BS column indices.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hetnet/central_solver.hpp"
#include "hetnet/experiments.hpp"
#include "hetnet/game.hpp"
#include "hetnet/local_policy.hpp"
#include "hetnet/lp_primal.hpp"
#include "hetnet/phy_rates.hpp"
#include "hetnet/realization.hpp"

namespace py = pybind11;
using namespace hetnet;

namespace {

Instance make_instance(const Matrix& rates, const std::vector<int>& streams,
                       const std::optional<BoolMatrix>& allowed) {
  const IntVector s = Eigen::Map<const IntVector>(streams.data(),
                                                  static_cast<Eigen::Index>(streams.size()));
  Instance inst = allowed ? Instance(rates, s, *allowed) : Instance(rates, s);
  inst.validate();
  return inst;
}

py::dict solve(const Matrix& rates, const std::vector<int>& streams, double gamma, long i_max,
               double a, double b, const std::optional<BoolMatrix>& allowed) {
  const Instance inst = make_instance(rates, streams, allowed);
  const Fairness f(gamma);
  DualOptions opt;
  opt.i_max = i_max;
  opt.a = a;
  opt.b = b;
  opt.log_every = 0;
  DualSolution sol;
  Recovery rec;
  {
    py::gil_scoped_release release;
    sol = solve_dual(inst, f, opt);
    RecoveryOptions ro;
    ro.p = sol.state.p;
    ro.lambda = sol.state.lambda;
    rec = recover_alpha(inst, sol.r_star, ro);
  }
  const Vector r = throughput_of(rec.alpha, inst.rates);
  py::dict d;
  d["alpha"] = rec.alpha;
  d["throughputs"] = r;
  d["r_star"] = sol.r_star;
  d["p"] = sol.state.p;
  d["lambda"] = sol.state.lambda;
  d["best_dual"] = sol.state.best_dual;
  d["theta_max"] = rec.theta_max;
  d["utility"] = utility(r, f);
  d["kkt_residual"] = kkt_report(rec.alpha, sol.state.p, sol.state.lambda, inst, f).max_residual;
  return d;
}

py::dict game(const Matrix& rates, const std::vector<int>& streams, double gamma, double pi,
              std::uint64_t seed, long max_steps, std::optional<std::vector<int>> initial,
              bool asynchronous, const std::optional<BoolMatrix>& allowed) {
  const Instance inst = make_instance(rates, streams, allowed);
  GameState state;
  state.partition = initial ? Partition{*initial} : max_peak_rate_assoc(inst);
  state.pi = pi;
  state.rng_seed = seed;
  GameOptions opt;
  opt.max_steps = max_steps;
  opt.mode = asynchronous ? UpdateMode::Asynchronous : UpdateMode::Synchronous;
  GameResult res;
  {
    py::gil_scoped_release release;
    res = run_game(state, inst, Fairness(gamma), opt);
  }
  py::dict d;
  d["converged"] = res.converged;
  d["steps"] = res.steps;
  d["partition"] = res.final_partition.assoc;
  d["throughputs"] = res.throughputs;
  return d;
}

py::tuple nash_check(const std::vector<int>& partition, const Matrix& rates,
                     const std::vector<int>& streams, double gamma) {
  const NashCheck c = is_nash(Partition{partition}, make_instance(rates, streams, {}),
                              Fairness(gamma));
  return py::make_tuple(c.nash, c.user, c.bs);
}

py::list decompose_alpha(const Matrix& alpha, const std::vector<int>& streams) {
  const IntVector s = Eigen::Map<const IntVector>(streams.data(),
                                                  static_cast<Eigen::Index>(streams.size()));
  py::list out;
  for (const auto& c : decompose(alpha, s).components) {
    out.append(py::make_tuple(c.weight, Eigen::MatrixXi(c.schedule.sigma)));
  }
  return out;
}

std::vector<int> stream_of_weights(const std::vector<double>& weights, long slots) {
  ScheduleDecomposition d;
  for (double w : weights) d.components.push_back({w, {}});
  return schedule_stream(d, slots);
}

py::dict stats_dict(const Vector& r) {
  const ThroughputStats s = stats(r);
  py::dict d;
  d["p5"] = s.p5;
  d["geo_mean"] = s.geo_mean;
  d["arith_mean"] = s.arith_mean;
  return d;
}

ExperimentConfig experiment_config(const std::string& layout, double gamma, long i_max,
                                   bool full_scale) {
  ExperimentConfig cfg;
  cfg.layout = layout_from_string(layout);
  if (full_scale) {
    cfg.experiment1 = Experiment1Params{};
    cfg.hetnet3gpp = HetNet3gppParams{};
  }
  if (cfg.layout == Layout::HetNet3gpp) cfg.pilot_policy = PilotPolicy::HotZoneReuse;
  cfg.gamma = gamma;
  cfg.dual.i_max = i_max;
  return cfg;
}

py::dict realization(const std::string& layout, std::uint64_t seed, bool full_scale) {
  const Realization r = make_realization(experiment_config(layout, 1.0, 1, full_scale), seed);
  py::dict d;
  d["topology"] = topology_to_json(r.topology);
  d["rates"] = r.instance.rates;
  std::vector<int> s(r.instance.streams.data(),
                     r.instance.streams.data() + r.instance.streams.size());
  d["streams"] = s;
  d["allowed"] = r.instance.allowed;
  return d;
}

py::list experiment(const std::vector<std::uint64_t>& seeds, const std::string& layout,
                    double gamma, long i_max, int jobs, bool full_scale) {
  ExperimentConfig cfg = experiment_config(layout, gamma, i_max, full_scale);
  cfg.jobs = jobs;
  ExperimentReport rep;
  {
    py::gil_scoped_release release;
    rep = run_realizations(cfg, seeds);
  }
  py::list out;
  for (const auto& r : rep.realizations) {
    py::dict row;
    row["seed"] = r.seed;
    row["num_users"] = r.num_users;
    row["num_bs"] = r.num_bs;
    for (const auto& o : r.outcomes) {
      py::dict s;
      s["p5"] = o.stats.p5;
      s["geo_mean"] = o.stats.geo_mean;
      s["arith_mean"] = o.stats.arith_mean;
      s["utility"] = o.utility;
      s["converged"] = o.converged;
      s["steps"] = o.steps;
      row[py::str(to_string(o.algorithm))] = s;
    }
    out.append(row);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Massive MIMO HetNet user association core";

  m.def("solve", &solve, "Centralized dual subgradient solve followed by primal recovery",
        py::arg("rates"), py::arg("streams"), py::arg("gamma") = 1.0, py::arg("i_max") = 200000,
        py::arg("a") = 5.0, py::arg("b") = 10.0, py::arg("allowed") = py::none());
  m.def(
      "dual_objective",
      [](const Vector& p, const Vector& lambda, const Matrix& rates,
         const std::vector<int>& streams, double gamma) {
        return dual_objective(p, lambda, make_instance(rates, streams, {}), Fairness(gamma));
      },
      py::arg("p"), py::arg("lam"), py::arg("rates"), py::arg("streams"), py::arg("gamma") = 1.0);
  m.def(
      "local_alpha",
      [](const std::vector<double>& rates, int streams, double gamma) {
        const CellAllocation c = local_alpha(rates, streams, Fairness(gamma));
        return py::make_tuple(c.alpha, c.k_star);
      },
      "Per-cell gamma-fair shares and the pivot k*", py::arg("rates"), py::arg("streams"),
      py::arg("gamma") = 1.0);
  m.def(
      "heavy_load_holds",
      [](const std::vector<double>& rates, int streams, double gamma) {
        return heavy_load_holds(rates, streams, Fairness(gamma));
      },
      py::arg("rates"), py::arg("streams"), py::arg("gamma") = 1.0);
  m.def("run_game", &game, "Decentralized association game", py::arg("rates"),
        py::arg("streams"), py::arg("gamma") = 1.0, py::arg("pi") = 0.1, py::arg("seed") = 0,
        py::arg("max_steps") = 10000, py::arg("initial") = py::none(),
        py::arg("asynchronous") = false, py::arg("allowed") = py::none());
  m.def("is_nash", &nash_check, "(nash, witness user, witness BS)", py::arg("partition"),
        py::arg("rates"), py::arg("streams"), py::arg("gamma") = 1.0);
  m.def("decompose", &decompose_alpha, "List of (weight, integer schedule)", py::arg("alpha"),
        py::arg("streams"));
  m.def("schedule_stream", &stream_of_weights, "Component index of every slot",
        py::arg("weights"), py::arg("slots"));
  m.def("stats", &stats_dict, py::arg("throughputs"));
  m.def(
      "max_peak_rate_assoc",
      [](const Matrix& rates) {
        return max_peak_rate_assoc(Instance(rates, IntVector::Ones(rates.cols()))).assoc;
      },
      py::arg("rates"));
  m.def("realization", &realization, "Topology JSON, rates, streams and eligibility",
        py::arg("layout") = "exp1", py::arg("seed") = 1, py::arg("full_scale") = false);
  m.def("experiment", &experiment, "Per-seed statistics of every algorithm", py::arg("seeds"),
        py::arg("layout") = "exp1", py::arg("gamma") = 1.0, py::arg("i_max") = 200000,
        py::arg("jobs") = 1, py::arg("full_scale") = false);

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
}
