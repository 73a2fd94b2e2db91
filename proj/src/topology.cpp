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

#include "hetnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hetnet {

namespace {

using json = nlohmann::json;

double wrapped_delta(double d, double extent) {
  d = std::fabs(d);
  if (d > extent) d = std::fmod(d, extent);
  return std::min(d, extent - d);
}

BaseStation make_bs(int id, Position pos, Tier tier, const TierDefaults& d, int zone) {
  BaseStation bs;
  bs.id = id;
  bs.position = pos;
  bs.tier = tier;
  bs.antennas = d.antennas;
  bs.streams = d.streams;
  bs.tx_power_dbm = d.tx_power_dbm;
  bs.zone = zone;
  return bs;
}

Position uniform_in_rect(std::mt19937_64& rng, double width, double height) {
  std::uniform_real_distribution<double> ux(0.0, width);
  std::uniform_real_distribution<double> uy(0.0, height);
  const double x = ux(rng);
  return {x, uy(rng)};
}

Position uniform_in_disc(std::mt19937_64& rng, Position center, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double phi = 2.0 * std::numbers::pi * u(rng);
  return {center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
}

void check_tier_defaults(const TierDefaults& d, const char* name) {
  if (d.antennas < 1 || d.streams < 1 || d.streams > d.antennas) {
    throw InvalidInput(std::string(name) + " tier needs 1 <= streams <= antennas");
  }
  if (!std::isfinite(d.tx_power_dbm)) {
    throw InvalidInput(std::string(name) + " tier power must be finite");
  }
}

// Flat-sided hexagon with neighbours at 30 + 60 i degrees and ISD spacing.
bool inside_hexagon(Position p, Position center, double isd) {
  for (int i = 0; i < 6; ++i) {
    const double a = std::numbers::pi / 6.0 + i * std::numbers::pi / 3.0;
    const double proj = (p.x - center.x) * std::cos(a) + (p.y - center.y) * std::sin(a);
    if (proj > isd / 2.0) return false;
  }
  return true;
}

Position uniform_in_hexagon(std::mt19937_64& rng, Position center, double isd) {
  const double circumradius = isd / std::sqrt(3.0);
  for (;;) {
    const Position p = uniform_in_disc(rng, center, circumradius);
    if (inside_hexagon(p, center, isd)) return p;
  }
}

double euclid(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::string to_string(Tier tier) { return tier == Tier::Macro ? "macro" : "small"; }

Tier tier_from_string(const std::string& name) {
  if (name == "macro") return Tier::Macro;
  if (name == "small") return Tier::Small;
  throw InvalidInput("unknown tier '" + name + "'");
}

void PathlossModel::validate() const {
  if (!(reference_distance > 0.0)) throw InvalidInput("reference distance must be > 0");
  if (!(exponent_macro > 2.0) || !(exponent_small > 2.0)) {
    throw InvalidInput("pathloss exponents must exceed 2");
  }
}

void NetworkTopology::validate() const {
  if (!(region.width > 0.0) || !(region.height > 0.0)) {
    throw InvalidInput("region width and height must be positive");
  }
  if (base_stations.empty()) throw InvalidInput("topology has no base stations");
  if (users.empty()) throw InvalidInput("topology has no users");
  std::set<int> bs_ids;
  for (const auto& bs : base_stations) {
    if (!bs_ids.insert(bs.id).second) {
      throw InvalidInput("duplicate base station id " + std::to_string(bs.id));
    }
    if (bs.antennas < 1 || bs.streams < 1 || bs.streams > bs.antennas) {
      throw InvalidInput("base station " + std::to_string(bs.id) +
                         " needs 1 <= streams <= antennas");
    }
    if (!std::isfinite(bs.tx_power_dbm)) {
      throw InvalidInput("base station " + std::to_string(bs.id) + " has non-finite power");
    }
    if (!region.contains(bs.position)) {
      throw InvalidInput("base station " + std::to_string(bs.id) + " lies outside the region");
    }
  }
  std::set<int> user_ids;
  for (const auto& u : users) {
    if (!user_ids.insert(u.id).second) {
      throw InvalidInput("duplicate user id " + std::to_string(u.id));
    }
    if (!region.contains(u.position)) {
      throw InvalidInput("user " + std::to_string(u.id) + " lies outside the region");
    }
    if (u.allowed_bs) {
      if (u.allowed_bs->empty()) {
        throw InvalidInput("user " + std::to_string(u.id) + " has an empty allowed set");
      }
      for (int j : *u.allowed_bs) {
        if (!bs_ids.contains(j)) {
          throw InvalidInput("user " + std::to_string(u.id) + " allows unknown BS " +
                             std::to_string(j));
        }
      }
    }
  }
}

double toroidal_distance(const Position& a, const Position& b, const Region& region) {
  if (!region.wraparound) return euclid(a, b);
  const double dx = wrapped_delta(a.x - b.x, region.width);
  const double dy = wrapped_delta(a.y - b.y, region.height);
  return std::hypot(dx, dy);
}

double pathloss_gain(double distance, Tier tier, const PathlossModel& model) {
  if (distance < 0.0) throw InvalidInput("distance must be non-negative");
  const double e = tier == Tier::Macro ? model.exponent_macro : model.exponent_small;
  return 1.0 / (1.0 + std::pow(distance / model.reference_distance, e));
}

Matrix gain_matrix(const NetworkTopology& topology, const PathlossModel& model) {
  model.validate();
  const int K = topology.num_users();
  const int J = topology.num_bs();
  Matrix g(K, J);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < J; ++j) {
      const auto& bs = topology.base_stations[j];
      const double d =
          toroidal_distance(topology.users[k].position, bs.position, topology.region);
      g(k, j) = pathloss_gain(d, bs.tier, model);
    }
  }
  return g;
}

IntVector stream_counts(const NetworkTopology& topology) {
  IntVector s(topology.num_bs());
  for (int j = 0; j < topology.num_bs(); ++j) s(j) = topology.base_stations[j].streams;
  return s;
}

BoolMatrix eligibility(const NetworkTopology& topology) {
  const int K = topology.num_users();
  const int J = topology.num_bs();
  BoolMatrix mask = BoolMatrix::Constant(K, J, true);
  for (int k = 0; k < K; ++k) {
    const auto& allowed = topology.users[k].allowed_bs;
    if (!allowed) continue;
    mask.row(k).setConstant(false);
    for (int id : *allowed) {
      for (int j = 0; j < J; ++j) {
        if (topology.base_stations[j].id == id) mask(k, j) = true;
      }
    }
  }
  return mask;
}

Experiment1Params Experiment1Params::desk_scale() {
  Experiment1Params p;
  p.num_macros = 1;
  p.num_small = 10;
  p.background_density = 1.0e-5;
  p.hot_density = 1.0e-3;
  p.hot_radius = 180.0;
  return p;
}

void Experiment1Params::validate() const {
  if (!(width > 0.0)) throw InvalidInput("width must be positive");
  if (num_macros < 0 || num_small < 0 || num_macros + num_small == 0) {
    throw InvalidInput("need at least one base station");
  }
  if (background_density < 0.0 || hot_density < 0.0 || hot_radius < 0.0) {
    throw InvalidInput("densities and hot radius must be non-negative");
  }
  if (background_density == 0.0 && (hot_density == 0.0 || hot_radius == 0.0 || num_macros == 0)) {
    throw InvalidInput("user densities produce no users");
  }
  check_tier_defaults(macro, "macro");
  check_tier_defaults(small, "small");
}

NetworkTopology gen_experiment1(const Experiment1Params& params, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  NetworkTopology topo;
  topo.seed = seed;
  topo.region = {params.width, params.width * std::max(params.num_macros, 1), params.wraparound};

  int next_id = 0;
  for (int m = 0; m < params.num_macros; ++m) {
    const Position center{params.width / 2.0, params.width * (m + 0.5)};
    topo.base_stations.push_back(make_bs(next_id++, center, Tier::Macro, params.macro, -1));
  }
  for (int s = 0; s < params.num_small; ++s) {
    const Position p = uniform_in_rect(rng, topo.region.width, topo.region.height);
    topo.base_stations.push_back(make_bs(next_id++, p, Tier::Small, params.small, -1));
  }

  // Thinning of a homogeneous process at the peak density.
  const double peak = std::max(params.background_density, params.hot_density);
  const double area = topo.region.width * topo.region.height;
  std::poisson_distribution<long> count_dist(peak * area);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const long candidates = count_dist(rng);
  for (long i = 0; i < candidates; ++i) {
    const Position p = uniform_in_rect(rng, topo.region.width, topo.region.height);
    const double u = coin(rng);
    double density = params.background_density;
    for (int m = 0; m < params.num_macros; ++m) {
      if (toroidal_distance(p, topo.base_stations[m].position, topo.region) <= params.hot_radius) {
        density = params.hot_density;
        break;
      }
    }
    if (u * peak < density) {
      UserTerminal user;
      user.id = static_cast<int>(topo.users.size());
      user.position = p;
      topo.users.push_back(user);
    }
  }
  if (topo.users.empty()) throw InvalidInput("layout realization produced zero users");
  return topo;
}

HetNet3gppParams HetNet3gppParams::desk_scale() {
  HetNet3gppParams p;
  p.num_macro_sites = 3;
  return p;
}

void HetNet3gppParams::validate() const {
  if (num_macro_sites != 1 && num_macro_sites != 3 && num_macro_sites != 7) {
    throw InvalidInput("num_macro_sites must be 1, 3 or 7");
  }
  if (!(inter_site_distance > 0.0)) throw InvalidInput("inter-site distance must be positive");
  if (zones_per_macro < 0 || small_per_zone < 0) throw InvalidInput("zone counts must be >= 0");
  if (zones_per_macro > 0 && small_per_zone == 0 && users_per_zone == 0) {
    throw InvalidInput("zones without small cells or users");
  }
  if (!(zone_radius > 0.0)) throw InvalidInput("zone radius must be positive");
  if (users_per_zone < 0 || background_users_per_macro < 0) {
    throw InvalidInput("user counts must be >= 0");
  }
  if (users_per_zone * zones_per_macro + background_users_per_macro == 0) {
    throw InvalidInput("parameters produce no users");
  }
  if (retry_budget < 1) throw InvalidInput("retry budget must be >= 1");
  check_tier_defaults(macro, "macro");
  check_tier_defaults(small, "small");
}

NetworkTopology gen_hetnet_3gpp(const HetNet3gppParams& params, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  const double isd = params.inter_site_distance;
  const double hex_radius = isd / std::sqrt(3.0);

  // Central site plus the first ring, ordered counter-clockwise from 30 degrees.
  std::vector<Position> sites{{0.0, 0.0}};
  for (int i = 0; i < 6; ++i) {
    const double a = std::numbers::pi / 6.0 + i * std::numbers::pi / 3.0;
    sites.push_back({isd * std::cos(a), isd * std::sin(a)});
  }
  if (params.num_macro_sites == 1) {
    sites.resize(1);
  } else if (params.num_macro_sites == 3) {
    sites = {sites[0], sites[1], sites[2]};
  }

  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (const auto& s : sites) {
    min_x = std::min(min_x, s.x - hex_radius);
    max_x = std::max(max_x, s.x + hex_radius);
    min_y = std::min(min_y, s.y - isd / 2.0);
    max_y = std::max(max_y, s.y + isd / 2.0);
  }
  for (auto& s : sites) s = {s.x - min_x, s.y - min_y};

  NetworkTopology topo;
  topo.seed = seed;
  topo.region = {max_x - min_x, max_y - min_y, false};

  int next_id = 0;
  for (const auto& s : sites) {
    topo.base_stations.push_back(make_bs(next_id++, s, Tier::Macro, params.macro, -1));
  }

  struct Zone {
    Position center;
    int site;
  };
  std::vector<Zone> zones;
  int retries = 0;
  auto spend_retry = [&](const char* what) {
    if (++retries > params.retry_budget) {
      throw InvalidInput(std::string("retry budget exceeded while placing ") + what);
    }
  };

  for (int site = 0; site < static_cast<int>(sites.size()); ++site) {
    for (int z = 0; z < params.zones_per_macro; ++z) {
      for (;;) {
        const Position c = uniform_in_hexagon(rng, sites[site], isd);
        bool ok = euclid(c, sites[site]) >= params.min_zone_to_macro;
        for (const auto& other : zones) {
          ok = ok && euclid(c, other.center) >= 2.0 * params.zone_radius;
        }
        ok = ok && topo.region.contains(c);
        if (ok) {
          zones.push_back({c, site});
          break;
        }
        spend_retry("hot zones");
      }
    }
  }

  for (int z = 0; z < static_cast<int>(zones.size()); ++z) {
    std::vector<Position> placed;
    for (int s = 0; s < params.small_per_zone; ++s) {
      for (;;) {
        const Position p = uniform_in_disc(rng, zones[z].center, params.zone_radius);
        bool ok = topo.region.contains(p);
        for (const auto& q : placed) ok = ok && euclid(p, q) >= params.min_small_separation;
        if (ok) {
          placed.push_back(p);
          topo.base_stations.push_back(make_bs(next_id++, p, Tier::Small, params.small, z));
          break;
        }
        spend_retry("small cells");
      }
    }
  }

  auto add_user = [&](Position p) {
    UserTerminal u;
    u.id = static_cast<int>(topo.users.size());
    u.position = p;
    topo.users.push_back(u);
  };
  for (const auto& zone : zones) {
    for (int i = 0; i < params.users_per_zone; ++i) {
      Position p;
      do {
        p = uniform_in_disc(rng, zone.center, params.zone_radius);
      } while (!topo.region.contains(p));
      add_user(p);
    }
  }
  for (const auto& s : sites) {
    for (int i = 0; i < params.background_users_per_macro; ++i) {
      add_user(uniform_in_hexagon(rng, s, isd));
    }
  }
  return topo;
}

std::string topology_to_json(const NetworkTopology& topology) {
  json root;
  root["seed"] = topology.seed;
  root["region"] = {{"width", topology.region.width},
                    {"height", topology.region.height},
                    {"wraparound", topology.region.wraparound}};
  json bss = json::array();
  for (const auto& bs : topology.base_stations) {
    bss.push_back({{"id", bs.id},
                   {"x", bs.position.x},
                   {"y", bs.position.y},
                   {"tier", to_string(bs.tier)},
                   {"antennas", bs.antennas},
                   {"streams", bs.streams},
                   {"tx_power_dbm", bs.tx_power_dbm},
                   {"zone", bs.zone}});
  }
  root["base_stations"] = std::move(bss);
  json users = json::array();
  for (const auto& u : topology.users) {
    json ju = {{"id", u.id}, {"x", u.position.x}, {"y", u.position.y}};
    if (u.allowed_bs) ju["allowed_bs"] = *u.allowed_bs;
    users.push_back(std::move(ju));
  }
  root["users"] = std::move(users);
  return root.dump(2) + "\n";
}

NetworkTopology topology_from_json(const std::string& text) {
  NetworkTopology topo;
  try {
    const json root = json::parse(text);
    topo.seed = root.value("seed", std::uint64_t{0});
    const auto& region = root.at("region");
    topo.region.width = region.at("width").get<double>();
    topo.region.height = region.at("height").get<double>();
    topo.region.wraparound = region.value("wraparound", false);
    for (const auto& jb : root.at("base_stations")) {
      BaseStation bs;
      bs.id = jb.at("id").get<int>();
      bs.position = {jb.at("x").get<double>(), jb.at("y").get<double>()};
      bs.tier = tier_from_string(jb.at("tier").get<std::string>());
      bs.antennas = jb.at("antennas").get<int>();
      bs.streams = jb.at("streams").get<int>();
      bs.tx_power_dbm = jb.at("tx_power_dbm").get<double>();
      bs.zone = jb.value("zone", -1);
      topo.base_stations.push_back(bs);
    }
    for (const auto& ju : root.at("users")) {
      UserTerminal u;
      u.id = ju.at("id").get<int>();
      u.position = {ju.at("x").get<double>(), ju.at("y").get<double>()};
      if (ju.contains("allowed_bs")) u.allowed_bs = ju.at("allowed_bs").get<std::vector<int>>();
      topo.users.push_back(std::move(u));
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed topology JSON: ") + e.what());
  }
  topo.validate();
  return topo;
}

void save_topology(const NetworkTopology& topology, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << topology_to_json(topology);
}

NetworkTopology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return topology_from_json(buf.str());
}

}  // namespace hetnet
