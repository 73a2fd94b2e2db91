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

// Network layouts: base stations, users, the region they live in, and the
// distance-based large-scale gains between them.

#ifndef HETNET_TOPOLOGY_HPP_
#define HETNET_TOPOLOGY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/types.hpp"

namespace hetnet {

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;  // meters

  friend bool operator==(const Position&, const Position&) = default;
};

enum class Tier { Macro, Small };

std::string to_string(Tier tier);
Tier tier_from_string(const std::string& name);

struct BaseStation {
  int id = 0;
  Position position;
  Tier tier = Tier::Macro;
  int antennas = 1;         // M_j
  int streams = 1;          // S_j, at most M_j
  double tx_power_dbm = 0;  // P_j
  int zone = -1;            // hot-zone index, -1 when not part of a zone

  /// Spatial load S_j / M_j.
  double spatial_load() const { return static_cast<double>(streams) / antennas; }

  friend bool operator==(const BaseStation&, const BaseStation&) = default;
};

struct UserTerminal {
  int id = 0;
  Position position;
  // Ids of the base stations allowed to serve this user; empty means all.
  std::optional<std::vector<int>> allowed_bs;

  friend bool operator==(const UserTerminal&, const UserTerminal&) = default;
};

struct Region {
  double width = 1.0;   // meters
  double height = 1.0;  // meters
  bool wraparound = false;

  bool contains(const Position& p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }

  friend bool operator==(const Region&, const Region&) = default;
};

/// Gain model g(d) = 1 / (1 + (d / d0)^e), with a tier-dependent exponent.
struct PathlossModel {
  double reference_distance = 40.0;
  double exponent_macro = 3.5;
  double exponent_small = 4.0;

  void validate() const;
};

struct NetworkTopology {
  Region region;
  std::vector<BaseStation> base_stations;
  std::vector<UserTerminal> users;
  std::uint64_t seed = 0;

  int num_users() const { return static_cast<int>(users.size()); }
  int num_bs() const { return static_cast<int>(base_stations.size()); }

  /// Throws InvalidInput when any invariant of the layout is broken.
  void validate() const;

  friend bool operator==(const NetworkTopology&, const NetworkTopology&) = default;
};

/// Minimum-image distance on a torus when the region wraps, plain Euclidean
/// otherwise.
double toroidal_distance(const Position& a, const Position& b, const Region& region);

/// Dimensionless gain in (0, 1] at distance d from a BS of the given tier.
double pathloss_gain(double distance, Tier tier, const PathlossModel& model = {});

/// K x J matrix of large-scale gains g_{k,j}.
Matrix gain_matrix(const NetworkTopology& topology, const PathlossModel& model = {});

/// Per-BS stream counts S_j, in base-station order.
IntVector stream_counts(const NetworkTopology& topology);

/// K x J eligibility mask: true where BS j may serve user k.
BoolMatrix eligibility(const NetworkTopology& topology);

struct TierDefaults {
  int antennas;
  int streams;
  double tx_power_dbm;
};

inline constexpr TierDefaults kMacroDefaults{100, 10, 46.0};
inline constexpr TierDefaults kSmallDefaults{40, 4, 35.0};

/// Rectangular layout with macros at the centers of stacked width x width
/// squares, uniformly dropped small cells, and users from a non-homogeneous
/// Poisson process that is denser inside a disc around every macro.
struct Experiment1Params {
  double width = 900.0;
  int num_macros = 2;  // region height = num_macros * width
  int num_small = 40;
  double background_density = 1.0e-4;  // users per square meter
  double hot_density = 1.0e-3;         // users per square meter inside a hot disc
  double hot_radius = 150.0;           // meters
  bool wraparound = true;
  TierDefaults macro = kMacroDefaults;
  TierDefaults small = kSmallDefaults;

  /// One macro, ten small cells, about one hundred users.
  static Experiment1Params desk_scale();
  void validate() const;
};

NetworkTopology gen_experiment1(const Experiment1Params& params, std::uint64_t seed);

/// Hexagonal macro sites with hot zones of clustered small cells and users.
struct HetNet3gppParams {
  int num_macro_sites = 7;  // 1, 3 or 7 sites of the central hexagon cluster
  double inter_site_distance = 500.0;
  int zones_per_macro = 3;
  int small_per_zone = 4;
  double zone_radius = 70.0;
  double min_zone_to_macro = 105.0;
  double min_small_separation = 20.0;
  int users_per_zone = 20;
  int background_users_per_macro = 10;
  int retry_budget = 1000;
  TierDefaults macro = kMacroDefaults;
  TierDefaults small = kSmallDefaults;

  /// Three macro sites with the default per-site content.
  static HetNet3gppParams desk_scale();
  void validate() const;
};

NetworkTopology gen_hetnet_3gpp(const HetNet3gppParams& params, std::uint64_t seed);

std::string topology_to_json(const NetworkTopology& topology);
NetworkTopology topology_from_json(const std::string& text);
void save_topology(const NetworkTopology& topology, const std::string& path);
NetworkTopology load_topology(const std::string& path);

}  // namespace hetnet

#endif  // HETNET_TOPOLOGY_HPP_
