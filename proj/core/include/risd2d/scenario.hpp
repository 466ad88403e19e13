/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace risd2d {

using cplx = std::complex<double>;
using Rng = std::mt19937_64;

/// Propagation model family used for one link segment.
enum class LinkClass { Cellular, D2D };

/// Every link segment that appears in the network. Direct links plus the two
/// halves of each RIS cascade.
enum class Segment {
  CuBs,   ///< cellular user -> base station
  CuRis,  ///< cellular user -> RIS
  RisBs,  ///< RIS -> base station
  DtBs,   ///< D2D transmitter -> base station
  DtRis,  ///< D2D transmitter -> RIS
  DtDr,   ///< D2D transmitter -> its own receiver
  RisDr,  ///< RIS -> D2D receiver
  CuDr,   ///< cellular user -> D2D receiver
};
inline constexpr int kSegmentCount = 8;

/// Which propagation model each segment uses. Segments ending at the BS or
/// the RIS default to the cellular model; anything ending at a D2D receiver
/// defaults to the D2D model.
struct PathLossPlan {
  std::array<LinkClass, kSegmentCount> model{
      LinkClass::Cellular, LinkClass::Cellular, LinkClass::Cellular, LinkClass::Cellular,
      LinkClass::Cellular, LinkClass::D2D,      LinkClass::D2D,      LinkClass::D2D};

  LinkClass operator[](Segment s) const { return model[static_cast<int>(s)]; }
  LinkClass& operator[](Segment s) { return model[static_cast<int>(s)]; }
};

std::string to_string(Segment s);
Segment segment_from_string(const std::string& name);

/// Thrown for invalid scenario parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// All physical and algorithmic parameters of one simulated network.
/// Powers are given in dBm here and converted to watts by the accessors;
/// everything downstream of the config works in linear units.
struct ScenarioConfig {
  // network dimensions
  int num_cu = 6;        ///< J
  int num_rb = 4;        ///< K
  int rb_per_cu = 2;     ///< N, nonzero codeword dimensions per user
  int num_d2d = 2;       ///< J_D
  int num_ris = 4;       ///< M

  // limits
  double p0_c_dbm = 30.0;
  double p0_d_dbm = 30.0;
  double n0_dbm_per_hz = -174.0;
  double rb_bandwidth_hz = 1.0;
  double r0_d = 30.0;  ///< minimum D2D rate, bit/s/Hz

  // geometry (m)
  Eigen::Vector3d bs_pos{0.0, 0.0, 15.0};
  Eigen::Vector3d ris_pos{300.0, 0.0, 15.0};
  Eigen::Vector2d cu_center{320.0, 0.0};
  double cu_radius = 10.0;
  Eigen::Vector2d d2d_center{500.0, 0.0};
  double d2d_radius = 10.0;
  std::array<double, 2> d2d_pair_dist{1.0, 5.0};
  PathLossPlan path_loss;

  std::uint64_t seed = 1;

  // algorithm limits
  int t1 = 10;       ///< feasibility-phase iterations of the power step
  int t2 = 10;       ///< CUB iterations of the power step
  int t3 = 10;       ///< penalty rounds of the phase step
  int t4 = 5;        ///< SCA iterations per penalty round
  int n_outer = 5;   ///< outer BCD iterations
  double eta_init = 1.0;
  double eta_gain = 10.0;

  // numerical tolerances
  double feas_tol = 1e-7;
  double gap_tol = 1e-9;
  /// Screen every RB candidate with a power solve to pick the initial assignment.
  bool screen_initial_assignment = true;

  double p0_c_watt() const;
  double p0_d_watt() const;
  /// Noise power per RB in watts.
  double n0_watt() const;
  /// Minimum D2D SINR, 2^R0 - 1.
  double gamma0_d() const;

  /// Throws ConfigError listing the first violated invariant.
  void validate() const;
};

double dbm_to_watt(double dbm);

/// SCMA user/subcarrier occupancy. Indices are zero-based.
struct FactorGraph {
  int num_users = 0;
  int num_rb = 0;
  std::vector<std::vector<int>> users_on_rb;  ///< xi_k
  std::vector<std::vector<int>> rbs_of_user;  ///< zeta_j

  bool occupies(int user, int rb) const;
};

/// Regular factor graph: user j takes the j-th N-subset of {0..K-1} in
/// lexicographic order. Throws std::invalid_argument when C(K, N) < J.
FactorGraph build_factor_graph(int num_users, int num_rb, int rb_per_user);

struct NodePositions {
  std::vector<Eigen::Vector3d> cu;
  std::vector<Eigen::Vector3d> dt;
  std::vector<Eigen::Vector3d> dr;
};

/// Direct coefficient plus the RIS cascade: transmitter->RIS (f) and
/// RIS->receiver (g). Effective channel is h + g^H diag(e^{j theta}) f.
struct LinkChannel {
  cplx h{0.0, 0.0};
  Eigen::VectorXcd g;
  Eigen::VectorXcd f;
};

/// Every channel of the network on every RB.
struct ChannelSet {
  int num_cu = 0;
  int num_rb = 0;
  int num_d2d = 0;
  int num_ris = 0;

  std::vector<LinkChannel> cb;  ///< (j, k): CU_j -> BS
  std::vector<LinkChannel> db;  ///< (l, k): DT_l -> BS
  std::vector<LinkChannel> dd;  ///< (l, k): DT_l -> DR_l
  std::vector<LinkChannel> cd;  ///< (j, l, k): CU_j -> DR_l

  const LinkChannel& cell_bs(int j, int k) const { return cb[j * num_rb + k]; }
  const LinkChannel& d2d_bs(int l, int k) const { return db[l * num_rb + k]; }
  const LinkChannel& d2d_d2d(int l, int k) const { return dd[l * num_rb + k]; }
  const LinkChannel& cell_dr(int j, int l, int k) const { return cd[(j * num_d2d + l) * num_rb + k]; }
  LinkChannel& cell_bs(int j, int k) { return cb[j * num_rb + k]; }
  LinkChannel& d2d_bs(int l, int k) { return db[l * num_rb + k]; }
  LinkChannel& d2d_d2d(int l, int k) { return dd[l * num_rb + k]; }
  LinkChannel& cell_dr(int j, int l, int k) { return cd[(j * num_d2d + l) * num_rb + k]; }

  /// Copy with every RIS-to-receiver vector zeroed (network without RIS).
  ChannelSet without_ris() const;
};

/// Path loss in dB for a distance in kilometres. Throws std::invalid_argument
/// for nonpositive distances.
double path_loss_db(LinkClass cls, double distance_km);

/// Deterministic child stream for one entity of one scenario. Streams for
/// distinct (tag, index) pairs are independent, so adding a D2D pair does not
/// perturb the draws of the existing ones.
Rng make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

/// Samples node positions from `rng`.
NodePositions sample_positions(const ScenarioConfig& cfg, Rng& rng);

/// Samples node positions with one child stream per node derived from cfg.seed.
NodePositions sample_positions(const ScenarioConfig& cfg);

/// Rayleigh-faded channels with distance path loss, drawn from `rng`.
ChannelSet sample_channels(const ScenarioConfig& cfg, const NodePositions& pos, Rng& rng);

/// Same, with one child stream per transmitter derived from cfg.seed.
ChannelSet sample_channels(const ScenarioConfig& cfg, const NodePositions& pos);

/// One fully generated network instance.
struct Scenario {
  ScenarioConfig cfg;
  FactorGraph graph;
  NodePositions positions;
  ChannelSet channels;
};

Scenario generate_scenario(const ScenarioConfig& cfg);

}  // namespace risd2d
