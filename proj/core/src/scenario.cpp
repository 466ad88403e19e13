/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace risd2d {

namespace {

constexpr const char* kSegmentNames[kSegmentCount] = {"cu_bs", "cu_ris", "ris_bs", "dt_bs",
                                                      "dt_ris", "dt_dr", "ris_dr", "cu_dr"};

// stream tags
enum : std::uint64_t { kTagCuPos = 1, kTagD2dPos, kTagCuChan, kTagD2dChan, kTagRisBs, kTagRisDr };

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Eigen::Vector3d uniform_in_disc(const Eigen::Vector2d& center, double radius, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double phi = 2.0 * std::numbers::pi * u(rng);
  return {center.x() + r * std::cos(phi), center.y() + r * std::sin(phi), 0.0};
}

cplx unit_gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

double link_amplitude(const ScenarioConfig& cfg, Segment s, const Eigen::Vector3d& a,
                      const Eigen::Vector3d& b) {
  const double d_km = (a - b).norm() / 1000.0;
  return std::sqrt(std::pow(10.0, -path_loss_db(cfg.path_loss[s], d_km) / 10.0));
}

Eigen::VectorXcd draw_vector(double amp, int m, Rng& rng) {
  Eigen::VectorXcd v(m);
  for (int i = 0; i < m; ++i) v[i] = amp * unit_gaussian(rng);
  return v;
}

Eigen::Vector3d sample_dr(const ScenarioConfig& cfg, const Eigen::Vector3d& dt, Rng& rng) {
  std::uniform_real_distribution<double> dist(cfg.d2d_pair_dist[0], cfg.d2d_pair_dist[1]);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double d = cfg.d2d_pair_dist[0] == cfg.d2d_pair_dist[1] ? cfg.d2d_pair_dist[0] : dist(rng);
  const double phi = angle(rng);
  return {dt.x() + d * std::cos(phi), dt.y() + d * std::sin(phi), 0.0};
}

ChannelSet empty_channel_set(const ScenarioConfig& cfg) {
  ChannelSet ch;
  ch.num_cu = cfg.num_cu;
  ch.num_rb = cfg.num_rb;
  ch.num_d2d = cfg.num_d2d;
  ch.num_ris = cfg.num_ris;
  ch.cb.resize(static_cast<size_t>(cfg.num_cu) * cfg.num_rb);
  ch.db.resize(static_cast<size_t>(cfg.num_d2d) * cfg.num_rb);
  ch.dd.resize(static_cast<size_t>(cfg.num_d2d) * cfg.num_rb);
  ch.cd.resize(static_cast<size_t>(cfg.num_cu) * cfg.num_d2d * cfg.num_rb);
  return ch;
}

void check_positions(const ScenarioConfig& cfg, const NodePositions& pos) {
  if (static_cast<int>(pos.cu.size()) != cfg.num_cu || static_cast<int>(pos.dt.size()) != cfg.num_d2d ||
      static_cast<int>(pos.dr.size()) != cfg.num_d2d) {
    throw std::invalid_argument("node positions do not match the scenario dimensions");
  }
}

// Fills every link. The RIS half-links are physical channels shared by all
// links that traverse them: CU_j->RIS and DT_l->RIS per transmitter, RIS->BS
// and RIS->DR_l per receiver, each independent across RBs. `stream(tag, i)`
// hands out the random stream owning entity i of class tag.
template <typename StreamFn>
ChannelSet fill_channels(const ScenarioConfig& cfg, const NodePositions& pos, StreamFn&& stream) {
  check_positions(cfg, pos);
  ChannelSet ch = empty_channel_set(cfg);
  const int m = cfg.num_ris;
  const int nrb = cfg.num_rb;

  std::vector<Eigen::VectorXcd> ris_bs(nrb);
  {
    Rng& rng = stream(kTagRisBs, 0);
    const double a = link_amplitude(cfg, Segment::RisBs, cfg.ris_pos, cfg.bs_pos);
    for (int k = 0; k < nrb; ++k) ris_bs[k] = draw_vector(a, m, rng);
  }
  std::vector<std::vector<Eigen::VectorXcd>> ris_dr(cfg.num_d2d, std::vector<Eigen::VectorXcd>(nrb));
  for (int l = 0; l < cfg.num_d2d; ++l) {
    Rng& rng = stream(kTagRisDr, l);
    const double a = link_amplitude(cfg, Segment::RisDr, cfg.ris_pos, pos.dr[l]);
    for (int k = 0; k < nrb; ++k) ris_dr[l][k] = draw_vector(a, m, rng);
  }
  for (int j = 0; j < cfg.num_cu; ++j) {
    Rng& rng = stream(kTagCuChan, j);
    const double a_cb = link_amplitude(cfg, Segment::CuBs, pos.cu[j], cfg.bs_pos);
    const double a_cr = link_amplitude(cfg, Segment::CuRis, pos.cu[j], cfg.ris_pos);
    for (int k = 0; k < nrb; ++k) {
      LinkChannel& link = ch.cell_bs(j, k);
      link.h = a_cb * unit_gaussian(rng);
      link.f = draw_vector(a_cr, m, rng);
      link.g = ris_bs[k];
    }
  }
  for (int l = 0; l < cfg.num_d2d; ++l) {
    Rng& rng = stream(kTagD2dChan, l);
    const double a_db = link_amplitude(cfg, Segment::DtBs, pos.dt[l], cfg.bs_pos);
    const double a_tr = link_amplitude(cfg, Segment::DtRis, pos.dt[l], cfg.ris_pos);
    const double a_dd = link_amplitude(cfg, Segment::DtDr, pos.dt[l], pos.dr[l]);
    for (int k = 0; k < nrb; ++k) {
      const Eigen::VectorXcd to_ris = draw_vector(a_tr, m, rng);
      LinkChannel& up = ch.d2d_bs(l, k);
      up.h = a_db * unit_gaussian(rng);
      up.f = to_ris;
      up.g = ris_bs[k];
      LinkChannel& pair = ch.d2d_d2d(l, k);
      pair.h = a_dd * unit_gaussian(rng);
      pair.f = to_ris;
      pair.g = ris_dr[l][k];
    }
    // CU_j -> DR_l direct links come from the pair's stream so that adding a
    // pair leaves every existing channel untouched.
    for (int j = 0; j < cfg.num_cu; ++j) {
      const double a_cd = link_amplitude(cfg, Segment::CuDr, pos.cu[j], pos.dr[l]);
      for (int k = 0; k < nrb; ++k) {
        LinkChannel& link = ch.cell_dr(j, l, k);
        link.h = a_cd * unit_gaussian(rng);
        link.f = ch.cell_bs(j, k).f;
        link.g = ris_dr[l][k];
      }
    }
  }
  return ch;
}

}  // namespace

std::string to_string(Segment s) { return kSegmentNames[static_cast<int>(s)]; }

Segment segment_from_string(const std::string& name) {
  for (int i = 0; i < kSegmentCount; ++i) {
    if (name == kSegmentNames[i]) return static_cast<Segment>(i);
  }
  throw ConfigError("unknown link segment '" + name + "'");
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double ScenarioConfig::p0_c_watt() const { return dbm_to_watt(p0_c_dbm); }
double ScenarioConfig::p0_d_watt() const { return dbm_to_watt(p0_d_dbm); }
double ScenarioConfig::n0_watt() const {
  return dbm_to_watt(n0_dbm_per_hz + 10.0 * std::log10(rb_bandwidth_hz));
}
double ScenarioConfig::gamma0_d() const { return std::exp2(r0_d) - 1.0; }

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (num_cu < 1 || num_rb < 1 || rb_per_cu < 1) fail("num_cu, num_rb and rb_per_cu must be >= 1");
  if (rb_per_cu > num_rb) fail("rb_per_cu must not exceed num_rb");
  if (binomial(num_rb, rb_per_cu) < num_cu) fail("factor graph capacity C(K, N) is smaller than num_cu");
  if (num_d2d < 0 || num_d2d > num_rb) fail("num_d2d must lie in [0, num_rb]");
  if (num_ris < 1) fail("num_ris must be >= 1");
  if (!(cu_radius > 0.0) || !(d2d_radius > 0.0)) fail("cu_radius and d2d_radius must be positive");
  if (!(d2d_pair_dist[0] > 0.0) || d2d_pair_dist[1] < d2d_pair_dist[0]) {
    fail("d2d_pair_dist must satisfy 0 < min <= max");
  }
  if (!(r0_d >= 0.0)) fail("r0_d must be nonnegative");
  if (!(rb_bandwidth_hz > 0.0)) fail("rb_bandwidth_hz must be positive");
  if (!std::isfinite(p0_c_dbm) || !std::isfinite(p0_d_dbm) || !std::isfinite(n0_dbm_per_hz)) {
    fail("power levels must be finite");
  }
  if (!(eta_gain > 1.0)) fail("eta_gain must exceed 1");
  if (!(eta_init > 0.0)) fail("eta_init must be positive");
  if (t1 < 1 || t2 < 1 || t3 < 1 || t4 < 1 || n_outer < 1) fail("iteration limits must be >= 1");
  if (!(feas_tol > 0.0) || !(gap_tol > 0.0)) fail("tolerances must be positive");
}

bool FactorGraph::occupies(int user, int rb) const {
  const auto& z = rbs_of_user.at(user);
  return std::find(z.begin(), z.end(), rb) != z.end();
}

FactorGraph build_factor_graph(int num_users, int num_rb, int rb_per_user) {
  if (num_users < 1 || num_rb < 1 || rb_per_user < 1) {
    throw std::invalid_argument("factor graph dimensions must be >= 1");
  }
  if (rb_per_user > num_rb) throw std::invalid_argument("rb_per_user must not exceed num_rb");
  if (binomial(num_rb, rb_per_user) < num_users) {
    std::ostringstream msg;
    msg << "factor graph capacity exceeded: C(" << num_rb << ", " << rb_per_user
        << ") = " << binomial(num_rb, rb_per_user) << " < " << num_users << " users";
    throw std::invalid_argument(msg.str());
  }
  FactorGraph fg;
  fg.num_users = num_users;
  fg.num_rb = num_rb;
  fg.users_on_rb.resize(num_rb);
  fg.rbs_of_user.reserve(num_users);

  // Lexicographic N-subsets: advance the rightmost index that can move.
  std::vector<int> subset(rb_per_user);
  for (int i = 0; i < rb_per_user; ++i) subset[i] = i;
  for (int j = 0; j < num_users; ++j) {
    fg.rbs_of_user.push_back(subset);
    for (int k : subset) fg.users_on_rb[k].push_back(j);
    int i = rb_per_user - 1;
    while (i >= 0 && subset[i] == num_rb - rb_per_user + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int t = i + 1; t < rb_per_user; ++t) subset[t] = subset[t - 1] + 1;
  }
  return fg;
}

double path_loss_db(LinkClass cls, double distance_km) {
  if (!(distance_km > 0.0)) throw std::invalid_argument("path loss needs a positive distance");
  switch (cls) {
    case LinkClass::D2D:
      return 40.0 * std::log10(distance_km) + 148.0;
    case LinkClass::Cellular:
      return 37.6 * std::log10(distance_km) + 128.1;
  }
  return 0.0;
}

Rng make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

NodePositions sample_positions(const ScenarioConfig& cfg, Rng& rng) {
  NodePositions pos;
  for (int j = 0; j < cfg.num_cu; ++j) pos.cu.push_back(uniform_in_disc(cfg.cu_center, cfg.cu_radius, rng));
  for (int l = 0; l < cfg.num_d2d; ++l) {
    pos.dt.push_back(uniform_in_disc(cfg.d2d_center, cfg.d2d_radius, rng));
    pos.dr.push_back(sample_dr(cfg, pos.dt.back(), rng));
  }
  return pos;
}

NodePositions sample_positions(const ScenarioConfig& cfg) {
  NodePositions pos;
  for (int j = 0; j < cfg.num_cu; ++j) {
    Rng rng = make_stream(cfg.seed, kTagCuPos, j);
    pos.cu.push_back(uniform_in_disc(cfg.cu_center, cfg.cu_radius, rng));
  }
  for (int l = 0; l < cfg.num_d2d; ++l) {
    Rng rng = make_stream(cfg.seed, kTagD2dPos, l);
    pos.dt.push_back(uniform_in_disc(cfg.d2d_center, cfg.d2d_radius, rng));
    pos.dr.push_back(sample_dr(cfg, pos.dt.back(), rng));
  }
  return pos;
}

ChannelSet sample_channels(const ScenarioConfig& cfg, const NodePositions& pos, Rng& rng) {
  return fill_channels(cfg, pos, [&rng](std::uint64_t, std::uint64_t) -> Rng& { return rng; });
}

ChannelSet sample_channels(const ScenarioConfig& cfg, const NodePositions& pos) {
  Rng current;
  return fill_channels(cfg, pos, [&](std::uint64_t tag, std::uint64_t index) -> Rng& {
    current = make_stream(cfg.seed, tag, index);
    return current;
  });
}

ChannelSet ChannelSet::without_ris() const {
  ChannelSet out = *this;
  for (auto* links : {&out.cb, &out.db, &out.dd, &out.cd}) {
    for (auto& link : *links) link.g.setZero();
  }
  return out;
}

Scenario generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Scenario s;
  s.cfg = cfg;
  s.graph = build_factor_graph(cfg.num_cu, cfg.num_rb, cfg.rb_per_cu);
  s.positions = sample_positions(cfg);
  s.channels = sample_channels(cfg, s.positions);
  return s;
}

}  // namespace risd2d
