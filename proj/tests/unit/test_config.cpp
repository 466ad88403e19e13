/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 risd2d contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include "risd2d/config.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace risd2d;

TEST(Config, JsonRoundTrip) {
  ScenarioConfig cfg;
  cfg.num_d2d = 3;
  cfg.p0_d_dbm = 25.5;
  cfg.ris_pos = {1.0, 2.0, 3.0};
  cfg.path_loss[Segment::RisDr] = LinkClass::Cellular;
  cfg.seed = 12345678901234ULL;
  cfg.screen_initial_assignment = false;
  const ScenarioConfig back = config_from_json(config_to_json(cfg));
  EXPECT_EQ(back.num_d2d, 3);
  EXPECT_EQ(back.p0_d_dbm, 25.5);
  EXPECT_EQ(back.ris_pos, cfg.ris_pos);
  EXPECT_EQ(back.path_loss[Segment::RisDr], LinkClass::Cellular);
  EXPECT_EQ(back.seed, cfg.seed);
  EXPECT_FALSE(back.screen_initial_assignment);
  EXPECT_EQ(config_to_json(back), config_to_json(cfg));
}

TEST(Config, PartialJsonKeepsBase) {
  ScenarioConfig base;
  base.num_ris = 8;
  const ScenarioConfig c = config_from_json(R"({"r0_d": 4})", base);
  EXPECT_EQ(c.r0_d, 4.0);
  EXPECT_EQ(c.num_ris, 8);
}

TEST(Config, UnknownKeyRejected) {
  EXPECT_THROW(config_from_json(R"({"num_users": 4})"), ConfigError);
  ScenarioConfig c;
  EXPECT_THROW(apply_override(c, "nope", "1"), ConfigError);
}

TEST(Config, Overrides) {
  ScenarioConfig c;
  apply_override(c, "p0_d_dbm", "25");
  apply_override(c, "bs_pos", "0,0,20");
  apply_override(c, "path_loss.ris_dr", "cellular");
  apply_override(c, "num_d2d", "3");
  EXPECT_EQ(c.p0_d_dbm, 25.0);
  EXPECT_EQ(c.bs_pos.z(), 20.0);
  EXPECT_EQ(c.path_loss[Segment::RisDr], LinkClass::Cellular);
  EXPECT_EQ(c.num_d2d, 3);
  EXPECT_THROW(apply_override(c, "num_d2d", "abc"), ConfigError);
}

TEST(Config, KeysCoverSweepParameters) {
  const auto keys = config_keys();
  for (const char* k : {"num_d2d", "p0_c_dbm", "p0_d_dbm", "r0_d", "num_ris", "t3", "eta_gain"})
    EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
}
