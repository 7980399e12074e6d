/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <fstream>

#include <gtest/gtest.h>

#include "fleetmon/config.hpp"

using namespace fleetmon;

TEST(ConfigTest, EmptyTextGivesDefaults)
{
    const auto config = parse_config("");

    EXPECT_EQ(config.port, 8080);
    EXPECT_EQ(config.bind_address, "127.0.0.1");
    EXPECT_EQ(config.strategy, UpdateStrategy::managed());
    EXPECT_EQ(config.update.staleness_window, 120);
    EXPECT_EQ(config.history, 64u);
    EXPECT_EQ(config.slots, SlotPolicy {});
    EXPECT_EQ(config.rules.rules(), AlertRuleSet::defaults().rules());
    EXPECT_FALSE(config.simulate);
}

TEST(ConfigTest, ParsesEveryGroup)
{
    const auto config = parse_config(R"(
# service
feed.dir = /var/spool/fleet
feed.poll_s = 2
server.bind = 0.0.0.0
server.port = 9000   # trailing comment

sim.enabled = true
sim.nodes = 250
sim.sensors = 40
sim.scale = 2
sim.seed = 99
sim.mix.amd = 0.25
sim.mix.intel = 0.25
sim.mix.knl = 0.25
sim.mix.gpu = 0.25
sim.cores.knl = 68

update.strategy = chunked:50
update.staleness_window_s = 300
store.history = 16

slots.legacy_mode = true
slots.special_users = alice, bob

alerts.knl.critical.cpu_load_max = 0.97
alerts.gpu.warning.enabled = false
)");

    EXPECT_EQ(config.feed_dir, "/var/spool/fleet");
    EXPECT_EQ(config.feed_poll, std::chrono::seconds(2));
    EXPECT_EQ(config.bind_address, "0.0.0.0");
    EXPECT_EQ(config.port, 9000);
    EXPECT_TRUE(config.simulate);
    EXPECT_EQ(config.sim.node_count, 250u);
    EXPECT_EQ(config.sim.sensor_count, 40u);
    EXPECT_EQ(config.sim.total_nodes(), 500u);
    EXPECT_EQ(config.sim.seed, 99u);
    EXPECT_EQ(config.sim.cores_per_arch[2], 68u);
    EXPECT_EQ(config.strategy, UpdateStrategy::chunked(50));
    EXPECT_EQ(config.update.staleness_window, 300);
    EXPECT_EQ(config.history, 16u);
    EXPECT_TRUE(config.slots.legacy_mode);
    EXPECT_EQ(config.slots.special_users, (std::set<std::string> {"alice", "bob"}));

    ASSERT_NE(config.rules.find(ArchClass::KNL, Severity::Critical), nullptr);
    EXPECT_DOUBLE_EQ(config.rules.find(ArchClass::KNL, Severity::Critical)->cpu_load_max, 0.97);
    EXPECT_EQ(config.rules.find(ArchClass::GPU, Severity::Warning), nullptr);
}

TEST(ConfigTest, ErrorsCarryLineNumbers)
{
    const auto expect_line = [](std::string_view text, std::size_t line) {
        try {
            parse_config(text);
            FAIL() << "accepted: " << text;
        } catch (const ConfigError& e) {
            EXPECT_EQ(e.line(), line) << e.what();
        }
    };

    expect_line("server.port = 80\nbogus.key = 1\n", 2);
    expect_line("\n\nserver.port = 70000\n", 3);
    expect_line("server.port = eighty\n", 1);
    expect_line("no equals sign\n", 1);
    expect_line("update.strategy = chunked:0\n", 1);
    expect_line("sim.enabled = yes\n", 1);
    expect_line("alerts.arm.warning.cpu_load_max = 0.5\n", 1);
    expect_line("alerts.knl.warning.cpu_load_max = 0\n", 1);
    expect_line("sim.mix.amd = 0.9\n", 0);
}

TEST(ConfigTest, LoadFromFile)
{
    const auto path = std::filesystem::temp_directory_path() / "fleetmon-config-test.conf";
    {
        std::ofstream out(path);
        out << "server.port = 8181\n";
    }

    EXPECT_EQ(load_config(path).port, 8181);
    std::filesystem::remove(path);

    EXPECT_THROW(load_config(path), ConfigError);
}
