/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <set>

#include <gtest/gtest.h>

#include "fleetmon/simulator.hpp"

using namespace fleetmon;

TEST(LargestRemainderTest, SplitsExactly)
{
    EXPECT_EQ(largest_remainder(10, {0.25, 0.25, 0.25, 0.25}), (std::array<std::size_t, 4> {3, 3, 2, 2}));
    EXPECT_EQ(largest_remainder(1000, {0.2, 0.2, 0.5, 0.1}), (std::array<std::size_t, 4> {200, 200, 500, 100}));
    EXPECT_EQ(largest_remainder(4, {0, 0, 1, 0}), (std::array<std::size_t, 4> {0, 0, 4, 0}));
    EXPECT_EQ(largest_remainder(7, {0.5, 0.0, 0.0, 0.5}), (std::array<std::size_t, 4> {4, 0, 0, 3}));

    for (std::size_t total = 0; total < 200; ++total) {
        const auto counts = largest_remainder(total, {0.13, 0.29, 0.41, 0.17});
        EXPECT_EQ(counts[0] + counts[1] + counts[2] + counts[3], total);
    }
}

TEST(FleetConfigTest, Validation)
{
    FleetConfig config;
    EXPECT_NO_THROW(config.validate());

    config.arch_mix = {0.5, 0.5, 0.5, 0.0};
    EXPECT_THROW(config.validate(), std::invalid_argument);

    config             = {};
    config.node_count  = 0;
    EXPECT_THROW(config.validate(), std::invalid_argument);

    config            = {};
    config.fault_rate = 1.5;
    EXPECT_THROW(FleetSimulator {config}, std::invalid_argument);
}

TEST(SimulatorTest, AllKnlFleet)
{
    FleetConfig config;
    config.node_count   = 4;
    config.sensor_count = 0;
    config.arch_mix     = {0, 0, 1, 0};

    const auto batch = generate_fleet(config);

    ASSERT_EQ(batch.node_records.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(batch.node_records[i].id.name, "n000" + std::to_string(i));
        EXPECT_EQ(batch.node_records[i].arch, ArchClass::KNL);
    }
    EXPECT_EQ(batch.batch_id, 1u);
    EXPECT_TRUE(batch.sensor_records.empty());
}

TEST(SimulatorTest, ScaleFactorMultipliesFleet)
{
    FleetConfig config;
    config.node_count   = 10;
    config.sensor_count = 8;
    config.scale_factor = 3;

    const auto batch = generate_fleet(config);

    EXPECT_EQ(batch.node_records.size(), 30u);
    EXPECT_EQ(batch.sensor_records.size(), 24u);
}

TEST(SimulatorTest, SameSeedSameSequence)
{
    FleetConfig config;
    config.node_count   = 50;
    config.sensor_count = 20;
    config.seed         = 42;

    FleetSimulator a(config);
    FleetSimulator b(config);

    EXPECT_EQ(a.generate_fleet(), b.generate_fleet());
    for (int i = 0; i < 20; ++i) {
        EXPECT_EQ(a.tick(), b.tick());
    }

    config.seed = 43;
    EXPECT_NE(FleetSimulator(config).generate_fleet(), generate_fleet(FleetConfig {}));
}

TEST(SimulatorTest, GenerateFleetResets)
{
    FleetConfig config;
    config.node_count   = 20;
    config.sensor_count = 8;

    FleetSimulator simulator(config);
    const auto     first = simulator.generate_fleet();
    simulator.tick();
    simulator.tick();

    EXPECT_EQ(simulator.generate_fleet(), first);
}

TEST(SimulatorTest, ZeroStepsRepeatStateWithNewTimestamps)
{
    FleetConfig config;
    config.node_count        = 30;
    config.sensor_count      = 12;
    config.fault_rate        = 0;
    config.job_churn         = 0;
    config.cpu_step          = 0;
    config.mem_step_gb       = 0;
    config.disk_step_gb      = 0;
    config.sensor_step_scale = 0;

    FleetSimulator simulator(config);
    const auto     first = simulator.generate_fleet();
    auto           next  = simulator.tick();

    EXPECT_EQ(next.batch_id, 2u);
    EXPECT_EQ(next.produced_at, first.produced_at + config.tick_seconds);

    for (auto& record : next.node_records) {
        EXPECT_EQ(record.timestamp, next.produced_at);
        record.timestamp = first.produced_at;
    }
    for (auto& record : next.sensor_records) {
        EXPECT_EQ(record.timestamp, next.produced_at);
        record.timestamp = first.produced_at;
    }

    EXPECT_EQ(next.node_records, first.node_records);
    EXPECT_EQ(next.sensor_records, first.sensor_records);
    EXPECT_EQ(next.job_records, first.job_records);
}

TEST(SimulatorTest, RecordsStayValidOverManyTicks)
{
    FleetConfig config;
    config.node_count   = 40;
    config.sensor_count = 16;
    config.fault_rate   = 0.05;
    config.job_churn    = 0.2;
    config.seed         = 9;

    FleetSimulator simulator(config);
    auto           batch = simulator.generate_fleet();

    std::set<std::string> nodeNames;
    for (const auto& record : batch.node_records) {
        nodeNames.insert(record.id.name);
    }

    std::size_t downSeen = 0;
    for (int tick = 0; tick <= 1000; ++tick) {
        for (const auto& record : batch.node_records) {
            ASSERT_EQ(check_invariants(record), std::nullopt) << record.id.name << " at tick " << tick;
            if (record.status_reported == NodeStatus::Down) {
                ASSERT_EQ(record.jobs_running, 0u);
                ++downSeen;
            }
        }
        for (const auto& record : batch.sensor_records) {
            ASSERT_EQ(check_invariants(record), std::nullopt) << record.id.name << " at tick " << tick;
        }
        ASSERT_TRUE(batch.job_records.has_value());
        for (const auto& job : *batch.job_records) {
            ASSERT_EQ(check_invariants(job), std::nullopt) << job.job_id;
            for (const auto& node : job.node_ids) {
                ASSERT_TRUE(nodeNames.count(node)) << node;
            }
        }

        batch = simulator.tick();
    }

    EXPECT_GT(downSeen, 0u);
}
