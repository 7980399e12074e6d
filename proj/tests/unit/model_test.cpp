/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <gtest/gtest.h>

#include "fleetmon/model.hpp"

#include "../support/oracles.hpp"

using namespace fleetmon;

namespace {

constexpr Timestamp kNow    = 1700000000;
constexpr Timestamp kWindow = 120;

NodeRecord fresh_node(NodeStatus status = NodeStatus::Up)
{
    NodeRecord record;

    record.id              = EntityId {"n0001", EntityKind::Node};
    record.arch            = ArchClass::KNL;
    record.timestamp       = kNow;
    record.cores_total     = 64;
    record.status_reported = status;

    return record;
}

Alert alert_of(Severity severity)
{
    return Alert {EntityId {"n0001", EntityKind::Node}, ArchClass::KNL, AlertDimension::CpuLoad, severity, 1.0, 0.9,
        kNow};
}

} // namespace

TEST(AppearanceTest, DownWithoutAlertsIsDown)
{
    EXPECT_EQ(derive_appearance(fresh_node(NodeStatus::Down), {}, kNow, kWindow), AppearanceState::Down);
}

TEST(AppearanceTest, CriticalOutranksWarning)
{
    const std::vector alerts {alert_of(Severity::Critical), alert_of(Severity::Warning)};

    EXPECT_EQ(derive_appearance(fresh_node(), alerts, kNow, kWindow), AppearanceState::Alert);
}

TEST(AppearanceTest, WarningOnly)
{
    const std::vector alerts {alert_of(Severity::Warning)};

    EXPECT_EQ(derive_appearance(fresh_node(), alerts, kNow, kWindow), AppearanceState::Warning);
}

TEST(AppearanceTest, StaleBoundaryIsStrict)
{
    auto record = fresh_node();

    record.timestamp = kNow - kWindow;
    EXPECT_EQ(derive_appearance(record, {}, kNow, kWindow), AppearanceState::Ok);

    record.timestamp = kNow - kWindow - 1;
    EXPECT_EQ(derive_appearance(record, {}, kNow, kWindow), AppearanceState::Stale);
}

TEST(AppearanceTest, StaleOutranksAlertAndDownOutranksStale)
{
    auto record      = fresh_node();
    record.timestamp = kNow - 10 * kWindow;

    const std::vector alerts {alert_of(Severity::Critical)};
    EXPECT_EQ(derive_appearance(record, alerts, kNow, kWindow), AppearanceState::Stale);

    record.status_reported = NodeStatus::Down;
    EXPECT_EQ(derive_appearance(record, alerts, kNow, kWindow), AppearanceState::Down);
}

TEST(AppearanceTest, RandomRecordsMatchPrecedenceOracle)
{
    oracle::Gen gen(11);

    for (int i = 0; i < 200; ++i) {
        const auto record = gen.node("n" + std::to_string(i), kNow);
        const auto window = static_cast<Timestamp>(gen.below(300));

        std::vector<Alert> alerts;
        for (std::uint64_t k = gen.below(4); k > 0; --k) {
            alerts.push_back(alert_of(gen.chance(0.5) ? Severity::Warning : Severity::Critical));
        }

        EXPECT_EQ(derive_appearance(record, alerts, kNow, window), oracle::appearance(record, alerts, kNow, window))
            << "case " << i;
    }
}

TEST(AppearanceTest, ColorCodes)
{
    EXPECT_EQ(color_of(AppearanceState::Ok), "green");
    EXPECT_EQ(color_of(AppearanceState::Warning), "yellow");
    EXPECT_EQ(color_of(AppearanceState::Alert), "red");
    EXPECT_EQ(color_of(AppearanceState::Down), "gray");
    EXPECT_EQ(color_of(AppearanceState::Stale), "blue");
}

TEST(TokenTest, CsvTokensRoundTrip)
{
    for (auto arch : kAllArches) {
        EXPECT_EQ(arch_from_csv(to_csv_token(arch)), arch);
    }

    for (auto kind : kAllSensorKinds) {
        EXPECT_EQ(sensor_kind_from_csv(to_csv_token(kind)), kind);
    }

    EXPECT_EQ(status_from_csv("Up"), NodeStatus::Up);
    EXPECT_EQ(status_from_csv("Down"), NodeStatus::Down);
    EXPECT_EQ(status_from_csv("UP"), std::nullopt);
    EXPECT_EQ(arch_from_csv("Intel"), ArchClass::Intel);
    EXPECT_EQ(arch_from_csv("arm"), std::nullopt);
}

TEST(TokenTest, WireTokensRoundTrip)
{
    for (auto arch : kAllArches) {
        EXPECT_EQ(arch_from_wire(to_wire(arch)), arch);
    }

    for (auto kind : kAllSensorKinds) {
        EXPECT_EQ(sensor_kind_from_wire(to_wire(kind)), kind);
    }

    for (auto state : kAllAppearances) {
        EXPECT_EQ(appearance_from_wire(to_wire(state)), state);
    }

    for (auto severity : kAllSeverities) {
        EXPECT_EQ(severity_from_wire(to_wire(severity)), severity);
    }

    for (auto dimension :
        {AlertDimension::CpuLoad, AlertDimension::MemFree, AlertDimension::DiskFree, AlertDimension::Stale}) {
        EXPECT_EQ(dimension_from_wire(to_wire(dimension)), dimension);
    }

    EXPECT_EQ(to_wire(SensorKind::TemperatureC), "TEMPERATURE_C");
    EXPECT_EQ(to_wire(ArchClass::Intel), "INTEL");
    EXPECT_EQ(entity_kind_from_wire("SENSOR"), EntityKind::Sensor);
}

TEST(TokenTest, ValidTokens)
{
    EXPECT_TRUE(is_valid_token("n0421"));
    EXPECT_TRUE(is_valid_token("pod-temp-03"));
    EXPECT_FALSE(is_valid_token(""));
    EXPECT_FALSE(is_valid_token("a b"));
    EXPECT_FALSE(is_valid_token("a,b"));
    EXPECT_FALSE(is_valid_token("a;b"));
    EXPECT_FALSE(is_valid_token("tab\there"));
}

TEST(InvariantTest, NodeRecord)
{
    auto record = fresh_node();
    EXPECT_EQ(check_invariants(record), std::nullopt);

    record.cores_busy = 65;
    EXPECT_NE(check_invariants(record), std::nullopt);

    record                 = fresh_node(NodeStatus::Down);
    record.jobs_running    = 1;
    EXPECT_NE(check_invariants(record), std::nullopt);

    record          = fresh_node();
    record.cpu_load = -0.1;
    EXPECT_NE(check_invariants(record), std::nullopt);

    record             = fresh_node();
    record.cores_total = 0;
    EXPECT_NE(check_invariants(record), std::nullopt);
}

TEST(InvariantTest, SensorRecordRangesByKind)
{
    SensorRecord record;

    record.id   = EntityId {"pod-hum-01", EntityKind::Sensor};
    record.zone = "zoneA";
    record.kind = SensorKind::HumidityPct;

    record.value = 100.0;
    EXPECT_EQ(check_invariants(record), std::nullopt);

    record.value = 250.0;
    EXPECT_NE(check_invariants(record), std::nullopt);

    record.kind  = SensorKind::PowerKw;
    record.value = -1.0;
    EXPECT_NE(check_invariants(record), std::nullopt);

    record.kind = SensorKind::TemperatureC;
    EXPECT_EQ(check_invariants(record), std::nullopt);
}

TEST(InvariantTest, JobRecord)
{
    JobRecord job {"job1", "alice", ArchClass::GPU, 2, {"n1", "n2"}};
    EXPECT_EQ(check_invariants(job), std::nullopt);

    job.slots = 1;
    EXPECT_NE(check_invariants(job), std::nullopt);

    job.node_ids.clear();
    EXPECT_NE(check_invariants(job), std::nullopt);
}

TEST(InvariantTest, AlertRule)
{
    EXPECT_EQ(check_invariants(AlertRule {ArchClass::AMD, 0.5, 0.0, 0.0, Severity::Warning}), std::nullopt);
    EXPECT_NE(check_invariants(AlertRule {ArchClass::AMD, 0.0, 0.0, 0.0, Severity::Warning}), std::nullopt);
    EXPECT_NE(check_invariants(AlertRule {ArchClass::AMD, 0.5, -1.0, 0.0, Severity::Warning}), std::nullopt);
}
