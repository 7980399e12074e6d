/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_TESTS_ORACLES_HPP_
#define FLEETMON_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fleetmon/alerts.hpp"
#include "fleetmon/ingest.hpp"
#include "fleetmon/store.hpp"

/*
 * Independent reference implementations used as test oracles, plus random record generators. Nothing here calls
 * the code under test except for plain data types and enum conversions.
 */

namespace fleetmon::oracle {

/***********************************************************************************************************************
 * Generators
 **********************************************************************************************************************/

class Gen {
public:
    explicit Gen(std::uint64_t seed)
        : mRng(seed)
    {
    }

    std::mt19937_64& rng() noexcept { return mRng; }

    std::uint64_t below(std::uint64_t bound) { return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(mRng); }

    bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(mRng) < p; }

    /// Multiple of 0.01 in [0, maxCents / 100].
    double cents(std::int64_t maxCents)
    {
        return static_cast<double>(std::uniform_int_distribution<std::int64_t>(0, maxCents)(mRng)) / 100.0;
    }

    /// CSV-safe token of 1..12 characters.
    std::string token()
    {
        static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_.";

        std::string text(1 + below(12), 'x');
        for (auto& c : text) {
            c = kAlphabet[below(kAlphabet.size())];
        }

        return text;
    }

    /// Any finite double, including tiny, huge and negative values.
    double finite_double()
    {
        switch (below(4)) {
        case 0:
            return std::uniform_real_distribution<double>(-1e6, 1e6)(mRng);
        case 1:
            return static_cast<double>(static_cast<std::int64_t>(below(200000))) / 100.0;
        case 2:
            return std::ldexp(std::uniform_real_distribution<double>(0.5, 1.0)(mRng),
                static_cast<int>(below(600)) - 300);
        default: {
            double value {};
            do {
                const auto bits = mRng();
                std::memcpy(&value, &bits, sizeof(value));
            } while (!std::isfinite(value));
            return value;
        }
        }
    }

    NodeRecord node(std::string name, Timestamp now)
    {
        NodeRecord record;

        record.id              = EntityId {std::move(name), EntityKind::Node};
        record.arch            = kAllArches[below(kArchCount)];
        record.timestamp       = now - static_cast<Timestamp>(below(300));
        record.cpu_load        = cents(150);
        record.mem_free_gb     = cents(40000);
        record.disk_free_gb    = cents(90000);
        record.cores_total     = static_cast<std::uint32_t>(1 + below(128));
        record.cores_busy      = static_cast<std::uint32_t>(below(record.cores_total + 1));
        record.status_reported = chance(0.1) ? NodeStatus::Down : NodeStatus::Up;
        record.jobs_running
            = record.status_reported == NodeStatus::Down ? 0 : static_cast<std::uint32_t>(below(9));

        return record;
    }

    SensorRecord sensor(std::string name, Timestamp now)
    {
        SensorRecord record;

        record.id        = EntityId {std::move(name), EntityKind::Sensor};
        record.zone      = token();
        record.kind      = kAllSensorKinds[below(kAllSensorKinds.size())];
        record.timestamp = now - static_cast<Timestamp>(below(300));
        record.value     = finite_double();

        if (record.kind == SensorKind::HumidityPct) {
            record.value = std::fmod(std::fabs(record.value), 100.0);
        } else if (record.kind != SensorKind::TemperatureC) {
            record.value = std::fabs(record.value);
        }

        return record;
    }

    JobRecord job(std::string id, const std::vector<std::string>& nodeNames)
    {
        JobRecord record;

        record.job_id     = std::move(id);
        record.user       = "user" + std::to_string(below(16));
        record.arch_queue = kAllArches[below(kArchCount)];

        const auto span = 1 + below(std::min<std::uint64_t>(4, nodeNames.size()));
        const auto from = below(nodeNames.size() - span + 1);
        for (std::uint64_t i = 0; i < span; ++i) {
            record.node_ids.push_back(nodeNames[from + i]);
        }

        record.slots = static_cast<std::uint32_t>(span + below(20000));

        return record;
    }

    AlertRuleSet rules()
    {
        AlertRuleSet set;

        for (auto arch : kAllArches) {
            for (auto severity : kAllSeverities) {
                if (chance(0.15)) {
                    continue;
                }
                set.add(AlertRule {arch, 0.01 + cents(149), cents(40000), cents(90000), severity});
            }
        }

        return set;
    }

private:
    std::mt19937_64 mRng;
};

/***********************************************************************************************************************
 * Derivation oracles
 **********************************************************************************************************************/

/// Display state by explicit ranking: each condition contributes a rank, the highest wins.
inline AppearanceState appearance(const NodeRecord& record, const std::vector<Alert>& alerts, Timestamp now,
    Timestamp window)
{
    int rank = 0; // 0 Ok, 1 Warning, 2 Alert, 3 Stale, 4 Down

    for (const auto& alert : alerts) {
        rank = std::max(rank, alert.severity == Severity::Critical ? 2 : 1);
    }

    if (now - record.timestamp > window) {
        rank = std::max(rank, 3);
    }

    if (record.status_reported == NodeStatus::Down) {
        rank = 4;
    }

    constexpr AppearanceState kByRank[] {AppearanceState::Ok, AppearanceState::Warning, AppearanceState::Alert,
        AppearanceState::Stale, AppearanceState::Down};

    return kByRank[rank];
}

using AlertKey = std::tuple<int, int, double, double>; // dimension, severity, observed, threshold

/// Brute force over every rule and every dimension, returned as an ordered multiset of keys.
inline std::multiset<AlertKey> thresholds(const NodeRecord& record, const std::vector<AlertRule>& rules,
    Timestamp now, Timestamp window)
{
    std::multiset<AlertKey> keys;

    if (record.status_reported == NodeStatus::Down) {
        return keys;
    }

    for (const auto& rule : rules) {
        if (rule.arch != record.arch) {
            continue;
        }

        const int sev = static_cast<int>(rule.severity);
        const struct {
            AlertDimension dim;
            double         observed;
            double         threshold;
            bool           violated;
        } checks[] {
            {AlertDimension::CpuLoad, record.cpu_load, rule.cpu_load_max, record.cpu_load > rule.cpu_load_max},
            {AlertDimension::MemFree, record.mem_free_gb, rule.mem_free_min_gb,
                rule.mem_free_min_gb > record.mem_free_gb},
            {AlertDimension::DiskFree, record.disk_free_gb, rule.disk_free_min_gb,
                rule.disk_free_min_gb > record.disk_free_gb},
        };

        for (const auto& check : checks) {
            if (check.violated) {
                keys.emplace(static_cast<int>(check.dim), sev, check.observed, check.threshold);
            }
        }
    }

    if (now - record.timestamp > window) {
        keys.emplace(static_cast<int>(AlertDimension::Stale), static_cast<int>(Severity::Warning),
            static_cast<double>(now - record.timestamp), static_cast<double>(window));
    }

    return keys;
}

inline std::multiset<AlertKey> keys_of(const std::vector<Alert>& alerts)
{
    std::multiset<AlertKey> keys;

    for (const auto& alert : alerts) {
        keys.emplace(static_cast<int>(alert.dimension), static_cast<int>(alert.severity), alert.observed,
            alert.threshold);
    }

    return keys;
}

/// Analytics by direct summation over plain containers.
inline SystemAnalytics analytics(const std::vector<NodeState>& nodes, const std::vector<JobRecord>& jobs)
{
    SystemAnalytics result;

    std::uint64_t busy = 0;
    std::uint64_t total = 0;

    for (const auto& node : nodes) {
        result.state_counts[static_cast<std::size_t>(node.record.arch)][static_cast<std::size_t>(node.appearance)]
            += 1;

        for (const auto& alert : node.alerts) {
            result.active_alerts[static_cast<std::size_t>(alert.severity)] += 1;
        }

        const bool counted = node.appearance == AppearanceState::Ok || node.appearance == AppearanceState::Warning
            || node.appearance == AppearanceState::Alert;
        if (counted) {
            busy += node.record.cores_busy;
            total += node.record.cores_total;
        }
    }

    for (const auto& job : jobs) {
        result.total_jobs += 1;
        result.per_user_slots[job.user] += job.slots;
    }

    result.fleet_utilization = total == 0 ? 0.0 : static_cast<double>(busy) / static_cast<double>(total);

    return result;
}

/// Analytics recomputed from everything a reader can see in one snapshot.
inline SystemAnalytics analytics(const FleetSnapshot& snapshot)
{
    std::vector<NodeState> nodes;
    snapshot.nodes.for_each([&](const NodeState& node) { nodes.push_back(node); });

    std::vector<JobRecord> jobs;
    for (const auto& [id, job] : *snapshot.jobs) {
        jobs.push_back(job);
    }

    return analytics(nodes, jobs);
}

/***********************************************************************************************************************
 * Store oracles
 **********************************************************************************************************************/

inline const NodeState* linear_find_node(const FleetSnapshot& snapshot, std::string_view name)
{
    const NodeState* found = nullptr;
    snapshot.nodes.for_each([&](const NodeState& node) {
        if (node.record.id.name == name) {
            found = &node;
        }
    });

    return found;
}

inline const SensorRecord* linear_find_sensor(const FleetSnapshot& snapshot, std::string_view name)
{
    const SensorRecord* found = nullptr;
    snapshot.sensors.for_each([&](const SensorRecord& sensor) {
        if (sensor.id.name == name) {
            found = &sensor;
        }
    });

    return found;
}

/// Full-state model of a snapshot: every entity by name.
struct FlatState {
    std::map<std::string, NodeState>    nodes;
    std::map<std::string, SensorRecord> sensors;
    std::map<std::string, JobRecord>    jobs;

    bool operator==(const FlatState&) const = default;
};

inline FlatState flatten(const FleetSnapshot& snapshot)
{
    FlatState state;

    snapshot.nodes.for_each([&](const NodeState& node) { state.nodes.emplace(node.record.id.name, node); });
    snapshot.sensors.for_each([&](const SensorRecord& sensor) { state.sensors.emplace(sensor.id.name, sensor); });
    state.jobs = *snapshot.jobs;

    return state;
}

/// Changed names between two full states: the set difference of (name, value) pairs, plus removed job ids.
struct DiffSets {
    std::set<std::string> nodes;
    std::set<std::string> sensors;
    std::set<std::string> jobs_upserted;
    std::set<std::string> jobs_removed;

    bool operator==(const DiffSets&) const = default;
};

template <typename Map>
std::set<std::string> changed_keys(const Map& from, const Map& to)
{
    std::set<std::string> keys;

    for (const auto& [name, value] : to) {
        const auto it = from.find(name);
        if (it == from.end() || !(it->second == value)) {
            keys.insert(name);
        }
    }

    return keys;
}

inline DiffSets diff(const FlatState& from, const FlatState& to)
{
    DiffSets sets;

    sets.nodes         = changed_keys(from.nodes, to.nodes);
    sets.sensors       = changed_keys(from.sensors, to.sensors);
    sets.jobs_upserted = changed_keys(from.jobs, to.jobs);

    for (const auto& [id, job] : from.jobs) {
        if (!to.jobs.count(id)) {
            sets.jobs_removed.insert(id);
        }
    }

    return sets;
}

/***********************************************************************************************************************
 * Full-rebuild oracle
 **********************************************************************************************************************/

/**
 * Keeps the latest record per name across batches and re-derives every visited node from scratch, without any of
 * the store's copy-on-write machinery.
 */
class Rebuild {
public:
    Rebuild(std::vector<AlertRule> rules, Timestamp window)
        : mRules(std::move(rules))
        , mWindow(window)
    {
    }

    void apply(const UpdateBatch& batch)
    {
        for (const auto& record : batch.sensor_records) {
            mState.sensors[record.id.name] = record;
        }

        for (const auto& record : batch.node_records) {
            NodeState node;

            node.record = record;
            node.alerts = derive_alerts(record, batch.produced_at);
            node.appearance = appearance(record, node.alerts, batch.produced_at, mWindow);

            mState.nodes[record.id.name] = std::move(node);
        }

        if (batch.job_records) {
            mState.jobs.clear();
            for (const auto& job : *batch.job_records) {
                mState.jobs[job.job_id] = job;
            }
        }
    }

    const FlatState& state() const noexcept { return mState; }

    SystemAnalytics analytics() const
    {
        std::vector<NodeState> nodes;
        for (const auto& [name, node] : mState.nodes) {
            nodes.push_back(node);
        }

        std::vector<JobRecord> jobs;
        for (const auto& [id, job] : mState.jobs) {
            jobs.push_back(job);
        }

        return oracle::analytics(nodes, jobs);
    }

private:
    // Same alert values as the brute-force oracle, materialized as Alert structs.
    std::vector<Alert> derive_alerts(const NodeRecord& record, Timestamp now) const
    {
        std::vector<Alert> alerts;

        if (record.status_reported == NodeStatus::Down) {
            return alerts;
        }

        for (auto severity : kAllSeverities) {
            for (const auto& rule : mRules) {
                if (rule.arch != record.arch || rule.severity != severity) {
                    continue;
                }

                if (record.cpu_load > rule.cpu_load_max) {
                    alerts.push_back({record.id, rule.arch, AlertDimension::CpuLoad, severity, record.cpu_load,
                        rule.cpu_load_max, now});
                }
                if (record.mem_free_gb < rule.mem_free_min_gb) {
                    alerts.push_back({record.id, rule.arch, AlertDimension::MemFree, severity, record.mem_free_gb,
                        rule.mem_free_min_gb, now});
                }
                if (record.disk_free_gb < rule.disk_free_min_gb) {
                    alerts.push_back({record.id, rule.arch, AlertDimension::DiskFree, severity, record.disk_free_gb,
                        rule.disk_free_min_gb, now});
                }
            }
        }

        if (now - record.timestamp > mWindow) {
            alerts.push_back({record.id, record.arch, AlertDimension::Stale, Severity::Warning,
                static_cast<double>(now - record.timestamp), static_cast<double>(mWindow), now});
        }

        return alerts;
    }

    std::vector<AlertRule> mRules;
    Timestamp              mWindow;
    FlatState              mState;
};

/***********************************************************************************************************************
 * Random batches
 **********************************************************************************************************************/

/**
 * Random cycle over a fixed name universe: a random subset of nodes and sensors, occasionally a job list, names in
 * random order.
 */
inline UpdateBatch random_batch(Gen& gen, std::uint64_t batchId, Timestamp now, const std::vector<std::string>& nodes,
    const std::vector<std::string>& sensors, double coverage = 0.6)
{
    UpdateBatch batch;

    batch.batch_id    = batchId;
    batch.produced_at = now;

    for (const auto& name : nodes) {
        if (gen.chance(coverage)) {
            batch.node_records.push_back(gen.node(name, now));
        }
    }

    for (const auto& name : sensors) {
        if (gen.chance(coverage)) {
            batch.sensor_records.push_back(gen.sensor(name, now));
        }
    }

    if (gen.chance(0.5)) {
        std::vector<JobRecord> jobs;
        const auto             count = gen.below(12);
        for (std::uint64_t i = 0; i < count; ++i) {
            jobs.push_back(gen.job("job" + std::to_string(gen.below(20)), nodes));
        }

        std::sort(jobs.begin(), jobs.end(), [](const auto& a, const auto& b) { return a.job_id < b.job_id; });
        jobs.erase(std::unique(jobs.begin(), jobs.end(),
                       [](const auto& a, const auto& b) { return a.job_id == b.job_id; }),
            jobs.end());

        batch.job_records = std::move(jobs);
    }

    std::shuffle(batch.node_records.begin(), batch.node_records.end(), gen.rng());
    std::shuffle(batch.sensor_records.begin(), batch.sensor_records.end(), gen.rng());

    return batch;
}

inline std::vector<std::string> names(std::string_view prefix, std::size_t count)
{
    std::vector<std::string> result;

    for (std::size_t i = 0; i < count; ++i) {
        result.push_back(std::string(prefix) + std::to_string(i));
    }

    return result;
}

} // namespace fleetmon::oracle

#endif
