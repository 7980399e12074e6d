/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fleetmon {

namespace {

constexpr std::array<std::string_view, 4> kSensorPrefix {"pod-temp-", "pod-hum-", "pod-air-", "pod-pwr-"};

// Start value range and walk step, in hundredths, per sensor kind.
struct SensorProfile {
    std::int64_t lo, hi, step, min, max;
};

constexpr std::array<SensorProfile, 4> kSensorProfiles {{
    {1800, 3000, 20, 1000, 4500},     // TemperatureC
    {3000, 6000, 50, 0, 10000},       // HumidityPct
    {50000, 200000, 1000, 0, 400000}, // AirflowCfm
    {500, 5000, 50, 0, 20000},        // PowerKw
}};

std::string padded(std::string_view prefix, std::size_t index, std::size_t width)
{
    auto digits = std::to_string(index);
    if (digits.size() < width) {
        digits.insert(0, width - digits.size(), '0');
    }

    return std::string(prefix) + digits;
}

std::size_t digit_width(std::size_t count)
{
    return std::max<std::size_t>(4, std::to_string(count == 0 ? 0 : count - 1).size());
}

double from_cents(std::int64_t cents)
{
    return static_cast<double>(cents) / 100.0;
}

} // namespace

void FleetConfig::validate() const
{
    const double sum = std::accumulate(arch_mix.begin(), arch_mix.end(), 0.0);
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("arch_mix must sum to 1");
    }

    if (std::any_of(arch_mix.begin(), arch_mix.end(), [](double p) { return p < 0.0; })) {
        throw std::invalid_argument("arch_mix entries must be >= 0");
    }

    if (total_nodes() < 1) {
        throw std::invalid_argument("node_count x scale_factor must be >= 1");
    }

    if (fault_rate < 0.0 || fault_rate > 1.0 || job_churn < 0.0 || job_churn > 1.0) {
        throw std::invalid_argument("fault_rate and job_churn must lie in [0, 1]");
    }

    if (std::any_of(cores_per_arch.begin(), cores_per_arch.end(), [](std::uint32_t c) { return c < 1; })) {
        throw std::invalid_argument("cores_per_arch entries must be >= 1");
    }
}

std::array<std::size_t, kArchCount> largest_remainder(std::size_t total, const std::array<double, kArchCount>& mix)
{
    std::array<std::size_t, kArchCount> counts {};
    std::array<double, kArchCount>      remainders {};
    std::size_t                         assigned = 0;

    for (std::size_t i = 0; i < kArchCount; ++i) {
        const double quota = mix[i] * static_cast<double>(total);
        counts[i]          = static_cast<std::size_t>(std::floor(quota));
        remainders[i]      = quota - std::floor(quota);
        assigned += counts[i];
    }

    std::array<std::size_t, kArchCount> order {0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainders[a] > remainders[b];
    });

    for (std::size_t i = 0; assigned < total; i = (i + 1) % kArchCount, ++assigned) {
        ++counts[order[i]];
    }

    return counts;
}

/***********************************************************************************************************************
 * FleetSimulator
 **********************************************************************************************************************/

FleetSimulator::FleetSimulator(FleetConfig config)
    : mConfig(std::move(config))
    , mRng(mConfig.seed)
{
    mConfig.validate();
}

double FleetSimulator::uniform01()
{
    return static_cast<double>(mRng() >> 11) * 0x1.0p-53;
}

std::int64_t FleetSimulator::step_cents(double step)
{
    const auto range = static_cast<std::int64_t>(std::llround(step * 100.0));
    if (range == 0) {
        return 0;
    }

    return static_cast<std::int64_t>(mRng() % static_cast<std::uint64_t>(2 * range + 1)) - range;
}

void FleetSimulator::refresh(NodeWalk& node, Timestamp now) const
{
    auto& record = node.record;

    record.timestamp    = now;
    record.cpu_load     = from_cents(node.cpu_cents);
    record.mem_free_gb  = from_cents(node.mem_cents);
    record.disk_free_gb = from_cents(node.disk_cents);

    if (record.status_reported == NodeStatus::Down) {
        record.cores_busy   = 0;
        record.jobs_running = 0;
        return;
    }

    const auto busy     = std::llround(std::min(1.0, record.cpu_load) * record.cores_total);
    record.cores_busy   = static_cast<std::uint32_t>(std::clamp<long long>(busy, 0, record.cores_total));
    record.jobs_running = (record.cores_busy + 15) / 16;
}

JobRecord FleetSimulator::new_job()
{
    JobRecord job;

    const auto first = static_cast<std::size_t>(mRng() % mNodes.size());
    const auto span  = 1 + static_cast<std::size_t>(mRng() % 4);

    job.job_id     = padded("job", ++mJobCounter, 6);
    job.user       = padded("user", static_cast<std::size_t>(mRng() % 32), 2);
    job.arch_queue = mNodes[first].record.arch;
    job.slots      = 0;

    for (std::size_t i = 0; i < span && first + i < mNodes.size(); ++i) {
        const auto& record = mNodes[first + i].record;
        job.node_ids.push_back(record.id.name);
        job.slots += record.cores_total;
    }

    return job;
}

UpdateBatch FleetSimulator::snapshot_batch()
{
    UpdateBatch batch;

    batch.batch_id    = ++mBatchId;
    batch.produced_at = mNow;

    batch.node_records.reserve(mNodes.size());
    for (const auto& node : mNodes) {
        batch.node_records.push_back(node.record);
    }

    batch.sensor_records.reserve(mSensors.size());
    for (const auto& sensor : mSensors) {
        batch.sensor_records.push_back(sensor.record);
    }

    batch.job_records = mJobs;

    return batch;
}

UpdateBatch FleetSimulator::generate_fleet()
{
    mRng.seed(mConfig.seed);
    mNodes.clear();
    mSensors.clear();
    mJobs.clear();
    mBatchId    = 0;
    mJobCounter = 0;
    mNow        = mConfig.start_time;

    const auto total  = mConfig.total_nodes();
    const auto counts = largest_remainder(total, mConfig.arch_mix);
    const auto width  = digit_width(total);

    mNodes.reserve(total);
    for (std::size_t archIndex = 0; archIndex < kArchCount; ++archIndex) {
        for (std::size_t i = 0; i < counts[archIndex]; ++i) {
            NodeWalk node;

            node.record.id          = EntityId {padded("n", mNodes.size(), width), EntityKind::Node};
            node.record.arch        = kAllArches[archIndex];
            node.record.cores_total = mConfig.cores_per_arch[archIndex];
            node.mem_cap_cents      = std::llround(mConfig.mem_capacity_gb[archIndex] * 100.0);
            node.cpu_cents          = static_cast<std::int64_t>(mRng() % 101);
            node.mem_cents = node.mem_cap_cents / 10 + static_cast<std::int64_t>(mRng() % static_cast<std::uint64_t>(
                                 node.mem_cap_cents * 8 / 10 + 1));
            node.disk_cents = 10000 + static_cast<std::int64_t>(mRng() % 70001);

            refresh(node, mNow);
            mNodes.push_back(std::move(node));
        }
    }

    const auto sensors      = mConfig.total_sensors();
    const auto sensorWidth  = digit_width(sensors);

    mSensors.reserve(sensors);
    for (std::size_t i = 0; i < sensors; ++i) {
        const auto  kindIndex = i % kAllSensorKinds.size();
        const auto& profile   = kSensorProfiles[kindIndex];

        SensorWalk sensor;

        sensor.cents = profile.lo
            + static_cast<std::int64_t>(mRng() % static_cast<std::uint64_t>(profile.hi - profile.lo + 1));

        sensor.record.id        = EntityId {padded(kSensorPrefix[kindIndex], i, sensorWidth), EntityKind::Sensor};
        sensor.record.zone      = std::string("zone") + static_cast<char>('A' + (i / kAllSensorKinds.size()) % kSimulatorZones);
        sensor.record.kind      = kAllSensorKinds[kindIndex];
        sensor.record.timestamp = mNow;
        sensor.record.value     = from_cents(sensor.cents);

        mSensors.push_back(std::move(sensor));
    }

    const auto jobCount = std::max<std::size_t>(1, total / 8);
    for (std::size_t i = 0; i < jobCount; ++i) {
        mJobs.push_back(new_job());
    }

    return snapshot_batch();
}

UpdateBatch FleetSimulator::tick()
{
    if (mBatchId == 0) {
        generate_fleet();
    }

    mNow += mConfig.tick_seconds;

    for (auto& node : mNodes) {
        if (mConfig.fault_rate > 0.0 && uniform01() < mConfig.fault_rate) {
            node.record.status_reported
                = node.record.status_reported == NodeStatus::Up ? NodeStatus::Down : NodeStatus::Up;
        }

        node.cpu_cents  = std::clamp<std::int64_t>(node.cpu_cents + step_cents(mConfig.cpu_step), 0, 150);
        node.mem_cents  = std::clamp<std::int64_t>(node.mem_cents + step_cents(mConfig.mem_step_gb), 0, node.mem_cap_cents);
        node.disk_cents = std::clamp<std::int64_t>(node.disk_cents + step_cents(mConfig.disk_step_gb), 0,
            std::llround(mConfig.disk_capacity_gb * 100.0));

        refresh(node, mNow);
    }

    for (auto& sensor : mSensors) {
        const auto& profile = kSensorProfiles[static_cast<std::size_t>(sensor.record.kind)];

        const auto step = static_cast<double>(profile.step) / 100.0 * mConfig.sensor_step_scale;
        sensor.cents    = std::clamp(sensor.cents + step_cents(step), profile.min, profile.max);

        sensor.record.timestamp = mNow;
        sensor.record.value     = from_cents(sensor.cents);
    }

    if (mConfig.job_churn > 0.0) {
        for (auto& job : mJobs) {
            if (uniform01() < mConfig.job_churn) {
                job = new_job();
            }
        }
    }

    return snapshot_batch();
}

UpdateBatch generate_fleet(const FleetConfig& config)
{
    return FleetSimulator(config).generate_fleet();
}

} // namespace fleetmon
