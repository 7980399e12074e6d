/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/store.hpp"

#include <algorithm>
#include <set>

#include "fleetmon/alerts.hpp"

namespace fleetmon {

namespace {

template <typename T>
std::vector<const T*> sorted_entries(const PersistentTable<T>& table, const std::string& (*nameOf)(const T&))
{
    std::vector<const T*> entries;
    entries.reserve(table.size());

    table.for_each([&](const T& entry) { entries.push_back(&entry); });

    std::sort(entries.begin(), entries.end(), [nameOf](const T* lhs, const T* rhs) {
        return nameOf(*lhs) < nameOf(*rhs);
    });

    return entries;
}

const std::string& node_name(const NodeState& node)
{
    return node.record.id.name;
}

const std::string& sensor_name(const SensorRecord& sensor)
{
    return sensor.id.name;
}

template <typename T>
bool differs(const T* before, const T* after)
{
    if (before == after) {
        return false;
    }

    return before == nullptr || after == nullptr || !(*before == *after);
}

} // namespace

std::vector<const NodeState*> FleetSnapshot::sorted_nodes() const
{
    return sorted_entries(nodes, node_name);
}

std::vector<const SensorRecord*> FleetSnapshot::sorted_sensors() const
{
    return sorted_entries(sensors, sensor_name);
}

/***********************************************************************************************************************
 * Lookup
 **********************************************************************************************************************/

std::optional<EntityBundle> lookup(const FleetSnapshot& snapshot, const EntityId& id)
{
    if (id.kind == EntityKind::Node) {
        if (const auto* node = snapshot.nodes.find(id.name)) {
            return EntityBundle {id, node, nullptr};
        }
    } else if (const auto* sensor = snapshot.sensors.find(id.name)) {
        return EntityBundle {id, nullptr, sensor};
    }

    return std::nullopt;
}

std::optional<EntityBundle> lookup_name(const FleetSnapshot& snapshot, std::string_view name)
{
    if (auto bundle = lookup(snapshot, EntityId {std::string(name), EntityKind::Node})) {
        return bundle;
    }

    return lookup(snapshot, EntityId {std::string(name), EntityKind::Sensor});
}

/***********************************************************************************************************************
 * SnapshotBuilder
 **********************************************************************************************************************/

SnapshotBuilder::SnapshotBuilder(SnapshotPtr previous)
    : mPrevious(std::move(previous))
    , mNodes(mPrevious->nodes)
    , mSensors(mPrevious->sensors)
    , mJobs(mPrevious->jobs)
{
}

bool SnapshotBuilder::upsert_node(NodeState node)
{
    auto name = node.record.id.name;

    if (!mNodes.upsert(name, std::move(node))) {
        return false;
    }

    mChanges.nodes.push_back(std::move(name));

    return true;
}

bool SnapshotBuilder::upsert_sensor(SensorRecord sensor)
{
    auto name = sensor.id.name;

    if (!mSensors.upsert(name, std::move(sensor))) {
        return false;
    }

    mChanges.sensors.push_back(std::move(name));

    return true;
}

void SnapshotBuilder::replace_jobs(const std::vector<JobRecord>& jobs)
{
    JobTable table;

    for (const auto& job : jobs) {
        table.insert_or_assign(job.job_id, job);
    }

    if (table == *mJobs) {
        return;
    }

    mJobs         = std::make_shared<const JobTable>(std::move(table));
    mChanges.jobs = true;
}

SystemAnalytics SnapshotBuilder::compute_analytics() const
{
    AnalyticsAccumulator accumulator;

    mNodes.table().for_each([&](const NodeState& node) { accumulator.add_node(node); });

    for (const auto& [id, job] : *mJobs) {
        accumulator.add_job(job);
    }

    return accumulator.finish();
}

SnapshotPtr SnapshotBuilder::publish(std::uint64_t batchId, Timestamp producedAt, SystemAnalytics analytics) &&
{
    if (batchId <= mPrevious->last_batch_id) {
        throw OutOfOrderBatchError("batch " + std::to_string(batchId) + " is not newer than applied batch "
            + std::to_string(mPrevious->last_batch_id));
    }

    auto next = std::make_shared<FleetSnapshot>();

    next->version       = mPrevious->version + 1;
    next->last_batch_id = batchId;
    next->produced_at   = producedAt;
    next->nodes         = std::move(mNodes).finish();
    next->sensors       = std::move(mSensors).finish();
    next->jobs          = std::move(mJobs);
    next->analytics     = std::move(analytics);
    next->changes       = std::move(mChanges);

    return next;
}

/***********************************************************************************************************************
 * Delta
 **********************************************************************************************************************/

Delta compute_delta(const SnapshotPtr& from, const SnapshotPtr& to, const std::vector<SnapshotPtr>& between)
{
    Delta delta;

    delta.since    = from->version;
    delta.version  = to->version;
    delta.snapshot = to;

    std::set<std::string_view> nodeCandidates;
    std::set<std::string_view> sensorCandidates;
    bool                       jobsTouched = false;

    for (const auto& snapshot : between) {
        nodeCandidates.insert(snapshot->changes.nodes.begin(), snapshot->changes.nodes.end());
        sensorCandidates.insert(snapshot->changes.sensors.begin(), snapshot->changes.sensors.end());
        jobsTouched = jobsTouched || snapshot->changes.jobs;
    }

    for (auto name : nodeCandidates) {
        const auto* after = to->nodes.find(name);
        if (differs(from->nodes.find(name), after) && after != nullptr) {
            delta.nodes.push_back(after);
        }
    }

    for (auto name : sensorCandidates) {
        const auto* after = to->sensors.find(name);
        if (differs(from->sensors.find(name), after) && after != nullptr) {
            delta.sensors.push_back(after);
        }
    }

    if (jobsTouched && from->jobs != to->jobs) {
        for (const auto& [id, job] : *to->jobs) {
            const auto it = from->jobs->find(id);
            if (it == from->jobs->end() || !(it->second == job)) {
                delta.jobs_upserted.push_back(job);
            }
        }

        for (const auto& [id, job] : *from->jobs) {
            if (to->jobs->count(id) == 0) {
                delta.jobs_removed.push_back(id);
            }
        }
    }

    return delta;
}

/***********************************************************************************************************************
 * SnapshotStore
 **********************************************************************************************************************/

SnapshotStore::SnapshotStore(std::size_t historyDepth)
    : mHistoryDepth(historyDepth)
{
    mHistory.push_back(std::make_shared<const FleetSnapshot>());
}

SnapshotPtr SnapshotStore::current() const
{
    std::lock_guard lock(mMutex);

    return mHistory.back();
}

SnapshotPtr SnapshotStore::at(std::uint64_t version) const
{
    std::lock_guard lock(mMutex);

    const auto oldest = mHistory.front()->version;
    if (version < oldest || version > mHistory.back()->version) {
        return nullptr;
    }

    return mHistory[version - oldest];
}

void SnapshotStore::publish(SnapshotPtr snapshot)
{
    {
        std::lock_guard lock(mMutex);

        if (snapshot->version != mHistory.back()->version + 1) {
            throw std::logic_error("snapshot version " + std::to_string(snapshot->version)
                + " does not follow current version " + std::to_string(mHistory.back()->version));
        }

        mHistory.push_back(std::move(snapshot));

        while (mHistory.size() > mHistoryDepth + 1) {
            mHistory.pop_front();
        }
    }

    mPublished.notify_all();
}

Delta SnapshotStore::delta(std::uint64_t since) const
{
    std::vector<SnapshotPtr> chain;
    SnapshotPtr              from;

    {
        std::lock_guard lock(mMutex);

        const auto& current = mHistory.back();
        if (since > current->version) {
            throw InvalidCursorError("cursor " + std::to_string(since) + " is ahead of current version "
                + std::to_string(current->version));
        }

        const auto oldest = mHistory.front()->version;
        if (since < oldest) {
            Delta delta;

            delta.since       = since;
            delta.version     = current->version;
            delta.full_resync = true;
            delta.snapshot    = current;

            return delta;
        }

        from = mHistory[since - oldest];
        chain.assign(mHistory.begin() + static_cast<std::ptrdiff_t>(since - oldest + 1), mHistory.end());
    }

    return compute_delta(from, chain.empty() ? from : chain.back(), chain);
}

SnapshotPtr SnapshotStore::wait_for_version(std::uint64_t version, std::chrono::milliseconds timeout) const
{
    std::unique_lock lock(mMutex);

    mPublished.wait_for(lock, timeout, [&] { return mHistory.back()->version >= version; });

    return mHistory.back();
}

} // namespace fleetmon
