/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/update.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace fleetmon {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

NodeState visit_node(const NodeRecord& record, const AlertRuleSet& rules, Timestamp now, const UpdateConfig& config)
{
    NodeState node {record, AppearanceState::Ok, evaluate_thresholds(record, rules, now, config.staleness_window)};

    node.appearance = derive_appearance(record, node.alerts, now, config.staleness_window);

    return node;
}

std::vector<const NodeRecord*> nodes_in_name_order(const UpdateBatch& batch)
{
    std::vector<const NodeRecord*> order;
    order.reserve(batch.node_records.size());

    for (const auto& record : batch.node_records) {
        order.push_back(&record);
    }

    const auto byName = [](const NodeRecord* lhs, const NodeRecord* rhs) { return lhs->id.name < rhs->id.name; };
    if (!std::is_sorted(order.begin(), order.end(), byName)) {
        std::sort(order.begin(), order.end(), byName);
    }

    return order;
}

UpdateReport make_report(const UpdateStrategy& strategy, const UpdateBatch& batch)
{
    UpdateReport report;

    report.strategy         = strategy;
    report.batch_id         = batch.batch_id;
    report.entities_touched = batch.node_records.size() + batch.sensor_records.size();

    return report;
}

CycleResult reject(const SnapshotPtr& previous, UpdateReport report, std::string error)
{
    report.rejected         = true;
    report.error            = std::move(error);
    report.entities_touched = 0;

    return {previous, std::move(report)};
}

} // namespace

/***********************************************************************************************************************
 * UpdateStrategy
 **********************************************************************************************************************/

UpdateStrategy UpdateStrategy::parse(std::string_view text)
{
    if (text == "managed") {
        return managed();
    }

    if (text == "perentity") {
        return per_entity();
    }

    if (text == "staggered") {
        return staggered();
    }

    constexpr std::string_view kChunked = "chunked:";
    if (text.substr(0, kChunked.size()) == kChunked) {
        const auto  digits = text.substr(kChunked.size());
        std::size_t size   = 0;

        const auto [ptr, errc] = std::from_chars(digits.data(), digits.data() + digits.size(), size);
        if (digits.empty() || errc != std::errc() || ptr != digits.data() + digits.size() || size < 1) {
            throw std::invalid_argument("chunk size must be a positive integer: '" + std::string(text) + "'");
        }

        return chunked(size);
    }

    throw std::invalid_argument("unknown update strategy: '" + std::string(text) + "'");
}

std::string UpdateStrategy::name() const
{
    switch (kind) {
    case Kind::Managed:
        return "managed";
    case Kind::PerEntity:
        return "perentity";
    case Kind::Staggered:
        return "staggered";
    case Kind::Chunked:
        return "chunked:" + std::to_string(chunk_size);
    }

    return "unknown";
}

/***********************************************************************************************************************
 * Legacy scene
 **********************************************************************************************************************/

/**
 * The per-entity model: every spawned entity owns a script whose update is called once per tick and polls for data
 * addressed to it.
 */
class UpdateEngine::LegacyScene {
public:
    struct Mailbox {
        std::unordered_map<std::string_view, const NodeRecord*>   nodes;
        std::unordered_map<std::string_view, const SensorRecord*> sensors;
    };

    struct TickContext {
        const Mailbox&      mailbox;
        SnapshotBuilder&    builder;
        const AlertRuleSet& rules;
        const UpdateConfig& config;
        Timestamp           now;
    };

    class Script {
    public:
        explicit Script(std::string name)
            : mName(std::move(name))
        {
        }

        virtual ~Script() = default;

        virtual void update(TickContext& ctx) = 0;

    protected:
        std::string mName;
    };

    class NodeScript : public Script {
    public:
        using Script::Script;

        void update(TickContext& ctx) override
        {
            const auto it = ctx.mailbox.nodes.find(mName);
            if (it == ctx.mailbox.nodes.end()) {
                return;
            }

            ctx.builder.upsert_node(visit_node(*it->second, ctx.rules, ctx.now, ctx.config));
        }
    };

    class SensorScript : public Script {
    public:
        using Script::Script;

        void update(TickContext& ctx) override
        {
            const auto it = ctx.mailbox.sensors.find(mName);
            if (it == ctx.mailbox.sensors.end()) {
                return;
            }

            ctx.builder.upsert_sensor(*it->second);
        }
    };

    /// Spawns scripts for entities present in the snapshot or the batch that do not have one yet.
    void sync_sensors(const FleetSnapshot& previous, const UpdateBatch& batch)
    {
        if (mSensorNames.size() != previous.sensors.size()) {
            previous.sensors.for_each([&](const SensorRecord& sensor) { spawn_sensor(sensor.id.name); });
        }

        for (const auto& record : batch.sensor_records) {
            spawn_sensor(record.id.name);
        }
    }

    void sync_nodes(const FleetSnapshot& previous, const UpdateBatch& batch)
    {
        if (mNodeNames.size() != previous.nodes.size()) {
            previous.nodes.for_each([&](const NodeState& node) { spawn_node(node.record.id.name); });
        }

        for (const auto& record : batch.node_records) {
            spawn_node(record.id.name);
        }
    }

    std::vector<std::unique_ptr<Script>>& sensors() noexcept { return mSensors; }
    std::vector<std::unique_ptr<Script>>& nodes() noexcept { return mNodes; }

private:
    void spawn_sensor(const std::string& name)
    {
        if (mSensorNames.insert(name).second) {
            mSensors.push_back(std::make_unique<SensorScript>(name));
        }
    }

    void spawn_node(const std::string& name)
    {
        if (mNodeNames.insert(name).second) {
            mNodes.push_back(std::make_unique<NodeScript>(name));
        }
    }

    std::unordered_set<std::string>      mSensorNames;
    std::unordered_set<std::string>      mNodeNames;
    std::vector<std::unique_ptr<Script>> mSensors;
    std::vector<std::unique_ptr<Script>> mNodes;
};

/***********************************************************************************************************************
 * UpdateEngine
 **********************************************************************************************************************/

UpdateEngine::UpdateEngine(UpdateStrategy strategy, AlertRuleSet rules, UpdateConfig config)
    : mStrategy(strategy)
    , mRules(std::move(rules))
    , mConfig(config)
{
    if (mStrategy.kind == UpdateStrategy::Kind::Chunked && mStrategy.chunk_size < 1) {
        throw std::invalid_argument("chunked strategy needs chunk_size >= 1");
    }

    if (mStrategy.kind == UpdateStrategy::Kind::PerEntity) {
        mScene = std::make_unique<LegacyScene>();
    }
}

UpdateEngine::~UpdateEngine() = default;

CycleResult UpdateEngine::run(const SnapshotPtr& previous, const UpdateBatch& batch)
{
    auto report = make_report(mStrategy, batch);

    if (batch.batch_id <= previous->last_batch_id) {
        return reject(previous, std::move(report),
            "out-of-order batch " + std::to_string(batch.batch_id) + " (last applied "
                + std::to_string(previous->last_batch_id) + ")");
    }

    switch (mStrategy.kind) {
    case UpdateStrategy::Kind::Managed:
        return run_managed(previous, batch, std::move(report));
    case UpdateStrategy::Kind::PerEntity:
        return run_per_entity(previous, batch, std::move(report));
    case UpdateStrategy::Kind::Staggered:
    case UpdateStrategy::Kind::Chunked:
        return run_ticked(previous, batch, std::move(report));
    }

    throw std::logic_error("unhandled update strategy");
}

CycleResult UpdateEngine::startup(const SnapshotPtr& previous, const UpdateBatch& batch)
{
    if (previous->version != 0) {
        auto report    = make_report(mStrategy, batch);
        report.startup = true;

        return reject(previous, std::move(report),
            "startup load requires an empty store (current version " + std::to_string(previous->version) + ")");
    }

    auto result           = run(previous, batch);
    result.report.startup = true;

    return result;
}

CycleResult UpdateEngine::run_managed(const SnapshotPtr& previous, const UpdateBatch& batch, UpdateReport report)
{
    SnapshotBuilder builder(previous);

    const auto now = batch.produced_at;

    // Phase 1: pod sensors.
    auto start = Clock::now();
    for (const auto& record : batch.sensor_records) {
        builder.upsert_sensor(record);
    }
    report.phase_durations.pod = seconds_since(start);

    // Phase 2: one sequential pass over the nodes in name order.
    start = Clock::now();
    for (const auto* record : nodes_in_name_order(batch)) {
        builder.upsert_node(visit_node(*record, mRules, now, mConfig));
        ++report.per_entity_callbacks;
    }
    report.phase_durations.nodes = seconds_since(start);

    // Phase 3: jobs and analytics.
    start = Clock::now();
    if (batch.job_records) {
        builder.replace_jobs(*batch.job_records);
    }
    auto analytics                   = builder.compute_analytics();
    report.phase_durations.analytics = seconds_since(start);

    report.ticks_consumed           = 1;
    report.top_level_invocations    = 3;
    report.phase_callbacks.nodes    = report.per_entity_callbacks;

    return {std::move(builder).publish(batch.batch_id, now, std::move(analytics)), std::move(report)};
}

CycleResult UpdateEngine::run_per_entity(const SnapshotPtr& previous, const UpdateBatch& batch, UpdateReport report)
{
    SnapshotBuilder builder(previous);

    LegacyScene::Mailbox     mailbox;
    LegacyScene::TickContext ctx {mailbox, builder, mRules, mConfig, batch.produced_at};

    // Sensor scripts.
    auto start = Clock::now();
    mScene->sync_sensors(*previous, batch);
    for (const auto& record : batch.sensor_records) {
        mailbox.sensors.emplace(record.id.name, &record);
    }
    for (auto& script : mScene->sensors()) {
        script->update(ctx);
    }
    report.phase_durations.pod   = seconds_since(start);
    report.phase_callbacks.pod   = mScene->sensors().size();

    // Node scripts.
    start = Clock::now();
    mScene->sync_nodes(*previous, batch);
    for (const auto& record : batch.node_records) {
        mailbox.nodes.emplace(record.id.name, &record);
    }
    for (auto& script : mScene->nodes()) {
        script->update(ctx);
    }
    report.phase_durations.nodes = seconds_since(start);
    report.phase_callbacks.nodes = mScene->nodes().size();

    start = Clock::now();
    if (batch.job_records) {
        builder.replace_jobs(*batch.job_records);
    }
    auto analytics                   = builder.compute_analytics();
    report.phase_durations.analytics = seconds_since(start);

    report.ticks_consumed        = 1;
    report.per_entity_callbacks  = report.phase_callbacks.pod + report.phase_callbacks.nodes;
    report.top_level_invocations = report.per_entity_callbacks + 1;

    return {std::move(builder).publish(batch.batch_id, batch.produced_at, std::move(analytics)), std::move(report)};
}

CycleResult UpdateEngine::run_ticked(const SnapshotPtr& previous, const UpdateBatch& batch, UpdateReport report)
{
    const auto order = nodes_in_name_order(batch);

    std::size_t chunk = order.size();
    if (mStrategy.kind == UpdateStrategy::Kind::Chunked) {
        chunk = mStrategy.chunk_size;

        std::size_t fleetNodes = previous->nodes.size();
        for (const auto* record : order) {
            if (previous->nodes.find(record->id.name) == nullptr) {
                ++fleetNodes;
            }
        }

        if (fleetNodes > 0 && chunk > fleetNodes) {
            return reject(previous, std::move(report),
                "chunk size " + std::to_string(chunk) + " exceeds node count " + std::to_string(fleetNodes));
        }
    }

    SnapshotBuilder builder(previous);
    SystemAnalytics analytics;

    const auto now         = batch.produced_at;
    const bool podTick     = !batch.sensor_records.empty();
    const auto nodeTicks   = order.empty() ? std::size_t {0} : (order.size() + chunk - 1) / chunk;
    const auto totalTicks  = std::max<std::size_t>(1, (podTick ? 1 : 0) + nodeTicks);
    std::size_t tick       = 0;

    // Every tick ends with an analytics refresh; the final tick also swaps in the job set.
    const auto endTick = [&] {
        ++tick;

        const auto start = Clock::now();
        if (tick == totalTicks && batch.job_records) {
            builder.replace_jobs(*batch.job_records);
        }
        analytics = builder.compute_analytics();
        report.phase_durations.analytics += seconds_since(start);
        ++report.top_level_invocations;
    };

    if (podTick) {
        const auto start = Clock::now();
        for (const auto& record : batch.sensor_records) {
            builder.upsert_sensor(record);
        }
        report.phase_durations.pod = seconds_since(start);
        ++report.top_level_invocations;

        endTick();
    }

    for (std::size_t begin = 0; begin < order.size(); begin += chunk) {
        const auto end   = std::min(order.size(), begin + chunk);
        const auto start = Clock::now();

        for (auto i = begin; i < end; ++i) {
            builder.upsert_node(visit_node(*order[i], mRules, now, mConfig));
            ++report.per_entity_callbacks;
        }
        report.phase_durations.nodes += seconds_since(start);
        ++report.top_level_invocations;

        endTick();
    }

    if (tick == 0) {
        endTick();
    }

    report.ticks_consumed        = totalTicks;
    report.phase_callbacks.nodes = report.per_entity_callbacks;

    return {std::move(builder).publish(batch.batch_id, now, std::move(analytics)), std::move(report)};
}

/***********************************************************************************************************************
 * Free functions
 **********************************************************************************************************************/

CycleResult run_cycle_managed(
    const SnapshotPtr& previous, const UpdateBatch& batch, const AlertRuleSet& rules, const UpdateConfig& config)
{
    UpdateEngine engine(UpdateStrategy::managed(), rules, config);

    return engine.run(previous, batch);
}

CycleResult run_cycle_legacy(const SnapshotPtr& previous, const UpdateBatch& batch, const AlertRuleSet& rules,
    UpdateStrategy strategy, const UpdateConfig& config)
{
    if (strategy.kind == UpdateStrategy::Kind::Managed) {
        throw std::invalid_argument("run_cycle_legacy takes PerEntity, Staggered or Chunked");
    }

    UpdateEngine engine(strategy, rules, config);

    return engine.run(previous, batch);
}

CycleResult startup_load(
    const SnapshotPtr& previous, const UpdateBatch& batch, const AlertRuleSet& rules, const UpdateConfig& config)
{
    UpdateEngine engine(UpdateStrategy::managed(), rules, config);

    return engine.startup(previous, batch);
}

/***********************************************************************************************************************
 * UpdatePipeline
 **********************************************************************************************************************/

UpdatePipeline::UpdatePipeline(SnapshotStore& store, std::unique_ptr<UpdateEngine> engine, ReportSink sink)
    : mStore(store)
    , mEngine(std::move(engine))
    , mSink(std::move(sink))
{
}

UpdateReport UpdatePipeline::apply(const UpdateBatch& batch)
{
    const auto previous = mStore.current();

    auto result = previous->version == 0 ? mEngine->startup(previous, batch) : mEngine->run(previous, batch);

    if (!result.report.rejected) {
        mStore.publish(result.snapshot);
    }

    if (mSink) {
        mSink(result.report);
    }

    return result.report;
}

} // namespace fleetmon
