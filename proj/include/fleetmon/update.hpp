/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_UPDATE_HPP_
#define FLEETMON_UPDATE_HPP_

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "fleetmon/alerts.hpp"
#include "fleetmon/ingest.hpp"
#include "fleetmon/store.hpp"

namespace fleetmon {

/**
 * How a batch is scheduled onto ticks.
 *
 * Managed applies everything in one tick through three top-level phases. PerEntity gives every entity its own
 * per-tick poll callback. Staggered applies the pod and the nodes on separate ticks. Chunked applies node updates
 * chunk_size at a time, one chunk per tick. All four produce the same final snapshot.
 */
struct UpdateStrategy {
    enum class Kind { PerEntity, Staggered, Chunked, Managed };

    Kind        kind {Kind::Managed};
    std::size_t chunk_size {};

    static UpdateStrategy managed() noexcept { return {Kind::Managed, 0}; }
    static UpdateStrategy per_entity() noexcept { return {Kind::PerEntity, 0}; }
    static UpdateStrategy staggered() noexcept { return {Kind::Staggered, 0}; }
    static UpdateStrategy chunked(std::size_t chunkSize) noexcept { return {Kind::Chunked, chunkSize}; }

    /// "managed", "perentity", "staggered" or "chunked:<n>". Throws std::invalid_argument.
    static UpdateStrategy parse(std::string_view text);

    std::string name() const;

    bool operator==(const UpdateStrategy&) const = default;
};

struct UpdateConfig {
    Timestamp staleness_window {120};
};

/// Seconds spent per phase.
struct PhaseDurations {
    double pod {};
    double nodes {};
    double analytics {};
};

/// Per-entity callbacks attributed to each phase.
struct PhaseCallbacks {
    std::uint64_t pod {};
    std::uint64_t nodes {};
};

struct UpdateReport {
    UpdateStrategy strategy;
    std::uint64_t  batch_id {};
    std::uint64_t  ticks_consumed {};
    std::uint64_t  top_level_invocations {};
    std::uint64_t  per_entity_callbacks {};
    PhaseDurations phase_durations;
    std::uint64_t  entities_touched {};
    PhaseCallbacks phase_callbacks;
    bool           startup {};
    bool           rejected {};
    std::string    error;
};

struct CycleResult {
    SnapshotPtr  snapshot;
    UpdateReport report;
};

/**
 * Applies batches for one strategy. Keeps the strategy's runtime state (the per-entity scene for legacy strategies)
 * between cycles. Not thread-safe: one cycle at a time.
 */
class UpdateEngine {
public:
    UpdateEngine(UpdateStrategy strategy, AlertRuleSet rules, UpdateConfig config = {});
    ~UpdateEngine();

    UpdateEngine(const UpdateEngine&)            = delete;
    UpdateEngine& operator=(const UpdateEngine&) = delete;

    /// Applies one batch on top of previous. An out-of-order batch is rejected: snapshot unchanged, report flagged.
    CycleResult run(const SnapshotPtr& previous, const UpdateBatch& batch);

    /// Cold start from the empty snapshot. Rejected unless previous is version 0.
    CycleResult startup(const SnapshotPtr& previous, const UpdateBatch& batch);

    const UpdateStrategy& strategy() const noexcept { return mStrategy; }
    const AlertRuleSet&   rules() const noexcept { return mRules; }
    const UpdateConfig&   config() const noexcept { return mConfig; }

private:
    class LegacyScene;

    CycleResult run_managed(const SnapshotPtr& previous, const UpdateBatch& batch, UpdateReport report);
    CycleResult run_per_entity(const SnapshotPtr& previous, const UpdateBatch& batch, UpdateReport report);
    CycleResult run_ticked(const SnapshotPtr& previous, const UpdateBatch& batch, UpdateReport report);

    UpdateStrategy               mStrategy;
    AlertRuleSet                 mRules;
    UpdateConfig                 mConfig;
    std::unique_ptr<LegacyScene> mScene;
};

/// One Managed cycle: pod records, then nodes in name order, then analytics; then publication.
CycleResult run_cycle_managed(
    const SnapshotPtr& previous, const UpdateBatch& batch, const AlertRuleSet& rules, const UpdateConfig& config);

/// One cycle under PerEntity, Staggered or Chunked scheduling.
CycleResult run_cycle_legacy(const SnapshotPtr& previous, const UpdateBatch& batch, const AlertRuleSet& rules,
    UpdateStrategy strategy, const UpdateConfig& config);

/// Managed cold start from the empty snapshot.
CycleResult startup_load(
    const SnapshotPtr& previous, const UpdateBatch& batch, const AlertRuleSet& rules, const UpdateConfig& config);

/**
 * The single writer in front of a SnapshotStore: runs each batch through an engine and publishes the result. The
 * first batch into an empty store is applied as a startup load.
 */
class UpdatePipeline {
public:
    using ReportSink = std::function<void(const UpdateReport&)>;

    UpdatePipeline(SnapshotStore& store, std::unique_ptr<UpdateEngine> engine, ReportSink sink = {});

    UpdateReport apply(const UpdateBatch& batch);

    SnapshotStore& store() noexcept { return mStore; }

private:
    SnapshotStore&                mStore;
    std::unique_ptr<UpdateEngine> mEngine;
    ReportSink                    mSink;
};

} // namespace fleetmon

#endif
