/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_STORE_HPP_
#define FLEETMON_STORE_HPP_

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fleetmon/model.hpp"

namespace fleetmon {

class OutOfOrderBatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidCursorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct NameHash {
    using is_transparent = void;

    std::size_t operator()(std::string_view name) const noexcept { return std::hash<std::string_view> {}(name); }
};

using NameIndex = std::unordered_map<std::string, std::uint32_t, NameHash, std::equal_to<>>;

} // namespace detail

template <typename T>
class TableEditor;

/**
 * Immutable name-keyed table.
 *
 * Entries live in fixed-size blocks of shared pointers; a name index maps each name to its slot. Editing clones only
 * the blocks it touches and copies the index only when a new name is inserted, so untouched entries keep their
 * identity across versions. Lookup is one hash probe plus two indirections.
 */
template <typename T>
class PersistentTable {
public:
    using Ptr = std::shared_ptr<const T>;

    static constexpr std::size_t kBlockSize = 64;

    PersistentTable()
        : mIndex(std::make_shared<const detail::NameIndex>())
    {
    }

    std::size_t size() const noexcept { return mSize; }
    bool        empty() const noexcept { return mSize == 0; }

    const T* find(std::string_view name) const noexcept
    {
        const auto it = mIndex->find(name);

        return it == mIndex->end() ? nullptr : at_slot(it->second).get();
    }

    const Ptr& at_slot(std::size_t slot) const noexcept { return (*mBlocks[slot / kBlockSize])[slot % kBlockSize]; }

    /// Visits entries in slot (insertion) order.
    template <typename F>
    void for_each(F&& visit) const
    {
        for (const auto& block : mBlocks) {
            for (const auto& entry : *block) {
                visit(*entry);
            }
        }
    }

    template <typename F>
    void for_each_ptr(F&& visit) const
    {
        for (const auto& block : mBlocks) {
            for (const auto& entry : *block) {
                visit(entry);
            }
        }
    }

private:
    friend class TableEditor<T>;

    using Block = std::vector<Ptr>;

    std::shared_ptr<const detail::NameIndex> mIndex;
    std::vector<std::shared_ptr<const Block>> mBlocks;
    std::size_t                               mSize {};
};

/**
 * Copy-on-write editor producing the next version of a PersistentTable.
 */
template <typename T>
class TableEditor {
public:
    explicit TableEditor(const PersistentTable<T>& base)
        : mTable(base)
        , mOwned(base.mBlocks.size())
    {
    }

    const T* find(std::string_view name) const noexcept { return mTable.find(name); }

    /// The table as edited so far.
    const PersistentTable<T>& table() const noexcept { return mTable; }

    /// Inserts or replaces an entry. Returns false, keeping the existing entry, when the value is unchanged.
    bool upsert(std::string_view name, T value)
    {
        if (const auto it = mTable.mIndex->find(name); it != mTable.mIndex->end()) {
            const auto slot = it->second;
            if (*mTable.at_slot(slot) == value) {
                return false;
            }

            mutable_block(slot / PersistentTable<T>::kBlockSize)[slot % PersistentTable<T>::kBlockSize]
                = std::make_shared<const T>(std::move(value));

            return true;
        }

        const auto slot = static_cast<std::uint32_t>(mTable.mSize++);
        mutable_index().emplace(std::string(name), slot);

        if (slot % PersistentTable<T>::kBlockSize == 0) {
            auto block = std::make_shared<typename PersistentTable<T>::Block>();
            block->reserve(PersistentTable<T>::kBlockSize);
            mTable.mBlocks.push_back(block);
            mOwned.push_back(std::move(block));
        }

        mutable_block(slot / PersistentTable<T>::kBlockSize).push_back(std::make_shared<const T>(std::move(value)));

        return true;
    }

    PersistentTable<T> finish() &&
    {
        if (mIndexCopy) {
            mTable.mIndex = std::move(mIndexCopy);
        }

        return std::move(mTable);
    }

private:
    typename PersistentTable<T>::Block& mutable_block(std::size_t block)
    {
        if (!mOwned[block]) {
            mOwned[block]          = std::make_shared<typename PersistentTable<T>::Block>(*mTable.mBlocks[block]);
            mTable.mBlocks[block] = mOwned[block];
        }

        return *mOwned[block];
    }

    detail::NameIndex& mutable_index()
    {
        if (!mIndexCopy) {
            mIndexCopy    = std::make_shared<detail::NameIndex>(*mTable.mIndex);
            mTable.mIndex = mIndexCopy;
        }

        return *mIndexCopy;
    }

    PersistentTable<T>                                               mTable;
    std::vector<std::shared_ptr<typename PersistentTable<T>::Block>> mOwned;
    std::shared_ptr<detail::NameIndex>                               mIndexCopy;
};

using JobTable = std::map<std::string, JobRecord>;

/// Names whose entries differ from the previous version.
struct ChangeSet {
    std::vector<std::string> nodes;
    std::vector<std::string> sensors;
    bool                     jobs {};
};

/**
 * One immutable, versioned view of the fleet. Version 0 is the empty store.
 */
struct FleetSnapshot {
    std::uint64_t                   version {};
    std::uint64_t                   last_batch_id {};
    Timestamp                       produced_at {};
    PersistentTable<NodeState>      nodes;
    PersistentTable<SensorRecord>   sensors;
    std::shared_ptr<const JobTable> jobs {std::make_shared<const JobTable>()};
    SystemAnalytics                 analytics;
    ChangeSet                       changes;

    /// Nodes ordered by name.
    std::vector<const NodeState*> sorted_nodes() const;
    /// Sensors ordered by name.
    std::vector<const SensorRecord*> sorted_sensors() const;
};

using SnapshotPtr = std::shared_ptr<const FleetSnapshot>;

/// Result of resolving a name against one snapshot. Pointers stay valid while the snapshot is held.
struct EntityBundle {
    EntityId            id;
    const NodeState*    node {};
    const SensorRecord* sensor {};
};

/// Resolves an entity by id. Expected constant time.
std::optional<EntityBundle> lookup(const FleetSnapshot& snapshot, const EntityId& id);

/// Resolves a bare name, trying nodes first and then sensors.
std::optional<EntityBundle> lookup_name(const FleetSnapshot& snapshot, std::string_view name);

/**
 * Builds the next snapshot from a previous one. Entities not written carry forward by identity.
 */
class SnapshotBuilder {
public:
    explicit SnapshotBuilder(SnapshotPtr previous);

    const FleetSnapshot& previous() const noexcept { return *mPrevious; }

    const NodeState*    find_node(std::string_view name) const noexcept { return mNodes.find(name); }
    const SensorRecord* find_sensor(std::string_view name) const noexcept { return mSensors.find(name); }

    bool upsert_node(NodeState node);
    bool upsert_sensor(SensorRecord sensor);
    void replace_jobs(const std::vector<JobRecord>& jobs);

    /// Analytics over the builder's current contents.
    SystemAnalytics compute_analytics() const;

    /**
     * Finalizes the next version. Throws OutOfOrderBatchError if batchId does not exceed the previous snapshot's.
     */
    SnapshotPtr publish(std::uint64_t batchId, Timestamp producedAt, SystemAnalytics analytics) &&;

private:
    SnapshotPtr                     mPrevious;
    TableEditor<NodeState>          mNodes;
    TableEditor<SensorRecord>       mSensors;
    std::shared_ptr<const JobTable> mJobs;
    ChangeSet                       mChanges;
};

/// Entities whose state differs between a cursor version and the current snapshot.
struct Delta {
    std::uint64_t                    since {};
    std::uint64_t                    version {};
    bool                             full_resync {};
    SnapshotPtr                      snapshot;
    std::vector<const NodeState*>    nodes;
    std::vector<const SensorRecord*> sensors;
    std::vector<JobRecord>           jobs_upserted;
    std::vector<std::string>         jobs_removed;
};

/**
 * Computes the delta from `from` to `to`, given every snapshot in between (versions from+1..to, in order), whose
 * change sets bound the candidates. Reverted changes are excluded.
 */
Delta compute_delta(const SnapshotPtr& from, const SnapshotPtr& to, const std::vector<SnapshotPtr>& between);

/**
 * Holder of the current snapshot and bounded history. Single writer, many readers; readers take a snapshot
 * reference and may keep it indefinitely.
 */
class SnapshotStore {
public:
    static constexpr std::size_t kDefaultHistory = 64;

    explicit SnapshotStore(std::size_t historyDepth = kDefaultHistory);

    SnapshotPtr current() const;

    /// The retained snapshot with the given version, or null.
    SnapshotPtr at(std::uint64_t version) const;

    /// Makes the snapshot current. Throws std::logic_error unless its version is current + 1.
    void publish(SnapshotPtr snapshot);

    /**
     * Changes in versions (since, current]. A cursor older than the retained history yields full_resync. Throws
     * InvalidCursorError if since is newer than the current version.
     */
    Delta delta(std::uint64_t since) const;

    /// Blocks until the current version is at least `version` or the timeout expires. Returns the current snapshot.
    SnapshotPtr wait_for_version(std::uint64_t version, std::chrono::milliseconds timeout) const;

    std::size_t history_depth() const noexcept { return mHistoryDepth; }

private:
    std::size_t                     mHistoryDepth;
    mutable std::mutex              mMutex;
    mutable std::condition_variable mPublished;
    std::deque<SnapshotPtr>         mHistory;
};

} // namespace fleetmon

#endif
