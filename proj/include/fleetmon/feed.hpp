/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_FEED_HPP_
#define FLEETMON_FEED_HPP_

#include <chrono>
#include <filesystem>
#include <functional>
#include <set>
#include <stop_token>
#include <string>
#include <vector>

#include "fleetmon/ingest.hpp"

namespace fleetmon {

/// Zero-padded cycle token used in feed file names ("000042").
std::string feed_token(std::uint64_t cycle, std::size_t width = 6);

/**
 * Writes one cycle's files into a feed directory as nodes-<token>.csv, sensors-<token>.csv and, when the batch has
 * jobs, jobs-<token>.csv. Each file is written under a temporary name and renamed; the nodes file is renamed last.
 */
void write_feed_cycle(const std::filesystem::path& dir, const std::string& token, const UpdateBatch& batch);

/**
 * Turns cycle files dropped into a directory into UpdateBatches.
 *
 * A cycle is ready once both its nodes and sensors files exist. Ready cycles are consumed in lexicographic token
 * order and never re-emitted. A cycle whose token sorts at or before an already consumed one is dropped as late.
 * Unreadable or rejected files skip the cycle with a logged feed error; batch ids stay gap-free.
 */
class FeedWatcher {
public:
    explicit FeedWatcher(std::filesystem::path dir, std::chrono::milliseconds pollInterval = std::chrono::seconds(5));

    /// Scans the directory once and returns the batches for every newly ready cycle.
    std::vector<UpdateBatch> poll();

    /// Polls until stop is requested, handing each batch to the sink.
    void run(std::stop_token stop, const std::function<void(UpdateBatch)>& sink);

    const std::vector<std::string>& errors() const noexcept { return mErrors; }
    std::uint64_t                   last_batch_id() const noexcept { return mNextBatchId - 1; }

private:
    std::optional<UpdateBatch> load_cycle(const std::string& token, bool hasJobs);
    void                       report(std::string message);

    std::filesystem::path     mDir;
    std::chrono::milliseconds mPollInterval;
    std::set<std::string>     mConsumed;
    std::string               mLastToken;
    std::uint64_t             mNextBatchId {1};
    Timestamp                 mLastProducedAt {};
    std::vector<std::string>  mErrors;
};

} // namespace fleetmon

#endif
