/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_SERVICE_HPP_
#define FLEETMON_SERVICE_HPP_

#include <mutex>
#include <ostream>
#include <thread>

#include "fleetmon/api.hpp"
#include "fleetmon/config.hpp"
#include "fleetmon/update.hpp"

namespace fleetmon {

/**
 * The daemon: one ingestion thread (feed watcher or in-process simulator) feeding the update pipeline, and the HTTP
 * API reading the store. Each cycle's UpdateReport is written as one JSON line to the diagnostics stream.
 */
class Service {
public:
    Service(ServiceConfig config, std::ostream* diagnostics = nullptr);
    ~Service();

    Service(const Service&)            = delete;
    Service& operator=(const Service&) = delete;

    /// Starts the API server and the ingestion thread. Returns the bound port.
    int start();

    void stop();

    /// Applies a batch directly (single writer: do not mix with a running ingestion thread).
    UpdateReport apply(const UpdateBatch& batch);

    const SnapshotStore& store() const noexcept { return mStore; }
    const ServiceConfig& config() const noexcept { return mConfig; }

private:
    void on_report(const UpdateReport& report);
    void check_slots(const UpdateBatch& batch) const;
    void ingest(std::stop_token stop);

    ServiceConfig  mConfig;
    std::ostream*  mDiagnostics;
    std::mutex     mDiagnosticsMutex;
    SnapshotStore  mStore;
    UpdatePipeline mPipeline;
    ApiServer      mServer;
    std::jthread   mIngest;
};

} // namespace fleetmon

#endif
