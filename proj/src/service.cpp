/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/service.hpp"

#include <condition_variable>

#include <spdlog/spdlog.h>

#include "fleetmon/feed.hpp"
#include "fleetmon/simulator.hpp"
#include "fleetmon/wire.hpp"

namespace fleetmon {

Service::Service(ServiceConfig config, std::ostream* diagnostics)
    : mConfig(std::move(config))
    , mDiagnostics(diagnostics)
    , mStore(mConfig.history)
    , mPipeline(mStore, std::make_unique<UpdateEngine>(mConfig.strategy, mConfig.rules, mConfig.update),
          [this](const UpdateReport& report) { on_report(report); })
    , mServer(mStore)
{
}

Service::~Service()
{
    stop();
}

int Service::start()
{
    const auto port = mServer.start(mConfig.bind_address, mConfig.port);

    spdlog::info("serving on {}:{} ({})", mConfig.bind_address, port, mConfig.strategy.name());

    mIngest = std::jthread([this](std::stop_token stop) { ingest(stop); });

    return port;
}

void Service::stop()
{
    if (mIngest.joinable()) {
        mIngest.request_stop();
        mIngest.join();
    }

    mServer.stop();
}

UpdateReport Service::apply(const UpdateBatch& batch)
{
    check_slots(batch);

    return mPipeline.apply(batch);
}

void Service::on_report(const UpdateReport& report)
{
    if (report.rejected) {
        spdlog::warn("batch {} rejected: {}", report.batch_id, report.error);
    }

    if (mDiagnostics) {
        std::lock_guard lock(mDiagnosticsMutex);
        *mDiagnostics << nlohmann::json(report).dump() << '\n' << std::flush;
    }
}

void Service::check_slots(const UpdateBatch& batch) const
{
    if (!batch.job_records) {
        return;
    }

    for (const auto& job : *batch.job_records) {
        const auto decision = admit_job(job, mConfig.slots);
        if (!decision.admitted) {
            spdlog::warn("job {}: {}", job.job_id, decision.reason);
        }
    }
}

void Service::ingest(std::stop_token stop)
{
    if (mConfig.simulate) {
        FleetSimulator simulator(mConfig.sim);

        std::mutex                  mutex;
        std::condition_variable_any wake;

        apply(simulator.generate_fleet());

        while (!stop.stop_requested()) {
            {
                std::unique_lock lock(mutex);
                if (wake.wait_for(lock, stop, mConfig.sim_interval, [] { return false; })) {
                    break;
                }
            }

            if (stop.stop_requested()) {
                break;
            }

            apply(simulator.tick());
        }

        return;
    }

    if (mConfig.feed_dir.empty()) {
        spdlog::warn("no feed directory and simulation disabled; serving an empty store");
        return;
    }

    FeedWatcher watcher(mConfig.feed_dir, mConfig.feed_poll);
    watcher.run(stop, [this](UpdateBatch batch) { apply(batch); });
}

} // namespace fleetmon
