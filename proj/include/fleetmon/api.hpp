/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_API_HPP_
#define FLEETMON_API_HPP_

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "fleetmon/store.hpp"

namespace httplib {
class Server;
}

namespace fleetmon {

struct ApiResponse {
    int            status {200};
    nlohmann::json body;
};

/// {"error":code,"message":...,"version":v}
nlohmann::json error_json(std::string_view code, std::string_view message, std::uint64_t version);

/**
 * Read API over a snapshot store. Every response body carries the version it was computed from.
 */
class ApiService {
public:
    explicit ApiService(const SnapshotStore& store);

    ApiResponse get_snapshot() const;

    /// since must be a decimal version; an empty or malformed cursor is a 400, a future cursor a 409.
    ApiResponse get_delta(std::string_view since) const;

    /// Resolves a name (nodes first); kind ("node"/"sensor") restricts the table.
    ApiResponse get_entity(std::string_view name, std::string_view kind = {}) const;

    ApiResponse get_analytics() const;
    ApiResponse get_health() const;

    /**
     * One server-sent event per published version after `cursor`, as a delta from the previous version. Returns the
     * event text and advances cursor, or nullopt if nothing new arrived within `wait`. If the cursor fell out of the
     * retained history the event is a resync error and cursor is set to the current version.
     */
    std::optional<std::string> next_stream_event(std::uint64_t& cursor, std::chrono::milliseconds wait) const;

    const SnapshotStore& store() const noexcept { return mStore; }

private:
    const SnapshotStore& mStore;
};

/// Parses one SSE event ("event: ...\nid: ...\ndata: ...\n\n") into (event, data). Lines starting with ':' are ignored.
std::optional<std::pair<std::string, nlohmann::json>> parse_sse_event(std::string_view text);

/**
 * HTTP front end:
 *   GET /v1/snapshot, /v1/delta?since=V, /v1/entity/<name>[?kind=node|sensor], /v1/analytics, /v1/health,
 *   /v1/stream[?since=V][&max=N] (text/event-stream).
 */
class ApiServer {
public:
    explicit ApiServer(const SnapshotStore& store);
    ~ApiServer();

    ApiServer(const ApiServer&)            = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    /// Binds and starts serving on a background thread. Port 0 picks a free port. Returns the bound port.
    int start(const std::string& host, int port);

    /// Stops serving and closes open streams.
    void stop();

    int port() const noexcept { return mPort; }

private:
    void register_routes();

    ApiService                       mService;
    std::unique_ptr<httplib::Server> mServer;
    std::thread                      mThread;
    std::atomic<bool>                mStopping {false};
    int                              mPort {-1};
};

} // namespace fleetmon

#endif
