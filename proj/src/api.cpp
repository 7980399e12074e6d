/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/api.hpp"

#include <charconv>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "fleetmon/wire.hpp"

namespace fleetmon {

using nlohmann::json;

namespace {

constexpr auto kJsonType = "application/json";

std::optional<std::uint64_t> parse_version(std::string_view text)
{
    std::uint64_t value {};

    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        return std::nullopt;
    }

    return value;
}

std::string sse_event(std::string_view event, std::uint64_t id, const json& data)
{
    return "event: " + std::string(event) + "\nid: " + std::to_string(id) + "\ndata: " + data.dump() + "\n\n";
}

void send(httplib::Response& res, const ApiResponse& response)
{
    res.status = response.status;
    res.set_content(response.body.dump(), kJsonType);
}

} // namespace

json error_json(std::string_view code, std::string_view message, std::uint64_t version)
{
    return json {{"error", code}, {"message", message}, {"version", version}};
}

/***********************************************************************************************************************
 * ApiService
 **********************************************************************************************************************/

ApiService::ApiService(const SnapshotStore& store)
    : mStore(store)
{
}

ApiResponse ApiService::get_snapshot() const
{
    return {200, snapshot_json(*mStore.current())};
}

ApiResponse ApiService::get_delta(std::string_view since) const
{
    const auto cursor = parse_version(since);
    if (!cursor) {
        return {400, error_json("bad_request", "since must be a non-negative integer version",
                         mStore.current()->version)};
    }

    try {
        return {200, delta_json(mStore.delta(*cursor))};
    } catch (const InvalidCursorError& e) {
        auto body      = error_json("invalid_cursor", e.what(), mStore.current()->version);
        body["resync"] = "/v1/snapshot";

        return {409, std::move(body)};
    }
}

ApiResponse ApiService::get_entity(std::string_view name, std::string_view kind) const
{
    const auto snapshot = mStore.current();

    std::optional<EntityBundle> bundle;
    if (kind.empty()) {
        bundle = lookup_name(*snapshot, name);
    } else if (kind == "node") {
        bundle = lookup(*snapshot, EntityId {std::string(name), EntityKind::Node});
    } else if (kind == "sensor") {
        bundle = lookup(*snapshot, EntityId {std::string(name), EntityKind::Sensor});
    } else {
        return {400, error_json("bad_request", "kind must be node or sensor", snapshot->version)};
    }

    if (!bundle) {
        return {404, error_json("not_found", "no entity named '" + std::string(name) + "'", snapshot->version)};
    }

    return {200,
        json {{"version", snapshot->version},
            {"entity", bundle->node ? node_bundle_json(*bundle->node) : sensor_bundle_json(*bundle->sensor)}}};
}

ApiResponse ApiService::get_analytics() const
{
    const auto snapshot = mStore.current();

    return {200, json {{"version", snapshot->version}, {"analytics", snapshot->analytics}}};
}

ApiResponse ApiService::get_health() const
{
    const auto snapshot = mStore.current();

    return {200,
        json {
            {"status", "ok"},
            {"version", snapshot->version},
            {"last_batch_id", snapshot->last_batch_id},
            {"produced_at", snapshot->produced_at},
            {"nodes", snapshot->nodes.size()},
            {"sensors", snapshot->sensors.size()},
            {"history_depth", mStore.history_depth()},
        }};
}

std::optional<std::string> ApiService::next_stream_event(std::uint64_t& cursor, std::chrono::milliseconds wait) const
{
    const auto current = mStore.wait_for_version(cursor + 1, wait);
    if (current->version <= cursor) {
        if (current->version < cursor) {
            const auto version = current->version;
            cursor             = version;

            return sse_event("resync", version, error_json("invalid_cursor", "cursor is ahead of the store", version));
        }

        return std::nullopt;
    }

    const auto from = mStore.at(cursor);
    const auto to   = mStore.at(cursor + 1);
    if (!from || !to) {
        const auto version = current->version;
        auto       body    = error_json("resync_required", "cursor is older than the retained history", version);
        body["resync"]     = "/v1/snapshot";
        cursor             = version;

        return sse_event("resync", version, body);
    }

    cursor = to->version;

    return sse_event("delta", to->version, delta_json(compute_delta(from, to, {to})));
}

std::optional<std::pair<std::string, json>> parse_sse_event(std::string_view text)
{
    std::string event = "message";
    std::string data;
    bool        hasData = false;

    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }

        const auto line = text.substr(start, end - start);
        start           = end + 1;

        if (line.empty() || line.front() == ':') {
            continue;
        }

        const auto colon = line.find(':');
        const auto field = line.substr(0, colon);
        auto       value = colon == std::string_view::npos ? std::string_view {} : line.substr(colon + 1);
        if (!value.empty() && value.front() == ' ') {
            value.remove_prefix(1);
        }

        if (field == "event") {
            event = value;
        } else if (field == "data") {
            if (hasData) {
                data += '\n';
            }
            data += value;
            hasData = true;
        }
    }

    if (!hasData) {
        return std::nullopt;
    }

    return std::pair {event, json::parse(data)};
}

/***********************************************************************************************************************
 * ApiServer
 **********************************************************************************************************************/

ApiServer::ApiServer(const SnapshotStore& store)
    : mService(store)
    , mServer(std::make_unique<httplib::Server>())
{
    register_routes();
}

ApiServer::~ApiServer()
{
    stop();
}

void ApiServer::register_routes()
{
    mServer->Get("/v1/snapshot", [this](const httplib::Request&, httplib::Response& res) {
        send(res, mService.get_snapshot());
    });

    mServer->Get("/v1/delta", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, mService.get_delta(req.get_param_value("since")));
    });

    mServer->Get(R"(/v1/entity/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, mService.get_entity(req.matches[1].str(), req.get_param_value("kind")));
    });

    mServer->Get("/v1/analytics", [this](const httplib::Request&, httplib::Response& res) {
        send(res, mService.get_analytics());
    });

    mServer->Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
        send(res, mService.get_health());
    });

    mServer->Get("/v1/stream", [this](const httplib::Request& req, httplib::Response& res) {
        std::uint64_t cursor = mService.store().current()->version;

        if (req.has_param("since")) {
            auto since = parse_version(req.get_param_value("since"));
            if (!since) {
                send(res, {400, error_json("bad_request", "since must be a non-negative integer version", cursor)});
                return;
            }
            cursor = *since;
        }

        std::optional<std::uint64_t> max;
        if (req.has_param("max")) {
            max = parse_version(req.get_param_value("max"));
            if (!max) {
                send(res, {400, error_json("bad_request", "max must be a non-negative integer", cursor)});
                return;
            }
        }

        auto state = std::make_shared<std::pair<std::uint64_t, std::uint64_t>>(cursor, 0);

        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider("text/event-stream", [this, state, max](std::size_t, httplib::DataSink& sink) {
            auto& [streamCursor, sent] = *state;

            if (mStopping || (max && sent >= *max)) {
                sink.done();
                return true;
            }

            auto event = mService.next_stream_event(streamCursor, std::chrono::milliseconds(250));
            if (!event) {
                return sink.write(": keepalive\n\n", 13);
            }

            ++sent;

            return sink.write(event->data(), event->size());
        });
    });

    mServer->set_exception_handler([this](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }

        spdlog::error("api: {}", message);
        send(res, {500, error_json("internal", message, mService.store().current()->version)});
    });
}

int ApiServer::start(const std::string& host, int port)
{
    if (port == 0) {
        mPort = mServer->bind_to_any_port(host);
    } else {
        mPort = mServer->bind_to_port(host, port) ? port : -1;
    }

    if (mPort < 0) {
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }

    mThread = std::thread([this] { mServer->listen_after_bind(); });
    mServer->wait_until_ready();

    return mPort;
}

void ApiServer::stop()
{
    mStopping = true;

    if (mServer) {
        mServer->stop();
    }

    if (mThread.joinable()) {
        mThread.join();
    }
}

} // namespace fleetmon
