/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/feed.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

namespace fleetmon {

namespace fs = std::filesystem;

namespace {

struct CycleFiles {
    bool nodes {};
    bool sensors {};
    bool jobs {};
};

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }

    std::ostringstream content;
    content << in.rdbuf();
    if (in.bad()) {
        throw std::runtime_error("read error on " + path.string());
    }

    return content.str();
}

void write_atomically(const fs::path& path, const std::string& content)
{
    auto tmp = path.parent_path() / ("." + path.filename().string() + ".tmp");

    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }

    fs::rename(tmp, path);
}

template <typename Record>
void log_issues(const fs::path& path, const ParseResult<Record>& result)
{
    for (const auto& issue : result.issues) {
        spdlog::warn("{}:{}: {}", path.string(), issue.line, issue.reason);
    }
}

} // namespace

std::string feed_token(std::uint64_t cycle, std::size_t width)
{
    auto token = std::to_string(cycle);
    if (token.size() < width) {
        token.insert(0, width - token.size(), '0');
    }

    return token;
}

void write_feed_cycle(const fs::path& dir, const std::string& token, const UpdateBatch& batch)
{
    if (batch.job_records) {
        write_atomically(dir / ("jobs-" + token + ".csv"), serialize_job_csv(*batch.job_records));
    }

    write_atomically(dir / ("sensors-" + token + ".csv"), serialize_sensor_csv(batch.sensor_records));
    write_atomically(dir / ("nodes-" + token + ".csv"), serialize_node_csv(batch.node_records));
}

/***********************************************************************************************************************
 * FeedWatcher
 **********************************************************************************************************************/

FeedWatcher::FeedWatcher(fs::path dir, std::chrono::milliseconds pollInterval)
    : mDir(std::move(dir))
    , mPollInterval(pollInterval)
{
}

std::vector<UpdateBatch> FeedWatcher::poll()
{
    static const std::regex kFeedName(R"(^(nodes|sensors|jobs)-([0-9]+)\.csv$)");

    std::map<std::string, CycleFiles> cycles;
    std::error_code                   ec;

    for (const auto& entry : fs::directory_iterator(mDir, ec)) {
        std::smatch match;
        const auto  name = entry.path().filename().string();

        if (!std::regex_match(name, match, kFeedName)) {
            continue;
        }

        auto& files = cycles[match[2].str()];
        if (match[1] == "nodes") {
            files.nodes = true;
        } else if (match[1] == "sensors") {
            files.sensors = true;
        } else {
            files.jobs = true;
        }
    }

    if (ec) {
        report("cannot scan feed directory " + mDir.string() + ": " + ec.message());
        return {};
    }

    std::vector<UpdateBatch> batches;

    // std::map iterates tokens in lexicographic order.
    for (const auto& [token, files] : cycles) {
        if (!files.nodes || !files.sensors || mConsumed.count(token) != 0) {
            continue;
        }

        mConsumed.insert(token);

        if (!mLastToken.empty() && token <= mLastToken) {
            report("cycle " + token + " arrived after cycle " + mLastToken + " was consumed; dropped");
            continue;
        }

        mLastToken = token;

        if (auto batch = load_cycle(token, files.jobs)) {
            batches.push_back(std::move(*batch));
        }
    }

    return batches;
}

void FeedWatcher::run(std::stop_token stop, const std::function<void(UpdateBatch)>& sink)
{
    while (!stop.stop_requested()) {
        for (auto& batch : poll()) {
            sink(std::move(batch));
        }

        const auto deadline = std::chrono::steady_clock::now() + mPollInterval;
        while (!stop.stop_requested() && std::chrono::steady_clock::now() < deadline) {
            std::this_thread::sleep_for(std::min<std::chrono::milliseconds>(mPollInterval, std::chrono::milliseconds(50)));
        }
    }
}

std::optional<UpdateBatch> FeedWatcher::load_cycle(const std::string& token, bool hasJobs)
{
    const auto nodesPath   = mDir / ("nodes-" + token + ".csv");
    const auto sensorsPath = mDir / ("sensors-" + token + ".csv");
    const auto jobsPath    = mDir / ("jobs-" + token + ".csv");

    UpdateBatch batch;

    try {
        auto nodes   = parse_node_csv(read_file(nodesPath));
        auto sensors = parse_sensor_csv(read_file(sensorsPath));

        log_issues(nodesPath, nodes);
        log_issues(sensorsPath, sensors);

        batch.node_records   = std::move(nodes.records);
        batch.sensor_records = std::move(sensors.records);

        if (hasJobs) {
            auto jobs = parse_job_csv(read_file(jobsPath));
            log_issues(jobsPath, jobs);
            batch.job_records = std::move(jobs.records);
        }
    } catch (const std::exception& err) {
        report("cycle " + token + " skipped: " + err.what());
        return std::nullopt;
    }

    Timestamp producedAt = mLastProducedAt;
    for (const auto& record : batch.node_records) {
        producedAt = std::max(producedAt, record.timestamp);
    }
    for (const auto& record : batch.sensor_records) {
        producedAt = std::max(producedAt, record.timestamp);
    }

    batch.batch_id    = mNextBatchId++;
    batch.produced_at = producedAt;
    mLastProducedAt   = producedAt;

    return batch;
}

void FeedWatcher::report(std::string message)
{
    spdlog::error("feed: {}", message);
    mErrors.push_back(std::move(message));
}

} // namespace fleetmon
