/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "fleetmon/service.hpp"

namespace {

volatile std::sig_atomic_t gStop = 0;

void on_signal(int)
{
    gStop = 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app {"fleetmon daemon: ingests fleet batches and serves the monitoring API"};

    std::string                  configPath;
    std::string                  feedDir;
    std::string                  strategy;
    std::string                  diagnostics;
    std::string                  logLevel = "info";
    bool                         simulate = false;
    std::optional<int>           port;
    std::optional<std::uint64_t> seed;

    app.add_option("--config", configPath, "Config file (key = value)")->check(CLI::ExistingFile);
    app.add_option("--feed-dir", feedDir, "Directory to watch for nodes-/sensors-/jobs-<token>.csv cycles");
    app.add_flag("--simulate", simulate, "Generate batches in-process instead of watching a feed");
    app.add_option("--port", port, "HTTP port (0 picks a free one)")->check(CLI::Range(0, 65535));
    app.add_option("--seed", seed, "Simulator seed");
    app.add_option("--strategy", strategy, "managed | perentity | staggered | chunked:<n>");
    app.add_option("--diagnostics", diagnostics, "Write one JSON update report per cycle here ('-' for stdout)");
    app.add_option("--log-level", logLevel, "trace | debug | info | warn | error | off");

    CLI11_PARSE(app, argc, argv);

    spdlog::set_level(spdlog::level::from_str(logLevel));

    fleetmon::ServiceConfig config;
    try {
        if (!configPath.empty()) {
            config = fleetmon::load_config(configPath);
        }

        if (!feedDir.empty()) {
            config.feed_dir = feedDir;
        }

        if (simulate) {
            config.simulate = true;
        }

        if (port) {
            config.port = static_cast<std::uint16_t>(*port);
        }

        if (seed) {
            config.sim.seed = *seed;
        }

        if (!strategy.empty()) {
            config.strategy = fleetmon::UpdateStrategy::parse(strategy);
        }
    } catch (const std::exception& e) {
        std::cerr << "fleetmond: " << e.what() << '\n';
        return 2;
    }

    std::ofstream diagnosticsFile;
    std::ostream* diagnosticsStream = nullptr;

    if (diagnostics == "-") {
        diagnosticsStream = &std::cout;
    } else if (!diagnostics.empty()) {
        diagnosticsFile.open(diagnostics, std::ios::app);
        if (!diagnosticsFile) {
            std::cerr << "fleetmond: cannot open " << diagnostics << '\n';
            return 2;
        }
        diagnosticsStream = &diagnosticsFile;
    }

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    try {
        fleetmon::Service service(config, diagnosticsStream);
        service.start();

        while (!gStop) {
            std::this_thread::sleep_for(std::chrono::milliseconds(200));
        }

        spdlog::info("shutting down");
        service.stop();
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }

    return 0;
}
