/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "fleetmon/feed.hpp"
#include "fleetmon/simulator.hpp"

int main(int argc, char** argv)
{
    CLI::App app {"Writes simulated fleet cycles into a feed directory"};

    fleetmon::FleetConfig config;

    std::string out;
    std::size_t cycles    = 10;
    double      intervalS = 0.0;
    bool        noJobs    = false;

    app.add_option("--out", out, "Feed directory")->required();
    app.add_option("--cycles", cycles, "Cycles to write, including the startup cycle")->check(CLI::PositiveNumber);
    app.add_option("--interval", intervalS, "Seconds to sleep between cycles");
    app.add_option("--nodes", config.node_count, "Node count");
    app.add_option("--sensors", config.sensor_count, "Sensor count");
    app.add_option("--scale", config.scale_factor, "Multiplier on nodes and sensors");
    app.add_option("--seed", config.seed, "Seed");
    app.add_option("--fault-rate", config.fault_rate, "Per-tick Up/Down flip probability");
    app.add_flag("--no-jobs", noJobs, "Omit the jobs file");

    CLI11_PARSE(app, argc, argv);

    try {
        fleetmon::FleetSimulator simulator(config);
        std::filesystem::create_directories(out);

        for (std::size_t cycle = 1; cycle <= cycles; ++cycle) {
            auto batch = cycle == 1 ? simulator.generate_fleet() : simulator.tick();
            if (noJobs) {
                batch.job_records.reset();
            }

            fleetmon::write_feed_cycle(out, fleetmon::feed_token(cycle), batch);

            if (intervalS > 0.0 && cycle < cycles) {
                std::this_thread::sleep_for(std::chrono::duration<double>(intervalS));
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "fleetsim: " << e.what() << '\n';
        return 2;
    }

    return 0;
}
