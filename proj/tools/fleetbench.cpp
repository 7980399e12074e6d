/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "fleetmon/bench.hpp"

int main(int argc, char** argv)
{
    CLI::App app {"Update strategy benchmark"};

    fleetmon::BenchOptions options;

    std::vector<std::string> strategies {"managed", "perentity", "staggered", "chunked:100"};
    std::string              format = "markdown";
    std::string              output;
    std::optional<double>    scalingLimit;

    app.add_option("--strategies", strategies, "Strategies to run")->delimiter(',');
    app.add_option("--nodes", options.node_counts, "Node counts")->delimiter(',');
    app.add_option("--cycles", options.cycles, "Measured cycles per cell")->check(CLI::PositiveNumber);
    app.add_option("--warmup", options.warmup, "Unrecorded warmup cycles");
    app.add_option("--seed", options.seed, "Simulator seed");
    app.add_option("--sensors", options.sensor_count, "Pod sensor count");
    app.add_option("--max-nodes", options.max_nodes, "Memory guard: refuse larger node counts");
    app.add_option("--format", format, "markdown | csv | json")->check(CLI::IsMember({"markdown", "md", "csv", "json"}));
    app.add_option("--output", output, "Write the report here instead of stdout");
    app.add_option("--check-scaling", scalingLimit,
        "Fail unless each strategy's Node Update median grows by at most this factor between N and 2N");

    CLI11_PARSE(app, argc, argv);

    spdlog::set_level(spdlog::level::warn);

    fleetmon::BenchReport report;
    try {
        options.strategies.clear();
        for (const auto& text : strategies) {
            options.strategies.push_back(fleetmon::UpdateStrategy::parse(text));
        }

        report = fleetmon::run_bench(options);
    } catch (const fleetmon::BenchRefused& e) {
        std::cerr << "fleetbench: refused: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "fleetbench: " << e.what() << '\n';
        return 2;
    }

    const auto text = fleetmon::emit_report(report, fleetmon::parse_report_format(format));

    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::binary);
        out << text;
        if (!out) {
            std::cerr << "fleetbench: cannot write " << output << '\n';
            return 2;
        }
    }

    if (!scalingLimit) {
        return 0;
    }

    bool ok = true;
    for (const auto& strategy : options.strategies) {
        for (auto nodes : options.node_counts) {
            const auto doubled = std::find(options.node_counts.begin(), options.node_counts.end(), nodes * 2);
            if (doubled == options.node_counts.end()) {
                continue;
            }

            const auto check = fleetmon::check_scaling(report, strategy.name(), nodes, *doubled, *scalingLimit);
            std::cerr << (check.ok ? "PASS" : "FAIL") << " scaling " << strategy.name() << " N=" << nodes << "->"
                      << *doubled << " ratio=" << check.ratio << " limit=" << check.limit << '\n';
            ok = ok && check.ok;
        }
    }

    return ok ? 0 : 1;
}
