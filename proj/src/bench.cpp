/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/bench.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

namespace fleetmon {

using nlohmann::json;

namespace {

constexpr std::string_view kCsvHeader
    = "strategy,nodes,row,median_s,top_level_invocations,ticks_consumed,callbacks,seed,cycles,warmup,samples";

std::string shortest(double value)
{
    char buffer[64];

    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);

    return std::string(buffer, ptr);
}

template <typename T>
T parse_number(std::string_view text, std::string_view what)
{
    T value {};

    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::invalid_argument("bench csv: bad " + std::string(what) + " '" + std::string(text) + "'");
    }

    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> parts;

    for (std::size_t start = 0;;) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }

    return parts;
}

struct Series {
    std::vector<double> pod;
    std::vector<double> nodes;
    std::vector<double> startup;
    UpdateReport        startupReport;
    UpdateReport        lastReport;
};

Series measure(const UpdateStrategy& strategy, const BenchOptions& options, const UpdateBatch& startupBatch,
    const std::vector<UpdateBatch>& ticks)
{
    Series     series;
    const auto empty = std::make_shared<const FleetSnapshot>();

    for (std::size_t i = 0; i < options.warmup + options.cycles; ++i) {
        UpdateEngine engine(strategy, options.rules, options.update);

        auto result = engine.startup(empty, startupBatch);
        if (result.report.rejected) {
            throw std::runtime_error("bench startup rejected: " + result.report.error);
        }

        if (i >= options.warmup) {
            series.startup.push_back(result.report.phase_durations.nodes);
            series.startupReport = result.report;
        }
    }

    UpdateEngine engine(strategy, options.rules, options.update);

    auto snapshot = engine.startup(empty, startupBatch).snapshot;
    for (std::size_t i = 0; i < ticks.size(); ++i) {
        auto result = engine.run(snapshot, ticks[i]);
        if (result.report.rejected) {
            throw std::runtime_error("bench cycle rejected: " + result.report.error);
        }

        snapshot = std::move(result.snapshot);

        if (i >= options.warmup) {
            series.pod.push_back(result.report.phase_durations.pod);
            series.nodes.push_back(result.report.phase_durations.nodes);
            series.lastReport = result.report;
        }
    }

    return series;
}

BenchCell make_cell(const std::string& strategy, std::size_t nodes, std::string_view row, std::vector<double> samples,
    const UpdateReport& report, std::uint64_t callbacks)
{
    BenchCell cell;

    cell.strategy              = strategy;
    cell.nodes                 = nodes;
    cell.row                   = row;
    cell.median_s              = median(samples);
    cell.top_level_invocations = report.top_level_invocations;
    cell.ticks_consumed        = report.ticks_consumed;
    cell.callbacks             = callbacks;
    cell.samples               = std::move(samples);

    return cell;
}

std::string markdown(const BenchReport& report)
{
    std::vector<std::pair<std::string, std::size_t>> columns;
    for (const auto& cell : report.cells) {
        std::pair key {cell.strategy, cell.nodes};
        if (std::find(columns.begin(), columns.end(), key) == columns.end()) {
            columns.push_back(std::move(key));
        }
    }

    std::ostringstream out;

    out << "| Row (median ms) |";
    for (const auto& [strategy, nodes] : columns) {
        out << ' ' << strategy << " N=" << nodes << " |";
    }
    out << "\n|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << "---:|";
    }
    out << '\n';

    if (columns.empty()) {
        return out.str();
    }

    for (auto row : kBenchRows) {
        out << "| " << row << " |";
        for (const auto& [strategy, nodes] : columns) {
            if (const auto* cell = report.find(strategy, nodes, row)) {
                char buffer[32];
                std::snprintf(buffer, sizeof(buffer), "%.3f", cell->median_s * 1e3);
                out << ' ' << buffer << " |";
            } else {
                out << " - |";
            }
        }
        out << '\n';
    }

    out << "\n| Strategy | N | Ticks | Top-level invocations | Node callbacks |\n|---|---:|---:|---:|---:|\n";
    for (const auto& [strategy, nodes] : columns) {
        if (const auto* cell = report.find(strategy, nodes, kRowNodeUpdate)) {
            out << "| " << strategy << " | " << nodes << " | " << cell->ticks_consumed << " | "
                << cell->top_level_invocations << " | " << cell->callbacks << " |\n";
        }
    }

    return out.str();
}

} // namespace

const BenchCell* BenchReport::find(std::string_view strategy, std::size_t nodes, std::string_view row) const noexcept
{
    for (const auto& cell : cells) {
        if (cell.strategy == strategy && cell.nodes == nodes && cell.row == row) {
            return &cell;
        }
    }

    return nullptr;
}

double median(std::vector<double> samples)
{
    if (samples.empty()) {
        throw std::invalid_argument("median of no samples");
    }

    const auto mid = samples.size() / 2;
    std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(mid), samples.end());

    const double upper = samples[mid];
    if (samples.size() % 2 == 1) {
        return upper;
    }

    const double lower = *std::max_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(mid));

    return lower + (upper - lower) / 2.0;
}

BenchReport run_bench(const BenchOptions& options)
{
    if (options.cycles < 1) {
        throw std::invalid_argument("bench needs at least one measured cycle");
    }

    for (auto nodes : options.node_counts) {
        if (nodes > options.max_nodes) {
            throw BenchRefused("N=" + std::to_string(nodes) + " exceeds the memory guard of "
                + std::to_string(options.max_nodes) + " nodes; lower --nodes or raise --max-nodes");
        }
    }

    BenchReport report;

    report.seed   = options.seed;
    report.cycles = options.cycles;
    report.warmup = options.warmup;

    for (auto nodes : options.node_counts) {
        FleetConfig config;

        config.node_count   = nodes;
        config.sensor_count = options.sensor_count;
        config.seed         = options.seed;

        FleetSimulator simulator(config);

        const auto               startupBatch = simulator.generate_fleet();
        std::vector<UpdateBatch> ticks;

        ticks.reserve(options.warmup + options.cycles);
        for (std::size_t i = 0; i < options.warmup + options.cycles; ++i) {
            ticks.push_back(simulator.tick());
        }

        for (const auto& strategy : options.strategies) {
            spdlog::debug("bench: {} N={}", strategy.name(), nodes);

            auto       series = measure(strategy, options, startupBatch, ticks);
            const auto name   = strategy.name();

            report.cells.push_back(make_cell(name, nodes, kRowPodUpdate, std::move(series.pod), series.lastReport,
                series.lastReport.phase_callbacks.pod));
            report.cells.push_back(make_cell(name, nodes, kRowNodeStartup, std::move(series.startup),
                series.startupReport, series.startupReport.phase_callbacks.nodes));
            report.cells.push_back(make_cell(name, nodes, kRowNodeUpdate, std::move(series.nodes), series.lastReport,
                series.lastReport.phase_callbacks.nodes));
        }
    }

    return report;
}

ReportFormat parse_report_format(std::string_view text)
{
    if (text == "json") {
        return ReportFormat::Json;
    }

    if (text == "csv") {
        return ReportFormat::Csv;
    }

    if (text == "markdown" || text == "md") {
        return ReportFormat::Markdown;
    }

    throw std::invalid_argument("unknown report format '" + std::string(text) + "'");
}

std::string emit_report(const BenchReport& report, ReportFormat format)
{
    switch (format) {
    case ReportFormat::Json: {
        json cells = json::array();
        for (const auto& cell : report.cells) {
            cells.push_back(json {
                {"strategy", cell.strategy},
                {"nodes", cell.nodes},
                {"row", cell.row},
                {"median_s", cell.median_s},
                {"top_level_invocations", cell.top_level_invocations},
                {"ticks_consumed", cell.ticks_consumed},
                {"callbacks", cell.callbacks},
                {"samples", cell.samples},
            });
        }

        return json {{"seed", report.seed}, {"cycles", report.cycles}, {"warmup", report.warmup},
            {"cells", std::move(cells)}}
                   .dump(2)
            + "\n";
    }

    case ReportFormat::Csv: {
        std::string out(kCsvHeader);
        out += '\n';

        for (const auto& cell : report.cells) {
            out += cell.strategy + ',' + std::to_string(cell.nodes) + ',' + cell.row + ',' + shortest(cell.median_s)
                + ',' + std::to_string(cell.top_level_invocations) + ',' + std::to_string(cell.ticks_consumed) + ','
                + std::to_string(cell.callbacks) + ',' + std::to_string(report.seed) + ','
                + std::to_string(report.cycles) + ',' + std::to_string(report.warmup) + ',';

            for (std::size_t i = 0; i < cell.samples.size(); ++i) {
                if (i != 0) {
                    out += ';';
                }
                out += shortest(cell.samples[i]);
            }
            out += '\n';
        }

        return out;
    }

    case ReportFormat::Markdown:
        return markdown(report);
    }

    return {};
}

BenchReport report_from_json(std::string_view text)
{
    const auto  doc = json::parse(text);
    BenchReport report;

    report.seed   = doc.at("seed").get<std::uint64_t>();
    report.cycles = doc.at("cycles").get<std::size_t>();
    report.warmup = doc.at("warmup").get<std::size_t>();

    for (const auto& item : doc.at("cells")) {
        BenchCell cell;

        cell.strategy              = item.at("strategy").get<std::string>();
        cell.nodes                 = item.at("nodes").get<std::size_t>();
        cell.row                   = item.at("row").get<std::string>();
        cell.median_s              = item.at("median_s").get<double>();
        cell.top_level_invocations = item.at("top_level_invocations").get<std::uint64_t>();
        cell.ticks_consumed        = item.at("ticks_consumed").get<std::uint64_t>();
        cell.callbacks             = item.at("callbacks").get<std::uint64_t>();
        cell.samples               = item.at("samples").get<std::vector<double>>();

        report.cells.push_back(std::move(cell));
    }

    return report;
}

BenchReport report_from_csv(std::string_view text)
{
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }

    if (lines.empty() || lines.front() != kCsvHeader) {
        throw std::invalid_argument("bench csv: header mismatch");
    }

    BenchReport report;

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split(lines[i], ',');
        if (fields.size() != 11) {
            throw std::invalid_argument("bench csv: line " + std::to_string(i + 1) + " has wrong field count");
        }

        BenchCell cell;

        cell.strategy              = fields[0];
        cell.nodes                 = parse_number<std::size_t>(fields[1], "nodes");
        cell.row                   = fields[2];
        cell.median_s              = parse_number<double>(fields[3], "median_s");
        cell.top_level_invocations = parse_number<std::uint64_t>(fields[4], "top_level_invocations");
        cell.ticks_consumed        = parse_number<std::uint64_t>(fields[5], "ticks_consumed");
        cell.callbacks             = parse_number<std::uint64_t>(fields[6], "callbacks");
        report.seed                = parse_number<std::uint64_t>(fields[7], "seed");
        report.cycles              = parse_number<std::size_t>(fields[8], "cycles");
        report.warmup              = parse_number<std::size_t>(fields[9], "warmup");

        if (!fields[10].empty()) {
            for (auto sample : split(fields[10], ';')) {
                cell.samples.push_back(parse_number<double>(sample, "sample"));
            }
        }

        report.cells.push_back(std::move(cell));
    }

    return report;
}

ScalingCheck check_scaling(
    const BenchReport& report, std::string_view strategy, std::size_t base, std::size_t doubled, double limit)
{
    const auto* low  = report.find(strategy, base, kRowNodeUpdate);
    const auto* high = report.find(strategy, doubled, kRowNodeUpdate);
    if (!low || !high) {
        throw std::out_of_range("scaling check: missing Node Update cells for " + std::string(strategy));
    }

    ScalingCheck check;

    check.limit = limit;
    check.ratio = high->median_s / low->median_s;
    check.ok    = check.ratio <= limit;

    return check;
}

} // namespace fleetmon
