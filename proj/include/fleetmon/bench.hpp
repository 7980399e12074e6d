/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_BENCH_HPP_
#define FLEETMON_BENCH_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "fleetmon/simulator.hpp"
#include "fleetmon/update.hpp"

namespace fleetmon {

inline constexpr std::string_view kRowPodUpdate   = "EcoPOD Update";
inline constexpr std::string_view kRowNodeStartup = "Node Startup";
inline constexpr std::string_view kRowNodeUpdate  = "Node Update";

inline constexpr std::array<std::string_view, 3> kBenchRows {kRowPodUpdate, kRowNodeStartup, kRowNodeUpdate};

/// Raised when a requested run exceeds the memory guard.
class BenchRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BenchOptions {
    std::vector<UpdateStrategy> strategies {UpdateStrategy::managed(), UpdateStrategy::per_entity(),
        UpdateStrategy::staggered(), UpdateStrategy::chunked(100)};
    std::vector<std::size_t> node_counts {1000, 2000, 4000};
    std::size_t              cycles {30};
    std::size_t              warmup {5};
    std::uint64_t            seed {7};
    std::size_t              sensor_count {5000};
    /// Largest node count the harness will simulate.
    std::size_t  max_nodes {200000};
    AlertRuleSet rules {AlertRuleSet::defaults()};
    UpdateConfig update;
};

/// One (strategy, N, row) measurement.
struct BenchCell {
    std::string   strategy;
    std::size_t   nodes {};
    std::string   row;
    double        median_s {};
    std::uint64_t top_level_invocations {};
    std::uint64_t ticks_consumed {};
    /// Per-entity callbacks attributed to the row's phase in one cycle.
    std::uint64_t        callbacks {};
    std::vector<double>  samples;

    bool operator==(const BenchCell&) const = default;
};

struct BenchReport {
    std::uint64_t          seed {};
    std::size_t            cycles {};
    std::size_t            warmup {};
    std::vector<BenchCell> cells;

    const BenchCell* find(std::string_view strategy, std::size_t nodes, std::string_view row) const noexcept;

    bool operator==(const BenchReport&) const = default;
};

/// Median of the samples (mean of the middle pair for even counts). Throws std::invalid_argument when empty.
double median(std::vector<double> samples);

/**
 * Runs every strategy at every N over the same simulator stream. Each N gets one startup batch and
 * warmup + cycles tick batches; warmup cycles are not recorded. Throws BenchRefused if an N exceeds max_nodes and
 * std::invalid_argument if cycles < 1.
 */
BenchReport run_bench(const BenchOptions& options);

enum class ReportFormat { Json, Csv, Markdown };

/// Parses "json", "csv" or "markdown". Throws std::invalid_argument.
ReportFormat parse_report_format(std::string_view text);

/// Renders a report. Json and Csv carry every sample and round-trip exactly; an empty report yields header only.
std::string emit_report(const BenchReport& report, ReportFormat format);

BenchReport report_from_json(std::string_view text);
BenchReport report_from_csv(std::string_view text);

struct ScalingCheck {
    bool   ok {};
    double ratio {};
    double limit {};
};

/// Node Update median at `doubled` over the median at `base` for one strategy. Throws std::out_of_range if missing.
ScalingCheck check_scaling(const BenchReport& report, std::string_view strategy, std::size_t base,
    std::size_t doubled, double limit = 1.8);

} // namespace fleetmon

#endif
