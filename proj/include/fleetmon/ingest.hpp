/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_INGEST_HPP_
#define FLEETMON_INGEST_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fleetmon/model.hpp"

namespace fleetmon {

inline constexpr std::string_view kNodeCsvHeader
    = "timestamp,node_id,arch,cpu_load,mem_free_gb,disk_free_gb,jobs_running,cores_busy,cores_total,status";
inline constexpr std::string_view kSensorCsvHeader = "timestamp,sensor_id,zone,kind,value";
inline constexpr std::string_view kJobCsvHeader    = "job_id,user,arch_queue,slots,node_ids";

/**
 * Records to apply in one update cycle.
 *
 * job_records is empty (nullopt) when the cycle had no jobs file; the previous job set then carries forward. An
 * engaged but empty list clears all jobs.
 */
struct UpdateBatch {
    std::uint64_t                         batch_id {};
    Timestamp                             produced_at {};
    std::vector<NodeRecord>               node_records;
    std::vector<SensorRecord>             sensor_records;
    std::optional<std::vector<JobRecord>> job_records;

    bool operator==(const UpdateBatch&) const = default;
};

/// A rejected or superseded data row. Line numbers are 1-based; the header is line 1.
struct ParseIssue {
    std::size_t line {};
    std::string reason;

    bool operator==(const ParseIssue&) const = default;
};

template <typename Record>
struct ParseResult {
    std::vector<Record>     records;
    std::vector<ParseIssue> issues;
};

/// Whole-file rejection: the feed is not the expected kind of file.
class HeaderMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/*
 * Parsers. Malformed rows are skipped and reported; a duplicate id keeps the last row and reports the earlier one.
 * Throw HeaderMismatchError when the first line is not the exact header.
 */

ParseResult<NodeRecord>   parse_node_csv(std::string_view content);
ParseResult<SensorRecord> parse_sensor_csv(std::string_view content);
ParseResult<JobRecord>    parse_job_csv(std::string_view content);

/*
 * Serializers. Loads and gigabytes use two fraction digits rounded half-up; sensor values use the shortest
 * representation that parses back to the same double.
 */

std::string serialize_node_csv(std::span<const NodeRecord> records);
std::string serialize_sensor_csv(std::span<const SensorRecord> records);
std::string serialize_job_csv(std::span<const JobRecord> records);

/// Formats a value with exactly two fraction digits, rounding the exact binary value half away from zero.
std::string format_fixed2(double value);

} // namespace fleetmon

#endif
