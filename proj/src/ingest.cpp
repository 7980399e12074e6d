/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/ingest.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace fleetmon {

namespace {

/// Thrown inside row parsers; converted to a ParseIssue by the line loop.
struct RowError {
    std::string reason;
};

std::vector<std::string_view> split(std::string_view text, char separator)
{
    std::vector<std::string_view> parts;

    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(separator, start);
        if (pos == std::string_view::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }

        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

template <typename Int>
Int parse_int(std::string_view field, const char* name)
{
    Int value {};

    const auto* end          = field.data() + field.size();
    const auto [ptr, errc]   = std::from_chars(field.data(), end, value);
    if (field.empty() || errc != std::errc() || ptr != end) {
        throw RowError {std::string(name) + ": not an integer: '" + std::string(field) + "'"};
    }

    return value;
}

double parse_real(std::string_view field, const char* name)
{
    double value {};

    const auto* end        = field.data() + field.size();
    const auto [ptr, errc] = std::from_chars(field.data(), end, value, std::chars_format::fixed);
    if (field.empty() || errc != std::errc() || ptr != end || !std::isfinite(value)) {
        throw RowError {std::string(name) + ": not a decimal number: '" + std::string(field) + "'"};
    }

    return value;
}

std::string parse_token(std::string_view field, const char* name)
{
    if (!is_valid_token(field)) {
        throw RowError {std::string(name) + ": invalid token: '" + std::string(field) + "'"};
    }

    return std::string(field);
}

template <typename Enum>
Enum parse_enum(std::string_view field, std::optional<Enum> (*convert)(std::string_view) noexcept, const char* name)
{
    auto value = convert(field);
    if (!value) {
        throw RowError {std::string(name) + ": unknown value: '" + std::string(field) + "'"};
    }

    return *value;
}

void expect_fields(const std::vector<std::string_view>& fields, std::size_t count)
{
    if (fields.size() != count) {
        throw RowError {
            "expected " + std::to_string(count) + " fields, found " + std::to_string(fields.size())};
    }
}

template <typename Record>
void check_record(const Record& record)
{
    if (auto reason = check_invariants(record)) {
        throw RowError {"invariant violation: " + *reason};
    }
}

NodeRecord parse_node_row(std::string_view line)
{
    const auto fields = split(line, ',');
    expect_fields(fields, 10);

    NodeRecord record;

    record.timestamp       = parse_int<Timestamp>(fields[0], "timestamp");
    record.id              = EntityId {parse_token(fields[1], "node_id"), EntityKind::Node};
    record.arch            = parse_enum<ArchClass>(fields[2], arch_from_csv, "arch");
    record.cpu_load        = parse_real(fields[3], "cpu_load");
    record.mem_free_gb     = parse_real(fields[4], "mem_free_gb");
    record.disk_free_gb    = parse_real(fields[5], "disk_free_gb");
    record.jobs_running    = parse_int<std::uint32_t>(fields[6], "jobs_running");
    record.cores_busy      = parse_int<std::uint32_t>(fields[7], "cores_busy");
    record.cores_total     = parse_int<std::uint32_t>(fields[8], "cores_total");
    record.status_reported = parse_enum<NodeStatus>(fields[9], status_from_csv, "status");

    check_record(record);

    return record;
}

SensorRecord parse_sensor_row(std::string_view line)
{
    const auto fields = split(line, ',');
    expect_fields(fields, 5);

    SensorRecord record;

    record.timestamp = parse_int<Timestamp>(fields[0], "timestamp");
    record.id        = EntityId {parse_token(fields[1], "sensor_id"), EntityKind::Sensor};
    record.zone      = parse_token(fields[2], "zone");
    record.kind      = parse_enum<SensorKind>(fields[3], sensor_kind_from_csv, "kind");

    // Sensor values may use exponent notation, so accept the general format here.
    const auto  field      = fields[4];
    const auto* end        = field.data() + field.size();
    const auto [ptr, errc] = std::from_chars(field.data(), end, record.value);
    if (field.empty() || errc != std::errc() || ptr != end || !std::isfinite(record.value)) {
        throw RowError {"value: not a number: '" + std::string(field) + "'"};
    }

    check_record(record);

    return record;
}

JobRecord parse_job_row(std::string_view line)
{
    const auto fields = split(line, ',');
    expect_fields(fields, 5);

    JobRecord record;

    record.job_id     = parse_token(fields[0], "job_id");
    record.user       = parse_token(fields[1], "user");
    record.arch_queue = parse_enum<ArchClass>(fields[2], arch_from_csv, "arch_queue");
    record.slots      = parse_int<std::uint32_t>(fields[3], "slots");

    if (!fields[4].empty()) {
        for (auto node : split(fields[4], ';')) {
            record.node_ids.push_back(parse_token(node, "node_ids"));
        }
    }

    check_record(record);

    return record;
}

const std::string& key_of(const NodeRecord& record)
{
    return record.id.name;
}

const std::string& key_of(const SensorRecord& record)
{
    return record.id.name;
}

const std::string& key_of(const JobRecord& record)
{
    return record.job_id;
}

template <typename Record, typename RowParser>
ParseResult<Record> parse_feed(std::string_view content, std::string_view header, RowParser parseRow)
{
    auto lines = split(content, '\n');
    if (lines.size() > 1 && lines.back().empty()) {
        lines.pop_back();
    }

    if (lines.front() != header) {
        throw HeaderMismatchError("unexpected header: '" + std::string(lines.front()) + "', expected '"
            + std::string(header) + "'");
    }

    std::vector<std::optional<Record>>           slots;
    std::vector<std::size_t>                     slotLines;
    std::unordered_map<std::string, std::size_t> seen;
    ParseResult<Record>                          result;

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto lineNo = i + 1;

        try {
            auto record = parseRow(lines[i]);

            if (auto it = seen.find(key_of(record)); it != seen.end()) {
                result.issues.push_back({slotLines[it->second],
                    "duplicate id '" + key_of(record) + "' superseded by line " + std::to_string(lineNo)});
                slots[it->second].reset();
                it->second = slots.size();
            } else {
                seen.emplace(key_of(record), slots.size());
            }

            slots.push_back(std::move(record));
            slotLines.push_back(lineNo);
        } catch (const RowError& err) {
            result.issues.push_back({lineNo, err.reason});
        }
    }

    result.records.reserve(seen.size());
    for (auto& slot : slots) {
        if (slot) {
            result.records.push_back(std::move(*slot));
        }
    }

    return result;
}

void append_shortest(std::string& out, double value)
{
    char buffer[64];

    const auto [ptr, errc] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    out.append(buffer, ptr);
}

template <typename Int>
void append_int(std::string& out, Int value)
{
    char buffer[32];

    const auto [ptr, errc] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    out.append(buffer, ptr);
}

} // namespace

/***********************************************************************************************************************
 * Parsing
 **********************************************************************************************************************/

ParseResult<NodeRecord> parse_node_csv(std::string_view content)
{
    return parse_feed<NodeRecord>(content, kNodeCsvHeader, parse_node_row);
}

ParseResult<SensorRecord> parse_sensor_csv(std::string_view content)
{
    return parse_feed<SensorRecord>(content, kSensorCsvHeader, parse_sensor_row);
}

ParseResult<JobRecord> parse_job_csv(std::string_view content)
{
    return parse_feed<JobRecord>(content, kJobCsvHeader, parse_job_row);
}

/***********************************************************************************************************************
 * Serialization
 **********************************************************************************************************************/

std::string format_fixed2(double value)
{
    // glibc prints the exact decimal expansion, so rounding on the digits is rounding on the exact value.
    char buffer[512];
    std::snprintf(buffer, sizeof(buffer), "%.40f", std::fabs(value));

    std::string digits(buffer);
    const auto  dot = digits.find('.');

    const bool roundUp = digits[dot + 3] >= '5';
    digits.resize(dot + 3);

    if (roundUp) {
        auto i = static_cast<std::ptrdiff_t>(digits.size()) - 1;
        for (; i >= 0; --i) {
            if (digits[i] == '.') {
                continue;
            }

            if (digits[i] != '9') {
                ++digits[i];
                break;
            }

            digits[i] = '0';
        }

        if (i < 0) {
            digits.insert(digits.begin(), '1');
        }
    }

    if (std::signbit(value) && digits.find_first_not_of("0.") != std::string::npos) {
        digits.insert(digits.begin(), '-');
    }

    return digits;
}

std::string serialize_node_csv(std::span<const NodeRecord> records)
{
    std::string out;
    out.reserve((records.size() + 1) * 64);

    out.append(kNodeCsvHeader).push_back('\n');

    for (const auto& record : records) {
        append_int(out, record.timestamp);
        out.append(",").append(record.id.name);
        out.append(",").append(to_csv_token(record.arch));
        out.append(",").append(format_fixed2(record.cpu_load));
        out.append(",").append(format_fixed2(record.mem_free_gb));
        out.append(",").append(format_fixed2(record.disk_free_gb));
        out.append(",");
        append_int(out, record.jobs_running);
        out.append(",");
        append_int(out, record.cores_busy);
        out.append(",");
        append_int(out, record.cores_total);
        out.append(",").append(to_csv_token(record.status_reported));
        out.push_back('\n');
    }

    return out;
}

std::string serialize_sensor_csv(std::span<const SensorRecord> records)
{
    std::string out;
    out.reserve((records.size() + 1) * 48);

    out.append(kSensorCsvHeader).push_back('\n');

    for (const auto& record : records) {
        append_int(out, record.timestamp);
        out.append(",").append(record.id.name);
        out.append(",").append(record.zone);
        out.append(",").append(to_csv_token(record.kind));
        out.append(",");
        append_shortest(out, record.value);
        out.push_back('\n');
    }

    return out;
}

std::string serialize_job_csv(std::span<const JobRecord> records)
{
    std::string out;

    out.append(kJobCsvHeader).push_back('\n');

    for (const auto& record : records) {
        out.append(record.job_id);
        out.append(",").append(record.user);
        out.append(",").append(to_csv_token(record.arch_queue));
        out.append(",");
        append_int(out, record.slots);
        out.append(",");

        for (std::size_t i = 0; i < record.node_ids.size(); ++i) {
            if (i != 0) {
                out.push_back(';');
            }
            out.append(record.node_ids[i]);
        }

        out.push_back('\n');
    }

    return out;
}

} // namespace fleetmon
