/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fleetmon {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> find_token(
    const std::array<std::string_view, N>& tokens, std::string_view token) noexcept
{
    for (std::size_t i = 0; i < N; ++i) {
        if (tokens[i] == token) {
            return static_cast<Enum>(i);
        }
    }

    return std::nullopt;
}

constexpr std::array<std::string_view, 4> kArchCsv {"AMD", "Intel", "KNL", "GPU"};
constexpr std::array<std::string_view, 4> kArchWire {"AMD", "INTEL", "KNL", "GPU"};
constexpr std::array<std::string_view, 4> kSensorKindCsv {"TemperatureC", "HumidityPct", "AirflowCfm", "PowerKw"};
constexpr std::array<std::string_view, 4> kSensorKindWire {"TEMPERATURE_C", "HUMIDITY_PCT", "AIRFLOW_CFM", "POWER_KW"};
constexpr std::array<std::string_view, 2> kStatusCsv {"Up", "Down"};
constexpr std::array<std::string_view, 2> kStatusWire {"UP", "DOWN"};
constexpr std::array<std::string_view, 2> kEntityKindWire {"NODE", "SENSOR"};
constexpr std::array<std::string_view, 2> kSeverityWire {"WARNING", "CRITICAL"};
constexpr std::array<std::string_view, 4> kDimensionWire {"CPU_LOAD", "MEM_FREE", "DISK_FREE", "STALE"};
constexpr std::array<std::string_view, 5> kAppearanceWire {"OK", "WARNING", "ALERT", "DOWN", "STALE"};
constexpr std::array<std::string_view, 5> kColors {"green", "yellow", "red", "gray", "blue"};

bool is_finite_non_negative(double value) noexcept
{
    return std::isfinite(value) && value >= 0.0;
}

} // namespace

bool is_valid_token(std::string_view token) noexcept
{
    if (token.empty()) {
        return false;
    }

    return std::none_of(token.begin(), token.end(), [](char c) {
        return c == ',' || c == ';' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    });
}

std::string_view color_of(AppearanceState state) noexcept
{
    return kColors[static_cast<std::size_t>(state)];
}

std::uint64_t SystemAnalytics::count(ArchClass arch, AppearanceState state) const noexcept
{
    return state_counts[static_cast<std::size_t>(arch)][static_cast<std::size_t>(state)];
}

std::uint64_t SystemAnalytics::node_total() const noexcept
{
    std::uint64_t total = 0;

    for (const auto& perArch : state_counts) {
        total = std::accumulate(perArch.begin(), perArch.end(), total);
    }

    return total;
}

/***********************************************************************************************************************
 * Tokens
 **********************************************************************************************************************/

std::string_view to_csv_token(ArchClass arch) noexcept
{
    return kArchCsv[static_cast<std::size_t>(arch)];
}

std::string_view to_csv_token(SensorKind kind) noexcept
{
    return kSensorKindCsv[static_cast<std::size_t>(kind)];
}

std::string_view to_csv_token(NodeStatus status) noexcept
{
    return kStatusCsv[static_cast<std::size_t>(status)];
}

std::optional<ArchClass> arch_from_csv(std::string_view token) noexcept
{
    return find_token<ArchClass>(kArchCsv, token);
}

std::optional<SensorKind> sensor_kind_from_csv(std::string_view token) noexcept
{
    return find_token<SensorKind>(kSensorKindCsv, token);
}

std::optional<NodeStatus> status_from_csv(std::string_view token) noexcept
{
    return find_token<NodeStatus>(kStatusCsv, token);
}

std::string_view to_wire(EntityKind kind) noexcept
{
    return kEntityKindWire[static_cast<std::size_t>(kind)];
}

std::string_view to_wire(ArchClass arch) noexcept
{
    return kArchWire[static_cast<std::size_t>(arch)];
}

std::string_view to_wire(SensorKind kind) noexcept
{
    return kSensorKindWire[static_cast<std::size_t>(kind)];
}

std::string_view to_wire(NodeStatus status) noexcept
{
    return kStatusWire[static_cast<std::size_t>(status)];
}

std::string_view to_wire(Severity severity) noexcept
{
    return kSeverityWire[static_cast<std::size_t>(severity)];
}

std::string_view to_wire(AlertDimension dimension) noexcept
{
    return kDimensionWire[static_cast<std::size_t>(dimension)];
}

std::string_view to_wire(AppearanceState state) noexcept
{
    return kAppearanceWire[static_cast<std::size_t>(state)];
}

std::optional<EntityKind> entity_kind_from_wire(std::string_view token) noexcept
{
    return find_token<EntityKind>(kEntityKindWire, token);
}

std::optional<ArchClass> arch_from_wire(std::string_view token) noexcept
{
    return find_token<ArchClass>(kArchWire, token);
}

std::optional<SensorKind> sensor_kind_from_wire(std::string_view token) noexcept
{
    return find_token<SensorKind>(kSensorKindWire, token);
}

std::optional<NodeStatus> status_from_wire(std::string_view token) noexcept
{
    return find_token<NodeStatus>(kStatusWire, token);
}

std::optional<Severity> severity_from_wire(std::string_view token) noexcept
{
    return find_token<Severity>(kSeverityWire, token);
}

std::optional<AlertDimension> dimension_from_wire(std::string_view token) noexcept
{
    return find_token<AlertDimension>(kDimensionWire, token);
}

std::optional<AppearanceState> appearance_from_wire(std::string_view token) noexcept
{
    return find_token<AppearanceState>(kAppearanceWire, token);
}

/***********************************************************************************************************************
 * Invariants
 **********************************************************************************************************************/

std::optional<std::string> check_invariants(const NodeRecord& record)
{
    if (record.id.kind != EntityKind::Node) {
        return "node record carries a non-node id";
    }

    if (!is_valid_token(record.id.name)) {
        return "node_id is not a valid token";
    }

    if (!is_finite_non_negative(record.cpu_load)) {
        return "cpu_load must be a finite value >= 0";
    }

    if (!is_finite_non_negative(record.mem_free_gb)) {
        return "mem_free_gb must be a finite value >= 0";
    }

    if (!is_finite_non_negative(record.disk_free_gb)) {
        return "disk_free_gb must be a finite value >= 0";
    }

    if (record.cores_total < 1) {
        return "cores_total must be >= 1";
    }

    if (record.cores_busy > record.cores_total) {
        return "cores_busy exceeds cores_total";
    }

    if (record.status_reported == NodeStatus::Down && record.jobs_running != 0) {
        return "jobs_running must be 0 for a Down node";
    }

    return std::nullopt;
}

std::optional<std::string> check_invariants(const SensorRecord& record)
{
    if (record.id.kind != EntityKind::Sensor) {
        return "sensor record carries a non-sensor id";
    }

    if (!is_valid_token(record.id.name)) {
        return "sensor_id is not a valid token";
    }

    if (!is_valid_token(record.zone)) {
        return "zone is not a valid token";
    }

    if (!std::isfinite(record.value)) {
        return "value must be finite";
    }

    switch (record.kind) {
    case SensorKind::HumidityPct:
        if (record.value < 0.0 || record.value > 100.0) {
            return "humidity must lie in [0, 100]";
        }
        break;
    case SensorKind::AirflowCfm:
    case SensorKind::PowerKw:
        if (record.value < 0.0) {
            return "airflow and power must be >= 0";
        }
        break;
    case SensorKind::TemperatureC:
        break;
    }

    return std::nullopt;
}

std::optional<std::string> check_invariants(const JobRecord& record)
{
    if (!is_valid_token(record.job_id)) {
        return "job_id is not a valid token";
    }

    if (!is_valid_token(record.user)) {
        return "user is not a valid token";
    }

    if (record.slots < 1) {
        return "slots must be >= 1";
    }

    if (record.node_ids.empty()) {
        return "a running job needs at least one node";
    }

    if (record.slots < record.node_ids.size()) {
        return "slots must be >= number of nodes";
    }

    if (!std::all_of(record.node_ids.begin(), record.node_ids.end(), is_valid_token)) {
        return "node_ids contains an invalid token";
    }

    return std::nullopt;
}

std::optional<std::string> check_invariants(const AlertRule& rule)
{
    if (!(rule.cpu_load_max > 0.0) || !std::isfinite(rule.cpu_load_max)) {
        return "cpu_load_max must be > 0";
    }

    if (!is_finite_non_negative(rule.mem_free_min_gb)) {
        return "mem_free_min_gb must be >= 0";
    }

    if (!is_finite_non_negative(rule.disk_free_min_gb)) {
        return "disk_free_min_gb must be >= 0";
    }

    return std::nullopt;
}

/***********************************************************************************************************************
 * Appearance
 **********************************************************************************************************************/

AppearanceState derive_appearance(
    const NodeRecord& record, std::span<const Alert> alerts, Timestamp now, Timestamp staleness_window) noexcept
{
    if (record.status_reported == NodeStatus::Down) {
        return AppearanceState::Down;
    }

    if (now - record.timestamp > staleness_window) {
        return AppearanceState::Stale;
    }

    bool warning = false;

    for (const auto& alert : alerts) {
        if (alert.severity == Severity::Critical) {
            return AppearanceState::Alert;
        }

        warning = true;
    }

    return warning ? AppearanceState::Warning : AppearanceState::Ok;
}

} // namespace fleetmon
