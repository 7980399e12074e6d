/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_MODEL_HPP_
#define FLEETMON_MODEL_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fleetmon {

/// Seconds since the Unix epoch.
using Timestamp = std::int64_t;

enum class EntityKind { Node, Sensor };

/**
 * Name of a node or sensor. Names are CSV-safe tokens: non-empty, no whitespace, no commas, no ';'.
 */
struct EntityId {
    std::string name;
    EntityKind  kind {EntityKind::Node};

    bool operator==(const EntityId&) const  = default;
    auto operator<=>(const EntityId&) const = default;
};

/// True if the string can be used as an entity name or any other CSV token.
bool is_valid_token(std::string_view token) noexcept;

enum class ArchClass { AMD, Intel, KNL, GPU };

inline constexpr std::size_t kArchCount = 4;
inline constexpr std::array<ArchClass, kArchCount> kAllArches {
    ArchClass::AMD, ArchClass::Intel, ArchClass::KNL, ArchClass::GPU};

enum class NodeStatus { Up, Down };

struct NodeRecord {
    EntityId      id;
    ArchClass     arch {ArchClass::AMD};
    Timestamp     timestamp {};
    double        cpu_load {};
    double        mem_free_gb {};
    double        disk_free_gb {};
    std::uint32_t jobs_running {};
    std::uint32_t cores_busy {};
    std::uint32_t cores_total {1};
    NodeStatus    status_reported {NodeStatus::Up};

    bool operator==(const NodeRecord&) const = default;
};

enum class SensorKind { TemperatureC, HumidityPct, AirflowCfm, PowerKw };

inline constexpr std::array<SensorKind, 4> kAllSensorKinds {
    SensorKind::TemperatureC, SensorKind::HumidityPct, SensorKind::AirflowCfm, SensorKind::PowerKw};

struct SensorRecord {
    EntityId   id {{}, EntityKind::Sensor};
    std::string zone;
    SensorKind kind {SensorKind::TemperatureC};
    Timestamp  timestamp {};
    double     value {};

    bool operator==(const SensorRecord&) const = default;
};

struct JobRecord {
    std::string              job_id;
    std::string              user;
    ArchClass                arch_queue {ArchClass::AMD};
    std::uint32_t            slots {1};
    std::vector<std::string> node_ids;

    bool operator==(const JobRecord&) const = default;
};

enum class Severity { Warning, Critical };

inline constexpr std::array<Severity, 2> kAllSeverities {Severity::Warning, Severity::Critical};

struct AlertRule {
    ArchClass arch {ArchClass::AMD};
    double    cpu_load_max {1.0};
    double    mem_free_min_gb {};
    double    disk_free_min_gb {};
    Severity  severity {Severity::Warning};

    bool operator==(const AlertRule&) const = default;
};

enum class AlertDimension { CpuLoad, MemFree, DiskFree, Stale };

struct Alert {
    EntityId       entity;
    ArchClass      rule_arch {ArchClass::AMD};
    AlertDimension dimension {AlertDimension::CpuLoad};
    Severity       severity {Severity::Warning};
    double         observed {};
    double         threshold {};
    Timestamp      raised_at {};

    bool operator==(const Alert&) const = default;
};

enum class AppearanceState { Ok, Warning, Alert, Down, Stale };

inline constexpr std::size_t kAppearanceCount = 5;
inline constexpr std::array<AppearanceState, kAppearanceCount> kAllAppearances {AppearanceState::Ok,
    AppearanceState::Warning, AppearanceState::Alert, AppearanceState::Down, AppearanceState::Stale};

/// Console color for a state: green, yellow, red, gray, blue.
std::string_view color_of(AppearanceState state) noexcept;

struct SystemAnalytics {
    /// Indexed [arch][appearance].
    std::array<std::array<std::uint64_t, kAppearanceCount>, kArchCount> state_counts {};
    std::uint64_t                                                       total_jobs {};
    double                                                              fleet_utilization {};
    /// Indexed by Severity.
    std::array<std::uint64_t, 2>         active_alerts {};
    std::map<std::string, std::uint64_t> per_user_slots;

    std::uint64_t count(ArchClass arch, AppearanceState state) const noexcept;
    std::uint64_t node_total() const noexcept;

    bool operator==(const SystemAnalytics&) const = default;
};

/// A node as held by the store: its latest record plus the state derived from it.
struct NodeState {
    NodeRecord         record;
    AppearanceState    appearance {AppearanceState::Ok};
    std::vector<Alert> alerts;

    bool operator==(const NodeState&) const = default;
};

/*
 * Enum <-> token conversions. CSV tokens use the mixed-case names ("KNL", "TemperatureC", "Up"); JSON payloads use
 * the uppercase forms ("KNL", "TEMPERATURE_C", "UP").
 */

std::string_view       to_csv_token(ArchClass arch) noexcept;
std::string_view       to_csv_token(SensorKind kind) noexcept;
std::string_view       to_csv_token(NodeStatus status) noexcept;
std::optional<ArchClass>  arch_from_csv(std::string_view token) noexcept;
std::optional<SensorKind> sensor_kind_from_csv(std::string_view token) noexcept;
std::optional<NodeStatus> status_from_csv(std::string_view token) noexcept;

std::string_view to_wire(EntityKind kind) noexcept;
std::string_view to_wire(ArchClass arch) noexcept;
std::string_view to_wire(SensorKind kind) noexcept;
std::string_view to_wire(NodeStatus status) noexcept;
std::string_view to_wire(Severity severity) noexcept;
std::string_view to_wire(AlertDimension dimension) noexcept;
std::string_view to_wire(AppearanceState state) noexcept;

std::optional<EntityKind>      entity_kind_from_wire(std::string_view token) noexcept;
std::optional<ArchClass>       arch_from_wire(std::string_view token) noexcept;
std::optional<SensorKind>      sensor_kind_from_wire(std::string_view token) noexcept;
std::optional<NodeStatus>      status_from_wire(std::string_view token) noexcept;
std::optional<Severity>        severity_from_wire(std::string_view token) noexcept;
std::optional<AlertDimension>  dimension_from_wire(std::string_view token) noexcept;
std::optional<AppearanceState> appearance_from_wire(std::string_view token) noexcept;

/*
 * Invariant checks. Each returns a human-readable reason for the first violated invariant, or nullopt.
 */

std::optional<std::string> check_invariants(const NodeRecord& record);
std::optional<std::string> check_invariants(const SensorRecord& record);
std::optional<std::string> check_invariants(const JobRecord& record);
std::optional<std::string> check_invariants(const AlertRule& rule);

/**
 * Derives the display state of a node.
 *
 * Precedence: Down, then Stale (now - timestamp > staleness window), then Alert (any Critical), then Warning
 * (any Warning), then Ok.
 */
AppearanceState derive_appearance(
    const NodeRecord& record, std::span<const Alert> alerts, Timestamp now, Timestamp staleness_window) noexcept;

} // namespace fleetmon

#endif
