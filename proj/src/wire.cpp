/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/wire.hpp"

#include <stdexcept>

namespace fleetmon {

using nlohmann::json;

namespace {

template <typename Enum>
Enum enum_field(const json& j, const char* key, std::optional<Enum> (*convert)(std::string_view) noexcept)
{
    const auto token = j.at(key).get<std::string>();

    auto value = convert(token);
    if (!value) {
        throw std::invalid_argument(std::string(key) + ": unknown token '" + token + "'");
    }

    return *value;
}

} // namespace

void to_json(json& j, const NodeRecord& record)
{
    j = json {
        {"id", record.id.name},
        {"arch", to_wire(record.arch)},
        {"timestamp", record.timestamp},
        {"cpu_load", record.cpu_load},
        {"mem_free_gb", record.mem_free_gb},
        {"disk_free_gb", record.disk_free_gb},
        {"jobs_running", record.jobs_running},
        {"cores_busy", record.cores_busy},
        {"cores_total", record.cores_total},
        {"status_reported", to_wire(record.status_reported)},
    };
}

void from_json(const json& j, NodeRecord& record)
{
    record.id              = EntityId {j.at("id").get<std::string>(), EntityKind::Node};
    record.arch            = enum_field<ArchClass>(j, "arch", arch_from_wire);
    record.timestamp       = j.at("timestamp").get<Timestamp>();
    record.cpu_load        = j.at("cpu_load").get<double>();
    record.mem_free_gb     = j.at("mem_free_gb").get<double>();
    record.disk_free_gb    = j.at("disk_free_gb").get<double>();
    record.jobs_running    = j.at("jobs_running").get<std::uint32_t>();
    record.cores_busy      = j.at("cores_busy").get<std::uint32_t>();
    record.cores_total     = j.at("cores_total").get<std::uint32_t>();
    record.status_reported = enum_field<NodeStatus>(j, "status_reported", status_from_wire);
}

void to_json(json& j, const SensorRecord& record)
{
    j = json {
        {"id", record.id.name},
        {"zone", record.zone},
        {"kind", to_wire(record.kind)},
        {"timestamp", record.timestamp},
        {"value", record.value},
    };
}

void from_json(const json& j, SensorRecord& record)
{
    record.id        = EntityId {j.at("id").get<std::string>(), EntityKind::Sensor};
    record.zone      = j.at("zone").get<std::string>();
    record.kind      = enum_field<SensorKind>(j, "kind", sensor_kind_from_wire);
    record.timestamp = j.at("timestamp").get<Timestamp>();
    record.value     = j.at("value").get<double>();
}

void to_json(json& j, const JobRecord& record)
{
    j = json {
        {"job_id", record.job_id},
        {"user", record.user},
        {"arch_queue", to_wire(record.arch_queue)},
        {"slots", record.slots},
        {"node_ids", record.node_ids},
    };
}

void from_json(const json& j, JobRecord& record)
{
    record.job_id     = j.at("job_id").get<std::string>();
    record.user       = j.at("user").get<std::string>();
    record.arch_queue = enum_field<ArchClass>(j, "arch_queue", arch_from_wire);
    record.slots      = j.at("slots").get<std::uint32_t>();
    record.node_ids   = j.at("node_ids").get<std::vector<std::string>>();
}

void to_json(json& j, const Alert& alert)
{
    j = json {
        {"entity", alert.entity.name},
        {"entity_kind", to_wire(alert.entity.kind)},
        {"rule_arch", to_wire(alert.rule_arch)},
        {"dimension", to_wire(alert.dimension)},
        {"severity", to_wire(alert.severity)},
        {"observed", alert.observed},
        {"threshold", alert.threshold},
        {"raised_at", alert.raised_at},
    };
}

void from_json(const json& j, Alert& alert)
{
    alert.entity    = EntityId {j.at("entity").get<std::string>(),
        enum_field<EntityKind>(j, "entity_kind", entity_kind_from_wire)};
    alert.rule_arch = enum_field<ArchClass>(j, "rule_arch", arch_from_wire);
    alert.dimension = enum_field<AlertDimension>(j, "dimension", dimension_from_wire);
    alert.severity  = enum_field<Severity>(j, "severity", severity_from_wire);
    alert.observed  = j.at("observed").get<double>();
    alert.threshold = j.at("threshold").get<double>();
    alert.raised_at = j.at("raised_at").get<Timestamp>();
}

void to_json(json& j, const SystemAnalytics& analytics)
{
    json stateCounts = json::object();
    for (auto arch : kAllArches) {
        json perArch = json::object();
        for (auto state : kAllAppearances) {
            perArch[std::string(to_wire(state))] = analytics.count(arch, state);
        }
        stateCounts[std::string(to_wire(arch))] = std::move(perArch);
    }

    json activeAlerts = json::object();
    for (auto severity : kAllSeverities) {
        activeAlerts[std::string(to_wire(severity))] = analytics.active_alerts[static_cast<std::size_t>(severity)];
    }

    j = json {
        {"state_counts", std::move(stateCounts)},
        {"total_jobs", analytics.total_jobs},
        {"fleet_utilization", analytics.fleet_utilization},
        {"active_alerts", std::move(activeAlerts)},
        {"per_user_slots", analytics.per_user_slots},
    };
}

void from_json(const json& j, SystemAnalytics& analytics)
{
    analytics = SystemAnalytics {};

    const auto& stateCounts = j.at("state_counts");
    for (auto arch : kAllArches) {
        const auto& perArch = stateCounts.at(std::string(to_wire(arch)));
        for (auto state : kAllAppearances) {
            analytics.state_counts[static_cast<std::size_t>(arch)][static_cast<std::size_t>(state)]
                = perArch.at(std::string(to_wire(state))).get<std::uint64_t>();
        }
    }

    for (auto severity : kAllSeverities) {
        analytics.active_alerts[static_cast<std::size_t>(severity)]
            = j.at("active_alerts").at(std::string(to_wire(severity))).get<std::uint64_t>();
    }

    analytics.total_jobs        = j.at("total_jobs").get<std::uint64_t>();
    analytics.fleet_utilization = j.at("fleet_utilization").get<double>();
    analytics.per_user_slots    = j.at("per_user_slots").get<std::map<std::string, std::uint64_t>>();
}

void to_json(json& j, const UpdateReport& report)
{
    j = json {
        {"strategy", report.strategy.name()},
        {"batch_id", report.batch_id},
        {"ticks_consumed", report.ticks_consumed},
        {"top_level_invocations", report.top_level_invocations},
        {"per_entity_callbacks", report.per_entity_callbacks},
        {"phase_durations",
            {
                {"pod", report.phase_durations.pod},
                {"nodes", report.phase_durations.nodes},
                {"analytics", report.phase_durations.analytics},
            }},
        {"entities_touched", report.entities_touched},
        {"phase_callbacks", {{"pod", report.phase_callbacks.pod}, {"nodes", report.phase_callbacks.nodes}}},
        {"startup", report.startup},
        {"rejected", report.rejected},
    };

    if (report.rejected) {
        j["error"] = report.error;
    }
}

json node_bundle_json(const NodeState& node)
{
    return json {
        {"kind", to_wire(EntityKind::Node)},
        {"record", node.record},
        {"appearance", to_wire(node.appearance)},
        {"color", color_of(node.appearance)},
        {"alerts", node.alerts},
    };
}

NodeState node_state_from_bundle(const json& bundle)
{
    NodeState node;

    node.record     = bundle.at("record").get<NodeRecord>();
    node.appearance = enum_field<AppearanceState>(bundle, "appearance", appearance_from_wire);
    node.alerts     = bundle.at("alerts").get<std::vector<Alert>>();

    return node;
}

json sensor_bundle_json(const SensorRecord& sensor)
{
    return json {
        {"kind", to_wire(EntityKind::Sensor)},
        {"record", sensor},
    };
}

json snapshot_json(const FleetSnapshot& snapshot)
{
    json nodes = json::array();
    for (const auto* node : snapshot.sorted_nodes()) {
        nodes.push_back(node_bundle_json(*node));
    }

    json sensors = json::array();
    for (const auto* sensor : snapshot.sorted_sensors()) {
        sensors.push_back(sensor_bundle_json(*sensor));
    }

    json jobs = json::array();
    for (const auto& [id, job] : *snapshot.jobs) {
        jobs.push_back(job);
    }

    return json {
        {"version", snapshot.version},
        {"last_batch_id", snapshot.last_batch_id},
        {"produced_at", snapshot.produced_at},
        {"nodes", std::move(nodes)},
        {"sensors", std::move(sensors)},
        {"jobs", std::move(jobs)},
        {"analytics", snapshot.analytics},
    };
}

json delta_json(const Delta& delta)
{
    if (delta.full_resync) {
        return json {
            {"since", delta.since},
            {"version", delta.version},
            {"full_resync", true},
        };
    }

    json nodes = json::array();
    for (const auto* node : delta.nodes) {
        nodes.push_back(node_bundle_json(*node));
    }

    json sensors = json::array();
    for (const auto* sensor : delta.sensors) {
        sensors.push_back(sensor_bundle_json(*sensor));
    }

    return json {
        {"since", delta.since},
        {"version", delta.version},
        {"full_resync", false},
        {"nodes", std::move(nodes)},
        {"sensors", std::move(sensors)},
        {"jobs_upserted", delta.jobs_upserted},
        {"jobs_removed", delta.jobs_removed},
        {"analytics", delta.snapshot->analytics},
    };
}

} // namespace fleetmon
