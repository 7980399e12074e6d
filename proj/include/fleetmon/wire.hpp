/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_WIRE_HPP_
#define FLEETMON_WIRE_HPP_

#include <json.hpp>

#include "fleetmon/store.hpp"
#include "fleetmon/update.hpp"

namespace fleetmon {

/*
 * JSON payloads. Field names follow the domain types in snake_case; enums are uppercase tokens; timestamps are
 * integer epoch seconds. Each from_json throws nlohmann::json::exception or std::invalid_argument on bad input.
 */

void to_json(nlohmann::json& j, const NodeRecord& record);
void from_json(const nlohmann::json& j, NodeRecord& record);
void to_json(nlohmann::json& j, const SensorRecord& record);
void from_json(const nlohmann::json& j, SensorRecord& record);
void to_json(nlohmann::json& j, const JobRecord& record);
void from_json(const nlohmann::json& j, JobRecord& record);
void to_json(nlohmann::json& j, const Alert& alert);
void from_json(const nlohmann::json& j, Alert& alert);
void to_json(nlohmann::json& j, const SystemAnalytics& analytics);
void from_json(const nlohmann::json& j, SystemAnalytics& analytics);
void to_json(nlohmann::json& j, const UpdateReport& report);

/// {"kind":"NODE","record":{...},"appearance":"OK","color":"green","alerts":[...]}
nlohmann::json node_bundle_json(const NodeState& node);
NodeState      node_state_from_bundle(const nlohmann::json& bundle);

/// {"kind":"SENSOR","record":{...}}
nlohmann::json sensor_bundle_json(const SensorRecord& sensor);

/// Full dump: version, last_batch_id, produced_at, nodes and sensors (name order), jobs, analytics.
nlohmann::json snapshot_json(const FleetSnapshot& snapshot);

/// Delta payload; a full_resync delta carries only since, version and the marker.
nlohmann::json delta_json(const Delta& delta);

} // namespace fleetmon

#endif
