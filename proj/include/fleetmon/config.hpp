/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_CONFIG_HPP_
#define FLEETMON_CONFIG_HPP_

#include <chrono>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "fleetmon/alerts.hpp"
#include "fleetmon/simulator.hpp"
#include "fleetmon/update.hpp"

namespace fleetmon {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& message);

    std::size_t line() const noexcept { return mLine; }

private:
    std::size_t mLine;
};

/**
 * Service configuration. Parsed from `key = value` lines; `#` starts a comment.
 */
struct ServiceConfig {
    std::filesystem::path     feed_dir;
    std::chrono::milliseconds feed_poll {std::chrono::seconds(5)};

    std::string   bind_address {"127.0.0.1"};
    std::uint16_t port {8080};

    bool                      simulate {};
    FleetConfig               sim;
    std::chrono::milliseconds sim_interval {std::chrono::seconds(5)};

    UpdateStrategy strategy {UpdateStrategy::managed()};
    UpdateConfig   update;
    std::size_t    history {SnapshotStore::kDefaultHistory};

    AlertRuleSet rules {AlertRuleSet::defaults()};
    SlotPolicy   slots;
};

/// Parses config text over the defaults. Throws ConfigError on unknown keys or bad values.
ServiceConfig parse_config(std::string_view text);

/// Reads and parses a config file. Throws ConfigError (line 0 for I/O failures).
ServiceConfig load_config(const std::filesystem::path& path);

} // namespace fleetmon

#endif
