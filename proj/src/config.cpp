/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/config.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace fleetmon {

namespace {

constexpr std::array<std::string_view, kArchCount> kArchKeys {"amd", "intel", "knl", "gpu"};
constexpr std::array<std::string_view, 2>          kSeverityKeys {"warning", "critical"};

std::string_view trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }

    const auto last = text.find_last_not_of(" \t\r");

    return text.substr(first, last - first + 1);
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

class Parser {
public:
    explicit Parser(ServiceConfig& config)
        : mConfig(config)
    {
        register_keys();
    }

    void apply(std::size_t line, std::string_view key, std::string_view value)
    {
        mLine  = line;
        mKey   = key;
        mValue = value;

        if (key.starts_with("alerts.")) {
            apply_alert(key.substr(7));
            return;
        }

        const auto it = mHandlers.find(std::string(key));
        if (it == mHandlers.end()) {
            fail("unknown key '" + std::string(key) + "'");
        }

        it->second();
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ConfigError(mLine, message); }

    template <typename T>
    T integer(T min = std::numeric_limits<T>::min(), T max = std::numeric_limits<T>::max()) const
    {
        T parsed {};

        const auto [ptr, ec] = std::from_chars(mValue.data(), mValue.data() + mValue.size(), parsed);
        if (ec == std::errc::result_out_of_range) {
            fail(std::string(mKey) + ": value out of range");
        }

        if (ec != std::errc() || ptr != mValue.data() + mValue.size()) {
            fail(std::string(mKey) + ": expected an integer, got '" + std::string(mValue) + "'");
        }

        if (parsed < min || parsed > max) {
            fail(std::string(mKey) + ": value out of range");
        }

        return parsed;
    }

    double real() const
    {
        double parsed {};

        const auto [ptr, ec] = std::from_chars(mValue.data(), mValue.data() + mValue.size(), parsed);
        if (ec != std::errc() || ptr != mValue.data() + mValue.size() || !std::isfinite(parsed)) {
            fail(std::string(mKey) + ": expected a number, got '" + std::string(mValue) + "'");
        }

        return parsed;
    }

    bool boolean() const
    {
        if (mValue == "true") {
            return true;
        }

        if (mValue == "false") {
            return false;
        }

        fail(std::string(mKey) + ": expected true or false");
    }

    std::chrono::milliseconds seconds() const
    {
        const auto value = real();
        if (value <= 0.0) {
            fail(std::string(mKey) + ": must be positive");
        }

        return std::chrono::milliseconds(static_cast<std::int64_t>(value * 1000.0));
    }

    void on(std::string key, std::function<void()> handler) { mHandlers.emplace(std::move(key), std::move(handler)); }

    void register_keys()
    {
        auto& c = mConfig;

        on("feed.dir", [&] { c.feed_dir = std::string(mValue); });
        on("feed.poll_s", [&] { c.feed_poll = seconds(); });
        on("server.bind", [&] { c.bind_address = std::string(mValue); });
        on("server.port", [&] { c.port = integer<std::uint16_t>(); });
        on("sim.enabled", [&] { c.simulate = boolean(); });
        on("sim.nodes", [&] { c.sim.node_count = integer<std::size_t>(1); });
        on("sim.sensors", [&] { c.sim.sensor_count = integer<std::size_t>(0); });
        on("sim.scale", [&] { c.sim.scale_factor = integer<std::size_t>(1); });
        on("sim.seed", [&] { c.sim.seed = integer<std::uint64_t>(0); });
        on("sim.fault_rate", [&] { c.sim.fault_rate = real(); });
        on("sim.job_churn", [&] { c.sim.job_churn = real(); });
        on("sim.interval_s", [&] { c.sim_interval = seconds(); });
        on("update.strategy", [&] {
            try {
                c.strategy = UpdateStrategy::parse(mValue);
            } catch (const std::invalid_argument& e) {
                fail(std::string(mKey) + ": " + e.what());
            }
        });
        on("update.staleness_window_s", [&] { c.update.staleness_window = integer<Timestamp>(0); });
        on("store.history", [&] { c.history = integer<std::size_t>(1); });
        on("slots.default_limit", [&] { c.slots.default_limit = integer<std::uint32_t>(0); });
        on("slots.special_limit", [&] { c.slots.special_limit = integer<std::uint32_t>(0); });
        on("slots.legacy_default", [&] { c.slots.legacy_default = integer<std::uint32_t>(0); });
        on("slots.legacy_mode", [&] { c.slots.legacy_mode = boolean(); });
        on("slots.special_users", [&] {
            c.slots.special_users.clear();
            for (auto user : split(mValue, ',')) {
                user = trim(user);
                if (!user.empty()) {
                    c.slots.special_users.emplace(user);
                }
            }
        });

        for (std::size_t i = 0; i < kArchCount; ++i) {
            const auto arch = std::string(kArchKeys[i]);

            on("sim.mix." + arch, [&, i] { c.sim.arch_mix[i] = real(); });
            on("sim.cores." + arch, [&, i] { c.sim.cores_per_arch[i] = integer<std::uint32_t>(1); });
        }
    }

    // alerts.<arch>.<severity>.<field>
    void apply_alert(std::string_view rest)
    {
        const auto parts = split(rest, '.');
        if (parts.size() != 3) {
            fail("unknown key '" + std::string(mKey) + "'");
        }

        const auto archIt     = std::find(kArchKeys.begin(), kArchKeys.end(), parts[0]);
        const auto severityIt = std::find(kSeverityKeys.begin(), kSeverityKeys.end(), parts[1]);
        if (archIt == kArchKeys.end() || severityIt == kSeverityKeys.end()) {
            fail("unknown key '" + std::string(mKey) + "'");
        }

        const auto arch     = kAllArches[static_cast<std::size_t>(archIt - kArchKeys.begin())];
        const auto severity = kAllSeverities[static_cast<std::size_t>(severityIt - kSeverityKeys.begin())];

        AlertRule rule {arch, 1.0, 0.0, 0.0, severity};
        if (const auto* existing = mConfig.rules.find(arch, severity)) {
            rule = *existing;
        }

        const auto field = parts[2];
        if (field == "enabled") {
            if (boolean()) {
                mConfig.rules.set(rule);
            } else {
                mConfig.rules.remove(arch, severity);
            }
            return;
        }

        if (field == "cpu_load_max") {
            rule.cpu_load_max = real();
        } else if (field == "mem_free_min_gb") {
            rule.mem_free_min_gb = real();
        } else if (field == "disk_free_min_gb") {
            rule.disk_free_min_gb = real();
        } else {
            fail("unknown key '" + std::string(mKey) + "'");
        }

        try {
            mConfig.rules.set(rule);
        } catch (const std::invalid_argument& e) {
            fail(std::string(mKey) + ": " + e.what());
        }
    }

    ServiceConfig&                                         mConfig;
    std::unordered_map<std::string, std::function<void()>> mHandlers;
    std::size_t                                            mLine {};
    std::string_view                                       mKey;
    std::string_view                                       mValue;
};

} // namespace

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message)
    , mLine(line)
{
}

ServiceConfig parse_config(std::string_view text)
{
    ServiceConfig config;
    Parser        parser(config);

    std::size_t lineNo = 0;
    for (auto line : split(text, '\n')) {
        ++lineNo;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }

        line = trim(line);
        if (line.empty()) {
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(lineNo, "expected 'key = value'");
        }

        const auto key   = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(lineNo, "empty key");
        }

        parser.apply(lineNo, key, value);
    }

    try {
        config.sim.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, std::string("sim: ") + e.what());
    }

    return config;
}

ServiceConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(0, "cannot open config file " + path.string());
    }

    std::ostringstream content;
    content << in.rdbuf();

    return parse_config(content.str());
}

} // namespace fleetmon
