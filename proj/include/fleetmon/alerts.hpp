/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_ALERTS_HPP_
#define FLEETMON_ALERTS_HPP_

#include <set>
#include <span>
#include <string>
#include <vector>

#include "fleetmon/model.hpp"

namespace fleetmon {

/**
 * Threshold rules keyed by (arch, severity), at most one rule per key.
 */
class AlertRuleSet {
public:
    /// Shipped configuration defaults (placeholders, not measured values): cpu 0.95/0.99, mem 8/2 GB, disk 20/5 GB.
    static AlertRuleSet defaults();

    /// Adds a rule; throws std::invalid_argument on a duplicate key or an invalid rule.
    void add(const AlertRule& rule);

    /// Adds or replaces the rule for the rule's key.
    void set(const AlertRule& rule);

    void remove(ArchClass arch, Severity severity) noexcept;

    const AlertRule* find(ArchClass arch, Severity severity) const noexcept;

    std::vector<AlertRule> rules() const;

    bool operator==(const AlertRuleSet&) const = default;

private:
    std::array<std::array<std::optional<AlertRule>, 2>, kArchCount> mRules {};
};

/**
 * Evaluates one node record against the rules for its architecture.
 *
 * Each violated dimension yields one alert per violated severity (strict inequalities: load above the maximum, free
 * memory or disk below the minimum). A record older than the staleness window also yields a Warning-severity Stale
 * alert. Down nodes yield no alerts.
 */
std::vector<Alert> evaluate_thresholds(
    const NodeRecord& record, const AlertRuleSet& rules, Timestamp now, Timestamp staleness_window);

/**
 * Incremental form of compute_analytics, for callers that walk their own node storage.
 */
class AnalyticsAccumulator {
public:
    void add_node(const NodeState& node) noexcept;
    void add_job(const JobRecord& job);

    SystemAnalytics finish() const;

private:
    SystemAnalytics mResult;
    std::uint64_t   mCoresBusy {};
    std::uint64_t   mCoresTotal {};
};

/**
 * Aggregates fleet analytics. Down and Stale nodes are excluded from utilization; an empty fleet has utilization 0.
 */
SystemAnalytics compute_analytics(std::span<const NodeState> nodes, std::span<const JobRecord> jobs);

/**
 * Per-run job slot limits.
 */
struct SlotPolicy {
    std::uint32_t         default_limit {8192};
    std::uint32_t         special_limit {16384};
    std::uint32_t         legacy_default {2048};
    std::set<std::string> special_users;
    /// Apply legacy_default instead of default_limit to ordinary users.
    bool legacy_mode {false};

    bool operator==(const SlotPolicy&) const = default;
};

struct AdmitDecision {
    bool          admitted {};
    std::uint32_t limit {};
    std::string   reason;
};

/// Checks a single run's slot request against the user's limit. Stateless: usage by other runs is not counted.
AdmitDecision admit_job(const JobRecord& request, const SlotPolicy& policy);

} // namespace fleetmon

#endif
