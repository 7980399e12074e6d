/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "fleetmon/alerts.hpp"

#include <stdexcept>

namespace fleetmon {

namespace {

std::size_t index_of(ArchClass arch) noexcept
{
    return static_cast<std::size_t>(arch);
}

std::size_t index_of(Severity severity) noexcept
{
    return static_cast<std::size_t>(severity);
}

Alert make_alert(const NodeRecord& record, const AlertRule& rule, AlertDimension dimension, double observed,
    double threshold, Timestamp now)
{
    return Alert {record.id, rule.arch, dimension, rule.severity, observed, threshold, now};
}

} // namespace

/***********************************************************************************************************************
 * AlertRuleSet
 **********************************************************************************************************************/

AlertRuleSet AlertRuleSet::defaults()
{
    AlertRuleSet rules;

    for (auto arch : kAllArches) {
        rules.add(AlertRule {arch, 0.95, 8.0, 20.0, Severity::Warning});
        rules.add(AlertRule {arch, 0.99, 2.0, 5.0, Severity::Critical});
    }

    return rules;
}

void AlertRuleSet::add(const AlertRule& rule)
{
    if (find(rule.arch, rule.severity) != nullptr) {
        throw std::invalid_argument(std::string("duplicate alert rule for ") + std::string(to_wire(rule.arch)) + "/"
            + std::string(to_wire(rule.severity)));
    }

    set(rule);
}

void AlertRuleSet::set(const AlertRule& rule)
{
    if (auto reason = check_invariants(rule)) {
        throw std::invalid_argument("invalid alert rule: " + *reason);
    }

    mRules[index_of(rule.arch)][index_of(rule.severity)] = rule;
}

void AlertRuleSet::remove(ArchClass arch, Severity severity) noexcept
{
    mRules[index_of(arch)][index_of(severity)].reset();
}

const AlertRule* AlertRuleSet::find(ArchClass arch, Severity severity) const noexcept
{
    const auto& slot = mRules[index_of(arch)][index_of(severity)];

    return slot.has_value() ? &*slot : nullptr;
}

std::vector<AlertRule> AlertRuleSet::rules() const
{
    std::vector<AlertRule> result;

    for (const auto& perArch : mRules) {
        for (const auto& slot : perArch) {
            if (slot) {
                result.push_back(*slot);
            }
        }
    }

    return result;
}

/***********************************************************************************************************************
 * Thresholds
 **********************************************************************************************************************/

std::vector<Alert> evaluate_thresholds(
    const NodeRecord& record, const AlertRuleSet& rules, Timestamp now, Timestamp staleness_window)
{
    std::vector<Alert> alerts;

    if (record.status_reported == NodeStatus::Down) {
        return alerts;
    }

    for (auto severity : kAllSeverities) {
        const auto* rule = rules.find(record.arch, severity);
        if (rule == nullptr) {
            continue;
        }

        if (record.cpu_load > rule->cpu_load_max) {
            alerts.push_back(
                make_alert(record, *rule, AlertDimension::CpuLoad, record.cpu_load, rule->cpu_load_max, now));
        }

        if (record.mem_free_gb < rule->mem_free_min_gb) {
            alerts.push_back(
                make_alert(record, *rule, AlertDimension::MemFree, record.mem_free_gb, rule->mem_free_min_gb, now));
        }

        if (record.disk_free_gb < rule->disk_free_min_gb) {
            alerts.push_back(make_alert(
                record, *rule, AlertDimension::DiskFree, record.disk_free_gb, rule->disk_free_min_gb, now));
        }
    }

    if (const auto age = now - record.timestamp; age > staleness_window) {
        alerts.push_back(Alert {record.id, record.arch, AlertDimension::Stale, Severity::Warning,
            static_cast<double>(age), static_cast<double>(staleness_window), now});
    }

    return alerts;
}

/***********************************************************************************************************************
 * Analytics
 **********************************************************************************************************************/

void AnalyticsAccumulator::add_node(const NodeState& node) noexcept
{
    ++mResult.state_counts[index_of(node.record.arch)][static_cast<std::size_t>(node.appearance)];

    for (const auto& alert : node.alerts) {
        ++mResult.active_alerts[index_of(alert.severity)];
    }

    if (node.appearance != AppearanceState::Down && node.appearance != AppearanceState::Stale) {
        mCoresBusy += node.record.cores_busy;
        mCoresTotal += node.record.cores_total;
    }
}

void AnalyticsAccumulator::add_job(const JobRecord& job)
{
    ++mResult.total_jobs;
    mResult.per_user_slots[job.user] += job.slots;
}

SystemAnalytics AnalyticsAccumulator::finish() const
{
    auto result = mResult;

    result.fleet_utilization
        = mCoresTotal == 0 ? 0.0 : static_cast<double>(mCoresBusy) / static_cast<double>(mCoresTotal);

    return result;
}

SystemAnalytics compute_analytics(std::span<const NodeState> nodes, std::span<const JobRecord> jobs)
{
    AnalyticsAccumulator accumulator;

    for (const auto& node : nodes) {
        accumulator.add_node(node);
    }

    for (const auto& job : jobs) {
        accumulator.add_job(job);
    }

    return accumulator.finish();
}

/***********************************************************************************************************************
 * Slot admission
 **********************************************************************************************************************/

AdmitDecision admit_job(const JobRecord& request, const SlotPolicy& policy)
{
    const bool special = policy.special_users.count(request.user) != 0;
    const auto limit   = special ? policy.special_limit
          : policy.legacy_mode ? policy.legacy_default
                               : policy.default_limit;

    if (request.slots <= limit) {
        return AdmitDecision {true, limit, {}};
    }

    return AdmitDecision {false, limit,
        "job " + request.job_id + " requests " + std::to_string(request.slots) + " slots, limit for user "
            + request.user + " is " + std::to_string(limit)};
}

} // namespace fleetmon
