/*
 * Copyright (C) 2026 fleetmon contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef FLEETMON_SIMULATOR_HPP_
#define FLEETMON_SIMULATOR_HPP_

#include <array>
#include <random>

#include "fleetmon/ingest.hpp"

namespace fleetmon {

/**
 * Synthetic fleet parameters. Defaults are desk-scale placeholders except sensor_count, which matches the size of
 * the environmental sensor feed being modeled.
 */
struct FleetConfig {
    std::size_t                       node_count {1000};
    std::size_t                       sensor_count {5000};
    std::array<double, kArchCount>    arch_mix {0.2, 0.2, 0.5, 0.1};
    std::size_t                       scale_factor {1};
    std::uint64_t                     seed {1};
    double                            fault_rate {0.01};
    std::array<std::uint32_t, kArchCount> cores_per_arch {32, 32, 64, 40};
    std::array<double, kArchCount>    mem_capacity_gb {256, 192, 96, 384};
    double                            disk_capacity_gb {900};
    double                            cpu_step {0.05};
    double                            mem_step_gb {2};
    double                            disk_step_gb {5};
    /// Multiplier on the per-kind sensor walk steps (0 freezes sensor values).
    double sensor_step_scale {1.0};
    /// Per-tick probability that a running job finishes and is replaced.
    double    job_churn {0.05};
    Timestamp start_time {1700000000};
    Timestamp tick_seconds {60};

    /// Throws std::invalid_argument when the mix does not sum to 1 or the fleet would be empty.
    void validate() const;

    std::size_t total_nodes() const noexcept { return node_count * scale_factor; }
    std::size_t total_sensors() const noexcept { return sensor_count * scale_factor; }
};

inline constexpr std::size_t kSimulatorZones = 8;

/// Splits total by proportions using largest-remainder rounding; ties go to the earlier architecture.
std::array<std::size_t, kArchCount> largest_remainder(std::size_t total, const std::array<double, kArchCount>& mix);

/**
 * Deterministic fleet generator: a full startup batch followed by per-tick random-walk batches.
 */
class FleetSimulator {
public:
    explicit FleetSimulator(FleetConfig config);

    /// Resets the walk and returns the full startup snapshot as batch 1.
    UpdateBatch generate_fleet();

    /// Advances one tick and returns the next batch. Calls generate_fleet first if it has not run.
    UpdateBatch tick();

    const FleetConfig& config() const noexcept { return mConfig; }

private:
    struct NodeWalk {
        NodeRecord    record;
        std::int64_t  cpu_cents {};
        std::int64_t  mem_cents {};
        std::int64_t  disk_cents {};
        std::int64_t  mem_cap_cents {};
    };

    struct SensorWalk {
        SensorRecord record;
        std::int64_t cents {};
    };

    double       uniform01();
    std::int64_t step_cents(double step);
    void         refresh(NodeWalk& node, Timestamp now) const;
    JobRecord    new_job();
    UpdateBatch  snapshot_batch();

    FleetConfig             mConfig;
    std::mt19937_64         mRng;
    std::vector<NodeWalk>   mNodes;
    std::vector<SensorWalk> mSensors;
    std::vector<JobRecord>  mJobs;
    std::uint64_t           mBatchId {};
    std::uint64_t           mJobCounter {};
    Timestamp               mNow {};
};

/// Startup batch for a config (same as FleetSimulator(config).generate_fleet()).
UpdateBatch generate_fleet(const FleetConfig& config);

} // namespace fleetmon

#endif
