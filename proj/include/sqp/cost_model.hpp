#pragma once

#include <cstdint>
#include <vector>

#include "sqp/calibration.hpp"

namespace sqp {

constexpr int kMinMemoryMib = 128;
constexpr int kMaxMemoryMib = 10240;

/// A candidate provisioning choice: worker count and per-worker memory.
struct Configuration {
    int workers = 1;
    int memory_mib = 1769;
    bool operator==(const Configuration&) const = default;
};

/// Throws std::invalid_argument on non-positive workers or memory outside
/// [128, 10240] MiB.
void validate_configuration(const Configuration& config);

/// Per-phase data volumes of one query execution. Volumes are logical MiB;
/// per-worker shares are total/W without partition-granularity rounding.
struct WorkloadProfile {
    double total_input_mib = 0.0;
    int input_columns = 1;
    int input_partitions = 1;
    double total_exchanged_mib = 0.0;  // repartitioned once, regardless of levels
    int exchange_columns = 0;
    double total_output_mib = 0.0;
    bool process_bound = false;       // false: process rate treated as unbounded
    double unique_key_fraction = 0.0;  // of exchanged data; drives memory feasibility
    bool operator==(const WorkloadProfile&) const = default;
};

enum class InvocationMode { kOneLevel, kTwoLevel };

/// Startup and ready times per worker (0-based vector over workers 1..W).
/// In two-level mode the first ceil(sqrt(W)) workers invoke the rest and are
/// ready only after their own invocation window.
struct StartupSchedule {
    InvocationMode mode = InvocationMode::kOneLevel;
    std::vector<double> startup_s;
    std::vector<double> ready_s;
    double max_ready_s() const;
    double min_startup_s() const;
};

StartupSchedule startup_schedule(int workers, const InvocationParams& invocation);

/// Exchange group sizes per level: [W] at or below the threshold, otherwise
/// the X*Y=W factorization minimizing X+Y with X <= Y. Prime W falls back to
/// the degenerate [1, W] split and is flagged.
struct ExchangePlan {
    std::vector<int> group_sizes;
    bool degenerate = false;
};

ExchangePlan exchange_plan(int workers, int two_level_threshold);

/// Worker indices of each group at the given level. Level 0 groups
/// consecutive workers; level 1 groups strided ones, so the two levels
/// together connect every pair of workers.
std::vector<std::vector<int>> exchange_groups(int workers, const ExchangePlan& plan, int level);

struct ExchangeLevelPlan {
    int group_size = 1;
    double per_worker_mib = 0.0;
    int columns = 0;
    double overhead_per_member_s = 0.0;
};

/// Effective rates at a memory size; process is +infinity when the workload
/// is not process-bound.
struct Rates {
    double network_mib_s = 0.0;
    double compress_mib_s = 0.0;
    double process_mib_s = 0.0;
};

Rates rates_for(const CalibrationParams& calibration, int memory_mib, bool process_bound);

double input_time(double per_worker_mib, const Rates& rates);
double exchange_time(const ExchangeLevelPlan& level, const Rates& rates);
double output_time(double per_worker_mib, const Rates& rates);

/// Seconds added per exchange-group member: availability polling plus the
/// per-column reads of that member's file.
double exchange_overhead_per_member(const RequestParams& requests, int exchange_columns);

struct RequestCounts {
    std::int64_t head = 0;
    std::int64_t get = 0;
    std::int64_t put = 0;
    bool operator==(const RequestCounts&) const = default;
};

RequestCounts request_counts(const Configuration& config, const WorkloadProfile& workload,
                             const ExchangePlan& plan);

double request_cost(const RequestCounts& counts, const RequestParams& requests);

double price_per_ms(int memory_mib, double gib_second_price_usd);
double price_per_second(int memory_mib, double gib_second_price_usd);

struct PhaseBreakdown {
    double startup_s = 0.0;  // readiness of the last worker
    double base_s = 0.0;
    double input_s = 0.0;
    std::vector<double> exchange_s;
    double output_s = 0.0;
    double postprocess_s = 0.0;
};

struct CostEstimate {
    double completion_s = 0.0;
    double billable_s = 0.0;          // sum of per-worker alive times
    std::vector<double> alive_s;      // per worker
    RequestCounts requests;
    double request_cost_usd = 0.0;
    double total_cost_usd = 0.0;
    PhaseBreakdown phases;
};

/// Full analytic estimate for one (configuration, workload) pair.
CostEstimate estimate(const Configuration& config, const WorkloadProfile& workload,
                      const CalibrationParams& calibration);

}  // namespace sqp
