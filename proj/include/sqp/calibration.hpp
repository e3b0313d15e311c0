#pragma once

#include <string>
#include <vector>

namespace sqp {

/// One measured (memory, value) sample of a memory-dependent curve.
struct CurvePoint {
    int memory_mib = 0;
    double value = 0.0;
    bool operator==(const CurvePoint&) const = default;
};

/// Piecewise-linear, non-decreasing curve over memory sizes. Rate curves
/// carry MiB/s; the base-overhead curve reuses the shape with seconds.
struct RateCurve {
    std::vector<CurvePoint> points;
    bool operator==(const RateCurve&) const = default;
};

struct InvocationParams {
    double driver_rate = 142.3;          // invocations/s from the driver
    double worker_rate = 93.6;           // invocations/s from a worker
    double invocation_delay_s = 0.6777;  // active delay (HOT or COLD)
    int two_level_threshold = 100;       // two-level invocation above this W
    double startup_timeout_s = 20.0;
    bool operator==(const InvocationParams&) const = default;
};

struct RequestParams {
    double head_s = 0.0131;
    double get_s = 0.0184;
    int heads_per_exchange_file = 3;
    double read_price_per_1000 = 0.0004;  // USD, HEAD and GET
    double write_price_per_1000 = 0.005;  // USD, PUT
    bool operator==(const RequestParams&) const = default;
};

struct CalibrationParams {
    InvocationParams invocation;
    RateCurve base_overhead;  // seconds as a function of memory
    RateCurve network;
    RateCurve compress;
    RateCurve process;
    double postprocess_s = 0.1885;
    RequestParams requests;
    double gib_second_price_usd = 0.0000166667;
    int exchange_two_level_threshold = 32;
    double delay_hot_s = 0.6777;
    double delay_cold_s = 1.2634;
    bool cold_start = false;
    bool operator==(const CalibrationParams&) const = default;
};

/// vCPU share for a memory size: linear at 1769 MiB/vCPU, capped at
/// 10240 MiB. Throws std::invalid_argument below 128 MiB.
double vcpu_allocation(int memory_mib);

/// Sorts samples by memory and replaces each value with the running maximum,
/// yielding a non-decreasing curve. Idempotent. Throws on empty input,
/// duplicate memory keys, or non-positive entries.
RateCurve monotonic_envelope(std::vector<CurvePoint> samples);

/// Value of the curve at any memory size: linear interpolation between
/// points, clamped to the first/last value outside the measured range.
double rate_at(const RateCurve& curve, double memory_mib);

/// Stock parameters: measured invocation/request/pricing values plus the
/// illustrative default curves (only the published cap/anchor points carry
/// measured provenance).
CalibrationParams default_calibration();

/// Parses and validates a calibration JSON document. Absent fields fall back
/// to the defaults, every curve goes through monotonic_envelope, and unknown
/// keys are rejected. cold_start selects the COLD invocation delay.
CalibrationParams load_calibration(const std::string& json_text, bool cold_start = false);
CalibrationParams load_calibration_file(const std::string& path, bool cold_start = false);

/// Serializes parameters back to the schema accepted by load_calibration.
std::string dump_calibration(const CalibrationParams& params);

}  // namespace sqp
