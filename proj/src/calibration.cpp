#include "sqp/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sqp {

namespace {

using nlohmann::json;

constexpr int kVcpuMemoryCapMib = 10240;
constexpr double kMibPerVcpu = 1769.0;

[[noreturn]] void load_error(const std::string& field, const std::string& what) {
    throw std::runtime_error("calibration: field '" + field + "' " + what);
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& context) {
    for (const auto& item : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return item.key() == k;
            }) == allowed.end()) {
            throw std::runtime_error("calibration: unknown key '" + context + item.key() + "'");
        }
    }
}

double require_number(const json& obj, const char* key, double fallback,
                      const std::string& context) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) load_error(context + key, "must be a number");
    return v.get<double>();
}

int require_int(const json& obj, const char* key, int fallback, const std::string& context) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) load_error(context + key, "must be an integer");
    return v.get<int>();
}

RateCurve parse_curve(const json& arr, const std::string& field) {
    if (!arr.is_array() || arr.empty()) load_error(field, "must be a non-empty array of [memory_mib, value] pairs");
    std::vector<CurvePoint> samples;
    samples.reserve(arr.size());
    for (const json& entry : arr) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
            load_error(field, "entries must be [memory_mib, value] pairs");
        CurvePoint p;
        p.memory_mib = entry[0].get<int>();
        p.value = entry[1].get<double>();
        if (p.memory_mib <= 0) load_error(field, "has a non-positive memory size");
        if (!(p.value > 0.0)) load_error(field, "has a non-positive value");
        samples.push_back(p);
    }
    try {
        return monotonic_envelope(std::move(samples));
    } catch (const std::exception& e) {
        load_error(field, e.what());
    }
}

json curve_to_json(const RateCurve& curve) {
    json arr = json::array();
    for (const CurvePoint& p : curve.points) arr.push_back({p.memory_mib, p.value});
    return arr;
}

void validate(const CalibrationParams& params) {
    const InvocationParams& inv = params.invocation;
    if (!(inv.driver_rate > 0.0)) load_error("invocation.driver_rate", "must be positive");
    if (!(inv.worker_rate > 0.0)) load_error("invocation.worker_rate", "must be positive");
    if (!(params.delay_hot_s > 0.0)) load_error("invocation.delay_hot_s", "must be positive");
    if (!(params.delay_cold_s > 0.0)) load_error("invocation.delay_cold_s", "must be positive");
    if (inv.two_level_threshold < 1) load_error("invocation.two_level_threshold", "must be >= 1");
    if (!(inv.startup_timeout_s > 0.0)) load_error("invocation.startup_timeout_s", "must be positive");
    const RequestParams& req = params.requests;
    if (req.head_s < 0.0) load_error("requests.head_s", "must be non-negative");
    if (req.get_s < 0.0) load_error("requests.get_s", "must be non-negative");
    if (req.heads_per_exchange_file < 0) load_error("requests.heads_per_file", "must be non-negative");
    if (req.read_price_per_1000 < 0.0) load_error("requests.read_price_per_1000", "must be non-negative");
    if (req.write_price_per_1000 < 0.0) load_error("requests.write_price_per_1000", "must be non-negative");
    if (!(params.gib_second_price_usd > 0.0)) load_error("pricing.gib_second_usd", "must be positive");
    if (params.postprocess_s < 0.0) load_error("postprocess_s", "must be non-negative");
    if (params.exchange_two_level_threshold < 1) load_error("exchange_two_level_threshold", "must be >= 1");
}

}  // namespace

double vcpu_allocation(int memory_mib) {
    if (memory_mib < 128)
        throw std::invalid_argument("vcpu_allocation: memory below 128 MiB");
    return static_cast<double>(std::min(memory_mib, kVcpuMemoryCapMib)) / kMibPerVcpu;
}

RateCurve monotonic_envelope(std::vector<CurvePoint> samples) {
    if (samples.empty()) throw std::invalid_argument("monotonic_envelope: empty sample list");
    std::sort(samples.begin(), samples.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.memory_mib < b.memory_mib; });
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].memory_mib == samples[i - 1].memory_mib)
            throw std::invalid_argument("monotonic_envelope: duplicate memory size " +
                                        std::to_string(samples[i].memory_mib));
        samples[i].value = std::max(samples[i].value, samples[i - 1].value);
    }
    return RateCurve{std::move(samples)};
}

double rate_at(const RateCurve& curve, double memory_mib) {
    const auto& pts = curve.points;
    if (pts.empty()) throw std::invalid_argument("rate_at: empty curve");
    if (memory_mib <= pts.front().memory_mib) return pts.front().value;
    if (memory_mib >= pts.back().memory_mib) return pts.back().value;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (memory_mib <= pts[i].memory_mib) {
            const double m0 = pts[i - 1].memory_mib;
            const double m1 = pts[i].memory_mib;
            const double v0 = pts[i - 1].value;
            const double v1 = pts[i].value;
            return v0 + (v1 - v0) * (memory_mib - m0) / (m1 - m0);
        }
    }
    return pts.back().value;
}

CalibrationParams default_calibration() {
    CalibrationParams params;
    // Published anchors: network 78.7 MiB/s at 1024 and 82.1 cap; process
    // 75.2 at 2048 and 77.5 cap; compress 85.0 at 2048 and 86.0 cap. Points
    // in between are illustrative, roughly linear in the vCPU share.
    params.network = monotonic_envelope({{128, 9.8},
                                         {256, 19.7},
                                         {384, 29.5},
                                         {512, 39.4},
                                         {640, 49.2},
                                         {768, 59.0},
                                         {896, 68.9},
                                         {1024, 78.7},
                                         {1280, 80.0},
                                         {1536, 81.0},
                                         {1769, 81.7},
                                         {2048, 82.1},
                                         {10240, 82.1}});
    params.process = monotonic_envelope({{128, 5.3},
                                         {256, 10.6},
                                         {512, 21.2},
                                         {768, 31.8},
                                         {1024, 42.4},
                                         {1280, 53.0},
                                         {1536, 63.5},
                                         {1769, 73.2},
                                         {2048, 75.2},
                                         {2560, 77.5},
                                         {10240, 77.5}});
    params.compress = monotonic_envelope({{128, 6.0},
                                          {256, 12.0},
                                          {512, 24.1},
                                          {768, 36.1},
                                          {1024, 48.1},
                                          {1280, 60.2},
                                          {1536, 72.2},
                                          {1769, 83.2},
                                          {2048, 85.0},
                                          {2560, 86.0},
                                          {10240, 86.0}});
    // No machine-readable data exists for the base-overhead curve; a flat
    // 0.5 s placeholder keeps phase times monotone in memory. Substitute
    // measured values for real deployments.
    params.base_overhead = monotonic_envelope({{128, 0.5}});
    return params;
}

CalibrationParams load_calibration(const std::string& json_text, bool cold_start) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("calibration: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error("calibration: document must be a JSON object");
    reject_unknown_keys(doc,
                        {"notes", "invocation", "curves", "requests", "pricing", "postprocess_s",
                         "exchange_two_level_threshold"},
                        "");

    CalibrationParams params = default_calibration();
    if (doc.contains("invocation")) {
        const json& inv = doc.at("invocation");
        if (!inv.is_object()) load_error("invocation", "must be an object");
        reject_unknown_keys(inv,
                            {"driver_rate", "worker_rate", "delay_hot_s", "delay_cold_s",
                             "two_level_threshold", "startup_timeout_s"},
                            "invocation.");
        params.invocation.driver_rate =
            require_number(inv, "driver_rate", params.invocation.driver_rate, "invocation.");
        params.invocation.worker_rate =
            require_number(inv, "worker_rate", params.invocation.worker_rate, "invocation.");
        params.delay_hot_s = require_number(inv, "delay_hot_s", params.delay_hot_s, "invocation.");
        params.delay_cold_s = require_number(inv, "delay_cold_s", params.delay_cold_s, "invocation.");
        params.invocation.two_level_threshold =
            require_int(inv, "two_level_threshold", params.invocation.two_level_threshold, "invocation.");
        params.invocation.startup_timeout_s =
            require_number(inv, "startup_timeout_s", params.invocation.startup_timeout_s, "invocation.");
    }
    if (doc.contains("curves")) {
        const json& curves = doc.at("curves");
        if (!curves.is_object()) load_error("curves", "must be an object");
        reject_unknown_keys(curves, {"network", "compress", "process", "base_overhead"}, "curves.");
        if (curves.contains("network")) params.network = parse_curve(curves.at("network"), "curves.network");
        if (curves.contains("compress")) params.compress = parse_curve(curves.at("compress"), "curves.compress");
        if (curves.contains("process")) params.process = parse_curve(curves.at("process"), "curves.process");
        if (curves.contains("base_overhead"))
            params.base_overhead = parse_curve(curves.at("base_overhead"), "curves.base_overhead");
    }
    if (doc.contains("requests")) {
        const json& req = doc.at("requests");
        if (!req.is_object()) load_error("requests", "must be an object");
        reject_unknown_keys(req,
                            {"head_s", "get_s", "heads_per_file", "read_price_per_1000",
                             "write_price_per_1000"},
                            "requests.");
        params.requests.head_s = require_number(req, "head_s", params.requests.head_s, "requests.");
        params.requests.get_s = require_number(req, "get_s", params.requests.get_s, "requests.");
        params.requests.heads_per_exchange_file =
            require_int(req, "heads_per_file", params.requests.heads_per_exchange_file, "requests.");
        params.requests.read_price_per_1000 =
            require_number(req, "read_price_per_1000", params.requests.read_price_per_1000, "requests.");
        params.requests.write_price_per_1000 =
            require_number(req, "write_price_per_1000", params.requests.write_price_per_1000, "requests.");
    }
    if (doc.contains("pricing")) {
        const json& pricing = doc.at("pricing");
        if (!pricing.is_object()) load_error("pricing", "must be an object");
        reject_unknown_keys(pricing, {"gib_second_usd"}, "pricing.");
        params.gib_second_price_usd =
            require_number(pricing, "gib_second_usd", params.gib_second_price_usd, "pricing.");
    }
    params.postprocess_s = require_number(doc, "postprocess_s", params.postprocess_s, "");
    params.exchange_two_level_threshold =
        require_int(doc, "exchange_two_level_threshold", params.exchange_two_level_threshold, "");

    params.cold_start = cold_start;
    params.invocation.invocation_delay_s = cold_start ? params.delay_cold_s : params.delay_hot_s;
    validate(params);
    return params;
}

CalibrationParams load_calibration_file(const std::string& path, bool cold_start) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("calibration: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_calibration(buffer.str(), cold_start);
}

std::string dump_calibration(const CalibrationParams& params) {
    json doc;
    doc["invocation"] = {{"driver_rate", params.invocation.driver_rate},
                         {"worker_rate", params.invocation.worker_rate},
                         {"delay_hot_s", params.delay_hot_s},
                         {"delay_cold_s", params.delay_cold_s},
                         {"two_level_threshold", params.invocation.two_level_threshold},
                         {"startup_timeout_s", params.invocation.startup_timeout_s}};
    doc["curves"] = {{"network", curve_to_json(params.network)},
                     {"compress", curve_to_json(params.compress)},
                     {"process", curve_to_json(params.process)},
                     {"base_overhead", curve_to_json(params.base_overhead)}};
    doc["requests"] = {{"head_s", params.requests.head_s},
                       {"get_s", params.requests.get_s},
                       {"heads_per_file", params.requests.heads_per_exchange_file},
                       {"read_price_per_1000", params.requests.read_price_per_1000},
                       {"write_price_per_1000", params.requests.write_price_per_1000}};
    doc["pricing"] = {{"gib_second_usd", params.gib_second_price_usd}};
    doc["postprocess_s"] = params.postprocess_s;
    doc["exchange_two_level_threshold"] = params.exchange_two_level_threshold;
    return doc.dump(2);
}

}  // namespace sqp
