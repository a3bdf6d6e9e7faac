#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sms/dataset.hpp"
#include "sms/metrics.hpp"
#include "sms/simulator.hpp"

namespace sms {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class ReportFormat { json, csv, jsonl };
ReportFormat report_format_from_string(const std::string& s);
const char* to_string(ReportFormat f);

// All floating-point output goes through this (12 significant digits), so a
// report re-emitted from the same state is byte-identical.
std::string format_g12(double x);

std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

struct ReportMeta {
    std::string config_hash;
    std::vector<std::uint64_t> seeds;
    std::string version = kArtifactVersion;
};

// Minimal ordered JSON emitter; insertion order is the output order.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view name);
    JsonWriter& string(std::string_view value);
    JsonWriter& number(double value);
    JsonWriter& integer(std::int64_t value);
    JsonWriter& unsigned_integer(std::uint64_t value);
    JsonWriter& boolean(bool value);
    JsonWriter& null();
    const std::string& str() const { return out_; }

private:
    void separate();
    std::string out_;
    std::vector<bool> first_in_scope_;
    bool pending_key_ = false;
};

struct TraceStep {
    std::size_t step = 0;
    std::string case_id;
    std::optional<double> y;        // absent on prediction-only rows
    double y_hat = 0.0;
    std::optional<double> rel_err;
    double theta_norm = 0.0;
};

struct TraceReport {
    std::vector<TraceStep> steps;
    std::optional<double> ra;  // omitted when no step carries an observation
    std::vector<std::string> notes;
};

std::string render_trace(const TraceReport& trace, const ReportMeta& meta, ReportFormat format);
std::string render_summary(const ExperimentSummary& summary, const ReportMeta& meta);
std::string render_bound(double bound, double ra_oracle, std::size_t steps, double sigma,
                         const std::string& theta_source, const ReportMeta& meta);
std::string render_validation(const Dataset& data, const ExclusivityReport& excl,
                              const ReportMeta& meta);

// Writes to the path, or to stdout when path is "-".
void emit_report(const std::string& content, const std::string& path);

}  // namespace sms
