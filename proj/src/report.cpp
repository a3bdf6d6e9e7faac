#include "sms/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "sms/errors.hpp"

namespace sms {

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    if (s == "jsonl") return ReportFormat::jsonl;
    throw ConfigError("unknown report format '" + s + "' (expected json|csv|jsonl)");
}

const char* to_string(ReportFormat f) {
    switch (f) {
        case ReportFormat::json: return "json";
        case ReportFormat::csv: return "csv";
        case ReportFormat::jsonl: return "jsonl";
    }
    return "json";
}

std::string format_g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void JsonWriter::separate() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!first_in_scope_.empty()) {
        if (!first_in_scope_.back()) out_ += ',';
        first_in_scope_.back() = false;
    }
}

JsonWriter& JsonWriter::begin_object() {
    separate();
    out_ += '{';
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separate();
    out_ += '[';
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    first_in_scope_.pop_back();
    return *this;
}

namespace {

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

}  // namespace

JsonWriter& JsonWriter::key(std::string_view name) {
    separate();
    out_ += '"';
    out_ += json_escape(name);
    out_ += "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::string(std::string_view value) {
    separate();
    out_ += '"';
    out_ += json_escape(value);
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::number(double value) {
    separate();
    out_ += format_g12(value);
    return *this;
}

JsonWriter& JsonWriter::integer(std::int64_t value) {
    separate();
    out_ += std::to_string(value);
    return *this;
}

JsonWriter& JsonWriter::unsigned_integer(std::uint64_t value) {
    separate();
    out_ += std::to_string(value);
    return *this;
}

JsonWriter& JsonWriter::boolean(bool value) {
    separate();
    out_ += value ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::null() {
    separate();
    out_ += "null";
    return *this;
}

namespace {

void write_meta(JsonWriter& w, const ReportMeta& meta) {
    w.key("artifact_version").string(meta.version);
    w.key("config_hash").string(meta.config_hash);
    w.key("seeds").begin_array();
    for (auto s : meta.seeds) w.unsigned_integer(s);
    w.end_array();
}

void write_trace_step(JsonWriter& w, const TraceStep& s) {
    w.begin_object();
    w.key("step").integer(static_cast<std::int64_t>(s.step));
    if (!s.case_id.empty()) w.key("case_id").string(s.case_id);
    if (s.y)
        w.key("y").number(*s.y);
    else
        w.key("y").null();
    w.key("y_hat").number(s.y_hat);
    if (s.rel_err)
        w.key("rel_err").number(*s.rel_err);
    else
        w.key("rel_err").null();
    w.key("theta_norm").number(s.theta_norm);
    w.end_object();
}

std::string meta_comment(const ReportMeta& meta) {
    std::string out = "# artifact_version=" + meta.version + " config_hash=" + meta.config_hash +
                      " seeds=";
    for (std::size_t i = 0; i < meta.seeds.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(meta.seeds[i]);
    }
    out += '\n';
    return out;
}

}  // namespace

std::string render_trace(const TraceReport& trace, const ReportMeta& meta, ReportFormat format) {
    switch (format) {
        case ReportFormat::csv: {
            std::string out = meta_comment(meta);
            out += "step,case_id,y,y_hat,rel_err,theta_norm\n";
            for (const auto& s : trace.steps) {
                out += std::to_string(s.step);
                out += ',';
                out += s.case_id;
                out += ',';
                if (s.y) out += format_g12(*s.y);
                out += ',';
                out += format_g12(s.y_hat);
                out += ',';
                if (s.rel_err) out += format_g12(*s.rel_err);
                out += ',';
                out += format_g12(s.theta_norm);
                out += '\n';
            }
            return out;
        }
        case ReportFormat::jsonl: {
            JsonWriter head;
            head.begin_object();
            write_meta(head, meta);
            head.key("T").integer(static_cast<std::int64_t>(trace.steps.size()));
            if (trace.ra) head.key("ra").number(*trace.ra);
            head.end_object();
            std::string out = head.str();
            out += '\n';
            for (const auto& s : trace.steps) {
                JsonWriter w;
                write_trace_step(w, s);
                out += w.str();
                out += '\n';
            }
            return out;
        }
        case ReportFormat::json:
        default: {
            JsonWriter w;
            w.begin_object();
            write_meta(w, meta);
            w.key("T").integer(static_cast<std::int64_t>(trace.steps.size()));
            if (trace.ra) w.key("ra").number(*trace.ra);
            if (!trace.notes.empty()) {
                w.key("notes").begin_array();
                for (const auto& n : trace.notes) w.string(n);
                w.end_array();
            }
            w.key("steps").begin_array();
            for (const auto& s : trace.steps) write_trace_step(w, s);
            w.end_array();
            w.end_object();
            return w.str() + "\n";
        }
    }
}

namespace {

void write_mean_std(JsonWriter& w, const char* name, const MeanStd& m) {
    w.key(name).begin_object();
    w.key("mean").number(m.mean);
    w.key("std").number(m.std);
    w.end_object();
}

}  // namespace

std::string render_summary(const ExperimentSummary& summary, const ReportMeta& meta) {
    JsonWriter w;
    w.begin_object();
    write_meta(w, meta);
    w.key("replications").integer(static_cast<std::int64_t>(summary.replications.size()));
    write_mean_std(w, "ra_mlms", summary.ra_mlms);
    write_mean_std(w, "ra_plain_lms", summary.ra_plain);
    write_mean_std(w, "ra_oracle", summary.ra_oracle);
    write_mean_std(w, "bound", summary.bound);
    if (!summary.notes.empty()) {
        w.key("notes").begin_array();
        for (const auto& n : summary.notes) w.string(n);
        w.end_array();
    }
    w.key("per_seed").begin_array();
    for (const auto& r : summary.replications) {
        w.begin_object();
        w.key("seed").unsigned_integer(r.seed);
        w.key("ra_mlms").number(r.ra_mlms);
        w.key("ra_plain_lms").number(r.ra_plain);
        w.key("ra_oracle").number(r.ra_oracle);
        w.key("bound").number(r.bound);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str() + "\n";
}

std::string render_bound(double bound, double ra_oracle, std::size_t steps, double sigma,
                         const std::string& theta_source, const ReportMeta& meta) {
    JsonWriter w;
    w.begin_object();
    write_meta(w, meta);
    w.key("T").integer(static_cast<std::int64_t>(steps));
    w.key("sigma").number(sigma);
    w.key("theta_source").string(theta_source);
    w.key("bound").number(bound);
    w.key("ra_oracle_empirical").number(ra_oracle);
    w.end_object();
    return w.str() + "\n";
}

std::string render_validation(const Dataset& data, const ExclusivityReport& excl,
                              const ReportMeta& meta) {
    JsonWriter w;
    w.begin_object();
    write_meta(w, meta);
    w.key("rows_ok").integer(static_cast<std::int64_t>(data.records.size()));
    w.key("m1").integer(data.schema.m1());
    w.key("m2").integer(data.schema.m2());
    w.key("errors").begin_array();
    for (const auto& e : data.errors) {
        w.begin_object();
        w.key("line").integer(static_cast<std::int64_t>(e.line));
        w.key("column").string(e.column);
        w.key("message").string(e.message);
        w.end_object();
    }
    w.end_array();
    w.key("exclusivity").begin_object();
    w.key("checked").boolean(excl.checked);
    if (!excl.notice.empty()) w.key("notice").string(excl.notice);
    w.key("flagged").begin_array();
    for (const auto& f : excl.flagged) {
        w.begin_object();
        w.key("line").integer(static_cast<std::int64_t>(f.line));
        w.key("case_id").string(f.case_id);
        w.key("tuple").begin_array();
        for (int t : f.tuple) w.integer(t);
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.end_object();
    w.end_object();
    return w.str() + "\n";
}

void emit_report(const std::string& content, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw IoError("failed writing output file '" + path + "'");
}

}  // namespace sms
