// Command-line front end: simulate | fit | bound | validate.
//
// Exit codes: 0 success, 2 data validation failure, 3 configuration error,
// 4 I/O error. Failures print one machine-readable JSON error object to
// stderr.

#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sms/config.hpp"
#include "sms/dataset.hpp"
#include "sms/errors.hpp"
#include "sms/fit.hpp"
#include "sms/metrics.hpp"
#include "sms/report.hpp"
#include "sms/simulator.hpp"
#include "sms/vec.hpp"

namespace {

struct FlagOverrides {
    std::string config_path;
    std::string preset;
    std::optional<int> seeds;
    std::string seed_list;
    std::optional<double> mu, beta, delta, box_radius, sigma;
    std::string output;
    std::string format;
    bool strict = false;
    std::string input;
    std::string theta;
};

void add_common_flags(CLI::App* cmd, FlagOverrides& flags) {
    cmd->add_option("--config", flags.config_path, "config file (key = value sections)");
    cmd->add_option("--preset", flags.preset, "group preset: serious | minor");
    cmd->add_option("--seeds", flags.seeds, "number of replications (seeds derived from stream.seed)");
    cmd->add_option("--seed-list", flags.seed_list, "explicit comma-separated replication seeds");
    cmd->add_option("--mu", flags.mu, "step size");
    cmd->add_option("--beta", flags.beta, "constant momentum coefficient in [0,1)");
    cmd->add_option("--delta", flags.delta, "decaying momentum exponent in (0,1)");
    cmd->add_option("--box-radius", flags.box_radius, "projection box half-width");
    cmd->add_option("--sigma", flags.sigma, "noise standard deviation");
    cmd->add_option("--output", flags.output, "output path ('-' = stdout)");
    cmd->add_option("--format", flags.format, "json | csv | jsonl");
    cmd->add_flag("--strict", flags.strict, "abort ingestion on the first malformed row");
}

sms::RunConfig resolve_config(const FlagOverrides& flags) {
    sms::ConfigEntries entries;
    if (!flags.config_path.empty()) entries = sms::read_config_file(flags.config_path);

    // defaults -> preset -> config file -> flags
    std::string preset = flags.preset;
    if (preset.empty())
        for (const auto& [key, value] : entries)
            if (key == "run.preset") preset = value;

    sms::RunConfig cfg;
    sms::apply_preset(cfg, preset);
    sms::apply_config_entries(cfg, entries);

    if (flags.seeds) cfg.seeds = *flags.seeds;
    if (!flags.seed_list.empty()) {
        cfg.seed_list.clear();
        std::size_t start = 0;
        const std::string& s = flags.seed_list;
        while (start <= s.size()) {
            const std::size_t comma = s.find(',', start);
            const std::string part = s.substr(start, comma == std::string::npos
                                                         ? std::string::npos
                                                         : comma - start);
            if (!part.empty()) cfg.seed_list.push_back(std::stoull(part));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    if (flags.mu) cfg.learner.mu = *flags.mu;
    if (flags.beta) {
        cfg.learner.momentum = sms::MomentumMode::constant;
        cfg.learner.beta = *flags.beta;
    }
    if (flags.delta) {
        cfg.learner.momentum = sms::MomentumMode::decaying;
        cfg.learner.delta = *flags.delta;
    }
    if (flags.box_radius) {
        cfg.learner.box_radius = *flags.box_radius;
        cfg.stream.box_radius = *flags.box_radius;
    }
    if (flags.sigma) cfg.stream.noise = sms::GaussianNoiseModel(*flags.sigma);
    if (!flags.output.empty()) cfg.output_path = flags.output;
    if (!flags.format.empty()) cfg.format = sms::report_format_from_string(flags.format);
    if (flags.strict) cfg.strict = true;
    if (!flags.input.empty()) cfg.input_path = flags.input;
    if (!flags.theta.empty()) cfg.theta_path = flags.theta;
    return cfg;
}

sms::ReportMeta meta_for(const sms::RunConfig& cfg, std::vector<std::uint64_t> seeds) {
    sms::ReportMeta meta;
    meta.config_hash = cfg.hash();
    meta.seeds = std::move(seeds);
    return meta;
}

void print_notes(const std::vector<std::string>& notes) {
    for (const auto& n : notes) std::cerr << "note: " << n << "\n";
}

int cmd_simulate(const sms::RunConfig& cfg) {
    const auto seeds = cfg.replication_seeds();
    const sms::ExperimentSummary summary = sms::run_experiment(cfg.stream, cfg.learner, seeds);
    print_notes(summary.notes);
    sms::emit_report(sms::render_summary(summary, meta_for(cfg, seeds)), cfg.output_path);
    return 0;
}

sms::TraceReport trace_report_of(const sms::FitResult& fit) {
    sms::TraceReport out;
    out.notes = fit.notes;
    std::size_t observed = 0;
    for (std::size_t k = 0; k < fit.steps.size(); ++k) {
        const auto& s = fit.steps[k];
        sms::TraceStep t;
        t.step = k;
        t.case_id = s.case_id;
        t.y = s.y;
        t.y_hat = s.y_hat;
        if (s.y) t.rel_err = fit.trace.per_step[observed++].rel_err;
        t.theta_norm = s.theta_norm;
        out.steps.push_back(std::move(t));
    }
    if (observed > 0) out.ra = fit.trace.ra;
    return out;
}

sms::Dataset load_input(const sms::RunConfig& cfg) {
    if (cfg.input_path.empty()) throw sms::ConfigError("--input is required for this command");
    sms::Dataset data = sms::load_dataset(cfg.input_path, cfg.strict);
    for (const auto& e : data.errors)
        std::cerr << "warning: " << cfg.input_path << ":" << e.line
                  << (e.column.empty() ? "" : " (" + e.column + ")") << ": " << e.message
                  << " -- row skipped\n";
    return data;
}

int cmd_fit(const sms::RunConfig& cfg) {
    const sms::Dataset data = load_input(cfg);
    if (data.records.empty()) throw sms::DataError("no valid records in '" + cfg.input_path + "'");
    const sms::FitResult fit = sms::fit_records(data.records, cfg.stream.noise, cfg.learner);
    print_notes(fit.notes);
    // fitting a fixed file draws no randomness, so the seed list stays empty
    sms::emit_report(sms::render_trace(trace_report_of(fit), meta_for(cfg, {}), cfg.format),
                     cfg.output_path);
    return 0;
}

std::vector<double> load_theta_file(const std::string& path, std::size_t expected_dim) {
    std::ifstream in(path);
    if (!in) throw sms::IoError("cannot open theta file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw sms::DataError("theta file '" + path + "': " + e.what());
    }
    if (j.is_object() && j.contains("theta")) j = j["theta"];
    if (!j.is_array()) throw sms::DataError("theta file '" + path + "': expected a JSON array");
    std::vector<double> theta;
    for (const auto& v : j) {
        if (!v.is_number()) throw sms::DataError("theta file '" + path + "': non-numeric entry");
        theta.push_back(v.get<double>());
    }
    if (theta.size() != expected_dim)
        throw sms::DataError("theta file '" + path + "': dimension " +
                             std::to_string(theta.size()) + " does not match dataset regressor " +
                             "dimension " + std::to_string(expected_dim));
    return theta;
}

int cmd_bound(const sms::RunConfig& cfg) {
    const sms::Dataset data = load_input(cfg);
    if (data.records.empty()) throw sms::DataError("no valid records in '" + cfg.input_path + "'");

    const std::size_t dim = sms::regressor_dim(data.schema.m1(), data.schema.m2());
    std::vector<double> theta;
    std::string theta_source;
    if (!cfg.theta_path.empty()) {
        theta = load_theta_file(cfg.theta_path, dim);
        theta_source = "file:" + cfg.theta_path;
    } else {
        const sms::FitResult fit = sms::fit_records(data.records, cfg.stream.noise, cfg.learner);
        print_notes(fit.notes);
        theta = fit.final_state.theta_hat;
        theta_source = "fitted";
    }

    // bound and empirical oracle accuracy over the observed rows
    std::vector<std::vector<double>> phis;
    std::vector<sms::OracleStep> steps;
    std::vector<std::pair<double, double>> pairs;
    for (const auto& rec : data.records) {
        if (!rec.y) continue;
        phis.push_back(sms::build_regressor(rec).values);
        const double y_hat = sms::saturate(sms::dot(phis.back(), theta), rec.lower, rec.upper);
        pairs.emplace_back(*rec.y, y_hat);
    }
    if (pairs.empty()) throw sms::DataError("bound: no rows with observed y");
    std::size_t i = 0;
    for (const auto& rec : data.records) {
        if (!rec.y) continue;
        steps.push_back({phis[i], theta, rec.lower, rec.upper, *rec.y});
        ++i;
    }
    const double bound = sms::theorem2_bound(steps, cfg.stream.noise);
    const double ra_oracle = sms::relative_accuracy(pairs).ra;
    sms::emit_report(sms::render_bound(bound, ra_oracle, steps.size(), cfg.stream.noise.sigma,
                                       theta_source, meta_for(cfg, {})),
                     cfg.output_path);
    return 0;
}

int cmd_validate(const sms::RunConfig& cfg) {
    if (cfg.input_path.empty()) throw sms::ConfigError("--input is required for this command");
    const sms::Dataset data = sms::load_dataset(cfg.input_path, /*strict=*/false);
    const sms::ExclusivityReport excl = sms::validate_exclusivity(data);
    if (!excl.notice.empty()) std::cerr << "note: " << excl.notice << "\n";
    sms::emit_report(sms::render_validation(data, excl, meta_for(cfg, {})), cfg.output_path);
    return (data.errors.empty() && excl.flagged.empty()) ? 0 : 2;
}

void print_error(const char* type, const std::string& message) {
    nlohmann::json j;
    j["error"]["type"] = type;
    j["error"]["message"] = message;
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Saturated sentencing model: adaptive fitting, bounds and synthetic streams"};
    app.require_subcommand(1);

    FlagOverrides flags;
    CLI::App* simulate = app.add_subcommand("simulate", "run seeded synthetic replications");
    CLI::App* fit = app.add_subcommand("fit", "stream a CIBH-format CSV through the learner");
    CLI::App* bound = app.add_subcommand("bound", "best-achievable accuracy bound for a dataset");
    CLI::App* validate = app.add_subcommand("validate", "schema + feature-exclusivity report");
    for (CLI::App* cmd : {simulate, fit, bound, validate}) add_common_flags(cmd, flags);
    for (CLI::App* cmd : {fit, bound, validate})
        cmd->add_option("--input", flags.input, "input CSV path")->required();
    bound->add_option("--theta", flags.theta, "JSON file with the true parameter vector");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        print_error("config", e.what());
        return 3;
    }

    try {
        const sms::RunConfig cfg = resolve_config(flags);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (fit->parsed()) return cmd_fit(cfg);
        if (bound->parsed()) return cmd_bound(cfg);
        return cmd_validate(cfg);
    } catch (const sms::DataError& e) {
        print_error("data", e.what());
        return 2;
    } catch (const sms::ConfigError& e) {
        print_error("config", e.what());
        return 3;
    } catch (const sms::IoError& e) {
        print_error("io", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        print_error("config", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}
