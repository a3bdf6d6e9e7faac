#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sms/mlms.hpp"
#include "sms/report.hpp"
#include "sms/simulator.hpp"

namespace sms {

// Effective run configuration: defaults, then preset, then config file, then
// flag overrides (flags win).
struct RunConfig {
    StreamSpec stream;
    Hyperparams learner;
    std::string preset;  // "", "serious" or "minor"
    int seeds = 1;
    std::vector<std::uint64_t> seed_list;  // explicit seeds; wins over `seeds`
    std::string input_path;
    std::string theta_path;
    std::string output_path = "-";
    ReportFormat format = ReportFormat::json;
    bool strict = false;

    RunConfig();

    std::vector<std::uint64_t> replication_seeds() const;
    // Stable key=value dump of every effective field; its FNV-1a hash is the
    // config_hash stamped into reports.
    std::string canonical() const;
    std::string hash() const;
};

// Group presets (statutory bounds in months, fitted noise level, step size and
// momentum used for that group).
void apply_preset(RunConfig& cfg, const std::string& name);

// `section.key` pairs in file order. Grammar: [section] headers, key = value
// lines, # comments, comma-separated lists.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;
ConfigEntries read_config_file(const std::string& path);

// Applies entries onto cfg; unknown keys are ConfigErrors. `run.preset` is
// skipped here (the caller resolves presets first so file keys can refine them).
void apply_config_entries(RunConfig& cfg, const ConfigEntries& entries);

}  // namespace sms
