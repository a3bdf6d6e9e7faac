#include "sms/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <span>
#include <sstream>

#include "sms/errors.hpp"
#include "sms/rng.hpp"

namespace sms {

RunConfig::RunConfig() {
    // a small well-excited reference model; presets/config refine it
    stream.m1 = 2;
    stream.m2 = 1;
    stream.T = 10000;
    stream.seed = 1;
    stream.lower = 1.0;
    stream.upper = 120.0;
    stream.z_probs = {0.5, 0.5};
    stream.v_probs = {0.5};
    stream.counts.rates = {0.8, 0.6, 0.5, 0.4};
    stream.counts.cap = 3;
    stream.a_value = 20.0;
    stream.structural.b = 3.0;
    stream.structural.c = 2.0;
    stream.structural.d = 1.5;
    stream.structural.e = 4.0;
    stream.structural.eta = 0.05;
    stream.structural.p = {0.3, 0.2};
    stream.structural.q = {0.25};
    stream.box_radius = 8.0;
    stream.drift.mode = DriftMode::constant;
    stream.drift.xi = 1e-3;
    stream.noise = GaussianNoiseModel(0.97);

    learner.mu = 0.5;
    learner.momentum = MomentumMode::constant;
    learner.beta = 0.5;
    learner.delta = 0.5;
    // generous default so real-data fits are not clipped; synthetic specs
    // carry their own tighter path box
    learner.box_radius = 50.0;
}

std::vector<std::uint64_t> RunConfig::replication_seeds() const {
    if (!seed_list.empty()) return seed_list;
    return derive_replication_seeds(stream.seed, seeds);
}

namespace {

const char* drift_mode_name(DriftMode m) {
    switch (m) {
        case DriftMode::constant: return "constant";
        case DriftMode::random_walk: return "random_walk";
        case DriftMode::piecewise_jump: return "piecewise_jump";
    }
    return "constant";
}

DriftMode drift_mode_from(const std::string& s) {
    if (s == "constant") return DriftMode::constant;
    if (s == "random_walk") return DriftMode::random_walk;
    if (s == "piecewise_jump") return DriftMode::piecewise_jump;
    throw ConfigError("unknown drift mode '" + s +
                      "' (expected constant|random_walk|piecewise_jump)");
}

std::string list_g12(std::span<const double> xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += format_g12(xs[i]);
    }
    return out;
}

}  // namespace

std::string RunConfig::canonical() const {
    std::ostringstream out;
    out << "stream.m1=" << stream.m1 << "\nstream.m2=" << stream.m2
        << "\nstream.T=" << stream.T << "\nstream.seed=" << stream.seed
        << "\nstream.lower=" << format_g12(stream.lower)
        << "\nstream.upper=" << format_g12(stream.upper)
        << "\nstream.z_probs=" << list_g12(stream.z_probs)
        << "\nstream.v_probs=" << list_g12(stream.v_probs)
        << "\nstream.count_rates=" << list_g12(stream.counts.rates)
        << "\nstream.count_cap=" << stream.counts.cap
        << "\nstream.a=" << format_g12(stream.a_value)
        << "\nstream.box_radius=" << format_g12(stream.box_radius)
        << "\nstructural.b=" << format_g12(stream.structural.b)
        << "\nstructural.c=" << format_g12(stream.structural.c)
        << "\nstructural.d=" << format_g12(stream.structural.d)
        << "\nstructural.e=" << format_g12(stream.structural.e)
        << "\nstructural.eta=" << format_g12(stream.structural.eta)
        << "\nstructural.p=" << list_g12(stream.structural.p)
        << "\nstructural.q=" << list_g12(stream.structural.q)
        << "\ndrift.mode=" << drift_mode_name(stream.drift.mode)
        << "\ndrift.xi=" << format_g12(stream.drift.xi)
        << "\ndrift.step_norm=" << format_g12(stream.drift.step_norm)
        << "\ndrift.jump_norm=" << format_g12(stream.drift.jump_norm)
        << "\ndrift.period=" << stream.drift.period
        << "\nnoise.sigma=" << format_g12(stream.noise.sigma)
        << "\nlearner.mu=" << format_g12(learner.mu) << "\nlearner.momentum="
        << (learner.momentum == MomentumMode::constant ? "constant" : "decaying")
        << "\nlearner.beta=" << format_g12(learner.beta)
        << "\nlearner.delta=" << format_g12(learner.delta)
        << "\nlearner.box_radius=" << format_g12(learner.box_radius)
        << "\nlearner.deriv_floor=" << format_g12(learner.deriv_floor)
        << "\nrun.preset=" << preset << "\nrun.seeds=" << seeds << "\nrun.seed_list=";
    for (std::size_t i = 0; i < seed_list.size(); ++i) {
        if (i) out << ',';
        out << seed_list[i];
    }
    // output path and format are presentation, not computation; they stay out
    // of the hash so re-emitting the same run elsewhere compares equal
    out << "\nrun.input=" << input_path << "\nrun.theta=" << theta_path
        << "\nrun.strict=" << (strict ? "true" : "false") << "\n";
    return out.str();
}

std::string RunConfig::hash() const { return hex64(fnv1a64(canonical())); }

void apply_preset(RunConfig& cfg, const std::string& name) {
    if (name.empty()) return;
    if (name == "serious") {
        cfg.preset = name;
        cfg.stream.lower = 36.0;
        cfg.stream.upper = 120.0;
        cfg.stream.noise = GaussianNoiseModel(9.17);
        cfg.learner.mu = 10.0;
        cfg.learner.momentum = MomentumMode::constant;
        cfg.learner.beta = 0.9;
    } else if (name == "minor") {
        cfg.preset = name;
        cfg.stream.lower = 6.0;
        cfg.stream.upper = 36.0;
        cfg.stream.noise = GaussianNoiseModel(3.42);
        cfg.learner.mu = 1.0;
        cfg.learner.momentum = MomentumMode::constant;
        cfg.learner.beta = 0.5;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected serious|minor)");
    }
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

double parse_double_or_throw(const std::string& key, const std::string& s) {
    double out;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(key + ": not a number: '" + s + "'");
    return out;
}

std::int64_t parse_int_or_throw(const std::string& key, const std::string& s) {
    std::int64_t out;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(key + ": not an integer: '" + s + "'");
    return out;
}

std::uint64_t parse_u64_or_throw(const std::string& key, const std::string& s) {
    std::uint64_t out;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(key + ": not an unsigned integer: '" + s + "'");
    return out;
}

bool parse_bool_or_throw(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError(key + ": not a boolean: '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) {
            const std::string part = trim(s.substr(start));
            if (!part.empty()) parts.push_back(part);
            break;
        }
        const std::string part = trim(s.substr(start, comma - start));
        if (!part.empty()) parts.push_back(part);
        start = comma + 1;
    }
    return parts;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& s) {
    std::vector<double> out;
    for (const auto& part : split_list(s)) out.push_back(parse_double_or_throw(key, part));
    return out;
}

}  // namespace

ConfigEntries read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    ConfigEntries entries;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(path + ":" + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        entries.emplace_back(section.empty() ? key : section + "." + key, value);
    }
    return entries;
}

void apply_config_entries(RunConfig& cfg, const ConfigEntries& entries) {
    for (const auto& [key, value] : entries) {
        if (key == "run.preset") continue;  // resolved by the caller before this pass
        if (key == "stream.m1")
            cfg.stream.m1 = static_cast<int>(parse_int_or_throw(key, value));
        else if (key == "stream.m2")
            cfg.stream.m2 = static_cast<int>(parse_int_or_throw(key, value));
        else if (key == "stream.T")
            cfg.stream.T = parse_int_or_throw(key, value);
        else if (key == "stream.seed")
            cfg.stream.seed = parse_u64_or_throw(key, value);
        else if (key == "stream.lower")
            cfg.stream.lower = parse_double_or_throw(key, value);
        else if (key == "stream.upper")
            cfg.stream.upper = parse_double_or_throw(key, value);
        else if (key == "stream.z_probs")
            cfg.stream.z_probs = parse_double_list(key, value);
        else if (key == "stream.v_probs")
            cfg.stream.v_probs = parse_double_list(key, value);
        else if (key == "stream.count_rates") {
            const auto rates = parse_double_list(key, value);
            if (rates.size() != 4) throw ConfigError(key + ": expected 4 rates");
            std::copy(rates.begin(), rates.end(), cfg.stream.counts.rates.begin());
        } else if (key == "stream.count_cap")
            cfg.stream.counts.cap = static_cast<int>(parse_int_or_throw(key, value));
        else if (key == "stream.a")
            cfg.stream.a_value = parse_double_or_throw(key, value);
        else if (key == "stream.box_radius")
            cfg.stream.box_radius = parse_double_or_throw(key, value);
        else if (key == "structural.b")
            cfg.stream.structural.b = parse_double_or_throw(key, value);
        else if (key == "structural.c")
            cfg.stream.structural.c = parse_double_or_throw(key, value);
        else if (key == "structural.d")
            cfg.stream.structural.d = parse_double_or_throw(key, value);
        else if (key == "structural.e")
            cfg.stream.structural.e = parse_double_or_throw(key, value);
        else if (key == "structural.eta")
            cfg.stream.structural.eta = parse_double_or_throw(key, value);
        else if (key == "structural.p")
            cfg.stream.structural.p = parse_double_list(key, value);
        else if (key == "structural.q")
            cfg.stream.structural.q = parse_double_list(key, value);
        else if (key == "drift.mode")
            cfg.stream.drift.mode = drift_mode_from(value);
        else if (key == "drift.xi")
            cfg.stream.drift.xi = parse_double_or_throw(key, value);
        else if (key == "drift.step_norm")
            cfg.stream.drift.step_norm = parse_double_or_throw(key, value);
        else if (key == "drift.jump_norm")
            cfg.stream.drift.jump_norm = parse_double_or_throw(key, value);
        else if (key == "drift.period")
            cfg.stream.drift.period = static_cast<int>(parse_int_or_throw(key, value));
        else if (key == "noise.sigma")
            cfg.stream.noise = GaussianNoiseModel(parse_double_or_throw(key, value));
        else if (key == "learner.mu")
            cfg.learner.mu = parse_double_or_throw(key, value);
        else if (key == "learner.momentum") {
            if (value == "constant")
                cfg.learner.momentum = MomentumMode::constant;
            else if (value == "decaying")
                cfg.learner.momentum = MomentumMode::decaying;
            else
                throw ConfigError(key + ": expected constant|decaying, got '" + value + "'");
        } else if (key == "learner.beta")
            cfg.learner.beta = parse_double_or_throw(key, value);
        else if (key == "learner.delta")
            cfg.learner.delta = parse_double_or_throw(key, value);
        else if (key == "learner.box_radius")
            cfg.learner.box_radius = parse_double_or_throw(key, value);
        else if (key == "learner.deriv_floor")
            cfg.learner.deriv_floor = parse_double_or_throw(key, value);
        else if (key == "run.seeds")
            cfg.seeds = static_cast<int>(parse_int_or_throw(key, value));
        else if (key == "run.seed_list") {
            cfg.seed_list.clear();
            for (const auto& part : split_list(value))
                cfg.seed_list.push_back(parse_u64_or_throw(key, part));
        } else if (key == "run.input")
            cfg.input_path = value;
        else if (key == "run.theta")
            cfg.theta_path = value;
        else if (key == "run.output")
            cfg.output_path = value;
        else if (key == "run.format")
            cfg.format = report_format_from_string(value);
        else if (key == "run.strict")
            cfg.strict = parse_bool_or_throw(key, value);
        else
            throw ConfigError("unknown config key '" + key + "'");
    }
}

}  // namespace sms
