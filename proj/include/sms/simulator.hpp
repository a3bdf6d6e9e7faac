#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "sms/core.hpp"
#include "sms/metrics.hpp"
#include "sms/mlms.hpp"
#include "sms/noise.hpp"
#include "sms/rng.hpp"

namespace sms {

enum class DriftMode {
    constant,
    random_walk,     // per-step perturbation of norm step_norm (satisfies the
                     // per-step bound, hence the time-averaged one)
    piecewise_jump,  // a jump of norm jump_norm every `period` steps; satisfies
                     // only the time-averaged budget
};

struct DriftSpec {
    DriftMode mode = DriftMode::constant;
    double xi = 1e-3;       // time-averaged drift budget, in (0,1)
    double step_norm = 0.0; // random_walk; must be <= xi
    double jump_norm = 0.0; // piecewise_jump
    int period = 1;         // piecewise_jump; jump_norm/period must be <= xi

    void validate() const;
};

// Distribution of the victim-count columns: Poisson(rate) clamped to [0, cap].
struct CountLaw {
    std::array<double, 4> rates{0.3, 0.2, 0.1, 0.05};
    int cap = 3;
};

struct StreamSpec {
    int m1 = 2;
    int m2 = 1;
    std::int64_t T = 1000;
    std::uint64_t seed = 1;
    double lower = 36.0;
    double upper = 120.0;
    std::vector<double> z_probs;  // activation probability per conviction feature
    std::vector<double> v_probs;  // activation probability per other feature
    CountLaw counts;
    double a_value = 10.0;        // constant starting-point law
    StructuralParams structural;
    double box_radius = 10.0;     // parameter box for the generated path
    DriftSpec drift;
    GaussianNoiseModel noise{1.0};
    // Optional custom conditional noise draw (library-level hook; not part of
    // the config surface or the config hash). When unset, draws
    // noise.sigma * N(0,1). The closed forms in noise_model stay Gaussian, so
    // oracle/bound computations are only meaningful with the default law.
    std::function<double(Rng&)> noise_sampler;

    void validate() const;
};

// Parameter path theta_0..theta_{T-1} under the drift spec, projected into the
// box after every perturbation.
std::vector<std::vector<double>> gen_parameter_path(const ThetaVector& theta0,
                                                    const DriftSpec& drift, std::int64_t T,
                                                    std::uint64_t seed);

// Largest window-averaged parameter variation over all windows of at least
// min_window steps; the drift budget asserts this is <= xi.
double max_windowed_variation(const std::vector<std::vector<double>>& path,
                              std::size_t min_window);

struct SimStep {
    CaseRecord rec;             // rec.y holds the saturated observation
    std::vector<double> phi;
    std::vector<double> theta;  // ground-truth parameter at this step
    double inner = 0.0;         // unsaturated phi . theta
};

// Feature, parameter and noise draws come from independent sub-streams of the
// seed, so sweeping one spec knob leaves the other draws unchanged.
std::vector<SimStep> gen_case_stream(const StreamSpec& spec);

// Read-only oracle views into a generated stream (for theorem2_bound).
std::vector<OracleStep> oracle_view(const std::vector<SimStep>& stream);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation
};

struct ReplicationResult {
    std::uint64_t seed = 0;
    double ra_mlms = 0.0;
    double ra_plain = 0.0;
    double ra_oracle = 0.0;
    double bound = 0.0;
};

struct ExperimentSummary {
    std::vector<ReplicationResult> replications;
    MeanStd ra_mlms, ra_plain, ra_oracle, bound;
    std::vector<std::string> notes;
};

std::vector<std::uint64_t> derive_replication_seeds(std::uint64_t base, int n);

// Independent replications (one derived seed each) of: generate stream, run
// MLMS and plain LMS, score against the oracle and the Theorem-2 bound.
// Replications execute in parallel; aggregation is an ordered fold.
ExperimentSummary run_experiment(const StreamSpec& spec, const Hyperparams& hp,
                                 const std::vector<std::uint64_t>& seeds);
ExperimentSummary run_experiment(const StreamSpec& spec, const Hyperparams& hp, int replications);

}  // namespace sms
