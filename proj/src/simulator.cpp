#include "sms/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "sms/errors.hpp"
#include "sms/parallel.hpp"
#include "sms/rng.hpp"
#include "sms/vec.hpp"

namespace sms {

void DriftSpec::validate() const {
    if (!(xi > 0.0 && xi < 1.0))
        throw std::invalid_argument("DriftSpec: xi must be in (0,1), got " + std::to_string(xi));
    switch (mode) {
        case DriftMode::constant:
            break;
        case DriftMode::random_walk:
            if (!(step_norm >= 0.0 && step_norm <= xi))
                throw std::invalid_argument("DriftSpec: random_walk needs 0 <= step_norm <= xi");
            break;
        case DriftMode::piecewise_jump:
            if (period < 1) throw std::invalid_argument("DriftSpec: period must be >= 1");
            if (!(jump_norm >= 0.0 && jump_norm / period <= xi))
                throw std::invalid_argument(
                    "DriftSpec: piecewise_jump needs jump_norm/period <= xi");
            break;
    }
}

void StreamSpec::validate() const {
    if (T < 1) throw std::invalid_argument("StreamSpec: T must be >= 1");
    if (!(lower > 0.0 && lower < upper))
        throw std::invalid_argument("StreamSpec: bounds must satisfy 0 < lower < upper");
    if (static_cast<int>(z_probs.size()) != m1 || static_cast<int>(v_probs.size()) != m2)
        throw std::invalid_argument("StreamSpec: z/v probability dimensions must match m1/m2");
    for (double p : z_probs)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("StreamSpec: z activation probability outside [0,1]");
    for (double p : v_probs)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("StreamSpec: v activation probability outside [0,1]");
    for (double r : counts.rates)
        if (!(r >= 0.0)) throw std::invalid_argument("StreamSpec: count rates must be >= 0");
    if (counts.cap < 0) throw std::invalid_argument("StreamSpec: count cap must be >= 0");
    if (!(a_value >= 0.0)) throw std::invalid_argument("StreamSpec: a must be >= 0");
    if (static_cast<int>(structural.p.size()) != m1 ||
        static_cast<int>(structural.q.size()) != m2)
        throw std::invalid_argument("StreamSpec: structural p/q dimensions must match m1/m2");
    if (!(box_radius > 0.0)) throw std::invalid_argument("StreamSpec: box_radius must be > 0");
    drift.validate();
}

std::vector<std::vector<double>> gen_parameter_path(const ThetaVector& theta0,
                                                    const DriftSpec& drift, std::int64_t T,
                                                    std::uint64_t seed) {
    drift.validate();
    if (T < 1) throw std::invalid_argument("gen_parameter_path: T must be >= 1");
    for (double t : theta0.values)
        if (std::abs(t) > theta0.box_radius)
            throw std::invalid_argument("gen_parameter_path: theta0 outside its box");

    std::vector<std::vector<double>> path;
    path.reserve(static_cast<std::size_t>(T));
    path.push_back(theta0.values);

    Rng rng(seed);
    const std::size_t dim = theta0.values.size();
    for (std::int64_t k = 1; k < T; ++k) {
        const bool jump_now = drift.mode == DriftMode::piecewise_jump && k % drift.period == 0;
        if (drift.mode == DriftMode::constant ||
            (drift.mode == DriftMode::piecewise_jump && !jump_now)) {
            path.push_back(path.back());
            continue;
        }
        const double norm_step =
            drift.mode == DriftMode::random_walk ? drift.step_norm : drift.jump_norm;
        std::vector<double> dir = rng.unit_vector(dim);
        std::vector<double> next = path.back();
        for (std::size_t i = 0; i < dim; ++i) next[i] += norm_step * dir[i];
        path.push_back(project_box(std::move(next), theta0.box_radius));
    }
    return path;
}

double max_windowed_variation(const std::vector<std::vector<double>>& path,
                              std::size_t min_window) {
    if (path.size() < 2 || min_window == 0 || min_window > path.size() - 1) return 0.0;
    const std::size_t n = path.size() - 1;
    std::vector<double> prefix(n + 1, 0.0);
    double max_diff = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<double> d = path[i];
        for (std::size_t j = 0; j < d.size(); ++j) d[j] -= path[i - 1][j];
        const double step = norm(d);
        prefix[i] = prefix[i - 1] + step;
        max_diff = std::max(max_diff, step);
    }

    // max average over windows of length >= min_window, by bisection on the
    // answer: a window with mean > g exists iff max_n [Q_n - min_{m<=n-w} Q_m]
    // > 0 where Q_i = prefix_i - g*i.
    const auto exists_above = [&](double g) {
        double min_q = 0.0;
        for (std::size_t w = min_window; w <= n; ++w) {
            min_q = std::min(min_q, prefix[w - min_window] -
                                        g * static_cast<double>(w - min_window));
            if (prefix[w] - g * static_cast<double>(w) > min_q + 1e-15) return true;
        }
        return false;
    };
    double lo = 0.0, hi = max_diff;
    for (int iter = 0; iter < 60 && hi - lo > 1e-14 * (1.0 + hi); ++iter) {
        const double mid = 0.5 * (lo + hi);
        (exists_above(mid) ? lo : hi) = mid;
    }
    return hi;
}

std::vector<SimStep> gen_case_stream(const StreamSpec& spec) {
    spec.validate();
    const ThetaVector theta0 = build_theta(spec.structural, spec.box_radius);
    const auto path =
        gen_parameter_path(theta0, spec.drift, spec.T, mix_seed(spec.seed, 2));

    Rng features(mix_seed(spec.seed, 0));
    Rng noise_rng(mix_seed(spec.seed, 1));

    std::vector<SimStep> stream;
    stream.reserve(static_cast<std::size_t>(spec.T));
    for (std::int64_t k = 0; k < spec.T; ++k) {
        SimStep step;
        CaseRecord& rec = step.rec;
        rec.case_id = "sim-" + std::to_string(k);
        rec.group = InjuryGroup::custom;
        rec.a = spec.a_value;
        for (std::size_t i = 0; i < 4; ++i)
            rec.x[i] = features.poisson(spec.counts.rates[i], spec.counts.cap);
        rec.z.resize(spec.z_probs.size());
        for (std::size_t i = 0; i < rec.z.size(); ++i)
            rec.z[i] = features.bernoulli(spec.z_probs[i]) ? 1.0 : 0.0;
        rec.v.resize(spec.v_probs.size());
        for (std::size_t j = 0; j < rec.v.size(); ++j)
            rec.v[j] = features.bernoulli(spec.v_probs[j]) ? 1.0 : 0.0;
        rec.lower = spec.lower;
        rec.upper = spec.upper;

        step.phi = build_regressor_raw(rec.a, rec.x, rec.z, rec.v);
        step.theta = path[static_cast<std::size_t>(k)];
        step.inner = dot(step.phi, step.theta);
        const double eps = spec.noise_sampler ? spec.noise_sampler(noise_rng)
                                              : spec.noise.sigma * noise_rng.normal();
        rec.y = saturate(step.inner + eps, spec.lower, spec.upper);
        stream.push_back(std::move(step));
    }
    return stream;
}

std::vector<OracleStep> oracle_view(const std::vector<SimStep>& stream) {
    std::vector<OracleStep> view;
    view.reserve(stream.size());
    for (const auto& s : stream)
        view.push_back({s.phi, s.theta, s.rec.lower, s.rec.upper, s.rec.y.value()});
    return view;
}

namespace {

std::vector<StreamElement> learner_stream(const std::vector<SimStep>& stream) {
    std::vector<StreamElement> els;
    els.reserve(stream.size());
    for (const auto& s : stream)
        els.push_back({s.phi, s.rec.lower, s.rec.upper, s.rec.y.value()});
    return els;
}

MeanStd mean_std(const std::vector<ReplicationResult>& reps, double ReplicationResult::*field) {
    MeanStd out;
    const double n = static_cast<double>(reps.size());
    for (const auto& r : reps) out.mean += r.*field;
    out.mean /= n;
    if (reps.size() > 1) {
        double ss = 0.0;
        for (const auto& r : reps) ss += (r.*field - out.mean) * (r.*field - out.mean);
        out.std = std::sqrt(ss / (n - 1.0));
    }
    return out;
}

}  // namespace

ExperimentSummary run_experiment(const StreamSpec& spec, const Hyperparams& hp,
                                 const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("run_experiment: need at least 1 replication");
    spec.validate();
    hp.validate();

    ExperimentSummary summary;
    summary.replications.resize(seeds.size());
    std::vector<std::exception_ptr> failures(seeds.size());

    par::parallel_for(seeds.size(), [&](std::size_t r) {
        try {
            StreamSpec rep_spec = spec;
            rep_spec.seed = seeds[r];
            const auto stream = gen_case_stream(rep_spec);
            const auto elements = learner_stream(stream);

            const RunReport mlms_report = run_stream(elements, spec.noise, hp,
                                                     LearnerVariant::mlms);
            const RunReport plain_report = run_stream(elements, spec.noise, hp,
                                                      LearnerVariant::plain_lms);

            std::vector<std::pair<double, double>> oracle_pairs;
            oracle_pairs.reserve(stream.size());
            for (const auto& s : stream)
                oracle_pairs.emplace_back(s.rec.y.value(),
                                          saturate(s.inner, s.rec.lower, s.rec.upper));

            ReplicationResult& res = summary.replications[r];
            res.seed = seeds[r];
            res.ra_mlms = relative_accuracy(prediction_pairs(mlms_report)).ra;
            res.ra_plain = relative_accuracy(prediction_pairs(plain_report)).ra;
            res.ra_oracle = relative_accuracy(oracle_pairs).ra;
            res.bound = theorem2_bound(oracle_view(stream), spec.noise);
        } catch (...) {
            failures[r] = std::current_exception();
        }
    });
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    summary.ra_mlms = mean_std(summary.replications, &ReplicationResult::ra_mlms);
    summary.ra_plain = mean_std(summary.replications, &ReplicationResult::ra_plain);
    summary.ra_oracle = mean_std(summary.replications, &ReplicationResult::ra_oracle);
    summary.bound = mean_std(summary.replications, &ReplicationResult::bound);
    if (hp.mu > 1.0)
        summary.notes.push_back("step size mu=" + std::to_string(hp.mu) +
                                " exceeds the (0,1] range covered by the convergence analysis");
    return summary;
}

std::vector<std::uint64_t> derive_replication_seeds(std::uint64_t base, int n) {
    if (n < 1) throw std::invalid_argument("derive_replication_seeds: need n >= 1");
    std::vector<std::uint64_t> seeds;
    seeds.reserve(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r)
        seeds.push_back(mix_seed(base, 0x5eed0000ULL + static_cast<std::uint64_t>(r)));
    return seeds;
}

ExperimentSummary run_experiment(const StreamSpec& spec, const Hyperparams& hp,
                                 int replications) {
    return run_experiment(spec, hp, derive_replication_seeds(spec.seed, replications));
}

}  // namespace sms
