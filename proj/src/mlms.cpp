#include "sms/mlms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sms/core.hpp"
#include "sms/errors.hpp"
#include "sms/vec.hpp"

namespace sms {

void Hyperparams::validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("Hyperparams: mu must be > 0");
    if (momentum == MomentumMode::constant) {
        if (!(beta >= 0.0 && beta < 1.0))
            throw std::invalid_argument("Hyperparams: constant beta must be in [0,1)");
    } else {
        if (!(delta > 0.0 && delta < 1.0))
            throw std::invalid_argument("Hyperparams: decaying delta must be in (0,1)");
    }
    if (!(box_radius > 0.0)) throw std::invalid_argument("Hyperparams: box_radius must be > 0");
    if (!(deriv_floor >= 0.0))
        throw std::invalid_argument("Hyperparams: deriv_floor must be >= 0");
}

double Hyperparams::beta_at(std::int64_t k) const {
    if (momentum == MomentumMode::constant) return beta;
    return std::pow(static_cast<double>(std::max<std::int64_t>(k, 1)), -delta);
}

LearnerState LearnerState::zeros(std::size_t dim) {
    LearnerState s;
    s.theta_hat.assign(dim, 0.0);
    s.theta_hat_prev.assign(dim, 0.0);
    s.step = 0;
    return s;
}

std::vector<double> project_box(std::vector<double> v, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("project_box: radius must be > 0");
    for (auto& x : v) x = std::min(radius, std::max(-radius, x));
    return v;
}

double predict(const LearnerState& state, std::span<const double> phi, double lower,
               double upper) {
    return saturate(dot(phi, state.theta_hat), lower, upper);
}

LearnerState update(const LearnerState& state, std::span<const double> phi, double y_next,
                    double lower, double upper, const GaussianNoiseModel& noise,
                    const Hyperparams& hp) {
    if (phi.size() != state.theta_hat.size())
        throw std::invalid_argument("update: phi dimension " + std::to_string(phi.size()) +
                                    " does not match state dimension " +
                                    std::to_string(state.theta_hat.size()));
    if (!(y_next >= lower && y_next <= upper))
        throw DataError("update: observation y=" + std::to_string(y_next) + " outside [" +
                        std::to_string(lower) + ", " + std::to_string(upper) + "]");

    const double alpha = hp.mu / (1.0 + squared_norm(phi));
    const double m = dot(phi, state.theta_hat);
    const double g_mean = sat_mean(m, lower, upper, noise);
    const double g_deriv = std::max(sat_mean_deriv(m, lower, upper, noise), hp.deriv_floor);
    const double beta_k = hp.beta_at(state.step);

    // step = -alpha * g + beta_k * (theta - theta_prev)
    const double gain = alpha * (y_next - g_mean) * g_deriv;
    LearnerState out;
    out.theta_hat.resize(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        out.theta_hat[i] = state.theta_hat[i] + gain * phi[i] +
                           beta_k * (state.theta_hat[i] - state.theta_hat_prev[i]);
    }
    out.theta_hat = project_box(std::move(out.theta_hat), hp.box_radius);
    out.theta_hat_prev = state.theta_hat;
    out.step = state.step + 1;
    return out;
}

RunReport run_stream(std::span<const StreamElement> stream, const GaussianNoiseModel& noise,
                     const Hyperparams& hp, LearnerVariant variant) {
    hp.validate();
    if (stream.empty()) throw DataError("run_stream: empty stream");

    Hyperparams effective = hp;
    if (variant == LearnerVariant::plain_lms) {
        effective.momentum = MomentumMode::constant;
        effective.beta = 0.0;
    }

    RunReport report;
    report.steps.reserve(stream.size());
    if (effective.mu > 1.0)
        report.notes.push_back("step size mu=" + std::to_string(effective.mu) +
                               " exceeds the (0,1] range covered by the convergence analysis");

    LearnerState state = LearnerState::zeros(stream.front().phi.size());
    for (std::size_t k = 0; k < stream.size(); ++k) {
        const StreamElement& el = stream[k];
        try {
            const double y_hat = predict(state, el.phi, el.lower, el.upper);
            state = update(state, el.phi, el.y, el.lower, el.upper, noise, effective);
            report.steps.push_back({el.y, y_hat, norm(state.theta_hat)});
        } catch (const DataError& e) {
            throw DataError("step " + std::to_string(k) + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("step " + std::to_string(k) + ": " + e.what());
        }
    }
    report.final_state = std::move(state);
    return report;
}

std::vector<std::pair<double, double>> prediction_pairs(const RunReport& report) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(report.steps.size());
    for (const auto& s : report.steps) pairs.emplace_back(s.y, s.y_hat);
    return pairs;
}

}  // namespace sms
