#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sms/noise.hpp"

namespace sms {

enum class MomentumMode {
    constant,  // beta_k = beta
    decaying,  // beta_k = 1/k^delta (beta_0 taken as beta_1 = 1)
};

struct Hyperparams {
    double mu = 1.0;            // step size; > 0 (convergence theory covers (0,1])
    MomentumMode momentum = MomentumMode::constant;
    double beta = 0.0;          // constant-mode coefficient, in [0,1)
    double delta = 0.5;         // decaying-mode exponent, in (0,1)
    double box_radius = 10.0;   // projection box half-width
    // Gradient floor on G' to avoid a total stall in deep saturation.
    // Set to 0 in theory-validation runs where positivity holds by construction.
    double deriv_floor = 1e-12;

    void validate() const;
    double beta_at(std::int64_t k) const;
};

struct LearnerState {
    std::vector<double> theta_hat;
    std::vector<double> theta_hat_prev;
    std::int64_t step = 0;

    static LearnerState zeros(std::size_t dim);
};

// Euclidean projection onto the box {x : |x_i| <= radius} (component clamp).
std::vector<double> project_box(std::vector<double> v, double radius);

// y-hat for the next case: saturate(phi . theta_hat).
double predict(const LearnerState& state, std::span<const double> phi, double lower, double upper);

// One projected momentum-LMS step:
//   alpha = mu / (1 + |phi|^2)
//   g     = -(y - G(phi.theta)) * G'(phi.theta) * phi
//   theta <- project(theta - alpha*g + beta_k*(theta - theta_prev))
LearnerState update(const LearnerState& state, std::span<const double> phi, double y_next,
                    double lower, double upper, const GaussianNoiseModel& noise,
                    const Hyperparams& hp);

struct StreamElement {
    std::vector<double> phi;
    double lower = 0.0;
    double upper = 0.0;
    double y = 0.0;
};

enum class LearnerVariant { mlms, plain_lms };

struct RunReport {
    struct Step {
        double y = 0.0;
        double y_hat = 0.0;
        double theta_norm = 0.0;  // |theta_hat| after the update
    };
    std::vector<Step> steps;
    LearnerState final_state;
    std::vector<std::string> notes;
};

// Sequential predict-observe-update over a stream. plain_lms runs the same
// loop with beta forced to 0.
RunReport run_stream(std::span<const StreamElement> stream, const GaussianNoiseModel& noise,
                     const Hyperparams& hp, LearnerVariant variant = LearnerVariant::mlms);

// (y, y_hat) pairs of a run, in stream order.
std::vector<std::pair<double, double>> prediction_pairs(const RunReport& report);

}  // namespace sms
