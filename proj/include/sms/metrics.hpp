#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sms/core.hpp"
#include "sms/noise.hpp"

namespace sms {

// Relative-accuracy trace: RA(T) = 1 - (1/T) sum |y - y_hat| / y.
struct AccuracyTrace {
    struct Step {
        double y = 0.0;
        double y_hat = 0.0;
        double rel_err = 0.0;
    };
    std::vector<Step> per_step;
    double ra = 1.0;

    std::size_t T() const { return per_step.size(); }
};

// Builds the trace from (y, y_hat) pairs. All y must be positive.
AccuracyTrace relative_accuracy(std::span<const std::pair<double, double>> pairs);

// RA over a suffix window of the per-step errors (steady-state readout).
double window_ra(const AccuracyTrace& trace, std::size_t first_step);

// Best predictor with the true parameter: saturate(phi . theta).
double oracle_predict(const ThetaVector& theta, const RegressorVector& phi, double lower,
                      double upper);

// One step of a ground-truth stream, viewed (not owned) by the bound kernel.
struct OracleStep {
    std::span<const double> phi;
    std::span<const double> theta;
    double lower = 0.0;
    double upper = 0.0;
    double y = 0.0;
};

// Best achievable accuracy with known parameters:
//   RA*(T) = 1 - (1/T) sum_k sat_abs_deviation(phi_k.theta_k) / y_k
// Evaluated with the deterministic chunked parallel reduction.
double theorem2_bound(std::span<const OracleStep> stream, const GaussianNoiseModel& noise);

// True iff ra <= 1 - margin; the accuracy of any predictor stays bounded away
// from 1 whenever the noise has a density floor.
bool not_one_check(const AccuracyTrace& trace, double margin);

}  // namespace sms
