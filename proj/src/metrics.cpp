#include "sms/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sms/errors.hpp"
#include "sms/parallel.hpp"
#include "sms/vec.hpp"

namespace sms {

AccuracyTrace relative_accuracy(std::span<const std::pair<double, double>> pairs) {
    AccuracyTrace trace;
    trace.per_step.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [y, y_hat] = pairs[k];
        if (!(y > 0.0))
            throw DataError("relative_accuracy: y must be positive at step " + std::to_string(k) +
                            ", got " + std::to_string(y));
        trace.per_step.push_back({y, y_hat, std::abs(y - y_hat) / y});
    }
    if (!trace.per_step.empty()) {
        const double mean = par::reduce_sum(trace.per_step.size(),
                                            [&](std::size_t k) { return trace.per_step[k].rel_err; }) /
                            static_cast<double>(trace.per_step.size());
        trace.ra = 1.0 - mean;
    }
    return trace;
}

double window_ra(const AccuracyTrace& trace, std::size_t first_step) {
    if (first_step >= trace.per_step.size())
        throw std::invalid_argument("window_ra: window start beyond trace end");
    const std::size_t n = trace.per_step.size() - first_step;
    const double sum = par::reduce_sum(
        n, [&](std::size_t i) { return trace.per_step[first_step + i].rel_err; });
    return 1.0 - sum / static_cast<double>(n);
}

double oracle_predict(const ThetaVector& theta, const RegressorVector& phi, double lower,
                      double upper) {
    return saturate(dot(phi.values, theta.values), lower, upper);
}

double theorem2_bound(std::span<const OracleStep> stream, const GaussianNoiseModel& noise) {
    if (stream.empty()) throw DataError("theorem2_bound: empty stream");
    // validate serially; exceptions must not escape the parallel region below
    for (std::size_t k = 0; k < stream.size(); ++k) {
        if (!(stream[k].y > 0.0))
            throw DataError("theorem2_bound: y must be positive at step " + std::to_string(k) +
                            ", got " + std::to_string(stream[k].y));
        if (stream[k].phi.size() != stream[k].theta.size())
            throw std::invalid_argument("theorem2_bound: phi/theta dimension mismatch at step " +
                                        std::to_string(k));
    }
    const double sum = par::reduce_sum(stream.size(), [&](std::size_t k) {
        const OracleStep& st = stream[k];
        const double m = dot(st.phi, st.theta);
        return sat_abs_deviation(m, st.lower, st.upper, noise) / st.y;
    });
    return 1.0 - sum / static_cast<double>(stream.size());
}

bool not_one_check(const AccuracyTrace& trace, double margin) {
    return trace.ra <= 1.0 - margin;
}

}  // namespace sms
