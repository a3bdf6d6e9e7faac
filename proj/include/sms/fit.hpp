#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sms/core.hpp"
#include "sms/metrics.hpp"
#include "sms/mlms.hpp"

namespace sms {

// Online pass over real cases: predict every row; rows without an observed y
// skip the parameter update (pure-prediction mode).
struct FitStep {
    std::string case_id;
    std::optional<double> y;
    double y_hat = 0.0;
    double theta_norm = 0.0;
};

struct FitResult {
    std::vector<FitStep> steps;
    LearnerState final_state;
    AccuracyTrace trace;  // over observed rows only
    std::vector<std::string> notes;
};

FitResult fit_records(std::span<const CaseRecord> records, const GaussianNoiseModel& noise,
                      const Hyperparams& hp);

}  // namespace sms
