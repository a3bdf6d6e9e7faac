#include "sms/fit.hpp"

#include <utility>

#include "sms/errors.hpp"
#include "sms/vec.hpp"

namespace sms {

FitResult fit_records(std::span<const CaseRecord> records, const GaussianNoiseModel& noise,
                      const Hyperparams& hp) {
    hp.validate();
    if (records.empty()) throw DataError("fit_records: no records");

    FitResult result;
    result.steps.reserve(records.size());
    if (hp.mu > 1.0)
        result.notes.push_back("step size mu=" + std::to_string(hp.mu) +
                               " exceeds the (0,1] range covered by the convergence analysis");

    const std::size_t dim = regressor_dim(static_cast<int>(records.front().z.size()),
                                          static_cast<int>(records.front().v.size()));
    LearnerState state = LearnerState::zeros(dim);
    std::vector<std::pair<double, double>> observed;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const CaseRecord& rec = records[k];
        try {
            const RegressorVector phi = build_regressor(rec);
            const double y_hat = predict(state, phi.values, rec.lower, rec.upper);
            if (rec.y) {
                state = update(state, phi.values, *rec.y, rec.lower, rec.upper, noise, hp);
                observed.emplace_back(*rec.y, y_hat);
            }
            result.steps.push_back({rec.case_id, rec.y, y_hat, norm(state.theta_hat)});
        } catch (const DataError& e) {
            throw DataError("record " + std::to_string(k) + " (case '" + rec.case_id +
                            "'): " + e.what());
        } catch (const std::invalid_argument& e) {
            throw DataError("record " + std::to_string(k) + " (case '" + rec.case_id +
                            "'): " + e.what());
        }
    }
    if (!observed.empty()) result.trace = relative_accuracy(observed);
    result.final_state = std::move(state);
    return result;
}

}  // namespace sms
