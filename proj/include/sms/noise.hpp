#pragma once

#include <functional>
#include <span>

namespace sms {

double normal_cdf(double x);  // standard normal CDF via erfc
double normal_pdf(double x);

// Zero-mean Gaussian conditional noise law.
struct GaussianNoiseModel {
    double sigma = 1.0;

    explicit GaussianNoiseModel(double sigma_);
    double density(double x) const;
    double cdf(double x) const;
};

// G(m) = E[ clamp(m + eps, lower, upper) ], the conditional mean of the
// saturated observation given the pre-noise value m. Always in [lower, upper].
double sat_mean(double m, double lower, double upper, const GaussianNoiseModel& noise);

// G'(m) = Phi((upper-m)/sigma) - Phi((lower-m)/sigma), in (0, 1).
double sat_mean_deriv(double m, double lower, double upper, const GaussianNoiseModel& noise);

// E| clamp(m + eps) - clamp(m) |, the mean absolute deviation of the saturated
// observation around the saturated pre-noise value. Closed form assembled from
// truncated-Gaussian pieces; behaviorally equal to the quadrature oracle.
double sat_abs_deviation(double m, double lower, double upper, const GaussianNoiseModel& noise);

// Independent verification oracle: integrates f(x) * density(x) over
// [lo_sigmas*sigma, hi_sigmas*sigma] by adaptive Simpson quadrature to an
// absolute tolerance of 1e-10. Throws on non-convergence.
double quadrature_oracle(const std::function<double(double)>& f, const GaussianNoiseModel& noise,
                         double lo_sigmas = -12.0, double hi_sigmas = 12.0);

// sigma from a residual stream under the zero-mean convention (RMS).
GaussianNoiseModel fit_sigma(std::span<const double> residuals);

}  // namespace sms
