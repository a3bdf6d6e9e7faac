#include "sms/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sms/errors.hpp"

namespace sms {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

void require_bounds(double lower, double upper, const char* who) {
    if (!(lower < upper))
        throw std::invalid_argument(std::string(who) + ": requires lower < upper, got [" +
                                    std::to_string(lower) + ", " + std::to_string(upper) + "]");
}

double clamp(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

GaussianNoiseModel::GaussianNoiseModel(double sigma_) : sigma(sigma_) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("GaussianNoiseModel: sigma must be > 0, got " +
                                    std::to_string(sigma_));
}

double GaussianNoiseModel::density(double x) const { return normal_pdf(x / sigma) / sigma; }

double GaussianNoiseModel::cdf(double x) const { return normal_cdf(x / sigma); }

double sat_mean(double m, double lower, double upper, const GaussianNoiseModel& noise) {
    require_bounds(lower, upper, "sat_mean");
    const double s = noise.sigma;
    const double za = (lower - m) / s;
    const double zb = (upper - m) / s;
    const double Fa = normal_cdf(za);
    const double Fb = normal_cdf(zb);
    const double g = lower * Fa + upper * (1.0 - Fb) + m * (Fb - Fa) +
                     s * (normal_pdf(za) - normal_pdf(zb));
    // the exact value lies in [lower, upper]; rounding may poke out by an ulp
    return clamp(g, lower, upper);
}

double sat_mean_deriv(double m, double lower, double upper, const GaussianNoiseModel& noise) {
    require_bounds(lower, upper, "sat_mean_deriv");
    return normal_cdf((upper - m) / noise.sigma) - normal_cdf((lower - m) / noise.sigma);
}

double sat_abs_deviation(double m, double lower, double upper, const GaussianNoiseModel& noise) {
    require_bounds(lower, upper, "sat_abs_deviation");
    const double s = noise.sigma;
    const double a = lower - m;           // eps below a clips to the lower bound
    const double b = upper - m;           // eps above b clips to the upper bound
    const double sat = clamp(m, lower, upper);
    const double t = sat - m;             // = clamp(0, a, b)

    const double Fa = normal_cdf(a / s);
    const double Fb = normal_cdf(b / s);
    const double Ft = normal_cdf(t / s);
    const double fa = normal_pdf(a / s);
    const double fb = normal_pdf(b / s);
    const double ft = normal_pdf(t / s);

    // (clip-to-lower mass) + (clip-to-upper mass) + interior |m + eps - sat|
    const double dev = (sat - lower) * Fa + (upper - sat) * (1.0 - Fb) +
                       s * (2.0 * ft - fa - fb) + t * (2.0 * Ft - Fa - Fb);
    return std::max(dev, 0.0);
}

namespace {

// adaptive Simpson with the usual 1/15 Richardson error estimate
double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& g, double a, double fa, double b, double fb,
             double m, double fm, double whole, double tol, int depth) {
    if (depth <= 0)
        throw std::runtime_error("quadrature_oracle: did not converge to tolerance after max "
                                 "refinement depth");
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = g(lm);
    const double frm = g(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(g, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adapt(g, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double quadrature_oracle(const std::function<double(double)>& f, const GaussianNoiseModel& noise,
                         double lo_sigmas, double hi_sigmas) {
    if (!(lo_sigmas < hi_sigmas))
        throw std::invalid_argument("quadrature_oracle: empty integration range");
    const double lo = lo_sigmas * noise.sigma;
    const double hi = hi_sigmas * noise.sigma;
    const auto g = [&](double x) { return f(x) * noise.density(x); };

    // seed the recursion on a modest uniform grid so narrow density mass
    // cannot hide from the first error estimate
    constexpr int kSeedCells = 32;
    constexpr double kTol = 1e-10;
    constexpr int kMaxDepth = 52;
    const double h = (hi - lo) / kSeedCells;
    double total = 0.0;
    for (int i = 0; i < kSeedCells; ++i) {
        const double a = lo + i * h;
        const double b = (i + 1 == kSeedCells) ? hi : lo + (i + 1) * h;
        const double m = 0.5 * (a + b);
        const double fa = g(a), fb = g(b), fm = g(m);
        const double whole = simpson(a, fa, b, fb, fm);
        total += adapt(g, a, fa, b, fb, m, fm, whole, kTol / kSeedCells, kMaxDepth);
    }
    return total;
}

GaussianNoiseModel fit_sigma(std::span<const double> residuals) {
    if (residuals.size() < 2)
        throw DataError("fit_sigma: need at least 2 residuals, got " +
                        std::to_string(residuals.size()));
    double ss = 0.0;
    for (double r : residuals) ss += r * r;
    const double sigma = std::sqrt(ss / static_cast<double>(residuals.size()));
    if (!(sigma > 0.0)) throw DataError("fit_sigma: residuals are identically zero");
    return GaussianNoiseModel(sigma);
}

}  // namespace sms
