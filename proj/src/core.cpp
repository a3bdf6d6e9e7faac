#include "sms/core.hpp"

#include <cmath>
#include <stdexcept>

#include "sms/errors.hpp"
#include "sms/vec.hpp"

namespace sms {

const char* to_string(InjuryGroup g) {
    switch (g) {
        case InjuryGroup::serious: return "serious";
        case InjuryGroup::minor: return "minor";
        case InjuryGroup::custom: return "custom";
    }
    return "custom";
}

InjuryGroup injury_group_from_string(const std::string& s) {
    if (s == "serious") return InjuryGroup::serious;
    if (s == "minor") return InjuryGroup::minor;
    return InjuryGroup::custom;
}

std::optional<std::string> CaseRecord::check() const {
    if (!(lower > 0.0)) return "lower bound must be positive, got " + std::to_string(lower);
    if (!(lower < upper))
        return "bounds must satisfy lower < upper, got [" + std::to_string(lower) + ", " +
               std::to_string(upper) + "]";
    if (!(a >= 0.0)) return "starting point a must be >= 0, got " + std::to_string(a);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= 0.0) || x[i] != std::floor(x[i]))
            return "x" + std::to_string(i + 1) + " must be a non-negative integer, got " +
                   std::to_string(x[i]);
    }
    for (std::size_t i = 0; i < z.size(); ++i)
        if (z[i] != 0.0 && z[i] != 1.0)
            return "z_" + std::to_string(i + 1) + " must be 0 or 1, got " + std::to_string(z[i]);
    for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] != 0.0 && v[j] != 1.0)
            return "v_" + std::to_string(j + 1) + " must be 0 or 1, got " + std::to_string(v[j]);
    if (y && !(*y >= lower && *y <= upper))
        return "y=" + std::to_string(*y) + " outside [" + std::to_string(lower) + ", " +
               std::to_string(upper) + "]";
    return std::nullopt;
}

std::size_t conviction_basis_size(int m1) {
    if (m1 < 0) throw std::invalid_argument("conviction basis: m1 must be >= 0");
    if (m1 > kMaxConvictionFeatures)
        throw std::length_error("conviction basis: m1=" + std::to_string(m1) +
                                " exceeds the capacity limit of " +
                                std::to_string(kMaxConvictionFeatures) +
                                " (basis size is 2^m1)");
    return std::size_t{1} << m1;
}

std::size_t regressor_dim(int m1, int m2) {
    if (m2 < 0) throw std::invalid_argument("regressor_dim: m2 must be >= 0");
    return 5 * conviction_basis_size(m1) * (1 + static_cast<std::size_t>(m2));
}

std::vector<double> expand_conviction_basis(std::span<const double> z) {
    const int m = static_cast<int>(z.size());
    std::vector<double> out;
    out.reserve(conviction_basis_size(m));
    out.push_back(1.0);

    // combinations of each size in lexicographic order of member indices
    std::vector<int> idx;
    for (int size = 1; size <= m; ++size) {
        idx.resize(size);
        for (int i = 0; i < size; ++i) idx[i] = i;
        for (;;) {
            double prod = 1.0;
            for (int i : idx) prod *= z[static_cast<std::size_t>(i)];
            out.push_back(prod);

            int pos = size - 1;
            while (pos >= 0 && idx[pos] == m - size + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    return out;
}

namespace {

// Appends [mult*basis | mult*(w kron basis)] for one multiplier block.
void append_block(std::vector<double>& out, double mult, std::span<const double> basis,
                  std::span<const double> w) {
    for (double b : basis) out.push_back(mult * b);
    for (double wj : w)
        for (double b : basis) out.push_back(mult * wj * b);
}

}  // namespace

std::vector<double> build_regressor_raw(double a, const std::array<double, 4>& x,
                                        std::span<const double> z, std::span<const double> v) {
    const std::vector<double> phi1 = expand_conviction_basis(z);
    std::vector<double> out;
    out.reserve(regressor_dim(static_cast<int>(z.size()), static_cast<int>(v.size())));
    append_block(out, a, phi1, v);
    for (double xi : x) append_block(out, xi, phi1, v);
    return out;
}

RegressorVector build_regressor(const CaseRecord& rec) {
    RegressorVector phi;
    phi.m1 = static_cast<int>(rec.z.size());
    phi.m2 = static_cast<int>(rec.v.size());
    phi.values = build_regressor_raw(rec.a, rec.x, rec.z, rec.v);
    return phi;
}

ThetaVector build_theta(const StructuralParams& sp, double box_radius) {
    if (!(box_radius > 0.0)) throw std::invalid_argument("build_theta: box radius must be > 0");
    const std::vector<double> theta1 = expand_conviction_basis(sp.p);

    ThetaVector theta;
    theta.box_radius = box_radius;
    theta.values.reserve(regressor_dim(static_cast<int>(sp.p.size()),
                                       static_cast<int>(sp.q.size())));
    const double scale = 1.0 + sp.eta;
    for (double mult : {1.0, sp.b, sp.c, sp.d, sp.e}) {
        for (double t : theta1) theta.values.push_back(mult * scale * t);
        for (double qj : sp.q)
            for (double t : theta1) theta.values.push_back(mult * qj * t);
    }

    for (std::size_t i = 0; i < theta.values.size(); ++i) {
        if (std::abs(theta.values[i]) > box_radius)
            throw std::invalid_argument("build_theta: component " + std::to_string(i) + " = " +
                                        std::to_string(theta.values[i]) +
                                        " outside the box of radius " +
                                        std::to_string(box_radius));
    }
    return theta;
}

double saturate(double x, double lower, double upper) {
    if (!(lower < upper))
        throw std::invalid_argument("saturate: requires lower < upper, got [" +
                                    std::to_string(lower) + ", " + std::to_string(upper) + "]");
    return std::min(upper, std::max(lower, x));
}

double sms_inner(const StructuralParams& sp, const CaseRecord& rec) {
    if (sp.p.size() != rec.z.size() || sp.q.size() != rec.v.size())
        throw std::invalid_argument("sms_inner: parameter/feature dimension mismatch");
    double base = rec.a + sp.b * rec.x[0] + sp.c * rec.x[1] + sp.d * rec.x[2] + sp.e * rec.x[3];
    double conviction = 1.0;
    for (std::size_t i = 0; i < sp.p.size(); ++i) conviction *= 1.0 + sp.p[i] * rec.z[i];
    double other = 1.0 + sp.eta;
    for (std::size_t j = 0; j < sp.q.size(); ++j) other += sp.q[j] * rec.v[j];
    return base * conviction * other;
}

double sms_generate(const StructuralParams& sp, const CaseRecord& rec, double eps) {
    return saturate(sms_inner(sp, rec) + eps, rec.lower, rec.upper);
}

}  // namespace sms
