#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sms {

enum class InjuryGroup { serious, minor, custom };

const char* to_string(InjuryGroup g);
InjuryGroup injury_group_from_string(const std::string& s);

// One observed case. `a` is the sentencing starting point, `x` the victim
// counts by severity (slight, minor, serious, fatal), `z` the conviction
// related indicators, `v` the other sentencing indicators. All durations are
// in months; [lower, upper] is the statutory sentence interval.
struct CaseRecord {
    std::string case_id;
    InjuryGroup group = InjuryGroup::custom;
    double a = 0.0;
    std::array<double, 4> x{};
    std::vector<double> z;
    std::vector<double> v;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> y;  // absent in pure-prediction rows

    // First violated invariant as a message, or nullopt when valid.
    std::optional<std::string> check() const;
};

// Structural weights of the sentencing formula:
//   (a + b*x1 + c*x2 + d*x3 + e*x4) * prod_i(1 + p_i z_i) * (1 + sum_j q_j v_j + eta)
struct StructuralParams {
    double b = 0.0, c = 0.0, d = 0.0, e = 0.0;
    double eta = 0.0;
    std::vector<double> p;  // conviction weights
    std::vector<double> q;  // other-feature weights
};

struct RegressorVector {
    std::vector<double> values;
    int m1 = 0;
    int m2 = 0;
};

struct ThetaVector {
    std::vector<double> values;
    double box_radius = 0.0;  // half-width of the parameter box
};

// Maximum supported number of conviction features; the basis is 2^m1-dim.
inline constexpr int kMaxConvictionFeatures = 16;

std::size_t conviction_basis_size(int m1);
std::size_t regressor_dim(int m1, int m2);

// All 2^m subset products of z, ordered by subset size then lexicographically
// by member indices: [1, z1..zm, z1z2, z1z3, .., z1z2..zm].
std::vector<double> expand_conviction_basis(std::span<const double> z);

// phi of the linearized model: five blocks scaled by (a, x1..x4), each block
// [mult*phi1 | mult*(phi2 kron phi1)] with the v-index outer and the subset
// index inner.
std::vector<double> build_regressor_raw(double a, const std::array<double, 4>& x,
                                        std::span<const double> z, std::span<const double> v);
RegressorVector build_regressor(const CaseRecord& rec);

// theta of the linearized model, same block layout with multipliers
// (1, b, c, d, e) and blocks [mult*(1+eta)*theta1 | mult*(theta2 kron theta1)].
// Throws if any component leaves the box, naming the offending index.
ThetaVector build_theta(const StructuralParams& sp, double box_radius);

// Clamp to the statutory interval. lower must be < upper.
double saturate(double x, double lower, double upper);

// The expression inside the saturation, excluding noise.
double sms_inner(const StructuralParams& sp, const CaseRecord& rec);

// One observation of the full model: saturate(inner + eps).
double sms_generate(const StructuralParams& sp, const CaseRecord& rec, double eps);

}  // namespace sms
