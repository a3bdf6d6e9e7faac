#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sms {

// Streams must replay bit-identically from a seed, so the generator is pinned
// to a named integer algorithm (xoshiro256++ seeded through splitmix64) and
// Gaussian draws go through an explicit inverse-CDF transform instead of
// std::normal_distribution, whose output is unspecified across standard
// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // uniform on [0,1), 53-bit resolution
    double uniform01();

    // uniform on the open interval (0,1); safe as a quantile-function argument
    double uniform_open01();

    bool bernoulli(double prob);

    // N(0,1) via the inverse CDF (single draw per variate)
    double normal();

    // Poisson(rate) by sequential inversion, clamped to [0, cap]
    int poisson(double rate, int cap);

    // uniformly distributed direction in R^dim
    std::vector<double> unit_vector(std::size_t dim);

private:
    std::uint64_t s_[4];
};

// Derives an independent sub-seed (per replication, per purpose).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Standard normal quantile function (Wichura's AS241 rational approximation,
// |relative error| < 1e-15 on (0,1)).
double normal_quantile(double p);

}  // namespace sms
