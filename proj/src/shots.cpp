#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "floqlat/harness.hpp"

namespace floqlat {

namespace {

// Uniform in [0, 1) with 53 random bits; the mt19937_64 stream is fully
// specified by the standard, so draws are portable.
inline double uniform53(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF binomial draw. The walk starts 12 standard deviations below the
// mean (the truncated lower-tail mass is < 2e-33, far below the 2^-53
// resolution of the uniforms), which keeps the pmf recurrence away from
// underflow for any shots <= 1e5.
int sample_binomial(std::mt19937_64& rng, int n, double p) {
    if (p <= 0.0)
        return 0;
    if (p >= 1.0)
        return n;
    const double u = uniform53(rng);

    const double mean = static_cast<double>(n) * p;
    const double sd = std::sqrt(mean * (1.0 - p));
    const int k0 = std::max(0, static_cast<int>(std::floor(mean - 12.0 * sd)));

    // log pmf(k0) via lgamma, then multiplicative recurrence upward
    const double nd = static_cast<double>(n);
    const double k0d = static_cast<double>(k0);
    double log_pmf = std::lgamma(nd + 1.0) - std::lgamma(k0d + 1.0) - std::lgamma(nd - k0d + 1.0) +
                     k0d * std::log(p) + (nd - k0d) * std::log1p(-p);
    double pmf = std::exp(log_pmf);
    const double odds = p / (1.0 - p);

    double cdf = pmf;
    int k = k0;
    while (cdf <= u && k < n) {
        pmf *= (nd - static_cast<double>(k)) / (static_cast<double>(k) + 1.0) * odds;
        ++k;
        cdf += pmf;
    }
    return k;
}

} // namespace

TimeSeries emulate_shots(const TimeSeries& series, int shots, std::uint64_t seed) {
    if (shots < 1)
        throw std::invalid_argument("shots must be >= 1");

    TimeSeries noisy = series;
    std::mt19937_64 rng(seed);
    for (double& v : noisy.values) {
        if (std::abs(v) > 1.0 + 1e-9)
            throw std::invalid_argument("series value outside [-1, 1]");
        const double s = std::clamp(v, -1.0, 1.0);
        const double p = 0.5 * (1.0 + s);
        const int k = sample_binomial(rng, shots, p);
        v = 2.0 * static_cast<double>(k) / static_cast<double>(shots) - 1.0;
    }
    return noisy;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace floqlat
