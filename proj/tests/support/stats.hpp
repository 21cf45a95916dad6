#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

// Plain sample statistics for tests; independent of the kernels module.

namespace evacsim::testing {

inline double sample_mean(const std::vector<double>& xs) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
    const double mean = sample_mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(xs.size());
}

/// Kolmogorov-Smirnov distance between an empirical sample and a CDF.
template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::fabs(static_cast<double>(i) / n - f));
    }
    return d;
}

}  // namespace evacsim::testing
