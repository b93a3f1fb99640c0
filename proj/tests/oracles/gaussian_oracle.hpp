#pragma once

// Reference Monte-Carlo for stationary Gaussian quantities, driven by the
// standard library generator instead of the library's counter-based stream.

#include <cmath>
#include <cstdint>
#include <random>

namespace oracle {

/// Fraction of stationary O-U paths (exact AR(1) on step dt over [0, horizon])
/// whose D + alpha z stays inside the open band (lo, hi).
inline double band_stay_probability(double beta, double gamma, double D, double alpha,
                                    double lo, double hi, double horizon, double dt,
                                    int paths, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = gamma / std::sqrt(2.0 * beta);
    const double decay = std::exp(-beta * dt);
    const double innov = sd * std::sqrt(1.0 - decay * decay);
    const auto steps = static_cast<long>(std::llround(horizon / dt));
    int stayed = 0;
    for (int p = 0; p < paths; ++p) {
        double z = sd * normal(gen);
        bool inside = true;
        for (long k = 0; k <= steps && inside; ++k) {
            const double d = D + alpha * z;
            inside = d > lo && d < hi;
            z = decay * z + innov * normal(gen);
        }
        stayed += inside;
    }
    return static_cast<double>(stayed) / paths;
}

/// Monte-Carlo E|N(0, sd^2)|.
inline double mean_abs_normal(double sd, int samples, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, sd);
    double acc = 0.0;
    for (int i = 0; i < samples; ++i) acc += std::abs(normal(gen));
    return acc / samples;
}

}  // namespace oracle
