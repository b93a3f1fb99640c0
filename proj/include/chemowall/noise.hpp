#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace chemowall {

/// Uniform grid t0 + k * dt, k = 0..n_steps.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 1e-3;
    std::size_t n_steps = 1;

    double time(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
    double t_end() const noexcept { return time(n_steps); }
    std::size_t size() const noexcept { return n_steps + 1; }

    /// Throws InvalidInput unless dt > 0, n_steps >= 1 and both ends are finite.
    void validate() const;

    /// Grid covering [t0, t_end] with the step count rounded to the nearest integer.
    static TimeGrid span(double t0, double t_end, double dt);
};

/// Mean reversion `beta` and volatility `gamma` of dz + beta z dt = gamma dW.
struct OUParams {
    double beta = 1.0;
    double gamma = 1.0;

    void validate() const;
    /// Standard deviation of the stationary law, gamma / sqrt(2 beta).
    double stationary_sd() const noexcept;
};

enum class NoiseKind { Wiener, OrnsteinUhlenbeck };

const char* to_string(NoiseKind kind) noexcept;

/// A sampled realization of a driving process (or of a dilution derived from one).
struct NoisePath {
    TimeGrid grid;
    std::vector<double> values;
    NoiseKind kind = NoiseKind::Wiener;
    std::uint64_t seed = 0;
    std::optional<OUParams> ou;

    /// Linear interpolation; throws InvalidInput outside the grid span.
    double at(double t) const;
    bool covers(double t_begin, double t_end) const noexcept;
};

struct ErgodicStats {
    double time_avg = 0.0;
    double time_avg_abs = 0.0;
    double sup_abs = 0.0;
    double final_over_t = 0.0;
};

struct BandReport {
    double b1 = 0.0;
    double b2 = 0.0;
    std::size_t points = 0;
    std::size_t violations = 0;
    std::optional<double> first_violation_time;

    double inside_fraction() const noexcept;
    bool certified() const noexcept { return violations == 0; }
};

// Stream identifiers for the Gaussian source; distinct so that a Wiener and an
// O-U path sharing a seed are independent.
inline constexpr std::uint32_t kWienerStream = 0x57494E52u;
inline constexpr std::uint32_t kOUStream = 0x4F555354u;

NoisePath sample_wiener_path(std::uint64_t seed, const TimeGrid& grid);

/// Exact AR(1) discretization of the stationary O-U process:
/// z0 ~ N(0, gamma^2 / (2 beta)), z_{k+1} = z_k e^{-beta dt} + gamma sqrt((1 - e^{-2 beta dt}) / (2 beta)) n_k.
NoisePath sample_ou_path(const OUParams& params, std::uint64_t seed, const TimeGrid& grid);

/// Trapezoidal time averages over the whole grid and sup over grid points.
ErgodicStats ergodic_stats(const NoisePath& path);

/// Pointwise D + alpha * z(t).
NoisePath perturbed_dilution(const NoisePath& path, double dilution, double alpha);

/// Counts grid points outside the open band (b1, b2).
BandReport check_dilution_band(const NoisePath& dilution, double b1, double b2);

/// Sample lag-1 autocorrelation about the sample mean.
double lag1_autocorrelation(const NoisePath& path);

/// Running trapezoidal integral of the path, same grid.
std::vector<double> cumulative_integral(const NoisePath& path);

}  // namespace chemowall
