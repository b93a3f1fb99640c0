#include "chemowall/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chemowall/error.hpp"
#include "chemowall/rng.hpp"

namespace chemowall {

void TimeGrid::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidInput("time grid: dt must be positive and finite, got " + std::to_string(dt));
    }
    if (n_steps < 1) throw InvalidInput("time grid: n_steps must be at least 1");
    if (!std::isfinite(t0) || !std::isfinite(t_end())) {
        throw InvalidInput("time grid: endpoints must be finite");
    }
}

TimeGrid TimeGrid::span(double t0, double t_end, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("time grid: dt must be positive");
    if (!(t_end > t0)) throw InvalidInput("time grid: t_end must exceed t0");
    const double steps = std::round((t_end - t0) / dt);
    TimeGrid grid{t0, dt, static_cast<std::size_t>(std::max(1.0, steps))};
    grid.validate();
    return grid;
}

void OUParams::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw InvalidInput("O-U params: beta must be positive, got " + std::to_string(beta));
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InvalidInput("O-U params: gamma must be positive, got " + std::to_string(gamma));
    }
}

double OUParams::stationary_sd() const noexcept { return gamma / std::sqrt(2.0 * beta); }

const char* to_string(NoiseKind kind) noexcept {
    switch (kind) {
        case NoiseKind::Wiener: return "wiener";
        case NoiseKind::OrnsteinUhlenbeck: return "ornstein_uhlenbeck";
    }
    return "unknown";
}

double NoisePath::at(double t) const {
    const double u = (t - grid.t0) / grid.dt;
    const double last = static_cast<double>(grid.n_steps);
    // Allow round-off slack at both ends.
    if (u < -1e-9 || u > last + 1e-9 || values.empty()) {
        throw InvalidInput("noise path: time " + std::to_string(t) + " outside [" +
                           std::to_string(grid.t0) + ", " + std::to_string(grid.t_end()) + "]");
    }
    const double clamped = std::clamp(u, 0.0, last);
    auto k = static_cast<std::size_t>(clamped);
    if (k >= grid.n_steps) return values[grid.n_steps];
    const double w = clamped - static_cast<double>(k);
    if (w == 0.0) return values[k];
    return values[k] + w * (values[k + 1] - values[k]);
}

bool NoisePath::covers(double t_begin, double t_end) const noexcept {
    const double slack = 1e-9 * grid.dt;
    return t_begin >= grid.t0 - slack && t_end <= grid.t_end() + slack;
}

double BandReport::inside_fraction() const noexcept {
    if (points == 0) return 0.0;
    return static_cast<double>(points - violations) / static_cast<double>(points);
}

NoisePath sample_wiener_path(std::uint64_t seed, const TimeGrid& grid) {
    grid.validate();
    NoisePath path{grid, std::vector<double>(grid.size()), NoiseKind::Wiener, seed, std::nullopt};
    std::vector<double> normals(grid.n_steps);
    GaussianStream(seed, kWienerStream).fill(normals);
    const double sd = std::sqrt(grid.dt);
    path.values[0] = 0.0;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        path.values[k + 1] = path.values[k] + sd * normals[k];
    }
    return path;
}

NoisePath sample_ou_path(const OUParams& params, std::uint64_t seed, const TimeGrid& grid) {
    params.validate();
    grid.validate();
    NoisePath path{grid, std::vector<double>(grid.size()), NoiseKind::OrnsteinUhlenbeck, seed,
                   params};
    std::vector<double> normals(grid.size());
    GaussianStream(seed, kOUStream).fill(normals);

    const double decay = std::exp(-params.beta * grid.dt);
    // 1 - e^{-2 beta dt} via expm1 keeps precision for small beta * dt.
    const double innovation_sd =
        params.gamma * std::sqrt(-std::expm1(-2.0 * params.beta * grid.dt) / (2.0 * params.beta));
    path.values[0] = params.stationary_sd() * normals[0];
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        path.values[k + 1] = path.values[k] * decay + innovation_sd * normals[k + 1];
    }
    return path;
}

ErgodicStats ergodic_stats(const NoisePath& path) {
    if (path.values.empty()) throw InvalidInput("ergodic_stats: empty path");
    ErgodicStats stats;
    const auto& v = path.values;
    for (double x : v) stats.sup_abs = std::max(stats.sup_abs, std::abs(x));
    if (v.size() == 1) {
        stats.time_avg = v[0];
        stats.time_avg_abs = std::abs(v[0]);
        return stats;
    }
    double sum = 0.0;
    double sum_abs = 0.0;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        sum += 0.5 * (v[k] + v[k + 1]);
        sum_abs += 0.5 * (std::abs(v[k]) + std::abs(v[k + 1]));
    }
    const double steps = static_cast<double>(v.size() - 1);
    stats.time_avg = sum / steps;
    stats.time_avg_abs = sum_abs / steps;
    const double horizon = steps * path.grid.dt;
    stats.final_over_t = std::abs(v.back()) / horizon;
    return stats;
}

NoisePath perturbed_dilution(const NoisePath& path, double dilution, double alpha) {
    if (!(alpha >= 0.0)) throw InvalidInput("perturbed_dilution: alpha must be >= 0");
    NoisePath out = path;
    for (double& v : out.values) v = dilution + alpha * v;
    return out;
}

BandReport check_dilution_band(const NoisePath& dilution, double b1, double b2) {
    if (!(b1 < b2)) throw InvalidInput("check_dilution_band: requires b1 < b2");
    if (!(b1 > 0.0)) throw InvalidInput("check_dilution_band: requires b1 > 0");
    BandReport report{b1, b2, dilution.values.size(), 0, std::nullopt};
    for (std::size_t k = 0; k < dilution.values.size(); ++k) {
        const double v = dilution.values[k];
        if (!(v > b1 && v < b2)) {
            ++report.violations;
            if (!report.first_violation_time) report.first_violation_time = dilution.grid.time(k);
        }
    }
    return report;
}

double lag1_autocorrelation(const NoisePath& path) {
    const auto& v = path.values;
    if (v.size() < 3) throw InvalidInput("lag1_autocorrelation: path too short");
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double d = v[k] - mean;
        den += d * d;
        if (k + 1 < v.size()) num += d * (v[k + 1] - mean);
    }
    return num / den;
}

std::vector<double> cumulative_integral(const NoisePath& path) {
    std::vector<double> out(path.values.size(), 0.0);
    for (std::size_t k = 1; k < out.size(); ++k) {
        out[k] = out[k - 1] + 0.5 * path.grid.dt * (path.values[k - 1] + path.values[k]);
    }
    return out;
}

}  // namespace chemowall
