#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chemowall/error.hpp"
#include "chemowall/models.hpp"
#include "chemowall/noise.hpp"

namespace chemowall {

/// A three-component state with a lossless array view.
template <class S>
concept ThreeState = requires(const S& s, const std::array<double, 3>& a) {
    { s.to_array() } -> std::same_as<std::array<double, 3>>;
    { S::from_array(a) } -> std::same_as<S>;
};

enum class Coordinates { Original, BiomassProportion, SigmaKappa };
enum class Scheme { RK4Pathwise, EulerMaruyama, HeunStratonovich, ForwardEuler, Heun };

const char* to_string(Coordinates c) noexcept;
const char* to_string(Scheme s) noexcept;

template <class S>
constexpr Coordinates coordinates_of() noexcept {
    if constexpr (std::same_as<S, StateBP>) return Coordinates::BiomassProportion;
    else if constexpr (std::same_as<S, StateSK>) return Coordinates::SigmaKappa;
    else return Coordinates::Original;
}

/// Which noise realization produced a trajectory.
struct NoiseRef {
    std::optional<std::uint64_t> seed;
    std::optional<NoiseKind> kind;
    std::optional<OUParams> ou;
};

template <ThreeState S>
struct BasicTrajectory {
    TimeGrid grid;
    std::vector<S> states;
    Coordinates coords = coordinates_of<S>();
    Scheme scheme = Scheme::RK4Pathwise;
    NoiseRef noise;

    double time(std::size_t k) const noexcept { return grid.time(k); }
    const S& final_state() const { return states.back(); }
};

using Trajectory = BasicTrajectory<State3>;
using TrajectoryBP = BasicTrajectory<StateBP>;

/// Per-step checks applied after every accepted step.
template <ThreeState S>
struct StepChecks {
    /// Every component must stay >= floor (positivity theorems; no clamping).
    std::optional<double> component_floor;
    /// Returns an error message when the state leaves the model's domain.
    std::function<std::optional<std::string>(const S&)> domain;
};

namespace detail {

inline std::array<double, 3> axpy(const std::array<double, 3>& y, double h,
                                  const std::array<double, 3>& k) noexcept {
    return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]};
}

template <ThreeState S>
void check_step(const S& state, double t, double t_prev, const StepChecks<S>& checks) {
    const auto v = state.to_array();
    for (double c : v) {
        if (!std::isfinite(c)) {
            throw BlowUp("integration blew up after t = " + std::to_string(t_prev), t_prev);
        }
    }
    if (checks.component_floor) {
        for (double c : v) {
            if (c < *checks.component_floor) {
                throw PositivityViolation("state component " + std::to_string(c) +
                                              " fell below floor at t = " + std::to_string(t),
                                          t);
            }
        }
    }
    if (checks.domain) {
        if (auto msg = checks.domain(state)) {
            throw SingularInput(*msg + " at t = " + std::to_string(t));
        }
    }
}

template <ThreeState S>
BasicTrajectory<S> start(const S& init, const TimeGrid& grid, Scheme scheme) {
    grid.validate();
    BasicTrajectory<S> traj;
    traj.grid = grid;
    traj.scheme = scheme;
    traj.states.reserve(grid.size());
    traj.states.push_back(init);
    return traj;
}

/// Integer number of Wiener grid steps per integration step, and the index offset.
std::pair<std::size_t, std::size_t> wiener_stride(const NoisePath& wiener, const TimeGrid& grid);

}  // namespace detail

/// Classical RK4 for y' = rhs(t, y) on a fixed grid.
template <ThreeState S, class Rhs>
    requires std::invocable<Rhs&, double, const S&>
BasicTrajectory<S> integrate_rk4(Rhs&& rhs, const S& init, const TimeGrid& grid,
                                 const StepChecks<S>& checks = {}) {
    auto traj = detail::start(init, grid, Scheme::RK4Pathwise);
    const double h = grid.dt;
    auto y = init.to_array();
    for (std::size_t n = 0; n < grid.n_steps; ++n) {
        const double t = grid.time(n);
        const auto k1 = rhs(t, S::from_array(y)).to_array();
        const auto k2 = rhs(t + 0.5 * h, S::from_array(detail::axpy(y, 0.5 * h, k1))).to_array();
        const auto k3 = rhs(t + 0.5 * h, S::from_array(detail::axpy(y, 0.5 * h, k2))).to_array();
        const auto k4 = rhs(t + h, S::from_array(detail::axpy(y, h, k3))).to_array();
        for (int i = 0; i < 3; ++i) {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        const S next = S::from_array(y);
        detail::check_step(next, grid.time(n + 1), t, checks);
        traj.states.push_back(next);
    }
    return traj;
}

/// RK4 on a random ODE y' = rhs(y, z(t)); stage times read the noise path by
/// linear interpolation. The noise grid must cover the integration grid.
template <ThreeState S, class Rhs>
    requires std::invocable<Rhs&, const S&, double>
BasicTrajectory<S> integrate_pathwise(Rhs&& rhs, const NoisePath& noise, const S& init,
                                      const TimeGrid& grid, const StepChecks<S>& checks = {}) {
    grid.validate();
    if (!noise.covers(grid.t0, grid.t_end())) {
        throw InvalidInput("integrate_pathwise: noise path does not cover the integration grid");
    }
    auto traj = integrate_rk4<S>(
        [&](double t, const S& y) { return rhs(y, noise.at(t)); }, init, grid, checks);
    traj.noise = {noise.seed, noise.kind, noise.ou};
    return traj;
}

/// Forward Euler for y' = rhs(y).
template <ThreeState S, class Rhs>
    requires std::invocable<Rhs&, const S&>
BasicTrajectory<S> integrate_euler(Rhs&& rhs, const S& init, const TimeGrid& grid,
                                   const StepChecks<S>& checks = {}) {
    auto traj = detail::start(init, grid, Scheme::ForwardEuler);
    const double h = grid.dt;
    auto y = init.to_array();
    for (std::size_t n = 0; n < grid.n_steps; ++n) {
        const auto f = rhs(S::from_array(y)).to_array();
        for (int i = 0; i < 3; ++i) y[i] = y[i] + f[i] * h;
        const S next = S::from_array(y);
        detail::check_step(next, grid.time(n + 1), grid.time(n), checks);
        traj.states.push_back(next);
    }
    return traj;
}

/// Explicit trapezoidal (Heun) for y' = rhs(y).
template <ThreeState S, class Rhs>
    requires std::invocable<Rhs&, const S&>
BasicTrajectory<S> integrate_heun(Rhs&& rhs, const S& init, const TimeGrid& grid,
                                  const StepChecks<S>& checks = {}) {
    auto traj = detail::start(init, grid, Scheme::Heun);
    const double h = grid.dt;
    auto y = init.to_array();
    for (std::size_t n = 0; n < grid.n_steps; ++n) {
        const auto f = rhs(S::from_array(y)).to_array();
        std::array<double, 3> pred{};
        for (int i = 0; i < 3; ++i) pred[i] = y[i] + f[i] * h;
        const auto fp = rhs(S::from_array(pred)).to_array();
        for (int i = 0; i < 3; ++i) y[i] = y[i] + 0.5 * (f[i] + fp[i]) * h;
        const S next = S::from_array(y);
        detail::check_step(next, grid.time(n + 1), grid.time(n), checks);
        traj.states.push_back(next);
    }
    return traj;
}

/// Euler-Maruyama for the Ito SDE dy = f dt + g dW with scalar W:
/// y_{k+1} = y_k + f(y_k) dt + g(y_k) dW_k. `drift_diffusion(y)` returns a
/// {drift, diffusion} pair. The Wiener grid step must divide dt.
template <ThreeState S, class DriftDiffusionFn>
BasicTrajectory<S> integrate_em_ito(DriftDiffusionFn&& drift_diffusion, const NoisePath& wiener,
                                    const S& init, const TimeGrid& grid,
                                    const StepChecks<S>& checks = {}) {
    auto traj = detail::start(init, grid, Scheme::EulerMaruyama);
    traj.noise = {wiener.seed, wiener.kind, wiener.ou};
    const auto [stride, offset] = detail::wiener_stride(wiener, grid);
    const double h = grid.dt;
    auto y = init.to_array();
    for (std::size_t n = 0; n < grid.n_steps; ++n) {
        const std::size_t k = offset + n * stride;
        const double dW = wiener.values[k + stride] - wiener.values[k];
        const auto fg = drift_diffusion(S::from_array(y));
        const auto f = fg.drift.to_array();
        const auto g = fg.diffusion.to_array();
        for (int i = 0; i < 3; ++i) y[i] = y[i] + f[i] * h + g[i] * dW;
        const S next = S::from_array(y);
        detail::check_step(next, grid.time(n + 1), grid.time(n), checks);
        traj.states.push_back(next);
    }
    return traj;
}

/// Stochastic Heun (predictor-corrector) for the Stratonovich SDE dy = f dt + g o dW.
template <ThreeState S, class DriftFn, class DiffusionFn>
BasicTrajectory<S> integrate_heun_stratonovich(DriftFn&& drift, DiffusionFn&& diffusion,
                                               const NoisePath& wiener, const S& init,
                                               const TimeGrid& grid,
                                               const StepChecks<S>& checks = {}) {
    auto traj = detail::start(init, grid, Scheme::HeunStratonovich);
    traj.noise = {wiener.seed, wiener.kind, wiener.ou};
    const auto [stride, offset] = detail::wiener_stride(wiener, grid);
    const double h = grid.dt;
    auto y = init.to_array();
    for (std::size_t n = 0; n < grid.n_steps; ++n) {
        const std::size_t k = offset + n * stride;
        const double dW = wiener.values[k + stride] - wiener.values[k];
        const S current = S::from_array(y);
        const auto f = drift(current).to_array();
        const auto g = diffusion(current).to_array();
        std::array<double, 3> pred{};
        for (int i = 0; i < 3; ++i) pred[i] = y[i] + f[i] * h + g[i] * dW;
        const S predicted = S::from_array(pred);
        if (checks.domain) {
            if (auto msg = checks.domain(predicted)) {
                throw SingularInput("Heun predictor: " + *msg + " at t = " +
                                    std::to_string(grid.time(n + 1)));
            }
        }
        const auto fp = drift(predicted).to_array();
        const auto gp = diffusion(predicted).to_array();
        for (int i = 0; i < 3; ++i) {
            y[i] = y[i] + 0.5 * (f[i] + fp[i]) * h + 0.5 * (g[i] + gp[i]) * dW;
        }
        const S next = S::from_array(y);
        detail::check_step(next, grid.time(n + 1), grid.time(n), checks);
        traj.states.push_back(next);
    }
    return traj;
}

// Chemostat-specific entry points used by the harness.

/// Floor used for the positivity theorem of the random model.
inline constexpr double kPositivityFloor = -1e-9;

Trajectory simulate_deterministic(const ChemostatParams& p, const State3& init,
                                  const TimeGrid& grid);

/// Random (O-U driven) model in original coordinates. Applies the positivity floor.
Trajectory simulate_random(const ChemostatParams& p, const NoisePath& ou, const State3& init,
                           const TimeGrid& grid);

/// Random model in (s, x, xi) coordinates; requires x(0) > 0.
TrajectoryBP simulate_random_bp(const ChemostatParams& p, const NoisePath& ou,
                                const StateBP& init, const TimeGrid& grid);

/// Wiener model, Ito form, Euler-Maruyama. Fails hard if s <= -a.
Trajectory simulate_ito(const ChemostatParams& p, const NoisePath& wiener, const State3& init,
                        const TimeGrid& grid);

/// Wiener model, Stratonovich form, stochastic Heun. Fails hard if s <= -a.
Trajectory simulate_stratonovich(const ChemostatParams& p, const NoisePath& wiener,
                                 const State3& init, const TimeGrid& grid);

/// Domain check s > -a shared by the Wiener-model schemes.
std::function<std::optional<std::string>(const State3&)> substrate_barrier(double a);

}  // namespace chemowall
