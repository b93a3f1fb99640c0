#include "chemowall/integrators.hpp"

#include <cmath>

namespace chemowall {

const char* to_string(Coordinates c) noexcept {
    switch (c) {
        case Coordinates::Original: return "original";
        case Coordinates::BiomassProportion: return "biomass_proportion";
        case Coordinates::SigmaKappa: return "sigma_kappa";
    }
    return "unknown";
}

const char* to_string(Scheme s) noexcept {
    switch (s) {
        case Scheme::RK4Pathwise: return "rk4_pathwise";
        case Scheme::EulerMaruyama: return "euler_maruyama";
        case Scheme::HeunStratonovich: return "heun_stratonovich";
        case Scheme::ForwardEuler: return "forward_euler";
        case Scheme::Heun: return "heun";
    }
    return "unknown";
}

namespace detail {

std::pair<std::size_t, std::size_t> wiener_stride(const NoisePath& wiener, const TimeGrid& grid) {
    grid.validate();
    if (wiener.kind != NoiseKind::Wiener) {
        throw InvalidInput("SDE integration requires a Wiener path");
    }
    if (!wiener.covers(grid.t0, grid.t_end())) {
        throw InvalidInput("Wiener path does not cover the integration grid");
    }
    const double ratio = grid.dt / wiener.grid.dt;
    const double stride = std::round(ratio);
    if (stride < 1.0 || std::abs(ratio - stride) > 1e-9 * ratio) {
        throw InvalidInput("integration step must be an integer multiple of the Wiener grid step");
    }
    const double shift = (grid.t0 - wiener.grid.t0) / wiener.grid.dt;
    const double offset = std::round(shift);
    if (std::abs(shift - offset) > 1e-9 * std::max(1.0, shift)) {
        throw InvalidInput("integration grid is not aligned with the Wiener grid");
    }
    return {static_cast<std::size_t>(stride), static_cast<std::size_t>(offset)};
}

}  // namespace detail

std::function<std::optional<std::string>(const State3&)> substrate_barrier(double a) {
    return [a](const State3& y) -> std::optional<std::string> {
        if (y.s <= -a) return "substrate reached the singular barrier s = -a";
        return std::nullopt;
    };
}

Trajectory simulate_deterministic(const ChemostatParams& p, const State3& init,
                                  const TimeGrid& grid) {
    StepChecks<State3> checks;
    checks.component_floor = kPositivityFloor;
    return integrate_rk4<State3>(
        [&](double, const State3& y) { return rhs_deterministic(y, p); }, init, grid, checks);
}

Trajectory simulate_random(const ChemostatParams& p, const NoisePath& ou, const State3& init,
                           const TimeGrid& grid) {
    StepChecks<State3> checks;
    checks.component_floor = kPositivityFloor;
    return integrate_pathwise<State3>(
        [&](const State3& y, double z) { return rhs_random(y, p, z); }, ou, init, grid, checks);
}

TrajectoryBP simulate_random_bp(const ChemostatParams& p, const NoisePath& ou,
                                const StateBP& init, const TimeGrid& grid) {
    if (!(init.x > 0.0)) {
        throw InvalidInput("biomass/proportion integration requires x(0) > 0");
    }
    StepChecks<StateBP> checks;
    checks.component_floor = kPositivityFloor;
    return integrate_pathwise<StateBP>(
        [&](const StateBP& y, double z) { return rhs_random_bp(y, p, z); }, ou, init, grid,
        checks);
}

Trajectory simulate_ito(const ChemostatParams& p, const NoisePath& wiener, const State3& init,
                        const TimeGrid& grid) {
    StepChecks<State3> checks;
    checks.domain = substrate_barrier(p.a);
    return integrate_em_ito<State3>([&](const State3& y) { return drift_diffusion_ito(y, p); },
                                    wiener, init, grid, checks);
}

Trajectory simulate_stratonovich(const ChemostatParams& p, const NoisePath& wiener,
                                 const State3& init, const TimeGrid& grid) {
    StepChecks<State3> checks;
    checks.domain = substrate_barrier(p.a);
    return integrate_heun_stratonovich<State3>(
        [&](const State3& y) { return drift_stratonovich(y, p); },
        [&](const State3& y) { return diffusion_column(y, p); }, wiener, init, grid, checks);
}

}  // namespace chemowall
