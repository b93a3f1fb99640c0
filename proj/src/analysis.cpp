#include "chemowall/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "chemowall/error.hpp"

namespace chemowall {

void DilutionBand::validate() const {
    if (!(b1 > 0.0) || !std::isfinite(b1)) {
        throw InvalidInput("dilution band: b1 must be positive, got " + std::to_string(b1));
    }
    if (!(b2 >= b1) || !std::isfinite(b2)) {
        throw InvalidInput("dilution band: b2 must be >= b1, got b1=" + std::to_string(b1) +
                           " b2=" + std::to_string(b2));
    }
}

double stationary_abs_quantile(const OUParams& ou, double coverage) {
    ou.validate();
    if (!(coverage > 0.0 && coverage < 1.0)) {
        throw InvalidInput("stationary quantile: coverage must be in (0, 1)");
    }
    // P(|N(0, sd^2)| <= q) = erf(q / (sd sqrt 2))
    return ou.stationary_sd() * std::sqrt(2.0) * boost::math::erf_inv(coverage);
}

DilutionBand auto_band(const ChemostatParams& p, const OUParams& ou, double coverage) {
    const double q = stationary_abs_quantile(ou, coverage);
    DilutionBand band{p.D - p.alpha * q, p.D + p.alpha * q};
    if (!(band.b1 > 0.0)) {
        throw InvalidInput("auto band: D - alpha q = " + std::to_string(band.b1) +
                           " is not positive; supply an explicit band");
    }
    return band;
}

BoundsReport attractor_bounds(const ChemostatParams& p, const DilutionBand& band,
                              std::optional<int> sharpening_n) {
    band.validate();
    const double b1 = band.b1;
    const double b2 = band.b2;

    BoundsReport r;
    r.b1 = b1;
    r.b2 = b2;
    r.vartheta = std::min(b1, p.nu);
    r.p_radius = p.s_in * b2 / r.vartheta;
    r.xi_l = p.r2 / (b2 + p.r1 + p.r2);
    r.xi_u = (b1 + p.r2) / (b1 + p.r1 + p.r2);

    const double z_lower_rate = b2 + p.nu - (p.c * p.b * p.nu / p.m) * r.xi_l;
    if (!(z_lower_rate > 0.0)) {
        throw InvalidInput("band yields non-positive b2 + nu - (c b nu / m) xi_l = " +
                           std::to_string(z_lower_rate));
    }
    r.z_l = p.c * p.s_in * b1 / z_lower_rate;
    r.z_u = p.c * p.s_in * b2 / (r.xi_l * b1);

    const double x_numerator = r.z_l - (p.nu + b2) * (p.a + r.z_u / p.c);
    r.x_tilde = x_numerator / (p.m + p.c);
    r.s_tilde = b1 * p.s_in / (b2 + 2.0 * r.z_u / p.a);
    r.x1_floor = r.xi_l * r.x_tilde;
    r.x2_floor = (1.0 - r.xi_u) * r.x_tilde;

    if (sharpening_n) {
        const int n = *sharpening_n;
        if (n < 1) throw InvalidInput("sharpening n must be >= 1");
        r.sharpening_n = n;
        r.x_tilde_n = x_numerator / (p.m + p.c / n);
        r.s_tilde_n = b1 * p.s_in / (b2 + (r.z_u / p.a) * (1.0 + 1.0 / n));
    }
    return r;
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Extinction: return "extinction";
        case Verdict::Persistence: return "persistence";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

RegimeClassification classify_regime(const ChemostatParams& p, const DilutionBand& band) {
    const auto bounds = attractor_bounds(p, band);
    RegimeClassification rc;
    rc.band = band;
    rc.extinction_lhs = p.nu + p.D * bounds.xi_l;
    rc.extinction_rhs = p.c;
    rc.persistence_lhs = p.nu + band.b2;
    rc.persistence_rhs = bounds.z_l / (p.a + bounds.z_u / p.c);

    const bool extinction = rc.extinction_lhs > rc.extinction_rhs;
    const bool persistence = rc.persistence_lhs < rc.persistence_rhs;
    if (extinction) {
        rc.verdict = Verdict::Extinction;
    } else if (persistence) {
        rc.verdict = Verdict::Persistence;
    } else {
        rc.verdict = Verdict::Indeterminate;
    }
    return rc;
}

namespace {

// Earliest grid time from which `inside(k)` holds through the last point.
template <class Pred>
std::optional<double> entry_time(const TimeGrid& grid, std::size_t count, Pred inside) {
    std::optional<double> t;
    for (std::size_t k = count; k-- > 0;) {
        if (!inside(k)) break;
        t = grid.time(k);
    }
    return t;
}

template <class Pred>
bool holds_on_tail(std::size_t count, double tail_fraction, Pred inside) {
    const auto first = static_cast<std::size_t>(
        std::floor((1.0 - tail_fraction) * static_cast<double>(count - 1)));
    for (std::size_t k = first; k < count; ++k) {
        if (!inside(k)) return false;
    }
    return true;
}

}  // namespace

EnvelopeReport check_envelopes(const Trajectory& traj, const ChemostatParams& p,
                               const BoundsReport& bounds, const DilutionBand& band,
                               const NoisePath& dilution, const EnvelopeTolerances& tol) {
    if (traj.coords != Coordinates::Original) {
        throw InvalidInput("check_envelopes: trajectory must be in original coordinates");
    }
    if (dilution.values.empty()) throw InvalidInput("check_envelopes: missing dilution path");
    if (!dilution.covers(traj.grid.t0, traj.grid.t_end())) {
        throw InvalidInput("check_envelopes: dilution path does not cover the trajectory");
    }

    EnvelopeReport rep;
    rep.band = check_dilution_band(dilution, band.b1, band.b2);
    rep.band_certified = rep.band.certified();
    if (!rep.band_certified) return rep;

    const auto& states = traj.states;
    const std::size_t count = states.size();
    const TimeGrid& grid = traj.grid;
    const double t0 = grid.t0;
    const State3& first = states.front();

    // Running integral of the dilution, read back at trajectory times.
    NoisePath dil_integral = dilution;
    dil_integral.values = cumulative_integral(dilution);
    const double dil_integral_t0 = dil_integral.at(t0);

    const double mc = p.m / p.c;
    const double p0 = first.s + mc * (first.x1 + first.x2);
    const double theta = bounds.vartheta;

    const double x0 = first.x1 + first.x2;
    const double xi0 = x0 > 0.0 ? first.x1 / x0 : 0.0;
    const double rate_u = bounds.b1 + p.r1 + p.r2;
    const double rate_l = bounds.b2 + p.r1 + p.r2;
    const double xi_u_lim = (bounds.b1 + p.r2) / rate_u;
    const double xi_l_lim = p.r2 / rate_l;

    rep.p_max_violation = -std::numeric_limits<double>::infinity();
    rep.xi_max_violation = -std::numeric_limits<double>::infinity();
    double max_log_ratio = -std::numeric_limits<double>::infinity();
    bool s_nonnegative = true;

    for (std::size_t k = 0; k < count; ++k) {
        const State3& y = states[k];
        const double t = grid.time(k) - t0;

        const double pk = y.s + mc * (y.x1 + y.x2);
        const double decay = std::exp(-theta * t);
        const double p_env = p0 * decay + bounds.p_radius * (1.0 - decay);
        rep.p_max_violation = std::max(rep.p_max_violation, pk - p_env);

        const double x = y.x1 + y.x2;
        if (x > 0.0 && x0 > 0.0) {
            const double xi = y.x1 / x;
            const double eu = std::exp(-rate_u * t);
            const double el = std::exp(-rate_l * t);
            const double upper = xi0 * eu + xi_u_lim * (1.0 - eu);
            const double lower = xi0 * el + xi_l_lim * (1.0 - el);
            rep.xi_max_violation = std::max({rep.xi_max_violation, xi - upper, lower - xi});

            const double int_dil = dil_integral.at(grid.time(k)) - dil_integral_t0;
            const double log_env = std::log(x0) - (p.nu - p.c) * t - bounds.xi_l * int_dil;
            max_log_ratio = std::max(max_log_ratio, std::log(x) - log_env);
        }
        if (y.s < 0.0) s_nonnegative = false;
    }
    rep.p_bound_ok = rep.p_max_violation <= tol.formula_abs;
    rep.xi_envelope_ok = rep.xi_max_violation <= tol.formula_abs;
    if (std::isfinite(max_log_ratio)) rep.extinction_max_log_ratio = max_log_ratio;
    rep.extinction_envelope_applicable = xi0 >= bounds.xi_l && s_nonnegative && x0 > 0.0;

    auto xi_inside = [&](std::size_t k) {
        const double x = states[k].x1 + states[k].x2;
        if (!(x > 0.0)) return false;
        const double xi = states[k].x1 / x;
        return xi >= bounds.xi_l - tol.xi_abs && xi <= bounds.xi_u + tol.xi_abs;
    };
    rep.xi_band_entry_time = entry_time(grid, count, xi_inside);
    rep.xi_tail_ok = holds_on_tail(count, tol.tail_fraction, xi_inside);

    auto z_inside = [&](std::size_t k) {
        const double z = p.c * states[k].s + p.m * (states[k].x1 + states[k].x2);
        return z >= bounds.z_l * (1.0 - tol.asymptotic_rel) &&
               z <= bounds.z_u * (1.0 + tol.asymptotic_rel);
    };
    rep.z_band_entry_time = entry_time(grid, count, z_inside);
    rep.z_tail_ok = holds_on_tail(count, tol.tail_fraction, z_inside);

    rep.floors_applicable = bounds.x_tilde > 0.0;
    if (rep.floors_applicable) {
        const double slack = 1.0 - tol.asymptotic_rel;
        auto floors_hold = [&](std::size_t k) {
            const State3& y = states[k];
            return y.x1 >= bounds.x1_floor * slack && y.x2 >= bounds.x2_floor * slack &&
                   y.x1 + y.x2 >= bounds.x_tilde * slack && y.s >= bounds.s_tilde * slack;
        };
        rep.floors_ok_after = entry_time(grid, count, floors_hold);
        rep.floors_tail_ok = holds_on_tail(count, tol.tail_fraction, floors_hold);
    }
    return rep;
}

EnvelopeReport check_envelopes(const TrajectoryBP& traj, const ChemostatParams& p,
                               const BoundsReport& bounds, const DilutionBand& band,
                               const NoisePath& dilution, const EnvelopeTolerances& tol) {
    Trajectory original;
    original.grid = traj.grid;
    original.scheme = traj.scheme;
    original.noise = traj.noise;
    original.states.reserve(traj.states.size());
    for (const auto& y : traj.states) original.states.push_back(from_biomass_proportion(y));
    return check_envelopes(original, p, bounds, band, dilution, tol);
}

PositivityReport positivity_diagnostics(const Trajectory& traj, const ChemostatParams& p) {
    if (traj.states.empty()) throw InvalidInput("positivity_diagnostics: empty trajectory");
    PositivityReport rep;
    rep.min_s = std::numeric_limits<double>::infinity();
    rep.min_component = std::numeric_limits<double>::infinity();
    std::optional<double> open;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const State3& y = traj.states[k];
        const double t = traj.time(k);
        if (y.s < rep.min_s) {
            rep.min_s = y.s;
            rep.min_s_time = t;
        }
        rep.min_component = std::min({rep.min_component, y.s, y.x1, y.x2});
        if (y.s < 0.0) {
            if (!open) open = t;
        } else if (open) {
            rep.negative_s_intervals.emplace_back(*open, traj.time(k - 1));
            open.reset();
        }
    }
    if (open) rep.negative_s_intervals.emplace_back(*open, traj.grid.t_end());
    rep.above_barrier = rep.min_s > -p.a;
    return rep;
}

bool sigma_positivity_condition(double xi, double z, const ChemostatParams& p) {
    const double lhs = std::exp(p.alpha * z);
    const double bracket = p.b * p.nu * xi * (p.a + p.s_in) / (p.m * p.s_in) - xi;
    if (xi >= 1.0) return bracket >= 0.0;
    return lhs <= bracket / (1.0 - xi);
}

SigmaConditionReport sigma_condition_report(const Trajectory& traj, const ChemostatParams& p,
                                            const NoisePath& z) {
    if (!z.covers(traj.grid.t0, traj.grid.t_end())) {
        throw InvalidInput("sigma_condition_report: noise path does not cover the trajectory");
    }
    SigmaConditionReport rep;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const auto bp = to_biomass_proportion(traj.states[k]);
        if (!bp) continue;
        ++rep.points;
        if (!sigma_positivity_condition(bp->xi, z.at(traj.time(k)), p)) {
            ++rep.violations;
            if (!rep.first_violation_time) rep.first_violation_time = traj.time(k);
        }
    }
    return rep;
}

NoisePath ou_from_wiener(const NoisePath& wiener, double beta) {
    if (wiener.kind != NoiseKind::Wiener) throw InvalidInput("ou_from_wiener: needs a Wiener path");
    if (!(beta > 0.0)) throw InvalidInput("ou_from_wiener: beta must be positive");
    NoisePath z = wiener;
    z.kind = NoiseKind::OrnsteinUhlenbeck;
    z.ou = OUParams{beta, 1.0};
    const double decay = std::exp(-beta * wiener.grid.dt);
    z.values[0] = 0.0;
    for (std::size_t k = 0; k + 1 < wiener.values.size(); ++k) {
        z.values[k + 1] = decay * (z.values[k] + (wiener.values[k + 1] - wiener.values[k]));
    }
    return z;
}

}  // namespace chemowall
