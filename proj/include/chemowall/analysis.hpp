#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "chemowall/integrators.hpp"
#include "chemowall/models.hpp"
#include "chemowall/noise.hpp"

namespace chemowall {

/// Deterministic interval assumed to contain the perturbed dilution D + alpha z(t).
struct DilutionBand {
    double b1 = 0.0;
    double b2 = 0.0;

    /// 0 < b1 <= b2 (b1 == b2 is the degenerate band of the unperturbed model).
    void validate() const;
    friend bool operator==(const DilutionBand&, const DilutionBand&) = default;
};

/// Two-sided stationary quantile of |z|: P(|z| <= q) = coverage.
double stationary_abs_quantile(const OUParams& ou, double coverage = 0.999);

/// b1 = D - alpha q, b2 = D + alpha q with q the stationary |z| quantile.
/// Throws InvalidInput when b1 would not be positive.
DilutionBand auto_band(const ChemostatParams& p, const OUParams& ou, double coverage = 0.999);

/// Closed-form bounds of the random model for a given band.
struct BoundsReport {
    double b1 = 0.0;
    double b2 = 0.0;
    double vartheta = 0.0;  ///< min(b1, nu)
    double p_radius = 0.0;  ///< s_in b2 / vartheta
    double xi_l = 0.0;
    double xi_u = 0.0;
    double z_l = 0.0;
    double z_u = 0.0;
    double x_tilde = 0.0;
    double s_tilde = 0.0;
    double x1_floor = 0.0;  ///< xi_l * x_tilde
    double x2_floor = 0.0;  ///< (1 - xi_u) * x_tilde
    std::optional<int> sharpening_n;
    std::optional<double> x_tilde_n;
    std::optional<double> s_tilde_n;
};

BoundsReport attractor_bounds(const ChemostatParams& p, const DilutionBand& band,
                              std::optional<int> sharpening_n = std::nullopt);

enum class Verdict { Extinction, Persistence, Indeterminate };

const char* to_string(Verdict v) noexcept;

struct RegimeClassification {
    Verdict verdict = Verdict::Indeterminate;
    double extinction_lhs = 0.0;   ///< nu + D xi_l
    double extinction_rhs = 0.0;   ///< c
    double persistence_lhs = 0.0;  ///< nu + b2
    double persistence_rhs = 0.0;  ///< z_l / (a + z_u / c)
    DilutionBand band;
};

/// Both conditions are sufficient only; Indeterminate means neither applies.
RegimeClassification classify_regime(const ChemostatParams& p, const DilutionBand& band);

struct EnvelopeTolerances {
    double formula_abs = 1e-6;     ///< pointwise closed-form envelopes
    double xi_abs = 1e-3;          ///< asymptotic xi band
    double asymptotic_rel = 1e-3;  ///< asymptotic z band and floors
    double tail_fraction = 0.2;    ///< "eventually" = the last 20% of the horizon
};

struct EnvelopeReport {
    bool band_certified = false;
    BandReport band;

    bool p_bound_ok = false;
    double p_max_violation = 0.0;  ///< max_t p(t) - envelope(t)

    bool xi_envelope_ok = false;
    double xi_max_violation = 0.0;
    bool xi_tail_ok = false;
    std::optional<double> xi_band_entry_time;

    bool z_tail_ok = false;
    std::optional<double> z_band_entry_time;

    bool floors_applicable = false;  ///< x_tilde > 0
    bool floors_tail_ok = false;
    std::optional<double> floors_ok_after;

    /// max_t [log x(t) - log(x0 exp(-(nu - c) t - xi_l int_0^t dilution))]
    std::optional<double> extinction_max_log_ratio;
    bool extinction_envelope_applicable = false;  ///< xi0 >= xi_l and s >= 0 throughout
};

/// Pathwise checks of the closed-form envelopes along one random-model trajectory.
/// `dilution` is D + alpha z on the noise grid that drove the trajectory. When
/// the dilution leaves (b1, b2) the report is returned uncertified with checks skipped.
EnvelopeReport check_envelopes(const Trajectory& traj, const ChemostatParams& p,
                               const BoundsReport& bounds, const DilutionBand& band,
                               const NoisePath& dilution, const EnvelopeTolerances& tol = {});

EnvelopeReport check_envelopes(const TrajectoryBP& traj, const ChemostatParams& p,
                               const BoundsReport& bounds, const DilutionBand& band,
                               const NoisePath& dilution, const EnvelopeTolerances& tol = {});

struct PositivityReport {
    double min_s = 0.0;
    double min_s_time = 0.0;
    double min_component = 0.0;
    /// Maximal [start, end] time intervals on which s < 0.
    std::vector<std::pair<double, double>> negative_s_intervals;
    bool above_barrier = true;  ///< min s > -a
};

PositivityReport positivity_diagnostics(const Trajectory& traj, const ChemostatParams& p);

/// Positivity condition for sigma at sigma = 0:
/// e^{alpha z} <= (b nu xi (a + s_in) / (m s_in) - xi) / (1 - xi).
bool sigma_positivity_condition(double xi, double z, const ChemostatParams& p);

struct SigmaConditionReport {
    std::size_t points = 0;
    std::size_t violations = 0;
    std::optional<double> first_violation_time;
};

/// Evaluates sigma_positivity_condition along a Wiener-model trajectory with the
/// supplied O-U path (e.g. from ou_from_wiener). Points with x1 + x2 = 0 are skipped.
SigmaConditionReport sigma_condition_report(const Trajectory& traj, const ChemostatParams& p,
                                            const NoisePath& z);

/// O-U path dz = -beta z dt + dW driven by the increments of `wiener`, z(0) = 0,
/// via z_{k+1} = e^{-beta dt} (z_k + dW_k).
NoisePath ou_from_wiener(const NoisePath& wiener, double beta);

}  // namespace chemowall
