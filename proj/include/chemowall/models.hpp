#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace chemowall {

/// Chemostat with wall growth. Units are whatever the caller uses consistently;
/// time is dimensionless model time.
struct ChemostatParams {
    double s_in = 1.0;   ///< input nutrient concentration
    double D = 1.0;      ///< dilution rate
    double a = 1.0;      ///< half-saturation constant
    double m = 1.0;      ///< maximal consumption rate
    double b = 0.5;      ///< recycled fraction of dead biomass
    double nu = 1.0;     ///< collective death rate
    double c = 1.0;      ///< growth rate, nominally c <= m
    double r1 = 0.1;     ///< wall attachment rate
    double r2 = 0.1;     ///< wall detachment rate
    double alpha = 0.0;  ///< noise amplitude on the dilution rate
};

enum class IssueSeverity { Error, Warning };

struct ParamIssue {
    std::string field;
    std::string message;
    IssueSeverity severity = IssueSeverity::Error;
};

/// Hard errors (non-positive rates, b <= 0, alpha < 0, non-finite values) and
/// assumption warnings (c > m, b > 1), kept apart so reproduction runs can
/// proceed on published parameter sets that break the standing assumptions.
struct ValidationReport {
    std::vector<ParamIssue> issues;

    bool has_errors() const noexcept;
    bool has_warnings() const noexcept;
    std::string summary() const;
};

enum class AssumptionPolicy { Strict, AllowWarnings };

ValidationReport check_params(const ChemostatParams& p);

/// Returns `p` unchanged, or throws InvalidInput naming each offending field.
/// Under Strict, assumption warnings are rejected too.
ChemostatParams validate_params(const ChemostatParams& p,
                                AssumptionPolicy policy = AssumptionPolicy::Strict);

/// (s, x1, x2): substrate, planktonic biomass, wall-attached biomass.
struct State3 {
    double s = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;

    std::array<double, 3> to_array() const noexcept { return {s, x1, x2}; }
    static State3 from_array(const std::array<double, 3>& v) noexcept { return {v[0], v[1], v[2]}; }
    friend bool operator==(const State3&, const State3&) = default;
};

/// (s, x, xi): substrate, total biomass x1 + x2, planktonic proportion x1 / x.
struct StateBP {
    double s = 0.0;
    double x = 0.0;
    double xi = 0.0;

    std::array<double, 3> to_array() const noexcept { return {s, x, xi}; }
    static StateBP from_array(const std::array<double, 3>& v) noexcept { return {v[0], v[1], v[2]}; }
    friend bool operator==(const StateBP&, const StateBP&) = default;
};

/// (sigma, kappa1, kappa2) = ((s - s_in) e^{alpha z}, x1 e^{alpha z}, x2).
struct StateSK {
    double sigma = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;

    std::array<double, 3> to_array() const noexcept { return {sigma, kappa1, kappa2}; }
    static StateSK from_array(const std::array<double, 3>& v) noexcept { return {v[0], v[1], v[2]}; }
    friend bool operator==(const StateSK&, const StateSK&) = default;
};

/// Right-hand side with an arbitrary (possibly time-varying) dilution value.
State3 rhs_with_dilution(const State3& y, const ChemostatParams& p, double dilution);

/// Unperturbed system with dilution D.
State3 rhs_deterministic(const State3& y, const ChemostatParams& p);

/// Random system: dilution D + alpha z for the supplied O-U value z.
State3 rhs_random(const State3& y, const ChemostatParams& p, double z);

/// Random system in (s, x, xi) coordinates; the xi equation depends on xi and z only.
StateBP rhs_random_bp(const StateBP& y, const ChemostatParams& p, double z);

struct DriftDiffusion {
    State3 drift;
    State3 diffusion;
};

/// Ito form with a scalar Wiener driver: drift with D, diffusion (alpha (s_in - s), -alpha x1, 0).
DriftDiffusion drift_diffusion_ito(const State3& y, const ChemostatParams& p);

/// Diffusion column shared by the Ito and Stratonovich forms.
State3 diffusion_column(const State3& y, const ChemostatParams& p);

/// Stratonovich drift: D replaced by D + alpha^2 / 2 in the s and x1 equations.
State3 drift_stratonovich(const State3& y, const ChemostatParams& p);

/// D + alpha^2 / 2.
double stratonovich_dilution(const ChemostatParams& p) noexcept;

/// nullopt when x1 + x2 == 0 (the proportion is undefined there).
std::optional<StateBP> to_biomass_proportion(const State3& y);

/// Like to_biomass_proportion but throws ProportionUndefined at zero biomass.
StateBP to_biomass_proportion_checked(const State3& y);

State3 from_biomass_proportion(const StateBP& y) noexcept;

StateSK to_sigma_kappa(const State3& y, double z, double alpha, double s_in) noexcept;
State3 from_sigma_kappa(const StateSK& y, double z, double alpha, double s_in) noexcept;

}  // namespace chemowall
