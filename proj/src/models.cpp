#include "chemowall/models.hpp"

#include <cmath>
#include <sstream>

#include "chemowall/error.hpp"

namespace chemowall {

namespace {

void require_positive(ValidationReport& r, const char* field, double v) {
    if (!std::isfinite(v)) {
        r.issues.push_back({field, "must be finite", IssueSeverity::Error});
    } else if (!(v > 0.0)) {
        r.issues.push_back({field, "must be strictly positive", IssueSeverity::Error});
    }
}

// Monod factor s / (a + s); singular at s = -a.
double monod(double s, double a) {
    const double denom = a + s;
    if (denom == 0.0 || !std::isfinite(denom)) {
        throw SingularInput("Monod denominator a + s vanished (s = " + std::to_string(s) + ")");
    }
    return s / denom;
}

}  // namespace

bool ValidationReport::has_errors() const noexcept {
    for (const auto& i : issues) {
        if (i.severity == IssueSeverity::Error) return true;
    }
    return false;
}

bool ValidationReport::has_warnings() const noexcept {
    for (const auto& i : issues) {
        if (i.severity == IssueSeverity::Warning) return true;
    }
    return false;
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& i : issues) {
        if (!first) out << "; ";
        first = false;
        out << (i.severity == IssueSeverity::Error ? "error" : "warning") << ": " << i.field << " "
            << i.message;
    }
    return out.str();
}

ValidationReport check_params(const ChemostatParams& p) {
    ValidationReport r;
    require_positive(r, "s_in", p.s_in);
    require_positive(r, "D", p.D);
    require_positive(r, "a", p.a);
    require_positive(r, "m", p.m);
    require_positive(r, "b", p.b);
    require_positive(r, "nu", p.nu);
    require_positive(r, "c", p.c);
    require_positive(r, "r1", p.r1);
    require_positive(r, "r2", p.r2);
    if (!std::isfinite(p.alpha) || !(p.alpha >= 0.0)) {
        r.issues.push_back({"alpha", "must be finite and >= 0", IssueSeverity::Error});
    }
    if (std::isfinite(p.c) && std::isfinite(p.m) && p.c > p.m) {
        r.issues.push_back({"c", "exceeds m (standing assumption c <= m)", IssueSeverity::Warning});
    }
    if (std::isfinite(p.b) && p.b > 1.0) {
        r.issues.push_back({"b", "exceeds 1 (standing assumption b <= 1)", IssueSeverity::Warning});
    }
    return r;
}

ChemostatParams validate_params(const ChemostatParams& p, AssumptionPolicy policy) {
    const auto report = check_params(p);
    if (report.has_errors() || (policy == AssumptionPolicy::Strict && report.has_warnings())) {
        throw InvalidInput("invalid chemostat parameters: " + report.summary());
    }
    return p;
}

State3 rhs_with_dilution(const State3& y, const ChemostatParams& p, double dilution) {
    const double f = monod(y.s, p.a);
    const double uptake = p.m * f;
    const double growth = p.c * f;
    return {
        dilution * (p.s_in - y.s) - uptake * y.x1 - uptake * y.x2 + p.b * p.nu * y.x1,
        -(p.nu + dilution) * y.x1 + growth * y.x1 - p.r1 * y.x1 + p.r2 * y.x2,
        -p.nu * y.x2 + growth * y.x2 + p.r1 * y.x1 - p.r2 * y.x2,
    };
}

State3 rhs_deterministic(const State3& y, const ChemostatParams& p) {
    return rhs_with_dilution(y, p, p.D);
}

State3 rhs_random(const State3& y, const ChemostatParams& p, double z) {
    return rhs_with_dilution(y, p, p.D + p.alpha * z);
}

StateBP rhs_random_bp(const StateBP& y, const ChemostatParams& p, double z) {
    const double dilution = p.D + p.alpha * z;
    const double f = monod(y.s, p.a);
    return {
        dilution * (p.s_in - y.s) - p.m * f * y.x + p.b * p.nu * y.xi * y.x,
        -p.nu * y.x - dilution * y.xi * y.x + p.c * f * y.x,
        -dilution * y.xi * (1.0 - y.xi) - p.r1 * y.xi + p.r2 * (1.0 - y.xi),
    };
}

State3 diffusion_column(const State3& y, const ChemostatParams& p) {
    return {p.alpha * (p.s_in - y.s), -p.alpha * y.x1, 0.0};
}

DriftDiffusion drift_diffusion_ito(const State3& y, const ChemostatParams& p) {
    return {rhs_with_dilution(y, p, p.D), diffusion_column(y, p)};
}

double stratonovich_dilution(const ChemostatParams& p) noexcept {
    return p.D + 0.5 * p.alpha * p.alpha;
}

State3 drift_stratonovich(const State3& y, const ChemostatParams& p) {
    // x2 carries no dilution term, so substituting the shifted dilution only
    // touches the s and x1 equations.
    return rhs_with_dilution(y, p, stratonovich_dilution(p));
}

std::optional<StateBP> to_biomass_proportion(const State3& y) {
    const double x = y.x1 + y.x2;
    if (x == 0.0) return std::nullopt;
    return StateBP{y.s, x, y.x1 / x};
}

StateBP to_biomass_proportion_checked(const State3& y) {
    if (auto bp = to_biomass_proportion(y)) return *bp;
    throw ProportionUndefined("proportion undefined: total biomass x1 + x2 is zero");
}

State3 from_biomass_proportion(const StateBP& y) noexcept {
    return {y.s, y.xi * y.x, (1.0 - y.xi) * y.x};
}

StateSK to_sigma_kappa(const State3& y, double z, double alpha, double s_in) noexcept {
    const double g = std::exp(alpha * z);
    return {(y.s - s_in) * g, y.x1 * g, y.x2};
}

State3 from_sigma_kappa(const StateSK& y, double z, double alpha, double s_in) noexcept {
    const double g = std::exp(alpha * z);
    return {s_in + y.sigma / g, y.kappa1 / g, y.kappa2};
}

}  // namespace chemowall
