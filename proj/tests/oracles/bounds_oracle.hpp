#pragma once

// Second, separately written evaluation of the closed-form bounds. Uses long
// double and rearranged algebra so it shares no code path with the library.

namespace oracle {

struct Inputs {
    long double s_in, D, a, m, b, nu, c, r1, r2;
    long double lo, hi;  // dilution band
};

struct Bounds {
    long double theta, radius;
    long double prop_lo, prop_hi;
    long double mix_lo, mix_hi;
    long double biomass_floor, substrate_floor;
    long double planktonic_floor, wall_floor;
    // magnitude of the terms cancelling in biomass_floor, for relative comparisons
    long double biomass_scale;
};

inline Bounds evaluate(const Inputs& in) {
    Bounds out{};
    out.theta = in.lo < in.nu ? in.lo : in.nu;
    out.radius = in.s_in * in.hi / out.theta;

    out.prop_lo = 1.0L / (1.0L + (in.hi + in.r1) / in.r2);
    out.prop_hi = 1.0L - in.r1 / (in.lo + in.r1 + in.r2);

    out.mix_lo = in.c * in.s_in * in.lo * in.m /
                 (in.m * (in.hi + in.nu) - in.c * in.b * in.nu * out.prop_lo);
    out.mix_hi = in.c * in.s_in * in.hi * (in.hi + in.r1 + in.r2) / (in.r2 * in.lo);

    const long double drain = (in.nu + in.hi) * in.a + (in.nu + in.hi) * out.mix_hi / in.c;
    out.biomass_floor = (out.mix_lo - drain) / (in.m + in.c);
    out.biomass_scale = (out.mix_lo + drain) / (in.m + in.c);
    out.substrate_floor = in.a * in.lo * in.s_in / (in.a * in.hi + 2.0L * out.mix_hi);
    out.planktonic_floor = out.prop_lo * out.biomass_floor;
    out.wall_floor = out.biomass_floor - out.prop_hi * out.biomass_floor;
    return out;
}

inline long double sharpened_biomass(const Inputs& in, const Bounds& bd, int n) {
    return (bd.biomass_floor * (in.m + in.c)) / (in.m + in.c / n);
}

inline long double sharpened_substrate(const Inputs& in, const Bounds& bd, int n) {
    return in.a * in.lo * in.s_in * n / (in.a * in.hi * n + bd.mix_hi * (n + 1));
}

}  // namespace oracle
