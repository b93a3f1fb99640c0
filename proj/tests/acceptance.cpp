// Reproduction run: one PASS/FAIL line per acceptance criterion, exit code 1
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chemowall/analysis.hpp"
#include "chemowall/error.hpp"
#include "chemowall/export.hpp"
#include "chemowall/presets.hpp"
#include "chemowall/scenario.hpp"
#include "oracles/bounds_oracle.hpp"
#include "oracles/param_draws.hpp"

using namespace chemowall;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    if (budget_s > 0.0 && secs > budget_s) {
        out.pass = false;
        line << "over time budget " << budget_s << " s; ";
    }
    if (!out.pass) ++failures;
    std::printf("%s %2d %s: %s%s [%.1f s]\n", out.pass ? "PASS" : "FAIL", id, title, line.str().c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
}

void info(const std::string& text) {
    std::printf("INFO    %s\n", text.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

struct MeanSE {
    double mean = 0.0;
    double se = 0.0;
};

MeanSE mean_se(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    var /= v.size() - 1;
    return {m, std::sqrt(var / v.size())};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Certified random-model runs from random positive initial states, shared by
/// the positivity and envelope criteria.
struct CertifiedRun {
    std::string scenario;
    Trajectory traj;
    EnvelopeReport envelope;
    PositivityReport positivity;
};

std::vector<CertifiedRun> certified_runs() {
    std::vector<CertifiedRun> runs;
    std::mt19937_64 gen(314159);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    for (const char* name : {"fig4", "fig6"}) {
        const auto cfg = preset(name);
        const auto band = auto_band(cfg.params, *cfg.noise);
        const auto bounds = attractor_bounds(cfg.params, band);
        const auto ngrid = TimeGrid::span(0.0, cfg.grid.t_end(), cfg.effective_noise_dt());
        std::uint64_t seed = 0;
        for (int ic = 0; ic < 10; ++ic) {
            const State3 init{u(gen), u(gen), u(gen)};
            for (int kept = 0; kept < 5; ++seed) {
                const auto z = sample_ou_path(*cfg.noise, seed, ngrid);
                const auto dil = perturbed_dilution(z, cfg.params.D, cfg.params.alpha);
                if (!check_dilution_band(dil, band.b1, band.b2).certified()) continue;
                auto traj = simulate_random(cfg.params, z, init, cfg.grid);
                auto env = check_envelopes(traj, cfg.params, bounds, band, dil);
                auto pos = positivity_diagnostics(traj, cfg.params);
                runs.push_back({name, std::move(traj), env, pos});
                ++kept;
            }
        }
    }
    return runs;
}

}  // namespace

int main() {
    report(1, "O-U ergodic statistics", 10.0, [] {
        const OUParams ou{1.0, 0.2};
        const auto z = sample_ou_path(ou, 1, TimeGrid::span(0.0, 5000.0, 1e-3));
        const auto st = ergodic_stats(z);
        const double abs_ref = ou.gamma * std::sqrt(1.0 / (M_PI * ou.beta));
        const double abs_err = std::abs(st.time_avg_abs - abs_ref) / abs_ref;
        const double rho = lag1_autocorrelation(z);
        const double rho_ref = std::exp(-ou.beta * 1e-3);
        const double rho_se = std::sqrt((1.0 - rho_ref * rho_ref) / static_cast<double>(z.values.size()));
        const double rho_dev = std::abs(rho - rho_ref) / rho_se;
        const bool ok = std::abs(st.time_avg) < 0.02 && abs_err < 0.1 && rho_dev < 3.0;
        return Outcome{ok, "time_avg " + fmt("%.4g", st.time_avg) + ", |z| avg rel err " + fmt("%.3g", abs_err) +
                               ", lag-1 off by " + fmt("%.2f", rho_dev) + " SE"};
    });

    report(2, "sup|z| decreases in the reversion rate", 30.0, [] {
        const auto grid = TimeGrid::span(0.0, 10.0, 1e-3);
        std::vector<double> means;
        std::string detail = "mean sup";
        for (double beta : {1.0, 10.0, 100.0}) {
            double acc = 0.0;
            for (std::uint64_t seed = 0; seed < 50; ++seed) acc += ergodic_stats(sample_ou_path({beta, 0.2}, seed, grid)).sup_abs;
            means.push_back(acc / 50.0);
            detail += fmt(" %.4f", means.back());
        }
        return Outcome{means[0] > means[1] && means[1] > means[2], detail};
    });

    std::vector<CertifiedRun> runs;
    report(3, "positivity of certified random-model runs", 60.0, [&] {
        runs = certified_runs();
        double worst = INFINITY;
        for (const auto& r : runs) worst = std::min(worst, r.positivity.min_component);
        return Outcome{runs.size() == 100 && worst >= -1e-9,
                       std::to_string(runs.size()) + " runs, min component " + fmt("%.3g", worst)};
    });

    report(4, "absorbing bound on p", 0.0, [&] {
        double worst = -INFINITY;
        bool ok = !runs.empty();
        for (const auto& r : runs) {
            ok = ok && r.envelope.band_certified && r.envelope.p_bound_ok;
            worst = std::max(worst, r.envelope.p_max_violation);
        }
        return Outcome{ok && worst <= 1e-6, "max p - envelope " + fmt("%.3g", worst)};
    });

    report(5, "proportion envelopes and asymptotic band", 0.0, [&] {
        double worst = -INFINITY;
        std::size_t tail_bad = 0;
        bool ok = !runs.empty();
        for (const auto& r : runs) {
            ok = ok && r.envelope.xi_envelope_ok;
            worst = std::max(worst, r.envelope.xi_max_violation);
            if (!r.envelope.xi_tail_ok) ++tail_bad;
        }
        return Outcome{ok && worst <= 1e-6 && tail_bad == 0,
                       "max envelope excess " + fmt("%.3g", worst) + ", tail misses " + std::to_string(tail_bad)};
    });

    report(6, "bounds against an independent evaluation", 0.0, [] {
        std::mt19937_64 gen(6);
        int compared = 0, persistent = 0;
        double worst = 0.0;
        bool order_ok = true;
        for (int attempt = 0; compared < 1000 && attempt < 10000; ++attempt) {
            const auto d = draws::random_draw(gen, attempt % 2 == 1);
            const auto in = draws::to_inputs(d);
            const auto ref = oracle::evaluate(in);
            if (ref.mix_lo <= 0.0L) continue;
            const auto r = attractor_bounds(d.p, d.band, 2);
            ++compared;
            const double scale = static_cast<double>(ref.biomass_scale);
            worst = std::max({worst, rel(r.vartheta, ref.theta), rel(r.p_radius, ref.radius),
                              rel(r.xi_l, ref.prop_lo), rel(r.xi_u, ref.prop_hi), rel(r.z_l, ref.mix_lo),
                              rel(r.z_u, ref.mix_hi), static_cast<double>(std::abs(r.x_tilde - ref.biomass_floor)) / scale,
                              rel(r.s_tilde, ref.substrate_floor),
                              static_cast<double>(std::abs(*r.x_tilde_n - oracle::sharpened_biomass(in, ref, 2))) / scale,
                              rel(*r.s_tilde_n, oracle::sharpened_substrate(in, ref, 2))});
            if (d.p.nu + d.band.b2 < r.z_l / (d.p.a + r.z_u / d.p.c)) {
                ++persistent;
                order_ok = order_ok && r.x_tilde < r.z_l / d.p.m && r.s_tilde < r.z_l / d.p.c;
                for (int n : {2, 10}) {
                    const auto sharp = attractor_bounds(d.p, d.band, n);
                    order_ok = order_ok && *sharp.x_tilde_n > r.x_tilde && *sharp.s_tilde_n > r.s_tilde;
                }
            }
        }
        return Outcome{compared == 1000 && worst < 1e-12 && order_ok && persistent > 0,
                       std::to_string(compared) + " draws, max rel diff " + fmt("%.3g", worst) + ", " +
                           std::to_string(persistent) + " persistence draws, order relations " +
                           (order_ok ? "hold" : "broken")};
    });

    report(7, "persistence and extinction presets", 120.0, [] {
        const auto persist = run_scenario(preset("fig4"));
        double lowest = INFINITY;
        bool all_ok = persist.runs.size() == 20;
        for (const auto& run : persist.runs) {
            if (!run.ok()) {
                all_ok = false;
                continue;
            }
            const auto& t = *run.trajectory;
            for (std::size_t k = 0; k < t.states.size(); ++k) {
                if (t.time(k) >= 10.0) lowest = std::min({lowest, t.states[k].x1, t.states[k].x2});
            }
        }
        const auto extinct = run_scenario(preset("fig6"));
        double highest = 0.0, ratio = -INFINITY;
        int envelopes = 0;
        for (const auto& run : extinct.runs) {
            if (!run.ok()) {
                all_ok = false;
                continue;
            }
            const auto& y = run.trajectory->final_state();
            highest = std::max({highest, y.x1, y.x2});
            if (run.envelope && run.envelope->band_certified && run.envelope->extinction_envelope_applicable) {
                ++envelopes;
                ratio = std::max(ratio, *run.envelope->extinction_max_log_ratio);
            }
        }
        const bool ok = all_ok && lowest > 0.01 && highest < 1e-2 && envelopes > 0 && ratio <= std::log(2.0);
        return Outcome{ok, "fig4 min x on [10,20] " + fmt("%.4f", lowest) + ", fig6 max x(20) " +
                               fmt("%.3g", highest) + ", decay envelope log-ratio " + fmt("%.3g", ratio) + " on " +
                               std::to_string(envelopes) + " certified seeds"};
    });

    auto wiener_summary = [](const std::string& name) {
        const auto res = run_scenario(preset(name));
        struct {
            std::size_t seeds = 0, failed = 0, negative = 0, above = 0, extinct = 0, nonneg = 0;
            double x1_mean = 0.0;
        } s;
        s.seeds = res.runs.size();
        for (const auto& run : res.runs) {
            if (!run.ok()) {
                ++s.failed;
                ++s.negative;  // stopped at s = -a, so s went negative first
                continue;
            }
            if (run.positivity->min_s < 0.0) ++s.negative;
            if (run.positivity->above_barrier) ++s.above;
            const auto& y = run.trajectory->final_state();
            s.x1_mean += y.x1 / static_cast<double>(res.runs.size());
            if (y.x1 < 1e-2 && y.x2 < 1e-2) ++s.extinct;
            if (run.positivity->min_component >= -1e-9) ++s.nonneg;
        }
        return s;
    };

    report(8, "Wiener model drawbacks", 0.0, [&] {
        const auto f9 = wiener_summary("fig9");
        const auto f8 = wiener_summary("fig8");
        const bool neg_ok = 2 * f9.negative >= f9.seeds;
        const bool barrier_ok = f9.above == f9.seeds;
        const bool f8_ok = f8.extinct == f8.seeds && f8.nonneg == f8.seeds;
        const auto f10 = wiener_summary("fig10");
        info("fig8 clause checked on the fig10 set: extinct " +
             std::to_string(f10.extinct) + "/" + std::to_string(f10.seeds) + ", nonnegative " +
             std::to_string(f10.nonneg) + "/" + std::to_string(f10.seeds) + "; fig8 set persists with x1(20) mean " +
             fmt("%.3f", f8.x1_mean));
        return Outcome{neg_ok && barrier_ok && f8_ok,
                       "fig9 min s < 0 on " + std::to_string(f9.negative) + "/" + std::to_string(f9.seeds) +
                           ", above -a on " + std::to_string(f9.above) + "/" + std::to_string(f9.seeds) + " (" +
                           std::to_string(f9.failed) + " stopped at the barrier); fig8 extinct " +
                           std::to_string(f8.extinct) + "/" + std::to_string(f8.seeds) + ", nonnegative " +
                           std::to_string(f8.nonneg) + "/" + std::to_string(f8.seeds)};
    });

    report(9, "coordinate transforms commute", 0.0, [] {
        double worst = 0.0;
        for (const char* name : {"fig4", "fig6"}) {
            const auto cfg = preset(name);
            const auto z = driving_noise(cfg, 7);
            const auto orig = simulate_random(cfg.params, z, cfg.init, cfg.grid);
            const auto bp = simulate_random_bp(cfg.params, z, to_biomass_proportion_checked(cfg.init), cfg.grid);
            for (std::size_t k = 0; k < orig.states.size(); ++k) {
                const auto m = from_biomass_proportion(bp.states[k]);
                const auto& y = orig.states[k];
                worst = std::max({worst, rel(m.s, y.s), rel(m.x1, y.x1), rel(m.x2, y.x2)});
            }
        }
        std::mt19937_64 gen(9);
        std::uniform_real_distribution<double> u(0.0, 10.0), zz(-3.0, 3.0);
        double round_trip = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const State3 y{u(gen), u(gen), u(gen)};
            const double z = zz(gen), alpha = 0.5;
            const auto back = from_sigma_kappa(to_sigma_kappa(y, z, alpha, 4.0), z, alpha, 4.0);
            round_trip = std::max({round_trip, rel(back.s, y.s), rel(back.x1, y.x1), rel(back.x2, y.x2)});
        }
        return Outcome{worst < 1e-6 && round_trip < 1e-12,
                       "max rel diff " + fmt("%.3g", worst) + ", sigma/kappa round trip " + fmt("%.3g", round_trip)};
    });

    report(10, "Ito and Stratonovich ensemble means", 300.0, [] {
        const auto cfg = preset("fig8");
        const auto grid = TimeGrid::span(0.0, 5.0, 1e-3);
        const auto ngrid = TimeGrid::span(0.0, 5.0, cfg.effective_noise_dt());
        std::vector<double> is, ix, ss, sx;
        std::size_t failed = 0;
        constexpr std::uint64_t kPaths = 10000;
        for (std::uint64_t i = 0; i < kPaths; ++i) {
            // independent paths for the two schemes so the standard errors combine
            try {
                const auto a = simulate_ito(cfg.params, sample_wiener_path(i, ngrid), cfg.init, grid).final_state();
                is.push_back(a.s);
                ix.push_back(a.x1);
            } catch (const SingularInput&) {
                ++failed;
            }
            try {
                const auto b = simulate_stratonovich(cfg.params, sample_wiener_path(i + kPaths, ngrid), cfg.init, grid)
                                   .final_state();
                ss.push_back(b.s);
                sx.push_back(b.x1);
            } catch (const SingularInput&) {
                ++failed;
            }
        }
        const auto a = mean_se(is), b = mean_se(ss), c = mean_se(ix), d = mean_se(sx);
        const double ds = std::abs(a.mean - b.mean) / std::hypot(a.se, b.se);
        const double dx = std::abs(c.mean - d.mean) / std::hypot(c.se, d.se);
        return Outcome{ds < 3.0 && dx < 3.0,
                       "s(5) " + fmt("%.5f", a.mean) + " vs " + fmt("%.5f", b.mean) + " (" + fmt("%.2f", ds) +
                           " SE), x1(5) " + fmt("%.5f", c.mean) + " vs " + fmt("%.5f", d.mean) + " (" +
                           fmt("%.2f", dx) + " SE), " + std::to_string(failed) + " barrier stops"};
    });

    report(11, "zero amplitude collapses every model", 0.0, [] {
        auto cfg = preset("fig4");
        cfg.params.alpha = 0.0;
        const auto& p = cfg.params;
        const auto det = simulate_deterministic(p, cfg.init, cfg.grid);
        const auto z = driving_noise(cfg, 3);
        const auto rnd = simulate_random(p, z, cfg.init, cfg.grid);
        double worst = 0.0;
        for (std::size_t k = 0; k < det.states.size(); ++k) {
            const auto& u = rnd.states[k];
            const auto& v = det.states[k];
            worst = std::max({worst, std::abs(u.s - v.s), std::abs(u.x1 - v.x1), std::abs(u.x2 - v.x2)});
        }
        const auto w = sample_wiener_path(3, TimeGrid::span(0.0, cfg.grid.t_end(), cfg.effective_noise_dt()));
        const auto rhs = [&](const State3& y) { return rhs_deterministic(y, p); };
        const bool euler_same = simulate_ito(p, w, cfg.init, cfg.grid).states ==
                                integrate_euler<State3>(rhs, cfg.init, cfg.grid).states;
        const bool heun_same = simulate_stratonovich(p, w, cfg.init, cfg.grid).states ==
                               integrate_heun<State3>(rhs, cfg.init, cfg.grid).states;
        return Outcome{worst < 1e-8 && euler_same && heun_same,
                       "pathwise max diff " + fmt("%.3g", worst) + ", Euler-Maruyama " +
                           (euler_same ? "identical" : "differs") + ", Stratonovich Heun " +
                           (heun_same ? "identical" : "differs")};
    });

    report(12, "ensemble artifacts are reproducible", 0.0, [] {
        auto cfg = preset("fig4");
        auto artifacts = [&](unsigned threads) {
            const auto sum = run_ensemble(cfg, 20, 12345, threads);
            std::ostringstream csv;
            write_ensemble_csv(csv, sum);
            return std::pair(csv.str(), to_json(sum).dump(2));
        };
        const auto first = artifacts(1);
        const auto second = artifacts(1);
        const auto threaded = artifacts(4);
        const bool ok = first == second && first == threaded;
        return Outcome{ok, std::string("CSV ") + std::to_string(first.first.size()) + " bytes, JSON " +
                               std::to_string(first.second.size()) + " bytes, " +
                               (ok ? "bit-identical across repeats and thread counts" : "mismatch")};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
