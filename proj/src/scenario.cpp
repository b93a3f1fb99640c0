#include "chemowall/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "chemowall/error.hpp"
#include "chemowall/rng.hpp"

namespace chemowall {

std::pair<std::optional<DilutionBand>, std::optional<std::string>> resolve_band(
    const ScenarioConfig& cfg) {
    if (cfg.band) return {cfg.band, std::nullopt};
    switch (cfg.model) {
        case ModelKind::Deterministic:
            return {DilutionBand{cfg.params.D, cfg.params.D}, std::nullopt};
        case ModelKind::RandomOU:
            try {
                return {auto_band(cfg.params, *cfg.noise, cfg.band_coverage), std::nullopt};
            } catch (const InvalidInput& e) {
                return {std::nullopt, std::string("band unavailable: ") + e.what()};
            }
        case ModelKind::StochasticIto:
        case ModelKind::StochasticStratonovich:
            return {std::nullopt, "band analysis does not apply to Wiener-driven models"};
    }
    return {std::nullopt, std::nullopt};
}

NoisePath driving_noise(const ScenarioConfig& cfg, std::uint64_t seed) {
    const auto grid = TimeGrid::span(cfg.grid.t0, cfg.grid.t_end(), cfg.effective_noise_dt());
    if (cfg.model == ModelKind::RandomOU) return sample_ou_path(*cfg.noise, seed, grid);
    return sample_wiener_path(seed, grid);
}

SeedRun run_seed(const ScenarioConfig& cfg, std::uint64_t seed,
                 const std::optional<DilutionBand>& band,
                 const std::optional<BoundsReport>& bounds) {
    SeedRun run;
    run.seed = seed;
    try {
        switch (cfg.model) {
            case ModelKind::Deterministic:
                run.trajectory = simulate_deterministic(cfg.params, cfg.init, cfg.grid);
                break;
            case ModelKind::RandomOU: {
                run.noise = driving_noise(cfg, seed);
                run.dilution = perturbed_dilution(*run.noise, cfg.params.D, cfg.params.alpha);
                run.trajectory = simulate_random(cfg.params, *run.noise, cfg.init, cfg.grid);
                if (band && bounds && band->b1 < band->b2) {
                    run.envelope = check_envelopes(*run.trajectory, cfg.params, *bounds, *band,
                                                   *run.dilution);
                }
                break;
            }
            case ModelKind::StochasticIto:
                run.noise = driving_noise(cfg, seed);
                run.trajectory = simulate_ito(cfg.params, *run.noise, cfg.init, cfg.grid);
                break;
            case ModelKind::StochasticStratonovich:
                run.noise = driving_noise(cfg, seed);
                run.trajectory = simulate_stratonovich(cfg.params, *run.noise, cfg.init, cfg.grid);
                break;
        }
        run.positivity = positivity_diagnostics(*run.trajectory, cfg.params);
    } catch (const SingularInput& e) {
        run.trajectory.reset();
        run.error = e.what();
        run.error_kind = "singular";
    } catch (const BlowUp& e) {
        run.trajectory.reset();
        run.error = e.what();
        run.error_kind = "blow_up";
        run.error_time = e.last_valid_time();
    } catch (const PositivityViolation& e) {
        run.trajectory.reset();
        run.error = e.what();
        run.error_kind = "positivity";
        run.error_time = e.time();
    } catch (const Error& e) {
        run.trajectory.reset();
        run.error = e.what();
        run.error_kind = "invalid";
    }
    return run;
}

namespace {

struct Analysis {
    std::optional<DilutionBand> band;
    std::optional<std::string> note;
    std::optional<BoundsReport> bounds;
    std::optional<RegimeClassification> classification;
};

Analysis analyse(const ScenarioConfig& cfg) {
    Analysis a;
    std::tie(a.band, a.note) = resolve_band(cfg);
    if (!a.band) return a;
    try {
        a.bounds = attractor_bounds(cfg.params, *a.band);
        a.classification = classify_regime(cfg.params, *a.band);
    } catch (const InvalidInput& e) {
        a.note = std::string("bounds unavailable: ") + e.what();
    }
    return a;
}

std::vector<std::string> warnings_of(const ChemostatParams& p) {
    std::vector<std::string> out;
    for (const auto& issue : check_params(p).issues) {
        if (issue.severity == IssueSeverity::Warning) out.push_back(issue.field + " " + issue.message);
    }
    return out;
}

std::vector<std::uint64_t> seeds_for(const ScenarioConfig& cfg) {
    if (cfg.model == ModelKind::Deterministic) return {0};
    return cfg.seeds;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    ScenarioResult result;
    result.config = cfg;
    result.warnings = warnings_of(cfg.params);
    auto a = analyse(cfg);
    result.band = a.band;
    result.band_note = a.note;
    result.bounds = a.bounds;
    result.classification = a.classification;
    for (auto seed : seeds_for(cfg)) {
        result.runs.push_back(run_seed(cfg, seed, a.band, a.bounds));
    }
    return result;
}

std::uint64_t ensemble_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return derive_seed(master_seed, index);
}

namespace {

std::optional<double> rate(std::size_t hits, std::size_t total) {
    if (total == 0) return std::nullopt;
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

EnsembleSummary run_ensemble(const ScenarioConfig& cfg, std::size_t n, std::uint64_t master_seed,
                             unsigned threads) {
    if (n == 0) throw InvalidInput("ensemble size must be at least 1");
    cfg.validate();
    if (!cfg.is_stochastic()) {
        throw InvalidInput("ensembles need a stochastic or random model");
    }
    const auto a = analyse(cfg);

    EnsembleSummary sum;
    sum.scenario = cfg.name;
    sum.model = cfg.model;
    sum.master_seed = master_seed;
    sum.n = n;
    sum.grid = cfg.grid;
    sum.band = a.band;
    sum.band_note = a.note;
    sum.classification = a.classification;

    const std::size_t points = cfg.grid.size();
    std::vector<double> acc_s(points, 0.0), acc_x1(points, 0.0), acc_x2(points, 0.0);
    constexpr double inf = std::numeric_limits<double>::infinity();
    sum.s.min.assign(points, inf);
    sum.x1.min.assign(points, inf);
    sum.x2.min.assign(points, inf);
    sum.s.max.assign(points, -inf);
    sum.x1.max.assign(points, -inf);
    sum.x2.max.assign(points, -inf);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t chunk = std::max<std::size_t>(1, 2 * static_cast<std::size_t>(threads));

    std::size_t certified = 0, p_ok = 0, xi_ok = 0, xi_tail = 0, z_tail = 0, floors = 0,
                floors_applicable = 0, negative_s = 0;

    std::vector<SeedRun> batch;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
        const std::size_t end = std::min(n, begin + chunk);
        batch.assign(end - begin, SeedRun{});
        {
            std::vector<std::jthread> workers;
            const std::size_t width = std::min<std::size_t>(threads, end - begin);
            for (std::size_t w = 0; w < width; ++w) {
                workers.emplace_back([&, w] {
                    for (std::size_t i = begin + w; i < end; i += width) {
                        batch[i - begin] = run_seed(cfg, ensemble_seed(master_seed, i), a.band,
                                                    a.bounds);
                    }
                });
            }
        }
        // Reduction runs in member order, so results do not depend on scheduling.
        for (auto& run : batch) {
            SeedOutcome out;
            out.seed = run.seed;
            out.ok = run.ok();
            out.error = run.error;
            if (run.ok()) {
                const auto& states = run.trajectory->states;
                out.terminal = states.back();
                out.min_s = run.positivity->min_s;
                if (run.positivity->min_s < 0.0) ++negative_s;
                for (std::size_t k = 0; k < points; ++k) {
                    const State3& y = states[k];
                    acc_s[k] += y.s;
                    acc_x1[k] += y.x1;
                    acc_x2[k] += y.x2;
                    sum.s.min[k] = std::min(sum.s.min[k], y.s);
                    sum.x1.min[k] = std::min(sum.x1.min[k], y.x1);
                    sum.x2.min[k] = std::min(sum.x2.min[k], y.x2);
                    sum.s.max[k] = std::max(sum.s.max[k], y.s);
                    sum.x1.max[k] = std::max(sum.x1.max[k], y.x1);
                    sum.x2.max[k] = std::max(sum.x2.max[k], y.x2);
                }
                if (run.envelope) {
                    const auto& env = *run.envelope;
                    out.band_certified = env.band_certified;
                    if (env.band_certified) {
                        ++certified;
                        out.p_bound_ok = env.p_bound_ok;
                        out.xi_envelope_ok = env.xi_envelope_ok;
                        out.xi_tail_ok = env.xi_tail_ok;
                        out.z_tail_ok = env.z_tail_ok;
                        p_ok += env.p_bound_ok;
                        xi_ok += env.xi_envelope_ok;
                        xi_tail += env.xi_tail_ok;
                        z_tail += env.z_tail_ok;
                        if (env.floors_applicable) {
                            out.floors_tail_ok = env.floors_tail_ok;
                            ++floors_applicable;
                            floors += env.floors_tail_ok;
                        }
                    }
                }
                ++sum.completed;
            } else {
                ++sum.failed;
            }
            sum.members.push_back(std::move(out));
        }
    }

    if (sum.completed > 0) {
        const double inv = static_cast<double>(sum.completed);
        sum.s.mean.resize(points);
        sum.x1.mean.resize(points);
        sum.x2.mean.resize(points);
        for (std::size_t k = 0; k < points; ++k) {
            sum.s.mean[k] = acc_s[k] / inv;
            sum.x1.mean[k] = acc_x1[k] / inv;
            sum.x2.mean[k] = acc_x2[k] / inv;
        }
    } else {
        sum.s = sum.x1 = sum.x2 = SeriesStats{};
    }

    if (cfg.model == ModelKind::RandomOU && a.bounds && a.band && a.band->b1 < a.band->b2) {
        sum.certification_rate = rate(certified, sum.completed);
        sum.p_bound_pass_rate = rate(p_ok, certified);
        sum.xi_envelope_pass_rate = rate(xi_ok, certified);
        sum.xi_tail_pass_rate = rate(xi_tail, certified);
        sum.z_tail_pass_rate = rate(z_tail, certified);
        sum.floors_tail_pass_rate = rate(floors, floors_applicable);
    }
    sum.negative_s_rate = rate(negative_s, sum.completed);
    return sum;
}

namespace {

bool same_biology(const ChemostatParams& a, const ChemostatParams& b) {
    return a.s_in == b.s_in && a.D == b.D && a.a == b.a && a.m == b.m && a.b == b.b &&
           a.nu == b.nu && a.c == b.c && a.r1 == b.r1 && a.r2 == b.r2;
}

template <class F>
CompareRun attempt(std::string label, F&& integrate) {
    CompareRun run;
    run.label = std::move(label);
    try {
        run.trajectory = integrate();
    } catch (const Error& e) {
        run.error = e.what();
    }
    return run;
}

std::string beta_label(double beta) {
    std::ostringstream out;
    out << "ou_beta" << beta;
    return out.str();
}

}  // namespace

Comparison compare_models(const ScenarioConfig& random_cfg, const ScenarioConfig& stochastic_cfg) {
    random_cfg.validate();
    stochastic_cfg.validate();
    if (random_cfg.model != ModelKind::RandomOU) {
        throw InvalidInput("compare: first config must use the random_ou model");
    }
    if (stochastic_cfg.model != ModelKind::StochasticIto &&
        stochastic_cfg.model != ModelKind::StochasticStratonovich) {
        throw InvalidInput("compare: second config must use a Wiener-driven model");
    }
    const auto& ga = random_cfg.grid;
    const auto& gb = stochastic_cfg.grid;
    if (ga.t0 != gb.t0 || ga.dt != gb.dt || ga.n_steps != gb.n_steps) {
        throw InvalidInput("compare: configs use mismatched time grids");
    }
    if (!same_biology(random_cfg.params, stochastic_cfg.params)) {
        throw InvalidInput("compare: configs differ in model parameters other than alpha");
    }
    if (!(random_cfg.init == stochastic_cfg.init)) {
        throw InvalidInput("compare: configs differ in the initial state");
    }

    Comparison cmp;
    cmp.grid = ga;
    cmp.seed = random_cfg.seeds.front();
    const auto& init = random_cfg.init;

    cmp.runs.push_back(attempt("deterministic", [&] {
        return simulate_deterministic(random_cfg.params, init, ga);
    }));

    std::vector<double> betas = random_cfg.compare_betas;
    if (betas.empty()) betas.push_back(random_cfg.noise->beta);
    const auto ou_grid = TimeGrid::span(ga.t0, ga.t_end(), random_cfg.effective_noise_dt());
    for (double beta : betas) {
        cmp.runs.push_back(attempt(beta_label(beta), [&] {
            const auto z = sample_ou_path({beta, random_cfg.noise->gamma}, cmp.seed, ou_grid);
            return simulate_random(random_cfg.params, z, init, ga);
        }));
    }

    const auto w_grid = TimeGrid::span(gb.t0, gb.t_end(), stochastic_cfg.effective_noise_dt());
    const auto wiener = sample_wiener_path(cmp.seed, w_grid);
    cmp.runs.push_back(attempt("wiener_ito", [&] {
        return simulate_ito(stochastic_cfg.params, wiener, init, gb);
    }));
    cmp.runs.push_back(attempt("wiener_stratonovich", [&] {
        return simulate_stratonovich(stochastic_cfg.params, wiener, init, gb);
    }));
    return cmp;
}

}  // namespace chemowall
