// chemowall command line: noise sampling, scenario runs, ensembles, bounds and comparisons.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "chemowall/config.hpp"
#include "chemowall/error.hpp"
#include "chemowall/export.hpp"
#include "chemowall/presets.hpp"
#include "chemowall/scenario.hpp"

namespace fs = std::filesystem;
using namespace chemowall;

namespace {

ScenarioConfig resolve_config(const std::string& config_path, const std::string& preset_name) {
    if (!config_path.empty()) {
        if (!preset_name.empty()) {
            // The preset seeds the fields; the file overrides them.
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
            std::ostringstream text;
            text << "preset = " << preset_name << "\n" << in.rdbuf();
            std::istringstream merged(text.str());
            return parse_config(merged, fs::path(config_path).stem().string());
        }
        return load_config(config_path);
    }
    if (!preset_name.empty()) {
        auto cfg = preset(preset_name);
        cfg.validate();
        return cfg;
    }
    throw InvalidInput("either --config or --preset is required");
}

void print_warnings(const ScenarioConfig& cfg) {
    for (const auto& issue : check_params(cfg.params).issues) {
        if (issue.severity == IssueSeverity::Warning) {
            std::cerr << "warning: " << issue.field << " " << issue.message << "\n";
        }
    }
    for (const auto& note : cfg.notes) std::cerr << "note: " << note << "\n";
}

std::string output_text(const std::function<void(std::ostream&)>& write) {
    std::ostringstream buf;
    write(buf);
    return buf.str();
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }
}

int cmd_ou_sample(double beta, double gamma, std::uint64_t seed, double dt, double horizon,
                  const std::string& out) {
    const OUParams ou{beta, gamma};
    const auto path = sample_ou_path(ou, seed, TimeGrid::span(0.0, horizon, dt));
    emit(out, output_text([&](std::ostream& o) { write_noise_csv(o, path); }));
    return 0;
}

int cmd_simulate(ScenarioConfig cfg, std::optional<std::uint64_t> seed, const std::string& out_dir) {
    if (seed) cfg.seeds = {*seed};
    if (!out_dir.empty()) cfg.output.directory = out_dir;
    print_warnings(cfg);
    const auto result = run_scenario(cfg);

    const fs::path dir = cfg.output.directory;
    for (const auto& run : result.runs) {
        if (!run.ok()) {
            std::cerr << "seed " << run.seed << ": " << *run.error << "\n";
            continue;
        }
        NoiseColumns cols;
        if (cfg.output.include_noise && run.noise) {
            cols.z = &*run.noise;
            if (run.dilution) cols.dilution = &*run.dilution;
        }
        const std::string stem = cfg.model == ModelKind::Deterministic
                                     ? cfg.output.prefix
                                     : cfg.output.prefix + "_seed" + std::to_string(run.seed);
        if (cfg.output.csv) export_trajectory(*run.trajectory, dir / (stem + ".csv"), ExportFormat::CSV, cols);
        if (cfg.output.json) export_trajectory(*run.trajectory, dir / (stem + ".json"), ExportFormat::JSON, cols);
    }
    write_text_file(dir / (cfg.output.prefix + "_summary.json"), to_json(result).dump(2) + "\n");

    std::size_t ok = 0;
    for (const auto& run : result.runs) ok += run.ok();
    std::cout << cfg.name << ": " << ok << "/" << result.runs.size() << " runs completed";
    if (result.classification) std::cout << ", verdict " << to_string(result.classification->verdict);
    if (result.band_note) std::cout << " (" << *result.band_note << ")";
    std::cout << "\n";
    return ok == result.runs.size() ? 0 : 1;
}

int cmd_ensemble(const ScenarioConfig& cfg, std::size_t n, std::uint64_t master_seed,
                 unsigned threads, const std::string& out_dir) {
    print_warnings(cfg);
    const auto summary = run_ensemble(cfg, n, master_seed, threads);
    const fs::path dir = out_dir.empty() ? cfg.output.directory : fs::path(out_dir);
    const std::string stem = cfg.output.prefix + "_ensemble";
    write_text_file(dir / (stem + ".csv"),
                    output_text([&](std::ostream& o) { write_ensemble_csv(o, summary); }));
    write_text_file(dir / (stem + ".json"), to_json(summary).dump(2) + "\n");
    std::cout << cfg.name << ": " << summary.completed << " completed, " << summary.failed
              << " failed";
    if (summary.certification_rate) {
        std::cout << ", band-certified " << *summary.certification_rate;
    }
    std::cout << "\n";
    return 0;
}

DilutionBand band_for(const ScenarioConfig& cfg, std::optional<double> b1, std::optional<double> b2) {
    if (b1 || b2) {
        if (!b1 || !b2) throw InvalidInput("--b1 and --b2 must be given together");
        return {*b1, *b2};
    }
    auto [band, note] = resolve_band(cfg);
    if (!band) throw InvalidInput(note.value_or("no dilution band available; pass --b1/--b2"));
    return *band;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chemostat-with-wall-growth simulation and analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "chemowall 0.1.0");

    // ou-sample
    auto* ou = app.add_subcommand("ou-sample", "Sample a stationary O-U path (CSV t,z)");
    double ou_beta = 1.0, ou_gamma = 0.2, ou_dt = 1e-3, ou_T = 10.0;
    std::uint64_t ou_seed = 0;
    std::string ou_out, ou_config;
    ou->add_option("--beta", ou_beta, "Mean reversion rate")->capture_default_str();
    ou->add_option("--gamma", ou_gamma, "Volatility")->capture_default_str();
    ou->add_option("--seed", ou_seed, "Seed")->capture_default_str();
    ou->add_option("--dt", ou_dt, "Step")->capture_default_str();
    ou->add_option("--t-end,--T", ou_T, "Horizon")->capture_default_str();
    ou->add_option("--config", ou_config, "Take beta, gamma, dt, T and first seed from a config");
    ou->add_option("-o,--out", ou_out, "Output file (default stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Run a scenario for each configured seed");
    std::string sim_config, sim_preset, sim_out;
    std::optional<std::uint64_t> sim_seed;
    sim->add_option("--config", sim_config, "Config file");
    sim->add_option("--preset", sim_preset, "Built-in scenario (fig4..fig13)");
    sim->add_option("--seed", sim_seed, "Run only this seed");
    sim->add_option("--out-dir", sim_out, "Override [output] dir");

    // ensemble
    auto* ens = app.add_subcommand("ensemble", "Monte-Carlo ensemble with derived seeds");
    std::string ens_config, ens_preset, ens_out;
    std::size_t ens_n = 0;
    std::uint64_t ens_master = 0;
    unsigned ens_threads = 0;
    ens->add_option("--config", ens_config, "Config file");
    ens->add_option("--preset", ens_preset, "Built-in scenario");
    ens->add_option("--n", ens_n, "Ensemble size")->required();
    ens->add_option("--master-seed", ens_master, "Master seed")->required();
    ens->add_option("--threads", ens_threads, "Worker threads (0 = all cores)");
    ens->add_option("--out-dir", ens_out, "Override [output] dir");

    // bounds
    auto* bnd = app.add_subcommand("bounds", "Closed-form bounds as JSON");
    std::string bnd_config, bnd_preset;
    std::optional<double> bnd_b1, bnd_b2;
    std::optional<int> bnd_n;
    bnd->add_option("--config", bnd_config, "Config file");
    bnd->add_option("--preset", bnd_preset, "Built-in scenario");
    bnd->add_option("--b1", bnd_b1, "Lower dilution bound");
    bnd->add_option("--b2", bnd_b2, "Upper dilution bound");
    bnd->add_option("--n", bnd_n, "Sharpening index n >= 1");

    // classify
    auto* cls = app.add_subcommand("classify", "Regime verdict as JSON");
    std::string cls_config, cls_preset;
    std::optional<double> cls_b1, cls_b2;
    cls->add_option("--config", cls_config, "Config file");
    cls->add_option("--preset", cls_preset, "Built-in scenario");
    cls->add_option("--b1", cls_b1, "Lower dilution bound");
    cls->add_option("--b2", cls_b2, "Upper dilution bound");

    // compare
    auto* cmp = app.add_subcommand("compare", "Deterministic, O-U and Wiener runs side by side");
    std::string cmp_a, cmp_b, cmp_preset, cmp_out;
    cmp->add_option("--config-a", cmp_a, "Random (O-U) model config");
    cmp->add_option("--config-b", cmp_b, "Wiener model config");
    cmp->add_option("--preset", cmp_preset, "fig12 or fig13 instead of two configs");
    cmp->add_option("-o,--out", cmp_out, "Output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ou->parsed()) {
            if (!ou_config.empty()) {
                const auto cfg = load_config(ou_config);
                if (!cfg.noise) throw InvalidInput("config has no [noise] beta/gamma");
                ou_beta = cfg.noise->beta;
                ou_gamma = cfg.noise->gamma;
                ou_dt = cfg.effective_noise_dt();
                ou_T = cfg.grid.t_end();
                if (ou->count("--seed") == 0) ou_seed = cfg.seeds.front();
            }
            return cmd_ou_sample(ou_beta, ou_gamma, ou_seed, ou_dt, ou_T, ou_out);
        }
        if (sim->parsed()) {
            return cmd_simulate(resolve_config(sim_config, sim_preset), sim_seed, sim_out);
        }
        if (ens->parsed()) {
            return cmd_ensemble(resolve_config(ens_config, ens_preset), ens_n, ens_master,
                                ens_threads, ens_out);
        }
        if (bnd->parsed()) {
            const auto cfg = resolve_config(bnd_config, bnd_preset);
            const auto report = attractor_bounds(cfg.params, band_for(cfg, bnd_b1, bnd_b2), bnd_n);
            std::cout << to_json(report).dump(2) << "\n";
            return 0;
        }
        if (cls->parsed()) {
            const auto cfg = resolve_config(cls_config, cls_preset);
            const auto rc = classify_regime(cfg.params, band_for(cfg, cls_b1, cls_b2));
            std::cout << to_json(rc).dump(2) << "\n";
            return 0;
        }
        if (cmp->parsed()) {
            ScenarioConfig a, b;
            if (!cmp_preset.empty()) {
                std::tie(a, b) = compare_preset(cmp_preset);
            } else {
                if (cmp_a.empty() || cmp_b.empty()) {
                    throw InvalidInput("compare needs --config-a and --config-b, or --preset");
                }
                a = load_config(cmp_a);
                b = load_config(cmp_b);
            }
            const auto result = compare_models(a, b);
            for (const auto& run : result.runs) {
                if (run.error) std::cerr << run.label << ": " << *run.error << "\n";
            }
            emit(cmp_out, output_text([&](std::ostream& o) { write_comparison_csv(o, result); }));
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
