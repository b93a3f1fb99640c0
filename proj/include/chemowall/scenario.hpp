#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chemowall/analysis.hpp"
#include "chemowall/config.hpp"
#include "chemowall/integrators.hpp"

namespace chemowall {

/// Outcome of one seed. Exactly one of `trajectory` / `error` is set.
struct SeedRun {
    std::uint64_t seed = 0;
    std::optional<Trajectory> trajectory;
    std::optional<NoisePath> noise;     ///< driving path (O-U z or Wiener W) on the noise grid
    std::optional<NoisePath> dilution;  ///< D + alpha z; O-U models only
    std::optional<EnvelopeReport> envelope;
    std::optional<PositivityReport> positivity;
    std::optional<std::string> error;
    std::optional<std::string> error_kind;  ///< singular, blow_up, positivity, invalid
    std::optional<double> error_time;

    bool ok() const noexcept { return trajectory.has_value(); }
};

struct ScenarioResult {
    ScenarioConfig config;
    std::optional<DilutionBand> band;  ///< band used for analysis, if any
    std::optional<std::string> band_note;
    std::optional<BoundsReport> bounds;
    std::optional<RegimeClassification> classification;
    std::vector<std::string> warnings;  ///< assumption warnings from parameter checks
    std::vector<SeedRun> runs;          ///< in config seed order
};

/// Band used for analysis: explicit band, else the automatic one (nullopt with a
/// note when it is not valid), else for the deterministic model the degenerate (D, D).
std::pair<std::optional<DilutionBand>, std::optional<std::string>> resolve_band(
    const ScenarioConfig& cfg);

/// Driving path for one seed on the noise grid spanning the config horizon.
NoisePath driving_noise(const ScenarioConfig& cfg, std::uint64_t seed);

/// Integrates one seed; integrator failures are captured in the returned SeedRun.
SeedRun run_seed(const ScenarioConfig& cfg, std::uint64_t seed,
                 const std::optional<DilutionBand>& band,
                 const std::optional<BoundsReport>& bounds);

/// Runs every configured seed. A failing seed is reported and never affects the others.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Per-seed line of an ensemble summary.
struct SeedOutcome {
    std::uint64_t seed = 0;
    bool ok = false;
    std::optional<std::string> error;
    std::optional<State3> terminal;
    std::optional<bool> band_certified;
    std::optional<bool> p_bound_ok;
    std::optional<bool> xi_envelope_ok;
    std::optional<bool> xi_tail_ok;
    std::optional<bool> z_tail_ok;
    std::optional<bool> floors_tail_ok;
    std::optional<double> min_s;
};

struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> min;
    std::vector<double> max;
};

struct EnsembleSummary {
    std::string scenario;
    ModelKind model = ModelKind::Deterministic;
    std::uint64_t master_seed = 0;
    std::size_t n = 0;
    TimeGrid grid;
    std::vector<SeedOutcome> members;  ///< sorted by member index
    std::size_t completed = 0;
    std::size_t failed = 0;
    SeriesStats s, x1, x2;  ///< over completed members only
    std::optional<DilutionBand> band;
    std::optional<std::string> band_note;
    std::optional<RegimeClassification> classification;
    std::optional<double> certification_rate;  ///< certified / completed (O-U models)
    std::optional<double> p_bound_pass_rate;   ///< rates among certified members
    std::optional<double> xi_envelope_pass_rate;
    std::optional<double> xi_tail_pass_rate;
    std::optional<double> z_tail_pass_rate;
    std::optional<double> floors_tail_pass_rate;
    std::optional<double> negative_s_rate;  ///< completed members with min s < 0
};

/// Seed of ensemble member i (0-based).
std::uint64_t ensemble_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Runs n members with seeds ensemble_seed(master, i). Members run on up to
/// `threads` workers (0 = hardware concurrency); the summary does not depend on it.
EnsembleSummary run_ensemble(const ScenarioConfig& cfg, std::size_t n,
                             std::uint64_t master_seed, unsigned threads = 0);

/// One column block of a side-by-side comparison.
struct CompareRun {
    std::string label;  ///< deterministic, ou_beta<b>, wiener_ito, wiener_stratonovich
    std::optional<Trajectory> trajectory;
    std::optional<std::string> error;
};

struct Comparison {
    TimeGrid grid;
    std::uint64_t seed = 0;
    std::vector<CompareRun> runs;
};

/// Deterministic, O-U for every beta of `random_cfg` (its own beta when the
/// compare list is empty), Ito and Stratonovich with `stochastic_cfg`'s alpha.
/// Both configs must share the biological parameters, initial state and grid.
Comparison compare_models(const ScenarioConfig& random_cfg, const ScenarioConfig& stochastic_cfg);

}  // namespace chemowall
