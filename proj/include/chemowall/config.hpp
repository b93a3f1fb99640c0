#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chemowall/analysis.hpp"
#include "chemowall/models.hpp"
#include "chemowall/noise.hpp"

namespace chemowall {

enum class ModelKind { Deterministic, RandomOU, StochasticIto, StochasticStratonovich };

const char* to_string(ModelKind k) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept;

struct OutputSpec {
    std::filesystem::path directory = ".";
    std::string prefix = "run";
    bool csv = true;
    bool json = false;
    bool include_noise = true;  ///< append z and dilution columns
};

struct ScenarioConfig {
    std::string name;  ///< preset name or file stem
    ModelKind model = ModelKind::Deterministic;
    ChemostatParams params;
    AssumptionPolicy policy = AssumptionPolicy::AllowWarnings;
    std::optional<OUParams> noise;       ///< required for RandomOU
    std::optional<DilutionBand> band;    ///< nullopt = automatic
    double band_coverage = 0.999;
    State3 init{};
    TimeGrid grid{0.0, 1e-3, 20000};
    std::optional<double> noise_dt;      ///< default: grid.dt / 2
    std::vector<std::uint64_t> seeds;
    std::vector<double> compare_betas;   ///< extra O-U rates for side-by-side runs
    OutputSpec output;
    std::vector<std::string> notes;      ///< assumptions attached by presets

    double effective_noise_dt() const noexcept { return noise_dt.value_or(grid.dt / 2.0); }
    bool is_stochastic() const noexcept { return model != ModelKind::Deterministic; }

    /// Throws InvalidInput (or ConfigError) when the invariants do not hold.
    void validate() const;
};

/// Parses the `key = value` format. `origin` names the source in error messages.
/// Keys before any section header belong to a global scope holding only `preset`
/// and `name`. A preset, when given, seeds every field before the other keys apply.
ScenarioConfig parse_config(std::istream& in, const std::string& origin = "<config>");
ScenarioConfig parse_config_string(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Renders a config back to the text format (round-trips through parse_config).
std::string format_config(const ScenarioConfig& cfg);

}  // namespace chemowall
