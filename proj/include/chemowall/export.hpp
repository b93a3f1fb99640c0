#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "chemowall/analysis.hpp"
#include "chemowall/integrators.hpp"
#include "chemowall/scenario.hpp"

namespace chemowall {

enum class ExportFormat { CSV, JSON };

/// Shortest text with 17 significant digits; parses back to the same double.
std::string format_double(double v);

/// Driving noise and dilution sampled at trajectory times, for the optional columns.
struct NoiseColumns {
    const NoisePath* z = nullptr;
    const NoisePath* dilution = nullptr;
};

/// CSV `t,s,x1,x2[,z,dilution]`. BP trajectories are written in original coordinates.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, NoiseColumns noise = {});
void write_trajectory_csv(std::ostream& out, const TrajectoryBP& traj, NoiseColumns noise = {});

struct ImportedTrajectory {
    Trajectory trajectory;
    std::optional<std::vector<double>> z;
    std::optional<std::vector<double>> dilution;
};

/// Reads the CSV produced by write_trajectory_csv. Throws InvalidInput on malformed data.
ImportedTrajectory read_trajectory_csv(std::istream& in);

nlohmann::json trajectory_to_json(const Trajectory& traj, NoiseColumns noise = {});
ImportedTrajectory trajectory_from_json(const nlohmann::json& j);

/// Writes to `path` (creating parent directories). I/O errors surface as Error
/// carrying the system message.
void export_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                       ExportFormat format, NoiseColumns noise = {});

/// CSV `t,z`.
void write_noise_csv(std::ostream& out, const NoisePath& path);

nlohmann::json to_json(const DilutionBand& band);
nlohmann::json to_json(const BoundsReport& report);
nlohmann::json to_json(const RegimeClassification& rc);
nlohmann::json to_json(const BandReport& report);
nlohmann::json to_json(const EnvelopeReport& report);
nlohmann::json to_json(const PositivityReport& report);
nlohmann::json to_json(const ErgodicStats& stats);

/// Per-seed analysis and status; trajectories are exported separately.
nlohmann::json to_json(const ScenarioResult& result);
/// Summary without the time series (see write_ensemble_csv).
nlohmann::json to_json(const EnsembleSummary& summary);

/// CSV `t,s_mean,s_min,s_max,x1_mean,x1_min,x1_max,x2_mean,x2_min,x2_max`.
void write_ensemble_csv(std::ostream& out, const EnsembleSummary& summary);

/// CSV `t` then `s_<label>,x1_<label>,x2_<label>` per run; failed runs are written as nan.
void write_comparison_csv(std::ostream& out, const Comparison& cmp);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace chemowall
