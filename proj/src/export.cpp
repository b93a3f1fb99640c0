#include "chemowall/export.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "chemowall/error.hpp"

namespace chemowall {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc()) throw Error("format_double: conversion failed");
    return std::string(buf, ptr);
}

namespace {

double parse_field(std::string_view text, std::size_t line) {
    if (text == "nan") return std::nan("");
    if (text == "inf") return HUGE_VAL;
    if (text == "-inf") return -HUGE_VAL;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidInput("csv line " + std::to_string(line) + ": bad number '" +
                           std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class S>
Trajectory as_original(const BasicTrajectory<S>& traj) {
    if constexpr (std::is_same_v<S, State3>) {
        return traj;
    } else {
        Trajectory out;
        out.grid = traj.grid;
        out.scheme = traj.scheme;
        out.noise = traj.noise;
        out.states.reserve(traj.states.size());
        for (const auto& y : traj.states) out.states.push_back(from_biomass_proportion(y));
        return out;
    }
}

void check_noise_span(const Trajectory& traj, NoiseColumns noise) {
    for (const NoisePath* p : {noise.z, noise.dilution}) {
        if (p && !p->covers(traj.grid.t0, traj.grid.t_end())) {
            throw InvalidInput("noise column does not cover the trajectory horizon");
        }
    }
}

void write_csv_impl(std::ostream& out, const Trajectory& traj, NoiseColumns noise) {
    if (traj.coords == Coordinates::SigmaKappa) {
        throw InvalidInput("sigma/kappa trajectories must be mapped back before export");
    }
    check_noise_span(traj, noise);
    out << "t,s,x1,x2";
    if (noise.z) out << ",z";
    if (noise.dilution) out << ",dilution";
    out << '\n';
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const double t = traj.time(k);
        const State3& y = traj.states[k];
        out << format_double(t) << ',' << format_double(y.s) << ',' << format_double(y.x1) << ','
            << format_double(y.x2);
        if (noise.z) out << ',' << format_double(noise.z->at(t));
        if (noise.dilution) out << ',' << format_double(noise.dilution->at(t));
        out << '\n';
    }
    if (!out) throw Error("failed writing trajectory CSV");
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, NoiseColumns noise) {
    write_csv_impl(out, traj, noise);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryBP& traj, NoiseColumns noise) {
    write_csv_impl(out, as_original(traj), noise);
}

namespace {

TimeGrid grid_from_times(const std::vector<double>& t) {
    if (t.size() < 2) throw InvalidInput("trajectory needs at least two time points");
    const std::size_t n = t.size() - 1;
    TimeGrid g{t.front(), (t.back() - t.front()) / static_cast<double>(n), n};
    g.validate();
    return g;
}

}  // namespace

ImportedTrajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv(line);
    if (header.size() < 4 || header[0] != "t" || header[1] != "s" || header[2] != "x1" ||
        header[3] != "x2") {
        throw InvalidInput("csv: header must start with t,s,x1,x2");
    }
    int z_col = -1, dil_col = -1;
    for (std::size_t i = 4; i < header.size(); ++i) {
        if (header[i] == "z") {
            z_col = static_cast<int>(i);
        } else if (header[i] == "dilution") {
            dil_col = static_cast<int>(i);
        } else {
            throw InvalidInput("csv: unexpected column '" + std::string(header[i]) + "'");
        }
    }

    ImportedTrajectory result;
    std::vector<double> times, z, dil;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size()) {
            throw InvalidInput("csv line " + std::to_string(lineno) + ": expected " +
                               std::to_string(header.size()) + " fields");
        }
        times.push_back(parse_field(fields[0], lineno));
        result.trajectory.states.push_back({parse_field(fields[1], lineno),
                                            parse_field(fields[2], lineno),
                                            parse_field(fields[3], lineno)});
        if (z_col >= 0) z.push_back(parse_field(fields[z_col], lineno));
        if (dil_col >= 0) dil.push_back(parse_field(fields[dil_col], lineno));
    }
    result.trajectory.grid = grid_from_times(times);
    if (z_col >= 0) result.z = std::move(z);
    if (dil_col >= 0) result.dilution = std::move(dil);
    return result;
}

json trajectory_to_json(const Trajectory& traj, NoiseColumns noise) {
    check_noise_span(traj, noise);
    json j;
    j["grid"] = {{"t0", traj.grid.t0}, {"dt", traj.grid.dt}, {"n_steps", traj.grid.n_steps}};
    j["coords"] = to_string(traj.coords);
    j["scheme"] = to_string(traj.scheme);
    json ref;
    ref["seed"] = traj.noise.seed ? json(*traj.noise.seed) : json(nullptr);
    ref["kind"] = traj.noise.kind ? json(to_string(*traj.noise.kind)) : json(nullptr);
    if (traj.noise.ou) ref["beta"] = traj.noise.ou->beta, ref["gamma"] = traj.noise.ou->gamma;
    j["noise"] = ref;
    std::vector<double> t, s, x1, x2, z, dil;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const double tk = traj.time(k);
        t.push_back(tk);
        s.push_back(traj.states[k].s);
        x1.push_back(traj.states[k].x1);
        x2.push_back(traj.states[k].x2);
        if (noise.z) z.push_back(noise.z->at(tk));
        if (noise.dilution) dil.push_back(noise.dilution->at(tk));
    }
    j["t"] = t;
    j["s"] = s;
    j["x1"] = x1;
    j["x2"] = x2;
    if (noise.z) j["z"] = z;
    if (noise.dilution) j["dilution"] = dil;
    return j;
}

ImportedTrajectory trajectory_from_json(const json& j) {
    try {
        ImportedTrajectory out;
        const auto& g = j.at("grid");
        out.trajectory.grid = {g.at("t0").get<double>(), g.at("dt").get<double>(),
                               g.at("n_steps").get<std::size_t>()};
        out.trajectory.grid.validate();
        const auto s = j.at("s").get<std::vector<double>>();
        const auto x1 = j.at("x1").get<std::vector<double>>();
        const auto x2 = j.at("x2").get<std::vector<double>>();
        if (s.size() != out.trajectory.grid.size() || x1.size() != s.size() ||
            x2.size() != s.size()) {
            throw InvalidInput("trajectory json: state arrays do not match the grid");
        }
        for (std::size_t k = 0; k < s.size(); ++k) out.trajectory.states.push_back({s[k], x1[k], x2[k]});
        if (j.contains("z")) out.z = j["z"].get<std::vector<double>>();
        if (j.contains("dilution")) out.dilution = j["dilution"].get<std::vector<double>>();
        return out;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("trajectory json: ") + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw Error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out) throw Error("failed writing '" + path.string() + "': " + std::strerror(errno));
}

void export_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                       ExportFormat format, NoiseColumns noise) {
    std::ostringstream buf;
    if (format == ExportFormat::CSV) {
        write_trajectory_csv(buf, traj, noise);
    } else {
        buf << trajectory_to_json(traj, noise).dump(2) << '\n';
    }
    write_text_file(path, buf.str());
}

void write_noise_csv(std::ostream& out, const NoisePath& path) {
    out << "t,z\n";
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        out << format_double(path.grid.time(k)) << ',' << format_double(path.values[k]) << '\n';
    }
    if (!out) throw Error("failed writing noise CSV");
}

namespace {

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

json to_json(const DilutionBand& band) { return {{"b1", band.b1}, {"b2", band.b2}}; }

json to_json(const BoundsReport& r) {
    return {{"b1", r.b1},
            {"b2", r.b2},
            {"vartheta", r.vartheta},
            {"p_radius", r.p_radius},
            {"xi_l", r.xi_l},
            {"xi_u", r.xi_u},
            {"z_l", r.z_l},
            {"z_u", r.z_u},
            {"x_tilde", r.x_tilde},
            {"s_tilde", r.s_tilde},
            {"x1_floor", r.x1_floor},
            {"x2_floor", r.x2_floor},
            {"sharpening_n", opt(r.sharpening_n)},
            {"x_tilde_n", opt(r.x_tilde_n)},
            {"s_tilde_n", opt(r.s_tilde_n)}};
}

json to_json(const RegimeClassification& rc) {
    return {{"verdict", to_string(rc.verdict)},
            {"extinction_lhs", rc.extinction_lhs},
            {"extinction_rhs", rc.extinction_rhs},
            {"persistence_lhs", rc.persistence_lhs},
            {"persistence_rhs", rc.persistence_rhs},
            {"b1", rc.band.b1},
            {"b2", rc.band.b2}};
}

json to_json(const BandReport& r) {
    return {{"b1", r.b1},
            {"b2", r.b2},
            {"points", r.points},
            {"violations", r.violations},
            {"inside_fraction", r.inside_fraction()},
            {"first_violation_time", opt(r.first_violation_time)},
            {"certified", r.certified()}};
}

json to_json(const EnvelopeReport& r) {
    json j = {{"band_certified", r.band_certified}, {"band", to_json(r.band)}};
    if (!r.band_certified) return j;
    j["p_bound_ok"] = r.p_bound_ok;
    j["p_max_violation"] = r.p_max_violation;
    j["xi_envelope_ok"] = r.xi_envelope_ok;
    j["xi_max_violation"] = r.xi_max_violation;
    j["xi_tail_ok"] = r.xi_tail_ok;
    j["xi_band_entry_time"] = opt(r.xi_band_entry_time);
    j["z_tail_ok"] = r.z_tail_ok;
    j["z_band_entry_time"] = opt(r.z_band_entry_time);
    j["floors_applicable"] = r.floors_applicable;
    j["floors_tail_ok"] = r.floors_tail_ok;
    j["floors_ok_after"] = opt(r.floors_ok_after);
    j["extinction_max_log_ratio"] = opt(r.extinction_max_log_ratio);
    j["extinction_envelope_applicable"] = r.extinction_envelope_applicable;
    return j;
}

json to_json(const PositivityReport& r) {
    json intervals = json::array();
    for (const auto& [a, b] : r.negative_s_intervals) intervals.push_back({a, b});
    return {{"min_s", r.min_s},
            {"min_s_time", r.min_s_time},
            {"min_component", r.min_component},
            {"negative_s_intervals", intervals},
            {"above_barrier", r.above_barrier}};
}

json to_json(const ErgodicStats& s) {
    return {{"time_avg", s.time_avg},
            {"time_avg_abs", s.time_avg_abs},
            {"sup_abs", s.sup_abs},
            {"final_over_t", s.final_over_t}};
}

namespace {

json state_json(const State3& y) { return {{"s", y.s}, {"x1", y.x1}, {"x2", y.x2}}; }

json params_json(const ChemostatParams& p) {
    return {{"s_in", p.s_in}, {"D", p.D},   {"a", p.a},   {"m", p.m},   {"b", p.b},
            {"nu", p.nu},     {"c", p.c},   {"r1", p.r1}, {"r2", p.r2}, {"alpha", p.alpha}};
}

json scenario_header(const ScenarioConfig& cfg, const std::optional<DilutionBand>& band,
                     const std::optional<std::string>& note,
                     const std::optional<RegimeClassification>& rc) {
    json j;
    j["scenario"] = cfg.name;
    j["model"] = to_string(cfg.model);
    j["params"] = params_json(cfg.params);
    j["noise"] = cfg.noise ? json{{"beta", cfg.noise->beta}, {"gamma", cfg.noise->gamma}}
                           : json(nullptr);
    j["init"] = state_json(cfg.init);
    j["grid"] = {{"t0", cfg.grid.t0}, {"dt", cfg.grid.dt}, {"n_steps", cfg.grid.n_steps}};
    j["band"] = band ? to_json(*band) : json(nullptr);
    j["band_note"] = opt(note);
    j["classification"] = rc ? to_json(*rc) : json(nullptr);
    j["notes"] = cfg.notes;
    return j;
}

}  // namespace

json to_json(const ScenarioResult& result) {
    json j = scenario_header(result.config, result.band, result.band_note, result.classification);
    j["bounds"] = result.bounds ? to_json(*result.bounds) : json(nullptr);
    j["warnings"] = result.warnings;
    json runs = json::array();
    for (const auto& run : result.runs) {
        json r;
        r["seed"] = run.seed;
        r["ok"] = run.ok();
        r["error"] = opt(run.error);
        r["error_kind"] = opt(run.error_kind);
        r["error_time"] = opt(run.error_time);
        r["terminal"] = run.ok() ? state_json(run.trajectory->states.back()) : json(nullptr);
        r["envelope"] = run.envelope ? to_json(*run.envelope) : json(nullptr);
        r["positivity"] = run.positivity ? to_json(*run.positivity) : json(nullptr);
        runs.push_back(std::move(r));
    }
    j["runs"] = std::move(runs);
    return j;
}

json to_json(const EnsembleSummary& sum) {
    json j;
    j["scenario"] = sum.scenario;
    j["model"] = to_string(sum.model);
    j["master_seed"] = sum.master_seed;
    j["n"] = sum.n;
    j["grid"] = {{"t0", sum.grid.t0}, {"dt", sum.grid.dt}, {"n_steps", sum.grid.n_steps}};
    j["completed"] = sum.completed;
    j["failed"] = sum.failed;
    j["band"] = sum.band ? to_json(*sum.band) : json(nullptr);
    j["band_note"] = opt(sum.band_note);
    j["classification"] = sum.classification ? to_json(*sum.classification) : json(nullptr);
    j["certification_rate"] = opt(sum.certification_rate);
    j["p_bound_pass_rate"] = opt(sum.p_bound_pass_rate);
    j["xi_envelope_pass_rate"] = opt(sum.xi_envelope_pass_rate);
    j["xi_tail_pass_rate"] = opt(sum.xi_tail_pass_rate);
    j["z_tail_pass_rate"] = opt(sum.z_tail_pass_rate);
    j["floors_tail_pass_rate"] = opt(sum.floors_tail_pass_rate);
    j["negative_s_rate"] = opt(sum.negative_s_rate);
    json members = json::array();
    for (const auto& m : sum.members) {
        members.push_back({{"seed", m.seed},
                           {"ok", m.ok},
                           {"error", opt(m.error)},
                           {"terminal", m.terminal ? state_json(*m.terminal) : json(nullptr)},
                           {"band_certified", opt(m.band_certified)},
                           {"p_bound_ok", opt(m.p_bound_ok)},
                           {"xi_envelope_ok", opt(m.xi_envelope_ok)},
                           {"xi_tail_ok", opt(m.xi_tail_ok)},
                           {"z_tail_ok", opt(m.z_tail_ok)},
                           {"floors_tail_ok", opt(m.floors_tail_ok)},
                           {"min_s", opt(m.min_s)}});
    }
    j["members"] = std::move(members);
    return j;
}

void write_ensemble_csv(std::ostream& out, const EnsembleSummary& sum) {
    out << "t,s_mean,s_min,s_max,x1_mean,x1_min,x1_max,x2_mean,x2_min,x2_max\n";
    for (std::size_t k = 0; k < sum.s.mean.size(); ++k) {
        out << format_double(sum.grid.time(k));
        for (const SeriesStats* st : {&sum.s, &sum.x1, &sum.x2}) {
            out << ',' << format_double(st->mean[k]) << ',' << format_double(st->min[k]) << ','
                << format_double(st->max[k]);
        }
        out << '\n';
    }
    if (!out) throw Error("failed writing ensemble CSV");
}

void write_comparison_csv(std::ostream& out, const Comparison& cmp) {
    out << "t";
    for (const auto& run : cmp.runs) {
        out << ",s_" << run.label << ",x1_" << run.label << ",x2_" << run.label;
    }
    out << '\n';
    const std::string nan = format_double(std::nan(""));
    for (std::size_t k = 0; k < cmp.grid.size(); ++k) {
        out << format_double(cmp.grid.time(k));
        for (const auto& run : cmp.runs) {
            if (run.trajectory) {
                const State3& y = run.trajectory->states[k];
                out << ',' << format_double(y.s) << ',' << format_double(y.x1) << ','
                    << format_double(y.x2);
            } else {
                out << ',' << nan << ',' << nan << ',' << nan;
            }
        }
        out << '\n';
    }
    if (!out) throw Error("failed writing comparison CSV");
}

}  // namespace chemowall
