#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "chemowall/analysis.hpp"
#include "chemowall/config.hpp"
#include "chemowall/error.hpp"
#include "chemowall/export.hpp"
#include "chemowall/presets.hpp"
#include "chemowall/rng.hpp"
#include "chemowall/scenario.hpp"

namespace py = pybind11;
using namespace chemowall;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

std::vector<double> times(const TimeGrid& g) {
    std::vector<double> t(g.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = g.time(k);
    return t;
}

py::dict trajectory_dict(const Trajectory& traj) {
    std::vector<double> s, x1, x2;
    s.reserve(traj.states.size());
    x1.reserve(traj.states.size());
    x2.reserve(traj.states.size());
    for (const auto& y : traj.states) {
        s.push_back(y.s);
        x1.push_back(y.x1);
        x2.push_back(y.x2);
    }
    py::dict d;
    d["t"] = to_array(times(traj.grid));
    d["s"] = to_array(s);
    d["x1"] = to_array(x1);
    d["x2"] = to_array(x2);
    return d;
}

py::dict noise_dict(const NoisePath& path) {
    py::dict d;
    d["t"] = to_array(times(path.grid));
    d["z"] = to_array(path.values);
    d["seed"] = path.seed;
    return d;
}

State3 state_from(const std::vector<double>& v) {
    if (v.size() != 3) throw InvalidInput("state must have three entries (s, x1, x2)");
    return {v[0], v[1], v[2]};
}

}  // namespace

PYBIND11_MODULE(_chemowall, m) {
    m.doc() = "Chemostat with wall growth under random dilution";

    auto base = py::register_exception<Error>(m, "ChemowallError");
    py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
    py::register_exception<SingularInput>(m, "SingularInput", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<BlowUp>(m, "BlowUp", base.ptr());
    py::register_exception<PositivityViolation>(m, "PositivityViolation", base.ptr());
    py::register_exception<ProportionUndefined>(m, "ProportionUndefined", base.ptr());

    py::class_<ChemostatParams>(m, "Params")
        .def(py::init([](double s_in, double D, double a, double m_, double b, double nu, double c, double r1,
                         double r2, double alpha) {
                 return ChemostatParams{s_in, D, a, m_, b, nu, c, r1, r2, alpha};
             }),
             py::kw_only(), py::arg("s_in"), py::arg("D"), py::arg("a"), py::arg("m"), py::arg("b"), py::arg("nu"),
             py::arg("c"), py::arg("r1"), py::arg("r2"), py::arg("alpha") = 0.0)
        .def_readwrite("s_in", &ChemostatParams::s_in)
        .def_readwrite("D", &ChemostatParams::D)
        .def_readwrite("a", &ChemostatParams::a)
        .def_readwrite("m", &ChemostatParams::m)
        .def_readwrite("b", &ChemostatParams::b)
        .def_readwrite("nu", &ChemostatParams::nu)
        .def_readwrite("c", &ChemostatParams::c)
        .def_readwrite("r1", &ChemostatParams::r1)
        .def_readwrite("r2", &ChemostatParams::r2)
        .def_readwrite("alpha", &ChemostatParams::alpha)
        .def("validate",
             [](const ChemostatParams& p, bool strict) {
                 std::vector<std::string> out;
                 for (const auto& issue : check_params(p).issues) {
                     if (issue.severity == IssueSeverity::Warning) out.push_back(issue.field + ": " + issue.message);
                 }
                 validate_params(p, strict ? AssumptionPolicy::Strict : AssumptionPolicy::AllowWarnings);
                 return out;
             },
             py::arg("strict") = false, "Raises on invalid values; returns assumption warnings.")
        .def("__repr__", [](const ChemostatParams& p) {
            std::ostringstream s;
            s << "Params(s_in=" << p.s_in << ", D=" << p.D << ", a=" << p.a << ", m=" << p.m << ", b=" << p.b
              << ", nu=" << p.nu << ", c=" << p.c << ", r1=" << p.r1 << ", r2=" << p.r2 << ", alpha=" << p.alpha
              << ")";
            return s.str();
        });

    py::class_<ScenarioConfig>(m, "Config")
        .def_readwrite("name", &ScenarioConfig::name)
        .def_readwrite("params", &ScenarioConfig::params)
        .def_readwrite("seeds", &ScenarioConfig::seeds)
        .def_property_readonly("model", [](const ScenarioConfig& c) { return std::string(to_string(c.model)); })
        .def_property(
            "init", [](const ScenarioConfig& c) { return std::vector<double>{c.init.s, c.init.x1, c.init.x2}; },
            [](ScenarioConfig& c, const std::vector<double>& v) { c.init = state_from(v); })
        .def_property(
            "t_end", [](const ScenarioConfig& c) { return c.grid.t_end(); },
            [](ScenarioConfig& c, double t) { c.grid = TimeGrid::span(c.grid.t0, t, c.grid.dt); })
        .def_property_readonly("dt", [](const ScenarioConfig& c) { return c.grid.dt; })
        .def_property_readonly("noise",
                               [](const ScenarioConfig& c) -> py::object {
                                   if (!c.noise) return py::none();
                                   return py::make_tuple(c.noise->beta, c.noise->gamma);
                               })
        .def("to_text", &format_config);

    m.def("load_config", &load_config, py::arg("path"));
    m.def("parse_config", &parse_config_string, py::arg("text"));
    m.def("preset", &preset, py::arg("name"));
    m.def("preset_names", &preset_names);

    m.def("derive_seed", &derive_seed, py::arg("master_seed"), py::arg("index"));
    m.def("ensemble_seed", &ensemble_seed, py::arg("master_seed"), py::arg("index"));

    m.def(
        "sample_ou",
        [](double beta, double gamma, std::uint64_t seed, double dt, double t_end) {
            return noise_dict(sample_ou_path({beta, gamma}, seed, TimeGrid::span(0.0, t_end, dt)));
        },
        py::arg("beta"), py::arg("gamma"), py::arg("seed"), py::arg("dt"), py::arg("t_end"));
    m.def(
        "sample_wiener",
        [](std::uint64_t seed, double dt, double t_end) {
            return noise_dict(sample_wiener_path(seed, TimeGrid::span(0.0, t_end, dt)));
        },
        py::arg("seed"), py::arg("dt"), py::arg("t_end"));
    m.def(
        "_ou_stats_json",
        [](double beta, double gamma, std::uint64_t seed, double dt, double t_end) {
            const auto path = sample_ou_path({beta, gamma}, seed, TimeGrid::span(0.0, t_end, dt));
            auto j = to_json(ergodic_stats(path));
            j["lag1_autocorrelation"] = lag1_autocorrelation(path);
            return j.dump();
        },
        py::arg("beta"), py::arg("gamma"), py::arg("seed"), py::arg("dt"), py::arg("t_end"));

    m.def(
        "rhs",
        [](const ChemostatParams& p, const std::vector<double>& y, std::optional<double> dilution) {
            const auto d = rhs_with_dilution(state_from(y), p, dilution.value_or(p.D));
            return std::vector<double>{d.s, d.x1, d.x2};
        },
        py::arg("params"), py::arg("state"), py::arg("dilution") = py::none());

    m.def(
        "auto_band",
        [](const ChemostatParams& p, double beta, double gamma, double coverage) {
            const auto b = auto_band(p, {beta, gamma}, coverage);
            return py::make_tuple(b.b1, b.b2);
        },
        py::arg("params"), py::arg("beta"), py::arg("gamma"), py::arg("coverage") = 0.999);
    m.def(
        "_bounds_json",
        [](const ChemostatParams& p, double b1, double b2, std::optional<int> n) {
            return to_json(attractor_bounds(p, {b1, b2}, n)).dump();
        },
        py::arg("params"), py::arg("b1"), py::arg("b2"), py::arg("n") = py::none());
    m.def(
        "_classify_json",
        [](const ChemostatParams& p, double b1, double b2) { return to_json(classify_regime(p, {b1, b2})).dump(); },
        py::arg("params"), py::arg("b1"), py::arg("b2"));

    m.def(
        "simulate",
        [](const ScenarioConfig& cfg, std::optional<std::uint64_t> seed) {
            cfg.validate();
            ScenarioConfig one = cfg;
            if (!one.is_stochastic()) {
                py::gil_scoped_release nogil;
                auto traj = simulate_deterministic(one.params, one.init, one.grid);
                py::gil_scoped_acquire gil;
                return trajectory_dict(traj);
            }
            const std::uint64_t s = seed.value_or(one.seeds.front());
            const auto [band, note] = resolve_band(one);
            std::optional<BoundsReport> bounds;
            if (band) bounds = attractor_bounds(one.params, *band);
            SeedRun run;
            {
                py::gil_scoped_release nogil;
                run = run_seed(one, s, band, bounds);
            }
            if (!run.ok()) {
                if (run.error_kind == "singular") throw SingularInput(*run.error);
                throw Error(*run.error);
            }
            auto d = trajectory_dict(*run.trajectory);
            d["seed"] = s;
            d["noise"] = noise_dict(*run.noise);
            if (run.envelope) d["envelope"] = to_json(*run.envelope).dump();
            if (run.positivity) d["positivity"] = to_json(*run.positivity).dump();
            return d;
        },
        py::arg("config"), py::arg("seed") = py::none());

    m.def(
        "_scenario_json",
        [](const ScenarioConfig& cfg) {
            ScenarioResult r;
            {
                py::gil_scoped_release nogil;
                r = run_scenario(cfg);
            }
            return to_json(r).dump();
        },
        py::arg("config"));
    m.def(
        "_ensemble",
        [](const ScenarioConfig& cfg, std::size_t n, std::uint64_t master, unsigned threads) {
            EnsembleSummary sum;
            {
                py::gil_scoped_release nogil;
                sum = run_ensemble(cfg, n, master, threads);
            }
            std::ostringstream csv;
            write_ensemble_csv(csv, sum);
            return py::make_tuple(to_json(sum).dump(), csv.str());
        },
        py::arg("config"), py::arg("n"), py::arg("master_seed"), py::arg("threads") = 0);
}
