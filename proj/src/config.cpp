#include "chemowall/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "chemowall/error.hpp"
#include "chemowall/presets.hpp"

namespace chemowall {

const char* to_string(ModelKind k) noexcept {
    switch (k) {
        case ModelKind::Deterministic: return "deterministic";
        case ModelKind::RandomOU: return "random_ou";
        case ModelKind::StochasticIto: return "ito";
        case ModelKind::StochasticStratonovich: return "stratonovich";
    }
    return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept {
    if (text == "deterministic") return ModelKind::Deterministic;
    if (text == "random_ou" || text == "random" || text == "ou") return ModelKind::RandomOU;
    if (text == "ito") return ModelKind::StochasticIto;
    if (text == "stratonovich") return ModelKind::StochasticStratonovich;
    return std::nullopt;
}

void ScenarioConfig::validate() const {
    validate_params(params, policy);
    grid.validate();

    for (double v : {init.s, init.x1, init.x2}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidInput("initial state must be finite and non-negative");
        }
    }
    if (model == ModelKind::RandomOU) {
        if (!noise) {
            throw InvalidInput(
                "model random_ou requires noise parameters: set beta and gamma in [noise]");
        }
        noise->validate();
    }
    if (is_stochastic()) {
        if (seeds.empty()) throw InvalidInput("stochastic models need at least one seed");
        const double ndt = effective_noise_dt();
        if (!(ndt > 0.0) || !std::isfinite(ndt)) throw InvalidInput("noise_dt must be positive");
        const double ratio = grid.dt / ndt;
        if (ratio < 1.0 - 1e-12 || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
            throw InvalidInput("grid dt must be an integer multiple of noise_dt");
        }
    }
    if (band) {
        band->validate();
        if (is_stochastic() && !(band->b2 > band->b1)) {
            throw InvalidInput("dilution band needs b1 < b2 for stochastic models");
        }
    }
    if (!(band_coverage > 0.0 && band_coverage < 1.0)) {
        throw InvalidInput("band coverage must lie in (0, 1)");
    }
    for (double beta : compare_betas) {
        if (!(beta > 0.0) || !std::isfinite(beta)) {
            throw InvalidInput("compare_betas entries must be positive");
        }
    }
}

namespace {

struct Entry {
    int line;
    std::string section;
    std::string key;
    std::string value;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\''))) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

double parse_double(const Entry& e) {
    double v = 0.0;
    const char* begin = e.value.data();
    const char* end = begin + e.value.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ConfigError("key '" + e.key + "': expected a number, got '" + e.value + "'", e.line);
    }
    return v;
}

std::uint64_t parse_u64(std::string_view text, const Entry& e) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("key '" + e.key + "': expected a non-negative integer, got '" +
                              std::string(text) + "'",
                          e.line);
    }
    return v;
}

bool parse_bool(const Entry& e) {
    if (e.value == "true" || e.value == "yes" || e.value == "on" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "off" || e.value == "0") return false;
    throw ConfigError("key '" + e.key + "': expected true or false, got '" + e.value + "'", e.line);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<Entry> tokenize(std::istream& in) {
    static const std::vector<std::string> sections = {"model", "noise", "band",
                                                      "init",  "grid",  "output"};
    std::vector<Entry> entries;
    std::map<std::pair<std::string, std::string>, int> seen;
    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (line == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) raw.erase(0, 3);
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string text = trim(raw);
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') throw ConfigError("unterminated section header", line);
            section = trim(std::string_view(text).substr(1, text.size() - 2));
            bool known = false;
            for (const auto& s : sections) known = known || s == section;
            if (!known) throw ConfigError("unknown section [" + section + "]", line);
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        Entry e{line, section, trim(std::string_view(text).substr(0, eq)),
                unquote(trim(std::string_view(text).substr(eq + 1)))};
        if (e.key.empty()) throw ConfigError("missing key before '='", line);
        if (e.value.empty()) throw ConfigError("key '" + e.key + "' has no value", line);
        auto [it, inserted] = seen.emplace(std::make_pair(e.section, e.key), line);
        if (!inserted) {
            throw ConfigError("duplicate key '" + e.key + "' (first set on line " +
                                  std::to_string(it->second) + ")",
                              line);
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

[[noreturn]] void unknown_key(const Entry& e) {
    const std::string where = e.section.empty() ? "outside any section" : "in [" + e.section + "]";
    throw ConfigError("unknown key '" + e.key + "' " + where, e.line);
}

void apply_model(ScenarioConfig& cfg, const Entry& e) {
    auto& p = cfg.params;
    const std::map<std::string, double*> fields = {
        {"s_in", &p.s_in}, {"D", &p.D},   {"a", &p.a},   {"m", &p.m},   {"b", &p.b},
        {"nu", &p.nu},     {"c", &p.c},   {"r1", &p.r1}, {"r2", &p.r2}, {"alpha", &p.alpha},
    };
    if (auto it = fields.find(e.key); it != fields.end()) {
        *it->second = parse_double(e);
    } else if (e.key == "type") {
        auto kind = parse_model_kind(e.value);
        if (!kind) {
            throw ConfigError("unknown model type '" + e.value +
                                  "' (expected deterministic, random_ou, ito or stratonovich)",
                              e.line);
        }
        cfg.model = *kind;
    } else if (e.key == "assumptions") {
        if (e.value == "strict") {
            cfg.policy = AssumptionPolicy::Strict;
        } else if (e.value == "warn") {
            cfg.policy = AssumptionPolicy::AllowWarnings;
        } else {
            throw ConfigError("assumptions must be 'strict' or 'warn'", e.line);
        }
    } else {
        unknown_key(e);
    }
}

void apply_noise(ScenarioConfig& cfg, const Entry& e, std::optional<double>& beta,
                 std::optional<double>& gamma) {
    if (e.key == "beta") {
        beta = parse_double(e);
    } else if (e.key == "gamma") {
        gamma = parse_double(e);
    } else if (e.key == "seed") {
        cfg.seeds = {parse_u64(e.value, e)};
    } else if (e.key == "seeds") {
        cfg.seeds.clear();
        for (const auto& item : split_list(e.value)) cfg.seeds.push_back(parse_u64(item, e));
        if (cfg.seeds.empty()) throw ConfigError("seeds list is empty", e.line);
    } else if (e.key == "n_seeds") {
        const auto n = parse_u64(e.value, e);
        if (n == 0) throw ConfigError("n_seeds must be at least 1", e.line);
        cfg.seeds.resize(n);
        for (std::uint64_t i = 0; i < n; ++i) cfg.seeds[i] = i;
    } else if (e.key == "noise_dt") {
        cfg.noise_dt = parse_double(e);
    } else if (e.key == "compare_betas") {
        cfg.compare_betas.clear();
        for (const auto& item : split_list(e.value)) {
            Entry sub = e;
            sub.value = item;
            cfg.compare_betas.push_back(parse_double(sub));
        }
    } else {
        unknown_key(e);
    }
}

}  // namespace

ScenarioConfig parse_config(std::istream& in, const std::string& origin) {
    const auto entries = tokenize(in);

    ScenarioConfig cfg;
    cfg.name = origin;
    bool from_preset = false;
    for (const auto& e : entries) {
        if (!e.section.empty()) continue;
        if (e.key == "preset") {
            auto base = find_preset(e.value);
            if (!base) throw ConfigError("unknown preset '" + e.value + "'", e.line);
            cfg = *base;
            from_preset = true;
        } else if (e.key != "name") {
            unknown_key(e);
        }
    }
    std::optional<double> beta, gamma, b1, b2;
    if (cfg.noise) {
        beta.emplace(cfg.noise->beta);
        gamma.emplace(cfg.noise->gamma);
    }
    if (cfg.band) {
        b1.emplace(cfg.band->b1);
        b2.emplace(cfg.band->b2);
    }
    std::optional<bool> explicit_band;
    double t0 = cfg.grid.t0;
    double t_end = cfg.grid.t_end();
    double dt = cfg.grid.dt;

    for (const auto& e : entries) {
        if (e.section.empty()) {
            if (e.key == "name") cfg.name = e.value;
        } else if (e.section == "model") {
            apply_model(cfg, e);
        } else if (e.section == "noise") {
            apply_noise(cfg, e, beta, gamma);
        } else if (e.section == "band") {
            if (e.key == "b1") {
                b1 = parse_double(e);
            } else if (e.key == "b2") {
                b2 = parse_double(e);
            } else if (e.key == "mode") {
                if (e.value != "auto" && e.value != "explicit") {
                    throw ConfigError("band mode must be 'auto' or 'explicit'", e.line);
                }
                explicit_band = e.value == "explicit";
            } else if (e.key == "coverage") {
                cfg.band_coverage = parse_double(e);
            } else {
                unknown_key(e);
            }
        } else if (e.section == "init") {
            if (e.key == "s") {
                cfg.init.s = parse_double(e);
            } else if (e.key == "x1") {
                cfg.init.x1 = parse_double(e);
            } else if (e.key == "x2") {
                cfg.init.x2 = parse_double(e);
            } else {
                unknown_key(e);
            }
        } else if (e.section == "grid") {
            if (e.key == "t0") {
                t0 = parse_double(e);
            } else if (e.key == "T") {
                t_end = parse_double(e);
            } else if (e.key == "dt") {
                dt = parse_double(e);
            } else {
                unknown_key(e);
            }
        } else if (e.section == "output") {
            if (e.key == "dir") {
                cfg.output.directory = e.value;
            } else if (e.key == "prefix") {
                cfg.output.prefix = e.value;
            } else if (e.key == "format") {
                if (e.value == "csv") {
                    cfg.output.csv = true;
                    cfg.output.json = false;
                } else if (e.value == "json") {
                    cfg.output.csv = false;
                    cfg.output.json = true;
                } else if (e.value == "both") {
                    cfg.output.csv = cfg.output.json = true;
                } else {
                    throw ConfigError("format must be csv, json or both", e.line);
                }
            } else if (e.key == "include_noise") {
                cfg.output.include_noise = parse_bool(e);
            } else {
                unknown_key(e);
            }
        }
    }

    if (!from_preset) {
        // Without a preset every biological constant and the initial state must be explicit.
        const std::vector<std::pair<std::string, std::string>> required = {
            {"model", "s_in"}, {"model", "D"}, {"model", "a"},  {"model", "m"},
            {"model", "b"},    {"model", "nu"}, {"model", "c"}, {"model", "r1"},
            {"model", "r2"},   {"init", "s"},   {"init", "x1"}, {"init", "x2"}};
        for (const auto& [section, key] : required) {
            bool found = false;
            for (const auto& e : entries) found = found || (e.section == section && e.key == key);
            if (!found) throw ConfigError("missing required key '" + key + "' in [" + section + "]");
        }
    }

    if (beta || gamma) {
        if (!beta || !gamma) throw ConfigError("[noise] needs both beta and gamma");
        cfg.noise = OUParams{*beta, *gamma};
    }

    const bool want_explicit = explicit_band.value_or(b1.has_value() || b2.has_value());
    if (want_explicit) {
        if (!b1 || !b2) throw ConfigError("explicit band needs both b1 and b2");
        cfg.band = DilutionBand{*b1, *b2};
    } else {
        cfg.band.reset();
    }

    if (!(dt > 0.0) || !(t_end > t0)) throw ConfigError("[grid] needs dt > 0 and T > t0");
    cfg.grid = TimeGrid::span(t0, t_end, dt);

    if (cfg.is_stochastic() && cfg.seeds.empty()) cfg.seeds = {0};

    cfg.validate();
    return cfg;
}

ScenarioConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    try {
        return parse_config(in, path.stem().string());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

namespace {

std::string num(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

std::string format_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    const auto& p = cfg.params;
    out << "name = " << cfg.name << "\n\n[model]\n";
    out << "type = " << to_string(cfg.model) << "\n";
    out << "assumptions = " << (cfg.policy == AssumptionPolicy::Strict ? "strict" : "warn")
        << "\n";
    out << "s_in = " << num(p.s_in) << "\nD = " << num(p.D) << "\na = " << num(p.a)
        << "\nm = " << num(p.m) << "\nb = " << num(p.b) << "\nnu = " << num(p.nu)
        << "\nc = " << num(p.c) << "\nr1 = " << num(p.r1) << "\nr2 = " << num(p.r2)
        << "\nalpha = " << num(p.alpha) << "\n\n[noise]\n";
    if (cfg.noise) out << "beta = " << num(cfg.noise->beta) << "\ngamma = " << num(cfg.noise->gamma) << "\n";
    if (!cfg.seeds.empty()) {
        out << "seeds = ";
        for (std::size_t i = 0; i < cfg.seeds.size(); ++i) out << (i ? ", " : "") << cfg.seeds[i];
        out << "\n";
    }
    if (cfg.noise_dt) out << "noise_dt = " << num(*cfg.noise_dt) << "\n";
    if (!cfg.compare_betas.empty()) {
        out << "compare_betas = ";
        for (std::size_t i = 0; i < cfg.compare_betas.size(); ++i) {
            out << (i ? ", " : "") << num(cfg.compare_betas[i]);
        }
        out << "\n";
    }
    out << "\n[band]\n";
    if (cfg.band) {
        out << "mode = explicit\nb1 = " << num(cfg.band->b1) << "\nb2 = " << num(cfg.band->b2)
            << "\n";
    } else {
        out << "mode = auto\n";
    }
    out << "coverage = " << num(cfg.band_coverage) << "\n\n[init]\n";
    out << "s = " << num(cfg.init.s) << "\nx1 = " << num(cfg.init.x1) << "\nx2 = "
        << num(cfg.init.x2) << "\n\n[grid]\n";
    out << "t0 = " << num(cfg.grid.t0) << "\nT = " << num(cfg.grid.t_end()) << "\ndt = "
        << num(cfg.grid.dt) << "\n\n[output]\n";
    out << "dir = " << cfg.output.directory.string() << "\nprefix = " << cfg.output.prefix
        << "\nformat = "
        << (cfg.output.csv && cfg.output.json ? "both" : cfg.output.json ? "json" : "csv")
        << "\ninclude_noise = " << (cfg.output.include_noise ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace chemowall
