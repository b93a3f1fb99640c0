#include "chemowall/presets.hpp"

#include <numeric>

#include "chemowall/error.hpp"

namespace chemowall {

namespace {

constexpr const char* kHorizonNote = "time horizon T = 20 is a default, not a published value";

std::vector<std::uint64_t> seed_range(std::size_t n) {
    std::vector<std::uint64_t> seeds(n);
    std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
    return seeds;
}

ScenarioConfig random_base(std::string name, const ChemostatParams& p, OUParams ou) {
    ScenarioConfig cfg;
    cfg.name = std::move(name);
    cfg.model = ModelKind::RandomOU;
    cfg.params = p;
    cfg.noise = ou;
    cfg.init = {2.5, 2.0, 2.0};
    cfg.grid = TimeGrid::span(0.0, 20.0, 1e-3);
    cfg.seeds = seed_range(20);
    cfg.output.prefix = cfg.name;
    cfg.notes.push_back(kHorizonNote);
    return cfg;
}

ScenarioConfig wiener_base(std::string name, double b, double nu, double alpha) {
    ScenarioConfig cfg;
    cfg.name = std::move(name);
    cfg.model = ModelKind::StochasticStratonovich;
    cfg.params = {1.0, 3.0, 0.6, 3.0, b, nu, 1.5, 0.6, 0.4, alpha};
    cfg.init = {5.0, 2.5, 2.5};
    cfg.grid = TimeGrid::span(0.0, 20.0, 1e-3);
    cfg.seeds = seed_range(50);
    cfg.output.prefix = cfg.name;
    cfg.notes.push_back(kHorizonNote);
    return cfg;
}

// Persistence scenario parameters (c = 3 > m = 2 is a standing-assumption warning).
ChemostatParams persistence_params(double alpha) {
    return {4.0, 2.0, 1.6, 2.0, 0.5, 1.2, 3.0, 0.2, 0.4, alpha};
}

ChemostatParams extinction_params(double alpha) {
    return {4.0, 1.5, 1.6, 2.0, 1.0, 1.7, 2.4, 0.6, 0.4, alpha};
}

ScenarioConfig build(std::string_view name) {
    if (name == "fig4") return random_base("fig4", persistence_params(0.5), {1.0, 0.2});
    if (name == "fig5") return random_base("fig5", persistence_params(2.0), {4.0, 0.7});
    if (name == "fig6") return random_base("fig6", extinction_params(0.5), {1.0, 0.2});
    if (name == "fig7") return random_base("fig7", extinction_params(2.0), {4.0, 0.7});
    if (name == "fig8") return wiener_base("fig8", 2.0, 0.2, 0.5);
    if (name == "fig9") return wiener_base("fig9", 2.0, 0.2, 1.5);
    if (name == "fig10" || name == "fig11") {
        auto cfg = wiener_base(std::string(name), 0.5, 1.2, name == "fig10" ? 0.5 : 1.5);
        cfg.notes.push_back("c = 1.5 carried over from the preceding Wiener scenarios");
        return cfg;
    }
    if (name == "fig12" || name == "fig13") {
        const bool persist = name == "fig12";
        const double alpha = persist ? 0.8 : 1.5;
        auto cfg = random_base(std::string(name),
                               persist ? persistence_params(alpha) : extinction_params(alpha),
                               {1.0, 0.7});
        cfg.compare_betas = {1.0, 2.0};
        cfg.seeds = {0};
        return cfg;
    }
    throw InvalidInput("unknown preset '" + std::string(name) + "'");
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig4", "fig5", "fig6",  "fig7",  "fig8",
                                                   "fig9", "fig10", "fig11", "fig12", "fig13"};
    return names;
}

std::optional<ScenarioConfig> find_preset(std::string_view name) {
    for (const auto& n : preset_names()) {
        if (n == name) return build(name);
    }
    return std::nullopt;
}

ScenarioConfig preset(std::string_view name) {
    if (auto cfg = find_preset(name)) return *cfg;
    throw InvalidInput("unknown preset '" + std::string(name) + "'");
}

std::pair<ScenarioConfig, ScenarioConfig> compare_preset(std::string_view name) {
    if (name != "fig12" && name != "fig13") {
        throw InvalidInput("preset '" + std::string(name) + "' has no side-by-side companion");
    }
    auto random = preset(name);
    auto wiener = random;
    wiener.model = ModelKind::StochasticStratonovich;
    wiener.noise.reset();
    wiener.compare_betas.clear();
    return {random, wiener};
}

}  // namespace chemowall
