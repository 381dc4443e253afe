#include "giantloop/presets.hpp"

namespace giantloop {

namespace {

ScenarioConfig modulated(Model model, double chi, double omega, double theta, double tau) {
    ScenarioConfig cfg;
    cfg.model = model;
    cfg.regime = Regime::FullDelay;
    cfg.params.chi = chi;
    cfg.params.phi = pi / 2.0;
    cfg.params.tau = tau;
    cfg.params.omega = omega;
    cfg.params.delta = omega;
    cfg.params.theta = theta;
    cfg.initial_state.assign(atom_count(model), Complex{});
    cfg.initial_state[0] = 1.0;
    cfg.t_end = 15.0;
    cfg.sample_interval = 0.01;
    return cfg;
}

}  // namespace

const std::vector<std::string_view>& preset_names() {
    static const std::vector<std::string_view> names{"fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig4a",
                                                     "fig4b", "fig4c", "fig5a", "fig5b", "fig5c", "fig5d"};
    return names;
}

std::optional<ScenarioConfig> preset(std::string_view name) {
    constexpr double fast = 10.0 * pi;
    constexpr double short_delay = 1e-3;
    constexpr double long_delay = 1e-2;

    if (name == "fig2a") return modulated(Model::DimerCouplingMod, 1.0, fast, 0.0, short_delay);
    if (name == "fig2b") return modulated(Model::DimerCouplingMod, 2.0, fast, 0.0, short_delay);
    if (name == "fig3a") return modulated(Model::TrimerDirect, 1.0, fast, pi / 2.0, short_delay);
    if (name == "fig3b") return modulated(Model::TrimerDirect, 1.0, fast, 0.0, short_delay);
    if (name == "fig3c") return modulated(Model::TrimerDirect, 1.0, fast, -pi / 2.0, short_delay);
    if (name == "fig4a") return modulated(Model::TrimerTwoWaveguide, 2.0, fast, pi / 2.0, short_delay);
    if (name == "fig4b") return modulated(Model::TrimerTwoWaveguide, 1.0, fast, pi / 2.0, short_delay);
    if (name == "fig4c") return modulated(Model::TrimerTwoWaveguide, 0.5, fast, pi / 2.0, short_delay);
    if (name == "fig5a") return modulated(Model::TrimerTwoWaveguide, 2.0, fast, pi / 2.0, long_delay);
    if (name == "fig5b") return modulated(Model::TrimerTwoWaveguide, 2.0, 5.0 * pi, pi / 2.0, long_delay);
    if (name == "fig5c") return modulated(Model::TrimerTwoWaveguide, 2.0, 3.0 * pi, pi / 2.0, long_delay);
    if (name == "fig5d") return modulated(Model::TrimerTwoWaveguide, 2.0, pi, pi / 2.0, long_delay);
    return std::nullopt;
}

}  // namespace giantloop
