#include "giantloop/core.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace giantloop {

AmplitudeState::AmplitudeState(std::initializer_list<Complex> values) : size_(values.size()) {
    if (size_ > max_atoms) throw std::invalid_argument("at most three atoms are supported");
    std::copy(values.begin(), values.end(), values_.begin());
}

double AmplitudeState::norm_squared() const {
    double sum = 0.0;
    for (std::size_t j = 0; j < size_; ++j) sum += std::norm(values_[j]);
    return sum;
}

double AmplitudeState::max_abs() const {
    double largest = 0.0;
    for (std::size_t j = 0; j < size_; ++j) largest = std::max(largest, std::abs(values_[j]));
    return largest;
}

bool AmplitudeState::all_finite() const {
    for (std::size_t j = 0; j < size_; ++j) {
        if (!std::isfinite(values_[j].real()) || !std::isfinite(values_[j].imag())) return false;
    }
    return true;
}

AmplitudeState& AmplitudeState::operator+=(const AmplitudeState& other) {
    for (std::size_t j = 0; j < size_; ++j) values_[j] += other.values_[j];
    return *this;
}

AmplitudeState& AmplitudeState::operator-=(const AmplitudeState& other) {
    for (std::size_t j = 0; j < size_; ++j) values_[j] -= other.values_[j];
    return *this;
}

AmplitudeState& AmplitudeState::operator*=(Complex factor) {
    for (std::size_t j = 0; j < size_; ++j) values_[j] *= factor;
    return *this;
}

bool operator==(const AmplitudeState& a, const AmplitudeState& b) {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
}

double eval_modulation(const ModulationProfile& profile, double t) { return profile(t); }

namespace {

constexpr std::array<std::pair<Model, std::string_view>, 5> model_names{{
    {Model::DimerCouplingMod, "dimer_coupling_mod"},
    {Model::TrimerDirect, "trimer_direct"},
    {Model::TrimerTwoWaveguide, "trimer_two_waveguide"},
    {Model::TrimerSingleWaveguide, "trimer_single_waveguide"},
    {Model::DimerFrequencyMod, "dimer_frequency_mod"},
}};

constexpr std::array<std::pair<Regime, std::string_view>, 3> regime_names{{
    {Regime::FullDelay, "full_delay"},
    {Regime::MarkovianODE, "markovian_ode"},
    {Regime::RwaEffective, "rwa_effective"},
}};

bool finite(double x) { return std::isfinite(x); }

}  // namespace

std::size_t atom_count(Model model) {
    switch (model) {
        case Model::DimerCouplingMod:
        case Model::DimerFrequencyMod: return 2;
        case Model::TrimerDirect:
        case Model::TrimerTwoWaveguide:
        case Model::TrimerSingleWaveguide: return 3;
    }
    return 0;
}

std::string_view to_string(Model model) {
    for (const auto& [value, name] : model_names) {
        if (value == model) return name;
    }
    return "unknown";
}

std::string_view to_string(Regime regime) {
    for (const auto& [value, name] : regime_names) {
        if (value == regime) return name;
    }
    return "unknown";
}

std::optional<Model> parse_model(std::string_view name) {
    for (const auto& [value, text] : model_names) {
        if (text == name) return value;
    }
    return std::nullopt;
}

std::optional<Regime> parse_regime(std::string_view name) {
    for (const auto& [value, text] : regime_names) {
        if (text == name) return value;
    }
    return std::nullopt;
}

AmplitudeState ScenarioConfig::initial_amplitudes() const {
    if (initial_state.size() > max_atoms) throw std::invalid_argument("state length mismatch");
    AmplitudeState state(initial_state.size());
    for (std::size_t j = 0; j < initial_state.size(); ++j) state[j] = initial_state[j];
    return state;
}

bool satisfies_dfi(double phi, int m) {
    return std::abs(phi - (m + 0.5) * pi) <= dfi_phase_tolerance;
}

bool satisfies_single_waveguide_dfi(double phi, int m) {
    return std::abs(phi - (2.0 * m + 1.0 / 3.0) * pi) <= dfi_phase_tolerance;
}

void require_dfi(const PhysicalParams& params) {
    if (!satisfies_dfi(params.phi, params.m)) {
        throw DFIConditionViolated("phi = " + std::to_string(params.phi) + " is not (m + 1/2) pi for m = " +
                                   std::to_string(params.m));
    }
}

double derived_coupling_Gm(const PhysicalParams& params) {
    require_dfi(params);
    return (params.m % 2 == 0 ? 1.0 : -1.0) * params.chi;
}

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
    std::vector<std::string> issues;
    const PhysicalParams& p = cfg.params;

    if (cfg.initial_state.size() != atom_count(cfg.model)) issues.emplace_back("state length mismatch");
    double norm = 0.0;
    bool state_finite = true;
    for (const Complex& u : cfg.initial_state) {
        state_finite = state_finite && finite(u.real()) && finite(u.imag());
        norm += std::norm(u);
    }
    if (!state_finite) issues.emplace_back("initial state must be finite");
    else if (norm > 1.0 + 1e-12) issues.emplace_back("initial state norm must not exceed 1");

    if (!(finite(p.chi) && finite(p.phi) && finite(p.tau) && finite(p.delta) && finite(p.omega) && finite(p.theta))) {
        issues.emplace_back("physical parameters must be finite");
    }
    if (!(p.chi >= 0.0)) issues.emplace_back("chi must be >= 0");
    if (!(p.tau >= 0.0)) issues.emplace_back("tau must be >= 0");
    if (cfg.regime == Regime::FullDelay && !(p.tau > 0.0)) issues.emplace_back("tau must be > 0 in FullDelay");

    if (!(cfg.t_end > 0.0) || !finite(cfg.t_end)) issues.emplace_back("t_end must be > 0");
    if (!(cfg.sample_interval > 0.0) || !finite(cfg.sample_interval)) issues.emplace_back("sample_interval must be > 0");
    if (!(cfg.step_control.max_step > 0.0) || !finite(cfg.step_control.max_step)) {
        issues.emplace_back("max_step must be > 0");
    }
    if (cfg.step_control.substeps_per_tau < 2) issues.emplace_back("substeps_per_tau must be >= 2");

    const bool frequency_model = cfg.model == Model::DimerFrequencyMod;
    if (frequency_model && !cfg.freq_mod) issues.emplace_back("freq_mod required for dimer_frequency_mod");
    if (!frequency_model && cfg.freq_mod) issues.emplace_back("freq_mod only applies to dimer_frequency_mod");
    if (cfg.freq_mod) {
        const FrequencyModulation& f = *cfg.freq_mod;
        if (!(finite(f.delta0) && finite(f.delta_g_prime) && finite(f.omega_prime) && finite(f.theta_prime))) {
            issues.emplace_back("freq_mod parameters must be finite");
        }
    }

    if (cfg.regime == Regime::RwaEffective) {
        bool dfi = true;
        switch (cfg.model) {
            case Model::DimerCouplingMod:
            case Model::DimerFrequencyMod: dfi = satisfies_dfi(p.phi, p.m); break;
            case Model::TrimerDirect:
            case Model::TrimerTwoWaveguide: dfi = p.m == 0 && satisfies_dfi(p.phi, 0); break;
            case Model::TrimerSingleWaveguide: dfi = satisfies_single_waveguide_dfi(p.phi, p.m); break;
        }
        if (!dfi) issues.emplace_back("phi violates the decoherence-free condition for rwa_effective");
        if (frequency_model) {
            if (cfg.freq_mod && std::abs(cfg.freq_mod->omega_prime - cfg.freq_mod->delta0) > 1e-12) {
                issues.emplace_back("rwa_effective requires omega_prime == delta0");
            }
        } else if (std::abs(p.omega - p.delta) > 1e-12) {
            issues.emplace_back("rwa_effective requires omega == delta");
        }
    }
    return issues;
}

namespace {

std::string join_diagnostics(const std::vector<std::string>& diagnostics) {
    std::string text = "invalid scenario:";
    for (const auto& d : diagnostics) text += " " + d + ";";
    return text;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> diagnostics)
    : std::invalid_argument(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

void require_valid(const ScenarioConfig& cfg) {
    auto issues = validate_scenario(cfg);
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

}  // namespace giantloop
