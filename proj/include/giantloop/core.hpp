#pragma once

// Shared vocabulary for giant-atom amplitude dynamics.
//
// All quantities are dimensionless: rates and frequencies are measured in
// units of the single-point decay rate Gamma0 = 2*pi*g0^2/v_g, times in
// 1/Gamma0. Every coefficient of every equation of motion reduces to
// products of Gamma0 (== 1), chi = Delta_g/g0 and cosines of the drives.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace giantloop {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr std::size_t max_atoms = 3;

/// Complex excitation amplitudes u_j of up to three atoms at one instant.
class AmplitudeState {
public:
    AmplitudeState() = default;
    explicit AmplitudeState(std::size_t atoms) : size_(atoms) {
        if (atoms > max_atoms) throw std::invalid_argument("at most three atoms are supported");
    }
    AmplitudeState(std::initializer_list<Complex> values);

    static AmplitudeState zeros(std::size_t atoms) { return AmplitudeState(atoms); }

    std::size_t size() const { return size_; }
    Complex& operator[](std::size_t j) { return values_[j]; }
    const Complex& operator[](std::size_t j) const { return values_[j]; }

    const Complex* begin() const { return values_.data(); }
    const Complex* end() const { return values_.data() + size_; }

    double norm_squared() const;
    double max_abs() const;
    bool all_finite() const;

    AmplitudeState& operator+=(const AmplitudeState& other);
    AmplitudeState& operator-=(const AmplitudeState& other);
    AmplitudeState& operator*=(Complex factor);

    friend AmplitudeState operator+(AmplitudeState a, const AmplitudeState& b) { return a += b; }
    friend AmplitudeState operator-(AmplitudeState a, const AmplitudeState& b) { return a -= b; }
    friend AmplitudeState operator*(AmplitudeState a, Complex s) { return a *= s; }
    friend AmplitudeState operator*(Complex s, AmplitudeState a) { return a *= s; }
    friend AmplitudeState operator*(double s, AmplitudeState a) { return a *= Complex(s, 0.0); }
    friend bool operator==(const AmplitudeState& a, const AmplitudeState& b);

private:
    std::array<Complex, max_atoms> values_{};
    std::size_t size_ = 0;
};

/// A real drive: either a constant or amplitude * cos(frequency * t + phase).
struct ModulationProfile {
    enum class Kind { Constant, Cosine };

    Kind kind = Kind::Constant;
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;

    static ModulationProfile constant(double amplitude) { return {Kind::Constant, amplitude, 0.0, 0.0}; }
    static ModulationProfile cosine(double amplitude, double frequency, double phase) {
        return {Kind::Cosine, amplitude, frequency, phase};
    }

    double operator()(double t) const {
        return kind == Kind::Constant ? amplitude : amplitude * std::cos(frequency * t + phase);
    }

    friend bool operator==(const ModulationProfile&, const ModulationProfile&) = default;
};

double eval_modulation(const ModulationProfile& profile, double t);

struct PhysicalParams {
    double chi = 1.0;        // Delta_g / g0
    double phi = pi / 2.0;   // phase accumulated between adjacent coupling points
    double tau = 1e-3;       // propagation time between adjacent coupling points
    double delta = 0.0;      // detuning of atoms B (and C) from atom A
    double omega = 0.0;      // coupling modulation frequency
    double theta = 0.0;      // coupling modulation phase
    int m = 0;               // branch of phi = (m + 1/2) pi

    friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

/// Detuning drive Delta0 + Delta'_g cos(Omega' t + theta') applied to atom B.
struct FrequencyModulation {
    double delta0 = 0.0;
    double delta_g_prime = 0.0;
    double omega_prime = 0.0;
    double theta_prime = 0.0;

    double eta() const { return omega_prime == 0.0 ? 0.0 : delta_g_prime / omega_prime; }

    friend bool operator==(const FrequencyModulation&, const FrequencyModulation&) = default;
};

enum class Model { DimerCouplingMod, TrimerDirect, TrimerTwoWaveguide, TrimerSingleWaveguide, DimerFrequencyMod };
enum class Regime { FullDelay, MarkovianODE, RwaEffective };

std::size_t atom_count(Model model);
std::string_view to_string(Model model);
std::string_view to_string(Regime regime);
std::optional<Model> parse_model(std::string_view name);
std::optional<Regime> parse_regime(std::string_view name);

struct StepControl {
    double max_step = 1e-3;
    int substeps_per_tau = 2;

    friend bool operator==(const StepControl&, const StepControl&) = default;
};

struct ScenarioConfig {
    Model model = Model::DimerCouplingMod;
    Regime regime = Regime::FullDelay;
    PhysicalParams params;
    std::optional<FrequencyModulation> freq_mod;
    std::vector<Complex> initial_state{1.0, 0.0};
    double t_end = 15.0;
    double sample_interval = 0.01;
    StepControl step_control;

    AmplitudeState initial_amplitudes() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

class DFIConditionViolated : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double dfi_phase_tolerance = 1e-12;

/// True when phi == (m + 1/2) pi within dfi_phase_tolerance.
bool satisfies_dfi(double phi, int m);

/// True when phi' == (2m + 1/3) pi, the single-waveguide trimer's protected point.
bool satisfies_single_waveguide_dfi(double phi, int m);

/// Throws DFIConditionViolated unless phi == (m + 1/2) pi.
void require_dfi(const PhysicalParams& params);

/// G_m = (-1)^m chi Gamma0. Throws DFIConditionViolated away from the DFI point.
double derived_coupling_Gm(const PhysicalParams& params);

/// Human-readable list of violated invariants; empty for a runnable scenario.
std::vector<std::string> validate_scenario(const ScenarioConfig& cfg);

class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> diagnostics);
    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

/// Throws ValidationError when validate_scenario reports anything.
void require_valid(const ScenarioConfig& cfg);

}  // namespace giantloop
