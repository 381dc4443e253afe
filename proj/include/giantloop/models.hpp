#pragma once

// Equations of motion for the five coupling-point layouts.
//
// Each model comes in three regimes: the full retarded equations (FullDelay),
// their tau -> 0 reduction (MarkovianODE) and the rotating-frame effective
// couplings (RwaEffective). RWA amplitudes live in the frame where the
// resonant detuning is removed, so |u_j|^2 is frame independent.

#include <functional>
#include <optional>
#include <stdexcept>

#include "giantloop/core.hpp"

namespace giantloop {

class HistoryUnderflow : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Read access to past amplitudes u_j(s). Queries at s < 0 return zero.
class HistoryAccess {
public:
    virtual ~HistoryAccess() = default;
    virtual AmplitudeState state_at(double t) const = 0;
};

/// History of a system that has never been excited.
class ZeroHistory final : public HistoryAccess {
public:
    explicit ZeroHistory(std::size_t atoms) : atoms_(atoms) {}
    AmplitudeState state_at(double) const override { return AmplitudeState::zeros(atoms_); }

private:
    std::size_t atoms_;
};

/// Which one-sided limit a right-hand side takes at a Heaviside breakpoint t == l*tau.
/// Left keeps the gate closed (Theta(0) = 0); Right opens it, as needed for the
/// first stage of a step that starts on a breakpoint.
enum class Side { Left, Right };

/// exp(i l phi) u_j(t - l tau) Theta(t - l tau).
Complex delayed_term(std::size_t atom, int lag, double t, const HistoryAccess& history, double phi, double tau,
                     Side side = Side::Left);

// Coupling-modulated dimer.
AmplitudeState rhs_dimer_dde(double t, const AmplitudeState& u, const HistoryAccess& history,
                             const PhysicalParams& params, Side side = Side::Left);
AmplitudeState rhs_dimer_markovian(double t, const AmplitudeState& u, const PhysicalParams& params);
AmplitudeState rhs_dimer_rwa(double t, const AmplitudeState& u, const PhysicalParams& params);

// Trimer with atom C coupled directly to A (lambda(t) = 2 G0 cos(Omega t)) and to B (G0).
AmplitudeState rhs_trimer_direct_dde(double t, const AmplitudeState& u, const HistoryAccess& history,
                                     const PhysicalParams& params, Side side = Side::Left);
AmplitudeState rhs_trimer_direct_rwa(double t, const AmplitudeState& u, const PhysicalParams& params);

// All-giant trimer on two waveguides; A is driven by g(t) (phase theta) and g'(t) (phase 0).
AmplitudeState rhs_trimer_two_wg_dde(double t, const AmplitudeState& u, const HistoryAccess& history,
                                     const PhysicalParams& params, Side side = Side::Left);
AmplitudeState rhs_trimer_two_wg_rwa(double t, const AmplitudeState& u, const PhysicalParams& params);

// All-giant trimer on one waveguide. params.tau and params.phi are the spacing tau' and phi'.
AmplitudeState rhs_trimer_single_wg_dde(double t, const AmplitudeState& u, const HistoryAccess& history,
                                        const PhysicalParams& params, Side side = Side::Left);
AmplitudeState rhs_trimer_single_wg_rwa(double t, const AmplitudeState& u, const PhysicalParams& params);

// Dimer with constant couplings and a modulated transition frequency of atom B.
AmplitudeState rhs_freqmod_dimer_dde(double t, const AmplitudeState& u, const HistoryAccess& history,
                                     const PhysicalParams& params, const FrequencyModulation& freq_mod,
                                     Side side = Side::Left);
AmplitudeState rhs_freqmod_dimer_rwa(double t, const AmplitudeState& u, const FrequencyModulation& freq_mod,
                                     int m = 0);

/// Resonant Bessel coupling 2 Gamma0 J_{-1}(eta) of the frequency-modulated dimer, signed by (-1)^m.
double freqmod_effective_coupling(const FrequencyModulation& freq_mod, int m = 0);

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr int bessel_max_order = 30;
inline constexpr double bessel_max_argument = 50.0;

/// Bessel function of the first kind J_q(z) for |q| <= 30, |z| <= 50.
/// Ascending series for |z| <= 8, normalized backward recurrence beyond.
double bessel_first_kind(int q, double z);

/// Type-erased right-hand side plus the metadata the integrators need.
struct RhsFunction {
    using Evaluate = std::function<AmplitudeState(double t, const AmplitudeState& u, const HistoryAccess& history,
                                                  Side side)>;

    std::size_t arity = 0;
    bool uses_history = false;
    double lag_unit = 0.0;         // tau; every delay is an integer multiple of it
    int max_lag = 0;               // largest l appearing in u_j(t - l tau)
    double characteristic_rate = 0.0;  // fastest explicit frequency in the equations
    Evaluate evaluate;

    AmplitudeState operator()(double t, const AmplitudeState& u, const HistoryAccess& history,
                              Side side = Side::Left) const {
        return evaluate(t, u, history, side);
    }
};

/// Builds the right-hand side for cfg.model in cfg.regime.
RhsFunction make_rhs(const ScenarioConfig& cfg);

/// Largest delay multiple l used by the model's retarded equations.
int max_lag(Model model);

}  // namespace giantloop
