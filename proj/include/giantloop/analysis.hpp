#pragma once

// Observables extracted from trajectories and the rotating-frame coupling matrices.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "giantloop/core.hpp"
#include "giantloop/integrator.hpp"

namespace giantloop {

class DegenerateLoop : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InsufficientOscillations : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hermitian coupling matrix of the rotating-frame equations, i du/dt = H u.
struct EffectiveHamiltonian {
    std::size_t dimension = 0;
    std::array<std::array<Complex, max_atoms>, max_atoms> matrix{};
    Model source = Model::DimerCouplingMod;

    Complex operator()(std::size_t row, std::size_t col) const { return matrix[row][col]; }
};

/// Builds H for the model from its upper triangle. Throws DFIConditionViolated
/// when phi (phi' for the single-waveguide trimer) is off the protected point.
EffectiveHamiltonian build_effective_hamiltonian(Model model, const PhysicalParams& params,
                                                 const std::optional<FrequencyModulation>& freq_mod = std::nullopt);
EffectiveHamiltonian build_effective_hamiltonian(const ScenarioConfig& cfg);

/// arg(H_AB H_BC H_CA) in (-pi, pi]. Throws DegenerateLoop unless n == 3 with all couplings nonzero.
double loop_flux(const EffectiveHamiltonian& H);

/// exp(-i H t) u0 by eigendecomposition of H.
AmplitudeState propagate_effective(const EffectiveHamiltonian& H, const AmplitudeState& u0, double t);

struct Peak {
    double time = 0.0;
    double height = 0.0;
};

/// First local maximum of P_atom with height >= min_height, refined by a
/// quadratic through the three samples around it. A positive smoothing_window
/// replaces P by its running mean over that time span before the search.
std::optional<Peak> find_first_peak(const TimeSeries& series, std::size_t atom, double min_height,
                                    double smoothing_window = 0.0);

/// P_atom averaged over [t - window/2, t + window/2] (clipped to the series) at every sample.
std::vector<double> smoothed_probabilities(const TimeSeries& series, std::size_t atom, double window);

enum class CirculationOrder { ABC, ACB, Symmetric, Indeterminate };

std::string_view to_string(CirculationOrder order);

struct CirculationReport {
    std::optional<double> peak_b;
    std::optional<double> peak_c;
    CirculationOrder order = CirculationOrder::Indeterminate;
    std::optional<double> gap;  // |t_peak(B) - t_peak(C)| when both peaks exist
    double tolerance = 0.0;
};

/// Orders the first peaks of P_B and P_C with tolerance 2 * sample_interval.
CirculationReport circulation_order(const TimeSeries& series, double min_height, double sample_interval,
                                    double smoothing_window = 0.0);

/// pi divided by the spacing of the first two maxima of P_atom.
/// Throws InsufficientOscillations when fewer than two maxima reach min_height.
double extract_rabi_frequency(const TimeSeries& series, std::size_t atom, double min_height = 0.5,
                              double smoothing_window = 0.0);

}  // namespace giantloop
