#pragma once

// Fixed-step integration of the amplitude equations.
//
// Retarded systems use a grid whose step divides tau, so every Heaviside
// breakpoint t = l*tau is a node. Delayed lookups at Runge-Kutta stage times
// come from cubic Hermite interpolation of stored (state, derivative) nodes.

#include <cstddef>
#include <deque>
#include <stdexcept>
#include <vector>

#include "giantloop/core.hpp"
#include "giantloop/models.hpp"

namespace giantloop {

class StepTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalBlowup : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double blowup_amplitude = 2.0;
inline constexpr double max_phase_per_step = 0.1;

/// Dense history on the uniform grid t_n = n*step, n >= 0, keeping only the
/// nodes younger than `retention`. Each node stores its state, the derivative
/// of the interval that starts there, and the derivative of the interval that
/// ends there; the two differ only at Heaviside breakpoints.
class HistoryBuffer final : public HistoryAccess {
public:
    HistoryBuffer(std::size_t atoms, double step, double retention);

    void append(const AmplitudeState& state, const AmplitudeState& derivative);
    void append(const AmplitudeState& state, const AmplitudeState& left_derivative,
                const AmplitudeState& right_derivative);

    /// Zero for t < 0; Hermite interpolation inside the retained window.
    /// Throws HistoryUnderflow for 0 <= t before the window, std::out_of_range past the newest node.
    AmplitudeState state_at(double t) const override;

    double step() const { return step_; }
    std::size_t node_count() const { return first_ + nodes_.size(); }
    double latest_time() const { return static_cast<double>(node_count() - 1) * step_; }
    double earliest_time() const { return static_cast<double>(first_) * step_; }

    const AmplitudeState& node_state(std::size_t n) const { return node(n).state; }
    const AmplitudeState& node_derivative(std::size_t n) const { return node(n).right; }

private:
    struct Node {
        AmplitudeState state;
        AmplitudeState left;
        AmplitudeState right;
    };

    const Node& node(std::size_t n) const;
    void trim();

    std::size_t atoms_;
    double step_;
    std::size_t keep_;
    std::size_t first_ = 0;
    std::deque<Node> nodes_;
};

/// Uniform-grid history answering each query with the nearest stored node.
class NearestNodeHistory final : public HistoryAccess {
public:
    NearestNodeHistory(std::size_t atoms, double step, double retention);

    void append(const AmplitudeState& state);
    AmplitudeState state_at(double t) const override;

private:
    std::size_t atoms_;
    double step_;
    std::size_t keep_;
    std::size_t first_ = 0;
    std::deque<AmplitudeState> nodes_;
};

struct TimeSeries {
    std::size_t atoms = 0;
    double step = 0.0;
    std::vector<double> times;
    std::vector<AmplitudeState> amplitudes;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    double probability(std::size_t sample, std::size_t atom) const { return std::norm(amplitudes[sample][atom]); }
    double total_probability(std::size_t sample) const { return amplitudes[sample].norm_squared(); }
    std::vector<double> probabilities(std::size_t atom) const;
    std::vector<double> total_probabilities() const;

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

/// Step for a retarded run: tau / (2 * substeps_per_tau * k) with the smallest k giving step <= max_step.
double dde_step(double tau, const StepControl& control);

/// Step for an ordinary run: the largest step <= max_step dividing sample_interval.
double ode_step(double sample_interval, const StepControl& control);

/// Classical RK4 on the retarded system. cfg is expected to be validated.
TimeSeries integrate_dde(const RhsFunction& rhs, const ScenarioConfig& cfg);

/// Classical RK4 without history (Markovian and rotating-frame equations).
TimeSeries integrate_ode(const RhsFunction& rhs, const ScenarioConfig& cfg);

/// Forward Euler with nearest-node delayed lookups; an independent reference for tests.
/// Requires h_tiny <= h / 50, where h is the step integrate_dde / integrate_ode would use.
TimeSeries integrate_euler_oracle(const RhsFunction& rhs, const ScenarioConfig& cfg, double h_tiny);

/// Validates cfg, builds its right-hand side and integrates it in the configured regime.
TimeSeries simulate(const ScenarioConfig& cfg);

/// The step simulate() uses for cfg.
double resolved_step(const ScenarioConfig& cfg);

}  // namespace giantloop
