#include "giantloop/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace giantloop {

namespace {

std::size_t retained_nodes(double retention, double step) {
    return static_cast<std::size_t>(std::ceil(retention / step)) + 3;
}

void check_amplitudes(const AmplitudeState& u, double t) {
    if (!u.all_finite() || u.max_abs() > blowup_amplitude) {
        throw NumericalBlowup("amplitude left the physical range at t = " + std::to_string(t));
    }
}

void check_initial_state(const RhsFunction& rhs, const AmplitudeState& u0) {
    if (u0.size() != rhs.arity) throw std::invalid_argument("state length mismatch");
}

void check_phase_per_step(const RhsFunction& rhs, double h) {
    if (h * rhs.characteristic_rate > max_phase_per_step) {
        throw StepTooLarge("step " + std::to_string(h) + " resolves frequency " +
                           std::to_string(rhs.characteristic_rate) + " too coarsely (h * rate > 0.1)");
    }
}

std::size_t step_count(double t_end, double h) {
    return static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
}

std::size_t sample_stride(double sample_interval, double h) {
    const auto stride = static_cast<long long>(std::llround(sample_interval / h));
    return stride < 1 ? 1 : static_cast<std::size_t>(stride);
}

void record(TimeSeries& series, double t, const AmplitudeState& u) {
    series.times.push_back(t);
    series.amplitudes.push_back(u);
}

// Records step n if it is a sampling step or the last one.
void maybe_record(TimeSeries& series, std::size_t n, std::size_t stride, std::size_t last, double h,
                  const AmplitudeState& u) {
    if (n % stride == 0 || n == last) record(series, static_cast<double>(n) * h, u);
}

}  // namespace

HistoryBuffer::HistoryBuffer(std::size_t atoms, double step, double retention)
    : atoms_(atoms), step_(step), keep_(retained_nodes(retention, step)) {
    if (!(step > 0.0)) throw std::invalid_argument("history step must be > 0");
}

void HistoryBuffer::append(const AmplitudeState& state, const AmplitudeState& derivative) {
    append(state, derivative, derivative);
}

void HistoryBuffer::append(const AmplitudeState& state, const AmplitudeState& left_derivative,
                           const AmplitudeState& right_derivative) {
    nodes_.push_back({state, left_derivative, right_derivative});
    trim();
}

void HistoryBuffer::trim() {
    while (nodes_.size() > keep_) {
        nodes_.pop_front();
        ++first_;
    }
}

const HistoryBuffer::Node& HistoryBuffer::node(std::size_t n) const {
    if (n < first_) throw HistoryUnderflow("history node " + std::to_string(n) + " was discarded");
    if (n >= node_count()) throw std::out_of_range("history node " + std::to_string(n) + " not yet computed");
    return nodes_[n - first_];
}

AmplitudeState HistoryBuffer::state_at(double t) const {
    if (t < 0.0) return AmplitudeState::zeros(atoms_);
    if (nodes_.empty()) throw std::out_of_range("history is empty");

    const double position = t / step_;
    const double last = static_cast<double>(node_count() - 1);
    if (position > last + 1e-9) {
        throw std::out_of_range("history lookup at t = " + std::to_string(t) + " is ahead of the integration");
    }
    if (position < static_cast<double>(first_) - 1e-9) {
        throw HistoryUnderflow("history lookup at t = " + std::to_string(t) + " precedes the retained window");
    }

    auto index = static_cast<std::size_t>(std::floor(std::max(position, static_cast<double>(first_))));
    if (index + 1 >= node_count()) return nodes_.back().state;

    const Node& a = nodes_[index - first_];
    const Node& b = nodes_[index + 1 - first_];
    const double s = std::clamp(position - static_cast<double>(index), 0.0, 1.0);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * a.state + (h10 * step_) * a.right + h01 * b.state + (h11 * step_) * b.left;
}

NearestNodeHistory::NearestNodeHistory(std::size_t atoms, double step, double retention)
    : atoms_(atoms), step_(step), keep_(retained_nodes(retention, step)) {
    if (!(step > 0.0)) throw std::invalid_argument("history step must be > 0");
}

void NearestNodeHistory::append(const AmplitudeState& state) {
    nodes_.push_back(state);
    while (nodes_.size() > keep_) {
        nodes_.pop_front();
        ++first_;
    }
}

AmplitudeState NearestNodeHistory::state_at(double t) const {
    if (t < 0.0) return AmplitudeState::zeros(atoms_);
    const auto index = static_cast<std::size_t>(std::llround(t / step_));
    if (index < first_) throw HistoryUnderflow("history lookup precedes the retained window");
    if (index >= first_ + nodes_.size()) throw std::out_of_range("history lookup is ahead of the integration");
    return nodes_[index - first_];
}

std::vector<double> TimeSeries::probabilities(std::size_t atom) const {
    std::vector<double> p(size());
    for (std::size_t i = 0; i < size(); ++i) p[i] = probability(i, atom);
    return p;
}

std::vector<double> TimeSeries::total_probabilities() const {
    std::vector<double> p(size());
    for (std::size_t i = 0; i < size(); ++i) p[i] = total_probability(i);
    return p;
}

double dde_step(double tau, const StepControl& control) {
    if (!(tau > 0.0)) throw std::invalid_argument("retarded integration needs tau > 0");
    if (control.substeps_per_tau < 2) throw std::invalid_argument("substeps_per_tau must be >= 2");
    const double base = 2.0 * control.substeps_per_tau;
    const double k = std::max(1.0, std::ceil(tau / (base * control.max_step) - 1e-9));
    return tau / (base * k);
}

double ode_step(double sample_interval, const StepControl& control) {
    const double k = std::max(1.0, std::ceil(sample_interval / control.max_step - 1e-9));
    return sample_interval / k;
}

TimeSeries integrate_dde(const RhsFunction& rhs, const ScenarioConfig& cfg) {
    if (!rhs.uses_history) throw std::invalid_argument("integrate_dde needs a retarded right-hand side");
    const double tau = rhs.lag_unit;
    const double h = dde_step(tau, cfg.step_control);
    if (h > 0.5 * tau) throw StepTooLarge("step exceeds tau / 2");
    check_phase_per_step(rhs, h);

    AmplitudeState u = cfg.initial_amplitudes();
    check_initial_state(rhs, u);

    const auto nodes_per_tau = static_cast<std::size_t>(std::llround(tau / h));
    const auto last_breakpoint = nodes_per_tau * static_cast<std::size_t>(rhs.max_lag);
    HistoryBuffer history(rhs.arity, h, rhs.max_lag * tau + 2.0 * h);
    history.append(u, rhs(0.0, u, history, Side::Right));

    const std::size_t steps = step_count(cfg.t_end, h);
    const std::size_t stride = sample_stride(cfg.sample_interval, h);
    TimeSeries series{rhs.arity, h, {}, {}};
    record(series, 0.0, u);

    for (std::size_t n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * h;
        const AmplitudeState k1 = history.node_derivative(n);
        const AmplitudeState k2 = rhs(t + 0.5 * h, u + (0.5 * h) * k1, history);
        const AmplitudeState k3 = rhs(t + 0.5 * h, u + (0.5 * h) * k2, history);
        const AmplitudeState k4 = rhs(t + h, u + h * k3, history);
        u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const std::size_t next = n + 1;
        const double t_next = static_cast<double>(next) * h;
        check_amplitudes(u, t_next);

        const AmplitudeState left = rhs(t_next, u, history, Side::Left);
        if (next % nodes_per_tau == 0 && next <= last_breakpoint) {
            history.append(u, left, rhs(t_next, u, history, Side::Right));
        } else {
            history.append(u, left);
        }
        maybe_record(series, next, stride, steps, h, u);
    }
    return series;
}

TimeSeries integrate_ode(const RhsFunction& rhs, const ScenarioConfig& cfg) {
    const double h = ode_step(cfg.sample_interval, cfg.step_control);
    check_phase_per_step(rhs, h);

    AmplitudeState u = cfg.initial_amplitudes();
    check_initial_state(rhs, u);
    const ZeroHistory none(rhs.arity);

    const std::size_t steps = step_count(cfg.t_end, h);
    const std::size_t stride = sample_stride(cfg.sample_interval, h);
    TimeSeries series{rhs.arity, h, {}, {}};
    record(series, 0.0, u);

    for (std::size_t n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * h;
        const AmplitudeState k1 = rhs(t, u, none);
        const AmplitudeState k2 = rhs(t + 0.5 * h, u + (0.5 * h) * k1, none);
        const AmplitudeState k3 = rhs(t + 0.5 * h, u + (0.5 * h) * k2, none);
        const AmplitudeState k4 = rhs(t + h, u + h * k3, none);
        u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check_amplitudes(u, static_cast<double>(n + 1) * h);
        maybe_record(series, n + 1, stride, steps, h, u);
    }
    return series;
}

TimeSeries integrate_euler_oracle(const RhsFunction& rhs, const ScenarioConfig& cfg, double h_tiny) {
    const double reference = rhs.uses_history ? dde_step(rhs.lag_unit, cfg.step_control)
                                              : ode_step(cfg.sample_interval, cfg.step_control);
    if (!(h_tiny > 0.0) || h_tiny > reference / 50.0 * (1.0 + 1e-12)) {
        throw std::invalid_argument("Euler oracle step must satisfy 0 < h_tiny <= h / 50");
    }
    double h = h_tiny;
    if (rhs.uses_history) h = rhs.lag_unit / std::ceil(rhs.lag_unit / h_tiny - 1e-9);

    AmplitudeState u = cfg.initial_amplitudes();
    check_initial_state(rhs, u);
    NearestNodeHistory history(rhs.arity, h, rhs.max_lag * rhs.lag_unit + 2.0 * h);
    history.append(u);

    const std::size_t steps = step_count(cfg.t_end, h);
    const std::size_t stride = sample_stride(cfg.sample_interval, h);
    TimeSeries series{rhs.arity, h, {}, {}};
    record(series, 0.0, u);

    for (std::size_t n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * h;
        u += h * rhs(t, u, history, Side::Right);
        check_amplitudes(u, static_cast<double>(n + 1) * h);
        history.append(u);
        maybe_record(series, n + 1, stride, steps, h, u);
    }
    return series;
}

double resolved_step(const ScenarioConfig& cfg) {
    return cfg.regime == Regime::FullDelay ? dde_step(cfg.params.tau, cfg.step_control)
                                           : ode_step(cfg.sample_interval, cfg.step_control);
}

TimeSeries simulate(const ScenarioConfig& cfg) {
    require_valid(cfg);
    const RhsFunction rhs = make_rhs(cfg);
    return cfg.regime == Regime::FullDelay ? integrate_dde(rhs, cfg) : integrate_ode(rhs, cfg);
}

}  // namespace giantloop
