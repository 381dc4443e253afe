#include "giantloop/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "giantloop/models.hpp"

namespace giantloop {

namespace {

Complex phase(double angle) { return std::polar(1.0, angle); }

EffectiveHamiltonian from_upper(Model model, std::size_t n, Complex ab, Complex ac, Complex bc) {
    EffectiveHamiltonian H;
    H.dimension = n;
    H.source = model;
    H.matrix[0][1] = ab;
    H.matrix[1][0] = std::conj(ab);
    if (n == 3) {
        H.matrix[0][2] = ac;
        H.matrix[2][0] = std::conj(ac);
        H.matrix[1][2] = bc;
        H.matrix[2][1] = std::conj(bc);
    }
    return H;
}

void require_plain_dfi(const PhysicalParams& p, std::string_view model) {
    if (!satisfies_dfi(p.phi, p.m) || p.m != 0) {
        throw DFIConditionViolated(std::string(model) + " couplings require phi = pi/2");
    }
}

// Integral of the piecewise-linear interpolant of p from times[0] to t, given prefix integrals at the nodes.
double integral_to(const std::vector<double>& times, const std::vector<double>& p, const std::vector<double>& prefix,
                   double t) {
    if (t <= times.front()) return 0.0;
    if (t >= times.back()) return prefix.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto i = static_cast<std::size_t>(it - times.begin()) - 1;
    const double span = times[i + 1] - times[i];
    const double s = (t - times[i]) / span;
    const double value = p[i] + s * (p[i + 1] - p[i]);
    return prefix[i] + 0.5 * (t - times[i]) * (p[i] + value);
}

std::vector<double> profile(const TimeSeries& series, std::size_t atom, double window) {
    if (atom >= series.atoms) throw std::out_of_range("atom index out of range");
    return window > 0.0 ? smoothed_probabilities(series, atom, window) : series.probabilities(atom);
}

Peak refine(const std::vector<double>& t, const std::vector<double>& p, std::size_t i) {
    const double x0 = t[i - 1] - t[i];
    const double x2 = t[i + 1] - t[i];
    const double y0 = p[i - 1] - p[i];
    const double y2 = p[i + 1] - p[i];
    // y = a x^2 + b x through (x0, y0), (0, 0), (x2, y2)
    const double denom = x0 * x2 * (x0 - x2);
    const double a = (y0 * x2 - y2 * x0) / denom;
    const double b = (y2 * x0 * x0 - y0 * x2 * x2) / denom;
    if (!(a < 0.0)) return {t[i], p[i]};
    const double x = std::clamp(-b / (2.0 * a), x0, x2);
    return {t[i] + x, p[i] + a * x * x + b * x};
}

std::vector<Peak> peaks(const TimeSeries& series, std::size_t atom, double min_height, double window,
                        std::size_t wanted) {
    const std::vector<double> p = profile(series, atom, window);
    std::vector<Peak> found;
    for (std::size_t i = 1; i + 1 < p.size() && found.size() < wanted; ++i) {
        if (p[i - 1] < p[i] && p[i] >= p[i + 1] && p[i] >= min_height) found.push_back(refine(series.times, p, i));
    }
    return found;
}

}  // namespace

EffectiveHamiltonian build_effective_hamiltonian(Model model, const PhysicalParams& p,
                                                 const std::optional<FrequencyModulation>& freq_mod) {
    switch (model) {
        case Model::DimerCouplingMod: {
            const double G = derived_coupling_Gm(p);
            return from_upper(model, 2, G * phase(p.theta), 0.0, 0.0);
        }
        case Model::TrimerDirect: {
            require_plain_dfi(p, "trimer_direct");
            const double G0 = p.chi;
            return from_upper(model, 3, G0 * phase(p.theta), G0, G0);
        }
        case Model::TrimerTwoWaveguide: {
            require_plain_dfi(p, "trimer_two_waveguide");
            const double G0 = p.chi;
            return from_upper(model, 3, G0 * phase(p.theta), G0, 2.0);
        }
        case Model::TrimerSingleWaveguide: {
            if (!satisfies_single_waveguide_dfi(p.phi, p.m)) {
                throw DFIConditionViolated("trimer_single_waveguide couplings require phi' = (2m + 1/3) pi");
            }
            const double s = std::sin(pi / 3.0);
            const Complex G = p.chi * s * phase(p.theta);
            return from_upper(model, 3, G, G, 2.0 * s);
        }
        case Model::DimerFrequencyMod: {
            if (!freq_mod) throw std::invalid_argument("dimer_frequency_mod requires freq_mod");
            require_dfi(p);
            const double G = freqmod_effective_coupling(*freq_mod, p.m);
            return from_upper(model, 2, G * phase(freq_mod->theta_prime), 0.0, 0.0);
        }
    }
    throw std::invalid_argument("unknown model");
}

EffectiveHamiltonian build_effective_hamiltonian(const ScenarioConfig& cfg) {
    return build_effective_hamiltonian(cfg.model, cfg.params, cfg.freq_mod);
}

double loop_flux(const EffectiveHamiltonian& H) {
    if (H.dimension != 3) throw DegenerateLoop("loop flux needs three atoms");
    const Complex ab = H(0, 1), bc = H(1, 2), ca = H(2, 0);
    if (ab == 0.0 || bc == 0.0 || ca == 0.0) throw DegenerateLoop("a loop coupling vanishes");
    // Summing the phases keeps conjugate pairs cancelling exactly.
    const double flux = std::remainder(std::arg(ab) + std::arg(bc) + std::arg(ca), 2.0 * pi);
    return flux <= -pi ? pi : flux;
}

AmplitudeState propagate_effective(const EffectiveHamiltonian& H, const AmplitudeState& u0, double t) {
    const std::size_t n = H.dimension;
    if (u0.size() != n) throw std::invalid_argument("state length mismatch");
    if (t == 0.0) return u0;

    AmplitudeState u(n);
    if (n == 2) {
        const double mean = 0.5 * (H(0, 0).real() + H(1, 1).real());
        const double half_split = 0.5 * (H(0, 0).real() - H(1, 1).real());
        const double w = std::hypot(half_split, std::abs(H(0, 1)));
        const double c = std::cos(w * t);
        const double sinc = w == 0.0 ? t : std::sin(w * t) / w;
        const Complex i(0.0, 1.0);
        const Complex global = phase(-mean * t);
        u[0] = global * ((c - i * sinc * half_split) * u0[0] - i * sinc * H(0, 1) * u0[1]);
        u[1] = global * (-i * sinc * H(1, 0) * u0[0] + (c + i * sinc * half_split) * u0[1]);
        return u;
    }

    Eigen::Matrix3cd M;
    Eigen::Vector3cd v;
    for (std::size_t r = 0; r < 3; ++r) {
        v(r) = u0[r];
        for (std::size_t c = 0; c < 3; ++c) M(r, c) = H(r, c);
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(M);
    const Eigen::Matrix3cd& V = solver.eigenvectors();
    Eigen::Vector3cd w = V.adjoint() * v;
    for (int k = 0; k < 3; ++k) w(k) *= phase(-solver.eigenvalues()(k) * t);
    const Eigen::Vector3cd out = V * w;
    for (std::size_t r = 0; r < 3; ++r) u[r] = out(r);
    return u;
}

std::vector<double> smoothed_probabilities(const TimeSeries& series, std::size_t atom, double window) {
    const std::vector<double> p = series.probabilities(atom);
    if (p.size() < 2 || !(window > 0.0)) return p;

    const std::vector<double>& t = series.times;
    std::vector<double> prefix(p.size(), 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) prefix[i] = prefix[i - 1] + 0.5 * (t[i] - t[i - 1]) * (p[i] + p[i - 1]);

    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double lo = std::max(t.front(), t[i] - 0.5 * window);
        const double hi = std::min(t.back(), t[i] + 0.5 * window);
        out[i] = (integral_to(t, p, prefix, hi) - integral_to(t, p, prefix, lo)) / (hi - lo);
    }
    return out;
}

std::optional<Peak> find_first_peak(const TimeSeries& series, std::size_t atom, double min_height,
                                    double smoothing_window) {
    const auto found = peaks(series, atom, min_height, smoothing_window, 1);
    if (found.empty()) return std::nullopt;
    return found.front();
}

std::string_view to_string(CirculationOrder order) {
    switch (order) {
        case CirculationOrder::ABC: return "A->B->C";
        case CirculationOrder::ACB: return "A->C->B";
        case CirculationOrder::Symmetric: return "Symmetric";
        case CirculationOrder::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

CirculationReport circulation_order(const TimeSeries& series, double min_height, double sample_interval,
                                    double smoothing_window) {
    if (series.atoms != 3) throw std::invalid_argument("circulation needs a three-atom series");
    CirculationReport report;
    report.tolerance = 2.0 * sample_interval;
    if (const auto b = find_first_peak(series, 1, min_height, smoothing_window)) report.peak_b = b->time;
    if (const auto c = find_first_peak(series, 2, min_height, smoothing_window)) report.peak_c = c->time;
    if (!report.peak_b || !report.peak_c) return report;

    const double tb = *report.peak_b, tc = *report.peak_c;
    report.gap = std::abs(tb - tc);
    if (*report.gap < report.tolerance) {
        report.order = CirculationOrder::Symmetric;
    } else {
        report.order = tb < tc ? CirculationOrder::ABC : CirculationOrder::ACB;
    }
    return report;
}

double extract_rabi_frequency(const TimeSeries& series, std::size_t atom, double min_height,
                              double smoothing_window) {
    const auto found = peaks(series, atom, min_height, smoothing_window, 2);
    if (found.size() < 2) throw InsufficientOscillations("fewer than two maxima reach the height threshold");
    return pi / (found[1].time - found[0].time);
}

}  // namespace giantloop
