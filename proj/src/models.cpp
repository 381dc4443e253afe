#include "giantloop/models.hpp"

#include <algorithm>
#include <array>

namespace giantloop {

namespace {

constexpr Complex minus_i{0.0, -1.0};

Complex phase(double angle) { return std::polar(1.0, angle); }

bool gate_open(double lag_time, double tau, Side side) {
    const double boundary = 1e-9 * tau;
    return side == Side::Left ? lag_time > boundary : lag_time >= -boundary;
}

// Delayed states u(t - l tau) for l = 1..L, fetched once per evaluation.
class DelayedStates {
public:
    DelayedStates(double t, int lags, const HistoryAccess& history, double phi, double tau, Side side,
                  std::size_t atoms) {
        for (int l = 1; l <= lags; ++l) {
            const double lag_time = t - l * tau;
            if (gate_open(lag_time, tau, side)) {
                states_[l] = history.state_at(std::max(0.0, lag_time)) * phase(l * phi);
            } else {
                states_[l] = AmplitudeState::zeros(atoms);
            }
        }
    }

    // D_{j,l}
    Complex operator()(std::size_t atom, int lag) const { return states_[lag][atom]; }

private:
    std::array<AmplitudeState, 6> states_{};
};

// Answers every history query with the current state: collapses u_j(t - l tau) onto u_j(t).
class CurrentStateHistory final : public HistoryAccess {
public:
    explicit CurrentStateHistory(const AmplitudeState& u) : u_(u) {}
    AmplitudeState state_at(double) const override { return u_; }

private:
    const AmplitudeState& u_;
};

ModulationProfile coupling_drive(const PhysicalParams& p) { return ModulationProfile::cosine(p.chi, p.omega, p.theta); }
ModulationProfile secondary_drive(const PhysicalParams& p) { return ModulationProfile::cosine(p.chi, p.omega, 0.0); }

void require_trimer_dfi(const PhysicalParams& p) {
    if (p.m != 0 || !satisfies_dfi(p.phi, 0)) {
        throw DFIConditionViolated("trimer effective couplings require phi = pi/2");
    }
}

}  // namespace

Complex delayed_term(std::size_t atom, int lag, double t, const HistoryAccess& history, double phi, double tau,
                     Side side) {
    const double lag_time = t - lag * tau;
    if (!gate_open(lag_time, tau, side)) return 0.0;
    return phase(lag * phi) * history.state_at(std::max(0.0, lag_time))[atom];
}

AmplitudeState rhs_dimer_dde(double t, const AmplitudeState& u, const HistoryAccess& history,
                             const PhysicalParams& p, Side side) {
    constexpr std::size_t A = 0, B = 1;
    const auto g = coupling_drive(p);
    const DelayedStates D(t, 3, history, p.phi, p.tau, side, 2);
    const double gt = g(t);

    AmplitudeState du(2);
    du[A] = -gt * (2.0 * gt * u[A] + 2.0 * g(t - 2.0 * p.tau) * D(A, 2) + 3.0 * D(B, 1) + D(B, 3));
    du[B] = minus_i * p.delta * u[B] -
            (2.0 * u[B] + 2.0 * D(B, 2) + 3.0 * g(t - p.tau) * D(A, 1) + g(t - 3.0 * p.tau) * D(A, 3));
    return du;
}

AmplitudeState rhs_dimer_markovian(double t, const AmplitudeState& u, const PhysicalParams& p) {
    constexpr std::size_t A = 0, B = 1;
    const double gt = coupling_drive(p)(t);
    const Complex self = 1.0 + phase(2.0 * p.phi);
    const Complex cross = 3.0 * phase(p.phi) + phase(3.0 * p.phi);

    AmplitudeState du(2);
    du[A] = -2.0 * gt * gt * self * u[A] - gt * cross * u[B];
    du[B] = minus_i * p.delta * u[B] - 2.0 * self * u[B] - gt * cross * u[A];
    return du;
}

AmplitudeState rhs_dimer_rwa(double, const AmplitudeState& u, const PhysicalParams& p) {
    const double G = derived_coupling_Gm(p);
    AmplitudeState du(2);
    du[0] = minus_i * G * phase(p.theta) * u[1];
    du[1] = minus_i * G * phase(-p.theta) * u[0];
    return du;
}

AmplitudeState rhs_trimer_direct_dde(double t, const AmplitudeState& u, const HistoryAccess& history,
                                     const PhysicalParams& p, Side side) {
    constexpr std::size_t A = 0, B = 1, C = 2;
    const auto g = coupling_drive(p);
    const DelayedStates D(t, 3, history, p.phi, p.tau, side, 3);
    const double gt = g(t);
    const double G0 = p.chi;
    const double lambda = 2.0 * G0 * std::cos(p.omega * t);

    AmplitudeState du(3);
    du[A] = -2.0 * gt * gt * u[A] - 2.0 * gt * g(t - 2.0 * p.tau) * D(A, 2) - gt * (3.0 * D(B, 1) + D(B, 3)) +
            minus_i * lambda * u[C];
    du[B] = minus_i * p.delta * u[B] - 2.0 * (u[B] + D(B, 2)) -
            (3.0 * g(t - p.tau) * D(A, 1) + g(t - 3.0 * p.tau) * D(A, 3)) + minus_i * G0 * u[C];
    du[C] = minus_i * p.delta * u[C] + minus_i * (lambda * u[A] + G0 * u[B]);
    return du;
}

AmplitudeState rhs_trimer_direct_rwa(double, const AmplitudeState& u, const PhysicalParams& p) {
    require_trimer_dfi(p);
    const double G0 = p.chi;
    AmplitudeState du(3);
    du[0] = minus_i * G0 * (phase(p.theta) * u[1] + u[2]);
    du[1] = minus_i * G0 * (phase(-p.theta) * u[0] + u[2]);
    du[2] = minus_i * G0 * (u[0] + u[1]);
    return du;
}

AmplitudeState rhs_trimer_two_wg_dde(double t, const AmplitudeState& u, const HistoryAccess& history,
                                     const PhysicalParams& p, Side side) {
    constexpr std::size_t A = 0, B = 1, C = 2;
    const auto g = coupling_drive(p);
    const auto gp = secondary_drive(p);
    const DelayedStates D(t, 4, history, p.phi, p.tau, side, 3);
    const double tau = p.tau;
    const double gt = g(t);
    const double gpt = gp(t);

    AmplitudeState du(3);
    du[A] = -2.0 * (gt * gt + gpt * gpt) * u[A] - 2.0 * (gt * g(t - 2.0 * tau) + gpt * gp(t - 2.0 * tau)) * D(A, 2) -
            gt * (3.0 * D(B, 1) + D(B, 3)) - gt * (u[C] + 2.0 * D(C, 2) + D(C, 4)) -
            gpt * (3.0 * D(C, 1) + D(C, 3));
    du[B] = minus_i * p.delta * u[B] - 2.0 * (u[B] + D(B, 2)) - 3.0 * g(t - tau) * D(A, 1) -
            g(t - 3.0 * tau) * D(A, 3) - (3.0 * D(C, 1) + D(C, 3));
    du[C] = minus_i * p.delta * u[C] - 4.0 * (u[C] + D(C, 2)) - gt * u[A] - 2.0 * g(t - 2.0 * tau) * D(A, 2) -
            g(t - 4.0 * tau) * D(A, 4) - 3.0 * gp(t - tau) * D(A, 1) - gp(t - 3.0 * tau) * D(A, 3) -
            (3.0 * D(B, 1) + D(B, 3));
    return du;
}

AmplitudeState rhs_trimer_two_wg_rwa(double, const AmplitudeState& u, const PhysicalParams& p) {
    require_trimer_dfi(p);
    const double G0 = p.chi;
    constexpr double Gamma0 = 1.0;
    AmplitudeState du(3);
    du[0] = minus_i * G0 * phase(p.theta) * u[1] + minus_i * G0 * u[2];
    du[1] = minus_i * G0 * phase(-p.theta) * u[0] + minus_i * 2.0 * Gamma0 * u[2];
    du[2] = minus_i * G0 * u[0] + minus_i * 2.0 * Gamma0 * u[1];
    return du;
}

AmplitudeState rhs_trimer_single_wg_dde(double t, const AmplitudeState& u, const HistoryAccess& history,
                                        const PhysicalParams& p, Side side) {
    constexpr std::size_t A = 0, B = 1, C = 2;
    const auto g = coupling_drive(p);
    const DelayedStates D(t, 5, history, p.phi, p.tau, side, 3);
    const double tau = p.tau;
    const double gt = g(t);

    AmplitudeState du(3);
    du[A] = -gt * (2.0 * gt * u[A] + 2.0 * g(t - 3.0 * tau) * D(A, 3) +
                   (2.0 * D(B, 1) + D(B, 2) + D(B, 4) + D(C, 1) + 2.0 * D(C, 2) + D(C, 5)));
    du[B] = minus_i * p.delta * u[B] -
            (2.0 * u[B] + 2.0 * D(B, 3) + 2.0 * g(t - tau) * D(A, 1) + g(t - 2.0 * tau) * D(A, 2) +
             g(t - 4.0 * tau) * D(A, 4) + (2.0 * D(C, 1) + D(C, 2) + D(C, 4)));
    du[C] = minus_i * p.delta * u[C] -
            (2.0 * u[C] + 2.0 * D(C, 3) + g(t - tau) * D(A, 1) + 2.0 * g(t - 2.0 * tau) * D(A, 2) +
             g(t - 5.0 * tau) * D(A, 5) + (2.0 * D(B, 1) + D(B, 2) + D(B, 4)));
    return du;
}

AmplitudeState rhs_trimer_single_wg_rwa(double, const AmplitudeState& u, const PhysicalParams& p) {
    if (!satisfies_single_waveguide_dfi(p.phi, p.m)) {
        throw DFIConditionViolated("single-waveguide trimer couplings require phi' = (2m + 1/3) pi");
    }
    const double s = std::sin(pi / 3.0);
    const double G = p.chi * s;
    const double Gamma = s;
    AmplitudeState du(3);
    du[0] = minus_i * G * phase(p.theta) * (u[1] + u[2]);
    du[1] = minus_i * G * phase(-p.theta) * u[0] + minus_i * 2.0 * Gamma * u[2];
    du[2] = minus_i * G * phase(-p.theta) * u[0] + minus_i * 2.0 * Gamma * u[1];
    return du;
}

AmplitudeState rhs_freqmod_dimer_dde(double t, const AmplitudeState& u, const HistoryAccess& history,
                                     const PhysicalParams& p, const FrequencyModulation& f, Side side) {
    constexpr std::size_t A = 0, B = 1;
    const DelayedStates D(t, 3, history, p.phi, p.tau, side, 2);
    const double detuning = f.delta0 + f.delta_g_prime * std::cos(f.omega_prime * t + f.theta_prime);

    AmplitudeState du(2);
    du[A] = -(2.0 * u[A] + 2.0 * D(A, 2) + 3.0 * D(B, 1) + D(B, 3));
    du[B] = minus_i * detuning * u[B] - (2.0 * u[B] + 2.0 * D(B, 2) + 3.0 * D(A, 1) + D(A, 3));
    return du;
}

double freqmod_effective_coupling(const FrequencyModulation& f, int m) {
    return (m % 2 == 0 ? 2.0 : -2.0) * bessel_first_kind(-1, f.eta());
}

AmplitudeState rhs_freqmod_dimer_rwa(double, const AmplitudeState& u, const FrequencyModulation& f, int m) {
    const double G = freqmod_effective_coupling(f, m);
    AmplitudeState du(2);
    du[0] = minus_i * G * phase(f.theta_prime) * u[1];
    du[1] = minus_i * G * phase(-f.theta_prime) * u[0];
    return du;
}

int max_lag(Model model) {
    switch (model) {
        case Model::DimerCouplingMod:
        case Model::TrimerDirect:
        case Model::DimerFrequencyMod: return 3;
        case Model::TrimerTwoWaveguide: return 4;
        case Model::TrimerSingleWaveguide: return 5;
    }
    return 0;
}

RhsFunction make_rhs(const ScenarioConfig& cfg) {
    const PhysicalParams p = cfg.params;
    const std::optional<FrequencyModulation> f = cfg.freq_mod;
    if (cfg.model == Model::DimerFrequencyMod && !f) {
        throw std::invalid_argument("dimer_frequency_mod requires freq_mod");
    }

    RhsFunction rhs;
    rhs.arity = atom_count(cfg.model);
    if (cfg.model == Model::DimerFrequencyMod) {
        rhs.characteristic_rate = std::max(std::abs(f->omega_prime), std::abs(f->delta0) + std::abs(f->delta_g_prime));
    } else {
        rhs.characteristic_rate = std::max(std::abs(p.omega), std::abs(p.delta));
    }

    // Retarded right-hand side for this model, shared by FullDelay and the collapsed Markovian form.
    RhsFunction::Evaluate retarded;
    switch (cfg.model) {
        case Model::DimerCouplingMod:
            retarded = [p](double t, const AmplitudeState& u, const HistoryAccess& h, Side s) {
                return rhs_dimer_dde(t, u, h, p, s);
            };
            break;
        case Model::TrimerDirect:
            retarded = [p](double t, const AmplitudeState& u, const HistoryAccess& h, Side s) {
                return rhs_trimer_direct_dde(t, u, h, p, s);
            };
            break;
        case Model::TrimerTwoWaveguide:
            retarded = [p](double t, const AmplitudeState& u, const HistoryAccess& h, Side s) {
                return rhs_trimer_two_wg_dde(t, u, h, p, s);
            };
            break;
        case Model::TrimerSingleWaveguide:
            retarded = [p](double t, const AmplitudeState& u, const HistoryAccess& h, Side s) {
                return rhs_trimer_single_wg_dde(t, u, h, p, s);
            };
            break;
        case Model::DimerFrequencyMod:
            retarded = [p, fm = *f](double t, const AmplitudeState& u, const HistoryAccess& h, Side s) {
                return rhs_freqmod_dimer_dde(t, u, h, p, fm, s);
            };
            break;
    }

    switch (cfg.regime) {
        case Regime::FullDelay:
            rhs.uses_history = true;
            rhs.lag_unit = p.tau;
            rhs.max_lag = max_lag(cfg.model);
            rhs.evaluate = std::move(retarded);
            break;

        case Regime::MarkovianODE:
            if (cfg.model == Model::DimerCouplingMod) {
                rhs.evaluate = [p](double t, const AmplitudeState& u, const HistoryAccess&, Side) {
                    return rhs_dimer_markovian(t, u, p);
                };
            } else {
                // tau -> 0: every delayed amplitude becomes the current one, every
                // retarded drive g(t - l tau) becomes g(t).
                ScenarioConfig collapsed = cfg;
                collapsed.params.tau = 0.0;
                collapsed.regime = Regime::FullDelay;
                RhsFunction::Evaluate dde = make_rhs(collapsed).evaluate;
                rhs.evaluate = [dde = std::move(dde)](double t, const AmplitudeState& u, const HistoryAccess&, Side) {
                    const CurrentStateHistory now(u);
                    return dde(t, u, now, Side::Right);
                };
            }
            break;

        case Regime::RwaEffective:
            rhs.characteristic_rate = 0.0;
            switch (cfg.model) {
                case Model::DimerCouplingMod:
                    derived_coupling_Gm(p);
                    rhs.evaluate = [p](double t, const AmplitudeState& u, const HistoryAccess&, Side) {
                        return rhs_dimer_rwa(t, u, p);
                    };
                    break;
                case Model::TrimerDirect:
                    require_trimer_dfi(p);
                    rhs.evaluate = [p](double t, const AmplitudeState& u, const HistoryAccess&, Side) {
                        return rhs_trimer_direct_rwa(t, u, p);
                    };
                    break;
                case Model::TrimerTwoWaveguide:
                    require_trimer_dfi(p);
                    rhs.evaluate = [p](double t, const AmplitudeState& u, const HistoryAccess&, Side) {
                        return rhs_trimer_two_wg_rwa(t, u, p);
                    };
                    break;
                case Model::TrimerSingleWaveguide:
                    if (!satisfies_single_waveguide_dfi(p.phi, p.m)) {
                        throw DFIConditionViolated("single-waveguide trimer couplings require phi' = (2m + 1/3) pi");
                    }
                    rhs.evaluate = [p](double t, const AmplitudeState& u, const HistoryAccess&, Side) {
                        return rhs_trimer_single_wg_rwa(t, u, p);
                    };
                    break;
                case Model::DimerFrequencyMod:
                    require_dfi(p);
                    rhs.evaluate = [fm = *f, m = p.m](double t, const AmplitudeState& u, const HistoryAccess&, Side) {
                        return rhs_freqmod_dimer_rwa(t, u, fm, m);
                    };
                    break;
            }
            break;
    }
    return rhs;
}

}  // namespace giantloop
