#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "giantloop/analysis.hpp"
#include "giantloop/models.hpp"
#include "giantloop/presets.hpp"
#include "giantloop/runner.hpp"
#include "giantloop/scenario_io.hpp"

namespace py = pybind11;
using namespace giantloop;

namespace {

py::dict series_dict(const TimeSeries& s) {
    const auto n = static_cast<py::ssize_t>(s.size());
    const auto atoms = static_cast<py::ssize_t>(s.atoms);
    py::array_t<double> times(n, s.times.data());
    py::array_t<double> probabilities({n, atoms});
    py::array_t<Complex> amplitudes({n, atoms});
    auto p = probabilities.mutable_unchecked<2>();
    auto u = amplitudes.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < n; ++i) {
        const auto si = static_cast<std::size_t>(i);
        for (py::ssize_t j = 0; j < atoms; ++j) {
            u(i, j) = s.amplitudes[si][static_cast<std::size_t>(j)];
            p(i, j) = std::norm(u(i, j));
        }
    }
    py::dict out;
    out["t"] = times;
    out["probabilities"] = probabilities;
    out["amplitudes"] = amplitudes;
    out["step"] = s.step;
    return out;
}

py::array_t<Complex> hamiltonian_array(const EffectiveHamiltonian& H) {
    const auto d = static_cast<py::ssize_t>(H.dimension);
    py::array_t<Complex> out({d, d});
    auto m = out.mutable_unchecked<2>();
    for (py::ssize_t r = 0; r < d; ++r)
        for (py::ssize_t c = 0; c < d; ++c) m(r, c) = H(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Giant-atom amplitude dynamics";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    m.def("preset_names", [] {
        std::vector<std::string> names;
        for (auto name : preset_names()) names.emplace_back(name);
        return names;
    });
    m.def(
        "preset_config",
        [](const std::string& name) {
            const auto cfg = preset(name);
            if (!cfg) throw py::key_error("unknown preset '" + name + "'");
            return scenario_to_json(*cfg);
        },
        py::arg("name"), "Scenario JSON text of a named preset");

    m.def(
        "validate",
        [](const std::string& text) {
            try {
                parse_scenario_text(text);
            } catch (const ValidationError& e) {
                return e.diagnostics();
            }
            return std::vector<std::string>{};
        },
        py::arg("config_json"), "Diagnostics for a scenario; empty when valid. Raises ParseError on malformed input.");

    m.def(
        "simulate",
        [](const std::string& text) {
            const ScenarioConfig cfg = parse_scenario_text(text);
            TimeSeries s;
            {
                py::gil_scoped_release release;
                s = simulate(cfg);
            }
            return series_dict(s);
        },
        py::arg("config_json"));

    m.def(
        "effective_hamiltonian",
        [](const std::string& text) { return hamiltonian_array(build_effective_hamiltonian(parse_scenario_text(text))); },
        py::arg("config_json"));
    m.def(
        "loop_flux", [](const std::string& text) { return loop_flux(build_effective_hamiltonian(parse_scenario_text(text))); },
        py::arg("config_json"));
    m.def(
        "propagate",
        [](const std::string& text, double t) {
            const ScenarioConfig cfg = parse_scenario_text(text);
            const AmplitudeState u = propagate_effective(build_effective_hamiltonian(cfg), cfg.initial_amplitudes(), t);
            std::vector<Complex> out;
            for (std::size_t j = 0; j < u.size(); ++j) out.push_back(u[j]);
            return out;
        },
        py::arg("config_json"), py::arg("t"));

    m.def("bessel_j", &bessel_first_kind, py::arg("q"), py::arg("z"));
    m.def(
        "rabi_frequency",
        [](const std::string& text) {
            const ScenarioConfig cfg = parse_scenario_text(text);
            return extract_rabi_frequency(simulate(cfg), 1, 0.5, ripple_window(cfg));
        },
        py::arg("config_json"), "Rabi frequency from the first two smoothed P_B maxima");
}
