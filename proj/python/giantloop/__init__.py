"""Giant-atom amplitude dynamics with modulated decoherence-free couplings."""

import json

from . import _core
from ._core import ParseError, ValidationError, bessel_j, preset_names

__all__ = [
    "ParseError",
    "ValidationError",
    "bessel_j",
    "effective_hamiltonian",
    "loop_flux",
    "preset",
    "preset_names",
    "propagate",
    "rabi_frequency",
    "simulate",
    "validate",
]


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def preset(name):
    """Scenario of a named preset as a dict."""
    return json.loads(_core.preset_config(name))


def validate(config):
    """List of diagnostics; empty when the scenario is valid."""
    return _core.validate(_text(config))


def simulate(config):
    """Run a scenario (dict or JSON text).

    Returns a dict with "t" (n,), "probabilities" (n, atoms), "amplitudes" (n, atoms, complex) and "step".
    """
    return _core.simulate(_text(config))


def effective_hamiltonian(config):
    return _core.effective_hamiltonian(_text(config))


def loop_flux(config):
    return _core.loop_flux(_text(config))


def propagate(config, t):
    """Amplitudes at time t under the effective Hamiltonian."""
    return _core.propagate(_text(config), t)


def rabi_frequency(config):
    return _core.rabi_frequency(_text(config))
