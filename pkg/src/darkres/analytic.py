"""Closed-form weak-probe solutions and dressed-state analysis.

These expressions are leading-order expansions of the steady state in the
probe Rabi frequency and serve as independent oracles for the numeric
solver: the full weak-probe form everywhere, a narrow-feature limit form
around zero probe detuning, and an incoherent-pump form describing the
gain spike.  None of them enforce their validity conditions (see
:func:`darkres.model.validate_params` for regime flags), so they can also
be plotted outside their regimes for comparison purposes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError
from .model import SystemParams, damping_table

_DENOMINATOR_FLOOR = 1e-30


@dataclass(frozen=True)
class DressedStates:
    """Eigenstates of the driven |1>,|2>,|4> subsystem at zero detunings.

    ``amplitudes[k]`` holds the components of the k-th dressed state on the
    bare states (|1>, |2>, |4>); ``energies[k]`` the matching eigenvalue in
    units of hbar*gamma.  Order: uncoupled state, upper, lower.
    """

    energies: tuple[float, float, float]
    amplitudes: tuple[tuple[float, float, float], ...]


def rho23_weak_probe(p: SystemParams) -> complex:
    """Probe-transition coherence to first order in the probe coupling,
    valid without incoherent pumping.

    The numerator interference between the two-photon pathway (via the
    coupling field) and the direct pathway is what carves the narrow
    feature into the Autler-Townes profile.
    """
    d = damping_table(p)
    c13 = p.delta_p - p.delta41 + p.delta42 + 1j * d.big_gamma(1, 3)
    c34 = p.delta_p + p.delta42 + 1j * d.big_gamma(3, 4)
    c23 = p.delta_p + 1j * d.big_gamma(2, 3)
    num = -p.g_p * (p.g41**2 - c13 * c34)
    den = p.g41**2 * c23 + c13 * (p.g42**2 - c23 * c34)
    if abs(den) < _DENOMINATOR_FLOOR:
        raise NumericError(
            "weak-probe response denominator vanished", code="DIVISION_DEGENERATE"
        )
    return num / den


def rho23_limit(p: SystemParams) -> complex:
    """Narrow-feature limit of the weak-probe coherence: resonant fields,
    no 1->3 decay, g41 << g42 and small probe detuning.

    Its imaginary part is strictly positive (a pure absorption spike);
    the spike half width is (g41/g42)^2 * gamma23.
    """
    d = damping_table(p)
    g23 = d.big_gamma(2, 3)
    g34 = d.big_gamma(3, 4)
    num = -p.g_p * (p.g41**2 - 1j * p.delta_p * g34)
    den = p.g42**2 * p.delta_p + 1j * (
        p.g41**2 * g23 - p.delta_p**2 * (g34 + g23)
    )
    if abs(den) < _DENOMINATOR_FLOOR:
        raise NumericError(
            "limit-form denominator vanished", code="DIVISION_DEGENERATE"
        )
    return num / den


def _pump_prefactor(p: SystemParams) -> float:
    d = damping_table(p)
    den = p.g42**2 * p.gamma23 + 2 * p.lambda_pump * d.big_gamma(2, 4) * p.gamma42
    if abs(den) < _DENOMINATOR_FLOOR:
        raise NumericError(
            "pump-form prefactor denominator vanished", code="DIVISION_DEGENERATE"
        )
    return p.g41**2 * p.g_p * p.gamma23 / den


def rho23_incoherent(p: SystemParams) -> complex:
    """Leading-order probe coherence with incoherent pumping applied.

    The imaginary part is a gain Lorentzian of half width equal to the
    pump rate; the real part is the matching dispersive profile, odd in
    the probe detuning.
    """
    lorentz_den = p.delta_p**2 + p.lambda_pump**2
    if lorentz_den < _DENOMINATOR_FLOOR:
        raise NumericError(
            "pump form undefined at zero detuning and zero pump",
            code="DIVISION_DEGENERATE",
        )
    return (
        _pump_prefactor(p)
        * (p.delta_p - 1j * p.lambda_pump)
        / lorentz_den
    )


def spike_half_width(p: SystemParams) -> float:
    """Half width of the narrow absorption feature, (g41/g42)^2 * gamma23."""
    return (p.g41 / p.g42) ** 2 * p.gamma23


def lambda_threshold(p: SystemParams) -> float:
    """Pump rate above which the absorption spike inverts into gain.

    Uses the self-consistent approximate form (g41/g42)^2 * gamma23; the
    fully general expression trades accuracy for a dimensional
    inconsistency and is not used.
    """
    return (p.g41 / p.g42) ** 2 * p.gamma23


def group_index_analytic(p: SystemParams) -> float:
    """Sign/shape oracle for the pumped group index minus one.

    Negative inside |delta_p| < lambda (fast light with gain), zero at
    delta_p = +-lambda, positive outside.  The overall scale carries a
    leftover frequency dimension, so only sign and shape are meaningful;
    quantitative group indices come from the numeric route in
    :mod:`darkres.observables`.
    """
    lorentz_den = p.delta_p**2 + p.lambda_pump**2
    if lorentz_den < _DENOMINATOR_FLOOR:
        raise NumericError(
            "group-index form undefined at zero detuning and zero pump",
            code="DIVISION_DEGENERATE",
        )
    return (
        _pump_prefactor(p)
        * (p.delta_p**2 - p.lambda_pump**2)
        / lorentz_den**2
    )


def coupling_hamiltonian(g41: float, g42: float) -> np.ndarray:
    """Interaction Hamiltonian of the driven subsystem in the (|1>, |2>,
    |4>) basis at zero detunings, in units of hbar*gamma.

    Sign convention -g |4><j| + h.c., under which the dressed states
    below are its exact eigensystem.
    """
    return np.array(
        [
            [0.0, 0.0, -g41],
            [0.0, 0.0, -g42],
            [-g41, -g42, 0.0],
        ]
    )


def dressed_states(g41: float, g42: float) -> DressedStates:
    """Dressed states of the doubly driven |1>,|2>,|4> subsystem.

    The zero-energy state is the dark superposition of |1> and |2>; for
    g41 -> 0 it reduces to the bare state |1>, decoupled from the fields,
    and the remaining pair is the ordinary Autler-Townes doublet split by
    2*g42.  A small g41 admixes |2> into the dark state, which is what
    couples it weakly to the probe and produces the narrow resonance.
    """
    norm_sq = g41**2 + g42**2
    if norm_sq == 0.0:
        raise NumericError(
            "dressed states undefined for vanishing couplings", code="DEGENERATE"
        )
    n = math.sqrt(norm_sq)
    dark = (-g42 / n, g41 / n, 0.0)
    upper = (g41 / math.sqrt(2 * norm_sq), g42 / math.sqrt(2 * norm_sq), -1 / math.sqrt(2))
    lower = (g41 / math.sqrt(2 * norm_sq), g42 / math.sqrt(2 * norm_sq), +1 / math.sqrt(2))
    return DressedStates(energies=(0.0, n, -n), amplitudes=(dark, upper, lower))
