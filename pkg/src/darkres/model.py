"""Physical parameters of the driven four-level system.

Level scheme: a ladder |3> -- |2> -- |4> with a perturbing side state |1>.
A strong field (Rabi frequency ``g42``) drives |2><->|4>, a weak coupling
field (``g41``) drives |1><->|4>, and the probe (``g_p``) acts on |2><->|3>.
An incoherent pump of strength ``lambda_pump`` additionally couples the
probe transition.  Spontaneous decay channels are 4->1 (``gamma41``),
4->2 (``gamma42``), 2->3 (``gamma23``) and 1->3 (``gamma13``).

All rates, Rabi frequencies and detunings are dimensionless, expressed in
units of a reference rate gamma (the 4->1 decay in the mercury-like
configuration).  SI enters only through :class:`MediumParams` when
converting to susceptibility and group index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ParameterError

# Probe counts as weak when g_p <= WEAK_PROBE_FACTOR * gamma23; keeps the
# relative error of the first-order response below ~1e-4.
WEAK_PROBE_FACTOR = 1e-2
# Narrow-feature limit: g41/g42 and |delta_p|/gamma below these bounds.
LIMIT_RABI_RATIO = 1e-2
LIMIT_DETUNING = 1e-3


@dataclass(frozen=True)
class SystemParams:
    """Field and decay parameters, all in units of the reference rate."""

    g41: float = 0.0
    g42: float = 0.0
    g_p: float = 0.0
    delta41: float = 0.0
    delta42: float = 0.0
    delta_p: float = 0.0
    gamma41: float = 0.0
    gamma42: float = 0.0
    gamma23: float = 0.0
    gamma13: float = 0.0
    lambda_pump: float = 0.0


@dataclass(frozen=True)
class MediumParams:
    """Medium properties needed to convert coherence into susceptibility.

    ``gamma_si`` (the reference rate in rad/s) is only required for the
    group-index output; it has no default because the literature does not
    pin an absolute linewidth for the mercury scheme.
    """

    number_density: float = 1e18  # atoms per m^3
    probe_wavelength: float = 253.7e-9  # m
    gamma23_over_gamma: float = 0.14
    gamma_si: float = 0.0  # rad/s; 0 means "not supplied"

    def check(self) -> None:
        if not self.number_density > 0:
            raise ParameterError("number density must be > 0", code="NEGATIVE_RATE")
        if not self.probe_wavelength > 0:
            raise ParameterError("probe wavelength must be > 0", code="NEGATIVE_RATE")
        if not 0 < self.gamma23_over_gamma <= 1:
            raise ParameterError(
                "gamma23/gamma must lie in (0, 1]", code="NEGATIVE_RATE"
            )


@dataclass(frozen=True)
class DampingTable:
    """Total decay rate out of each state and the coherence damping rates.

    gamma_total[i-1] is the full decay rate of state |i>;  the coherence
    between |i> and |j> damps at the symmetric sum gamma_i + gamma_j.  The
    incoherent pump is deliberately NOT folded in here: it enters the
    equations of motion explicitly, and including it twice would
    double-count.
    """

    gamma_total: tuple[float, float, float, float]

    def big_gamma(self, i: int, j: int) -> float:
        """Damping rate of the (i, j) coherence, one-based state labels."""
        return self.gamma_total[i - 1] + self.gamma_total[j - 1]


class Regime(str, Enum):
    """Parameter regimes in which the closed-form solutions are trustworthy."""

    WEAK_PROBE = "WEAK_PROBE"
    LIMIT_REGIME = "LIMIT_REGIME"
    PUMP_REGIME = "PUMP_REGIME"


@dataclass(frozen=True)
class RegimeFlag:
    """A regime that holds, with the factor by which its binding inequality
    is satisfied (margin 1 means marginal, larger means comfortable)."""

    regime: Regime
    margin: float


def check_params(p: SystemParams) -> None:
    """Reject structurally invalid parameters with a named violation."""
    for name in ("g41", "g42", "g_p"):
        if getattr(p, name) < 0:
            raise ParameterError(f"{name} must be >= 0", code="NEGATIVE_RABI")
    for name in ("gamma41", "gamma42", "gamma23", "gamma13", "lambda_pump"):
        if getattr(p, name) < 0:
            raise ParameterError(f"{name} must be >= 0", code="NEGATIVE_RATE")
    for name in ("delta41", "delta42", "delta_p"):
        if not math.isfinite(getattr(p, name)):
            raise ParameterError(f"{name} must be finite", code="NONFINITE_DETUNING")


def validate_params(p: SystemParams) -> list[RegimeFlag]:
    """Validate ``p`` and report which analytic regimes hold.

    WEAK_PROBE: the probe is weak enough for first-order response,
    g_p <= 1e-2 * gamma23.

    LIMIT_REGIME: resonant drive/coupling, no 1->3 decay, g41 << g42 and
    small probe detuning, where the narrow-feature limit form applies.

    PUMP_REGIME: pump strength between the gain-inversion scale
    (g41/g42)^2 * gamma23 and the fast decay rates, where the
    incoherent-pump closed form applies.  The margin is the smaller of
    the two ratios bounding the window.

    Pure function: identical input yields identical flags.
    """
    check_params(p)
    flags: list[RegimeFlag] = []

    if p.g_p > 0 and p.g_p <= WEAK_PROBE_FACTOR * p.gamma23:
        flags.append(
            RegimeFlag(Regime.WEAK_PROBE, WEAK_PROBE_FACTOR * p.gamma23 / p.g_p)
        )

    if (
        p.delta41 == 0.0
        and p.delta42 == 0.0
        and p.gamma13 == 0.0
        and p.g42 > 0
        and p.g41 <= LIMIT_RABI_RATIO * p.g42
        and abs(p.delta_p) <= LIMIT_DETUNING
    ):
        margin = LIMIT_RABI_RATIO * p.g42 / p.g41 if p.g41 > 0 else math.inf
        if p.delta_p != 0.0:
            margin = min(margin, LIMIT_DETUNING / abs(p.delta_p))
        flags.append(RegimeFlag(Regime.LIMIT_REGIME, margin))

    if p.lambda_pump > 0 and p.g42 > 0:
        lambda0 = (p.g41 / p.g42) ** 2 * p.gamma23
        fast = min(p.gamma41, p.gamma42)
        if p.lambda_pump > lambda0 and p.lambda_pump < fast:
            low = p.lambda_pump / lambda0 if lambda0 > 0 else math.inf
            flags.append(
                RegimeFlag(Regime.PUMP_REGIME, min(low, fast / p.lambda_pump))
            )

    return flags


def damping_table(p: SystemParams) -> DampingTable:
    """Per-state total decay rates and the coherence damping table.

    State |3> is the ground state and does not decay; |4> decays through
    both of its channels.
    """
    check_params(p)
    return DampingTable(
        gamma_total=(p.gamma13, p.gamma23, 0.0, p.gamma41 + p.gamma42)
    )
