"""Susceptibility, dispersion slope, group index and spectral features.

The probe-transition coherence from either the numeric solver or one of
the closed forms is converted into the complex susceptibility
chi = chi' + i*chi''; chi'' > 0 is absorption, chi'' < 0 gain.  On top of
that sit numeric derivative and root-finding utilities: the dispersion
slope (central differences with step-halving verification), the group
index, the detunings of vanishing absorption, and the pump strength at
which the narrow absorption feature turns into gain.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .analytic import (
    rho23_incoherent,
    rho23_limit,
    rho23_weak_probe,
    spike_half_width,
)
from .errors import ConfigError, NumericError, ParameterError
from .model import MediumParams, SystemParams
from .steady_state import steady_state

log = logging.getLogger(__name__)

SPEED_OF_LIGHT = 299792458.0  # m/s

# Verified upper bound on |Im chi| at a reported zero crossing; well below
# the ~1e-4 feature amplitudes of the spectra.
ZERO_IM_TOL = 1e-8
# |Im chi| below this is numerical zero and carries no usable sign.
SIGN_FLOOR = 1e-12
ZERO_REL_TOL = 1e-6
THRESHOLD_REL_TOL = 1e-3
SCAN_POINTS = 200
SLOPE_AGREEMENT = 0.05


class Method(str, Enum):
    """Provenance of a susceptibility value."""

    NUMERIC = "NUMERIC"
    ANALYTIC_FULL = "ANALYTIC_FULL"
    ANALYTIC_LIMIT = "ANALYTIC_LIMIT"
    ANALYTIC_PUMP = "ANALYTIC_PUMP"


@dataclass(frozen=True)
class ChiPoint:
    """Complex susceptibility at one probe detuning, tagged with how it
    was computed."""

    delta_p: float
    chi: complex
    method: Method


@dataclass(frozen=True)
class FeatureReport:
    """Located spectral features: sorted zero-absorption detunings, the
    dispersion slope at chosen detunings, and the gain-onset pump rate."""

    zero_crossings: list[float]
    slope_at: dict[float, float]
    gain_threshold: float | None


def probe_coherence(p: SystemParams, method: Method = Method.NUMERIC) -> complex:
    """Probe-transition coherence via the selected computation route."""
    if method is Method.NUMERIC:
        return steady_state(p).element(2, 3)
    if method is Method.ANALYTIC_FULL:
        return rho23_weak_probe(p)
    if method is Method.ANALYTIC_LIMIT:
        return rho23_limit(p)
    if method is Method.ANALYTIC_PUMP:
        return rho23_incoherent(p)
    raise ValueError(f"unknown method {method!r}")


def chi_prefactor(m: MediumParams) -> float:
    """Scale factor between the normalized coherence and the
    susceptibility: 3 N lambda_p^3 / (4 pi^2) * (gamma23/gamma)."""
    m.check()
    return (
        3.0
        * m.number_density
        * m.probe_wavelength**3
        / (4.0 * math.pi**2)
        * m.gamma23_over_gamma
    )


def susceptibility(rho23: complex, m: MediumParams, g_p: float) -> complex:
    """Linear probe susceptibility from the probe coherence.

    ``g_p`` is in units of the reference rate, so the coherence is
    normalized by it directly.
    """
    if not g_p > 0:
        raise ParameterError("g_p must be > 0 for susceptibility", code="NEGATIVE_RABI")
    return chi_prefactor(m) * rho23 / g_p


def chi_at(
    p: SystemParams,
    m: MediumParams,
    delta_p: float | None = None,
    method: Method = Method.NUMERIC,
) -> complex:
    """Susceptibility at one probe detuning (default: the one in ``p``)."""
    if delta_p is not None:
        p = replace(p, delta_p=delta_p)
    return susceptibility(probe_coherence(p, method), m, p.g_p)


def chi_spectrum(
    p: SystemParams,
    m: MediumParams,
    grid: Sequence[float],
    method: Method = Method.NUMERIC,
) -> list[ChiPoint]:
    """Susceptibility over a sorted detuning grid.

    Points where the chosen route fails (degenerate denominator, singular
    solve) are skipped with a log entry instead of aborting the scan; the
    returned list preserves grid order.
    """
    if len(grid) == 0:
        raise ConfigError("detuning grid is empty", code="RANGE_ERROR")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ConfigError("detuning grid must be sorted", code="RANGE_ERROR")
    points: list[ChiPoint] = []
    for d in grid:
        try:
            points.append(ChiPoint(delta_p=d, chi=chi_at(p, m, d, method), method=method))
        except NumericError as exc:
            log.debug("skipping delta_p=%g: %s (%s)", d, exc, exc.code)
    return points


def default_step(p: SystemParams) -> float:
    """Finite-difference step resolving the narrowest spectral scale:
    1e-2 times the smaller of the pump rate and the spike half width,
    falling back to 1e-3 when neither is positive."""
    scales = [p.lambda_pump]
    if p.g42 > 0:
        scales.append(spike_half_width(p))
    positive = [s for s in scales if s > 0]
    return 1e-2 * min(positive) if positive else 1e-3


def dispersion_slope(
    p: SystemParams,
    m: MediumParams,
    delta_p: float,
    h: float | None = None,
    method: Method = Method.NUMERIC,
    chi_real: Callable[[float], float] | None = None,
) -> tuple[float, float]:
    """Slope of the dispersion chi' with respect to the probe detuning.

    Central difference at steps h and h/2; the step-halving (Richardson)
    combination supplies the returned value and a truncation-error
    estimate.  ``chi_real`` may inject a dispersion function directly,
    used for self-tests against known derivatives.

    Raises ``STEP_TOO_COARSE`` when the two step sizes disagree by more
    than 5% relative, i.e. when h does not resolve the local feature.
    """
    if h is None:
        h = default_step(p)
    if not h > 0:
        raise ConfigError("finite-difference step must be > 0", code="RANGE_ERROR")
    if chi_real is None:
        def chi_real(d: float) -> float:
            return chi_at(p, m, d, method).real

    d1 = (chi_real(delta_p + h) - chi_real(delta_p - h)) / (2 * h)
    d2 = (chi_real(delta_p + h / 2) - chi_real(delta_p - h / 2)) / h
    scale = max(abs(d1), abs(d2))
    if scale > 0 and abs(d1 - d2) / scale > SLOPE_AGREEMENT:
        raise NumericError(
            f"slope estimates at h and h/2 disagree by {abs(d1 - d2) / scale:.1%}",
            code="STEP_TOO_COARSE",
        )
    return (4 * d2 - d1) / 3, abs(d2 - d1) / 3


def group_index(
    p: SystemParams,
    m: MediumParams,
    delta_p: float,
    h: float | None = None,
    method: Method = Method.NUMERIC,
    chi_real: Callable[[float], float] | None = None,
) -> float:
    """Group index n_g = 1 + 2 pi chi' + 2 pi omega_p dchi'/domega_p.

    The detuning derivative is converted to a frequency derivative with
    the user-supplied reference rate in rad/s; negative values (negative
    group velocity) are legitimate output.
    """
    if not m.gamma_si > 0:
        raise ConfigError(
            "gamma_SI must be supplied (> 0) for the group index",
            code="RANGE_ERROR",
        )
    if chi_real is None:
        def chi_real(d: float) -> float:
            return chi_at(p, m, d, method).real

    omega_p = 2 * math.pi * SPEED_OF_LIGHT / m.probe_wavelength
    slope, _ = dispersion_slope(p, m, delta_p, h=h, method=method, chi_real=chi_real)
    chi_prime = chi_real(delta_p)
    return 1.0 + 2 * math.pi * chi_prime + 2 * math.pi * omega_p * slope / m.gamma_si


def _first_sign_change(
    xs: np.ndarray, values: np.ndarray
) -> tuple[float, float] | None:
    """First adjacent pair with strictly opposite-signed values, ignoring
    numerical zeros."""
    signs = np.where(np.abs(values) <= SIGN_FLOOR, 0.0, np.sign(values))
    for k in range(len(xs) - 1):
        if signs[k] * signs[k + 1] < 0:
            return float(xs[k]), float(xs[k + 1])
    return None


def auto_zero_bracket(p: SystemParams) -> tuple[float, float]:
    """Default search interval for a vanishing-absorption detuning:
    (0, 10x the larger of the pump rate and the spike half width]."""
    scale = p.lambda_pump
    if p.g42 > 0:
        scale = max(scale, spike_half_width(p))
    if scale <= 0:
        raise NumericError(
            "no narrow feature scale to bracket a zero crossing",
            code="NO_SIGN_CHANGE",
        )
    return (0.0, 10.0 * scale)


def find_absorption_zero(
    p: SystemParams,
    m: MediumParams,
    bracket: tuple[float, float],
) -> float:
    """Probe detuning at which the absorption chi'' crosses zero.

    A coarse sign scan of the bracket locates the first crossing, which
    bisection then refines to relative tolerance 1e-6.  Uses the numeric
    route only: the crossing arises from the interplay of the gain feature
    with the Autler-Townes background, which no single closed form
    captures.  Raises ``NO_SIGN_CHANGE`` when chi'' is single-signed over
    the bracket (pump below the onset of transparency).
    """
    lo, hi = bracket
    if not hi > lo:
        raise ConfigError("bracket must satisfy lo < hi", code="RANGE_ERROR")

    def im_chi(d: float) -> float:
        return chi_at(p, m, d, Method.NUMERIC).imag

    xs = np.linspace(lo, hi, SCAN_POINTS + 1)
    pair = _first_sign_change(xs, np.array([im_chi(x) for x in xs]))
    if pair is None:
        raise NumericError(
            "absorption does not change sign over the bracket",
            code="NO_SIGN_CHANGE",
        )
    a, b = pair
    fa = im_chi(a)
    for _ in range(200):
        mid = 0.5 * (a + b)
        if (b - a) <= ZERO_REL_TOL * max(abs(a), abs(b)):
            break
        fm = im_chi(mid)
        if fa * fm <= 0:
            b = mid
        else:
            a, fa = mid, fm
    root = 0.5 * (a + b)
    if abs(im_chi(root)) > ZERO_IM_TOL:
        raise NumericError(
            "zero crossing did not verify below tolerance", code="NO_CONVERGENCE"
        )
    return root


def find_absorption_zero_auto(
    p: SystemParams,
    m: MediumParams,
    side: int = +1,
    max_expansions: int = 3,
) -> float:
    """Locate a vanishing-absorption detuning without a user bracket.

    Starts from the automatic bracket and widens it by decades when no
    sign change is found: for strong drives the crossing sits many gain
    half widths out (the gain wing decays slowly against a background
    suppressed by optical pumping), beyond any fixed small multiple of
    the feature scale.  ``side`` selects the positive or negative
    detuning half-axis.
    """
    lo, hi = auto_zero_bracket(p)
    for _ in range(max_expansions + 1):
        bracket = (lo, hi) if side >= 0 else (-hi, -lo)
        try:
            return find_absorption_zero(p, m, bracket)
        except NumericError as exc:
            if exc.code != "NO_SIGN_CHANGE":
                raise
            hi *= 10.0
    raise NumericError(
        "no vanishing-absorption detuning up to the expanded bracket",
        code="NO_SIGN_CHANGE",
    )


def find_gain_threshold(
    p: SystemParams,
    m: MediumParams,
    lambda_range: tuple[float, float],
) -> float:
    """Pump rate at which the resonant absorption turns into gain.

    Scans chi''(delta_p = 0) over the pump range (log-spaced when the
    range is positive), then bisects the first sign change to relative
    tolerance 1e-3.  Raises ``NO_SIGN_CHANGE`` when the resonant response
    never inverts, e.g. without the coupling field there is no feature to
    invert.
    """
    lo, hi = lambda_range
    if not hi > lo or lo < 0:
        raise ConfigError(
            "pump range must satisfy 0 <= lo < hi", code="RANGE_ERROR"
        )

    def im_chi(lam: float) -> float:
        return chi_at(replace(p, lambda_pump=lam), m, 0.0, Method.NUMERIC).imag

    if lo > 0:
        xs = np.geomspace(lo, hi, SCAN_POINTS + 1)
    else:
        xs = np.linspace(lo, hi, SCAN_POINTS + 1)
    pair = _first_sign_change(xs, np.array([im_chi(x) for x in xs]))
    if pair is None:
        raise NumericError(
            "resonant absorption does not change sign over the pump range",
            code="NO_SIGN_CHANGE",
        )
    a, b = pair
    fa = im_chi(a)
    for _ in range(200):
        mid = 0.5 * (a + b)
        if (b - a) <= THRESHOLD_REL_TOL * max(abs(a), abs(b)):
            break
        fm = im_chi(mid)
        if fa * fm <= 0:
            b = mid
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def locate_features(
    p: SystemParams,
    m: MediumParams,
    zero_brackets: Sequence[tuple[float, float]] = (),
    slope_points: Sequence[float] = (),
    lambda_range: tuple[float, float] | None = None,
) -> FeatureReport:
    """Bundle the feature finders into one report.

    Brackets without a sign change are skipped; the crossings found are
    returned sorted and each satisfies |chi''| <= 1e-8.
    """
    crossings: list[float] = []
    for bracket in zero_brackets:
        try:
            crossings.append(find_absorption_zero(p, m, bracket))
        except NumericError as exc:
            if exc.code != "NO_SIGN_CHANGE":
                raise
            log.debug("bracket %s: %s", bracket, exc)
    slopes = {d: dispersion_slope(p, m, d)[0] for d in slope_points}
    threshold = None
    if lambda_range is not None:
        try:
            threshold = find_gain_threshold(p, m, lambda_range)
        except NumericError as exc:
            if exc.code != "NO_SIGN_CHANGE":
                raise
    return FeatureReport(
        zero_crossings=sorted(crossings), slope_at=slopes, gain_threshold=threshold
    )
