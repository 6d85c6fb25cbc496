"""Exact steady state of the four-level density matrix.

The equations of motion for the populations and the six independent
coherences, together with the Hermitian-conjugate equations and the trace
constraint, form a dense 16x16 complex linear system in all density-matrix
entries.  Solving it directly gives the steady state to all orders in the
probe field; the closed forms in :mod:`darkres.analytic` serve as
independent cross-checks.

Keeping all 16 entries (rather than a 15-real parametrization) means the
equations are transcribed one-to-one; Hermiticity of the solution is then
a non-trivial consistency check performed after the solve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError
from .model import DampingTable, SystemParams, check_params, damping_table

# Pivot smaller than this fraction of its column's initial magnitude is
# treated as a true singularity rather than conditioning noise.
PIVOT_RTOL = 1e-14

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POPULATION_TOL = 1e-8

# Row-major ordering of the 16 unknowns rho_ij.
UNKNOWNS: list[tuple[int, int]] = [(i, j) for i in (1, 2, 3, 4) for j in (1, 2, 3, 4)]

_COHERENCES = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def _index(i: int, j: int) -> int:
    return 4 * (i - 1) + (j - 1)


@dataclass(frozen=True)
class DensityMatrix:
    """4x4 complex steady-state density matrix (one-based state labels)."""

    rho: np.ndarray

    def element(self, i: int, j: int) -> complex:
        return complex(self.rho[i - 1, j - 1])

    def population(self, i: int) -> float:
        return float(self.rho[i - 1, i - 1].real)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.rho))

    def validate(self) -> None:
        """Check Hermiticity, unit trace and population bounds."""
        defect = np.max(np.abs(self.rho - self.rho.conj().T))
        if defect > HERMITICITY_TOL:
            raise NumericError(
                f"solution not Hermitian (defect {defect:.3e})", code="BAD_SOLUTION"
            )
        if abs(self.trace - 1.0) > TRACE_TOL:
            raise NumericError(
                f"trace deviates from 1 by {abs(self.trace - 1.0):.3e}",
                code="BAD_SOLUTION",
            )
        pops = np.diag(self.rho)
        if np.max(np.abs(pops.imag)) > HERMITICITY_TOL:
            raise NumericError("complex population", code="BAD_SOLUTION")
        if np.any(pops.real < -POPULATION_TOL) or np.any(
            pops.real > 1.0 + POPULATION_TOL
        ):
            raise NumericError("population outside [0, 1]", code="BAD_SOLUTION")


@dataclass(frozen=True)
class LinearProblem:
    """Dense complex system A x = b over the 16 density-matrix unknowns.

    Fifteen rows are steady-state equations; the row for rho_44 is the
    trace constraint (the only inhomogeneous one).
    """

    matrix: np.ndarray
    rhs: np.ndarray
    unknowns: list[tuple[int, int]]


def equations_of_motion(
    p: SystemParams, d: DampingTable
) -> dict[tuple[int, int], dict[tuple[int, int], complex]]:
    """Coefficients of d(rho_ij)/dt for the populations of |1>..|3> and the
    six independent coherences, as {equation: {unknown: coefficient}}.

    The Rabi frequencies are real by model invariant, so conjugated
    couplings coincide with the couplings themselves.  The incoherent pump
    enters the population exchange 2<->3 at rate 2*lambda and damps the
    coherences involving those states (twice as fast for the 2-3 coherence,
    which connects two pumped states).
    """
    g41, g42, gp = p.g41, p.g42, p.g_p
    d41, d42, dp = p.delta41, p.delta42, p.delta_p
    lam = p.lambda_pump
    G = d.big_gamma

    return {
        (1, 1): {
            (1, 1): -2 * p.gamma13,
            (4, 4): 2 * p.gamma41,
            (1, 4): -1j * g41,
            (4, 1): 1j * g41,
        },
        (2, 2): {
            (2, 2): -2 * p.gamma23 - 2 * lam,
            (4, 4): 2 * p.gamma42,
            (3, 3): 2 * lam,
            (3, 2): 1j * gp,
            (2, 3): -1j * gp,
            (2, 4): -1j * g42,
            (4, 2): 1j * g42,
        },
        (3, 3): {
            (1, 1): 2 * p.gamma13,
            (2, 2): 2 * p.gamma23 + 2 * lam,
            (3, 3): -2 * lam,
            (3, 2): -1j * gp,
            (2, 3): 1j * gp,
        },
        (1, 2): {
            (1, 2): -(G(1, 2) + 1j * d41 - 1j * d42 + lam),
            (1, 4): -1j * g42,
            (1, 3): -1j * gp,
            (4, 2): 1j * g41,
        },
        (1, 3): {
            (1, 3): -(G(1, 3) + 1j * d41 - 1j * d42 - 1j * dp + lam),
            (1, 2): -1j * gp,
            (4, 3): 1j * g41,
        },
        (1, 4): {
            (1, 4): -(G(1, 4) + 1j * d41),
            (1, 1): -1j * g41,
            (4, 4): 1j * g41,
            (1, 2): -1j * g42,
        },
        (2, 3): {
            (2, 3): -(G(2, 3) - 1j * dp + 2 * lam),
            (2, 2): -1j * gp,
            (3, 3): 1j * gp,
            (4, 3): 1j * g42,
        },
        (2, 4): {
            (2, 4): -(G(2, 4) + 1j * d42 + lam),
            (2, 2): -1j * g42,
            (4, 4): 1j * g42,
            (3, 4): 1j * gp,
            (2, 1): -1j * g41,
        },
        (3, 4): {
            (3, 4): -(G(3, 4) + 1j * dp + 1j * d42 + lam),
            (2, 4): 1j * gp,
            (3, 1): -1j * g41,
            (3, 2): -1j * g42,
        },
    }


def assemble(p: SystemParams, d: DampingTable) -> LinearProblem:
    """Build the 16x16 steady-state system.

    Rows: the three population equations, the six coherence equations and
    their Hermitian conjugates (conjugated coefficients on transposed
    unknowns), and the trace row in place of the rho_44 equation.
    """
    eqs = equations_of_motion(p, d)
    a = np.zeros((16, 16), dtype=complex)
    b = np.zeros(16, dtype=complex)

    for (i, j), coeffs in eqs.items():
        row = _index(i, j)
        for (k, l), c in coeffs.items():
            a[row, _index(k, l)] += c

    for (i, j) in _COHERENCES:
        row = _index(j, i)
        for (k, l), c in eqs[(i, j)].items():
            a[row, _index(l, k)] += np.conj(c)

    trace_row = _index(4, 4)
    for i in (1, 2, 3, 4):
        a[trace_row, _index(i, i)] = 1.0
    b[trace_row] = 1.0

    return LinearProblem(matrix=a, rhs=b, unknowns=list(UNKNOWNS))


def solve_linear(lp: LinearProblem) -> np.ndarray:
    """Solve the dense complex system by Gaussian elimination with partial
    pivoting, followed by one step of iterative refinement.

    Raises ``SINGULAR`` when a pivot falls below ``PIVOT_RTOL`` times the
    largest initial magnitude in its column; this signals a dark-state
    trapped or undriven configuration rather than round-off.
    """
    a0 = np.asarray(lp.matrix, dtype=complex)
    b0 = np.asarray(lp.rhs, dtype=complex)
    n = a0.shape[0]
    if a0.shape != (n, n) or b0.shape != (n,):
        raise ValueError("system must be square with matching right-hand side")
    col_scale = np.max(np.abs(a0), axis=0)

    def eliminate(rhs: np.ndarray) -> np.ndarray:
        a = a0.copy()
        b = rhs.copy()
        for k in range(n):
            piv = k + int(np.argmax(np.abs(a[k:, k])))
            if abs(a[piv, k]) <= PIVOT_RTOL * col_scale[k]:
                raise NumericError(
                    f"pivot {abs(a[piv, k]):.3e} below threshold in column {k}",
                    code="SINGULAR",
                )
            if piv != k:
                a[[k, piv]] = a[[piv, k]]
                b[[k, piv]] = b[[piv, k]]
            factors = a[k + 1 :, k] / a[k, k]
            a[k + 1 :, k:] -= factors[:, None] * a[k, k:]
            b[k + 1 :] -= factors * b[k]
        x = np.zeros(n, dtype=complex)
        for k in range(n - 1, -1, -1):
            x[k] = (b[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
        return x

    x = eliminate(b0)
    x += eliminate(b0 - a0 @ x)
    return x


def steady_state(p: SystemParams) -> DensityMatrix:
    """Solve for the steady-state density matrix of the driven system.

    Raises ``TRAPPED`` when nothing couples state |3>'s shelving cycle back
    out (no 1->3 decay, no coupling field, no pump): the long-time state
    then depends on the initial conditions and a steady-state solve is
    meaningless.  Propagates ``SINGULAR`` from degenerate configurations.
    """
    check_params(p)
    if p.gamma13 == 0.0 and p.g41 == 0.0 and p.lambda_pump == 0.0:
        raise NumericError(
            "population trapping: gamma13, g41 and the pump are all zero",
            code="TRAPPED",
        )
    lp = assemble(p, damping_table(p))
    x = solve_linear(lp)
    dm = DensityMatrix(rho=x.reshape(4, 4))
    dm.validate()
    return dm


def residual(p: SystemParams, dm: DensityMatrix) -> float:
    """Max norm of the time derivatives (and closure violation) at ``dm``.

    Zero for a true steady state; used as an a-posteriori solve check.
    """
    eqs = equations_of_motion(p, damping_table(p))
    rho = dm.rho
    worst = 0.0
    for coeffs in eqs.values():
        acc = 0.0 + 0.0j
        for (k, l), c in coeffs.items():
            acc += c * rho[k - 1, l - 1]
        worst = max(worst, abs(acc))
    closure = abs(rho[3, 3] - (1.0 - rho[0, 0] - rho[1, 1] - rho[2, 2]))
    return max(worst, float(closure))
