"""Phase-space data for coherent superpositions: constellations and Wigner grids.

Axes use the homodyne convention, x = sqrt2 Re(z) and p = sqrt2 Im(z), so a
coherent state |b> sits at (sqrt2 Re b, sqrt2 Im b).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .coherent import SingleModeState, state_norm
from .errors import DomainError, GridCoverageError

_SQRT2 = math.sqrt(2.0)
COVERAGE_TOL = 1e-2


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int = 256
    np: int = 256

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.p_min < self.p_max):
            raise DomainError(f"empty grid box {self}")
        if self.nx < 2 or self.np < 2:
            raise DomainError(f"grid needs at least 2 points per axis, got {self.nx}x{self.np}")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.np)


@dataclass(frozen=True, eq=False)
class WignerGrid:
    spec: GridSpec
    values: np.ndarray  # shape (nx, np)

    def integral(self) -> float:
        return float(np.trapezoid(np.trapezoid(self.values, self.spec.p, axis=1), self.spec.x))


def constellation(state: SingleModeState) -> list[tuple[complex, complex, float]]:
    """(amplitude, coefficient, |coefficient|^2) for each term, in term order."""
    return [(a, c, abs(c) ** 2) for c, a in state.terms]


def auto_grid(state: SingleModeState, margin: float = 5.0, n: int = 257) -> GridSpec:
    """Box symmetric about the origin enclosing every term's phase-space point plus ``margin``.

    An odd point count puts the origin on the grid.
    """
    x_reach = _SQRT2 * float(np.max(np.abs(state.amps.real))) + margin
    p_reach = _SQRT2 * float(np.max(np.abs(state.amps.imag))) + margin
    return GridSpec(-x_reach, x_reach, -p_reach, p_reach, n, n)


def _check_coverage(state: SingleModeState, spec: GridSpec, margin: float = 3.0) -> None:
    xs = _SQRT2 * state.amps.real
    ps = _SQRT2 * state.amps.imag
    inside = (
        xs.min() - margin >= spec.x_min
        and xs.max() + margin <= spec.x_max
        and ps.min() - margin >= spec.p_min
        and ps.max() + margin <= spec.p_max
    )
    if not inside:
        warnings.warn("grid does not cover the constellation with margin 3", stacklevel=3)


def wigner(state: SingleModeState, spec: GridSpec | None = None) -> WignerGrid:
    """Wigner function from the pairwise closed form for |a_j><a_k| terms.

    W_jk(z) = (1/pi) exp(-|a_j|^2/2 - |a_k|^2/2 + conj(a_k) a_j - 2 (conj(z) - conj(a_k)) (z - a_j)),
    with z = (x + i p)/sqrt2. The exponent is combined before exponentiating so
    large amplitudes never overflow.
    """
    if spec is None:
        spec = auto_grid(state)
    _check_coverage(state, spec)
    z = (spec.x[:, None] + 1j * spec.p[None, :]) / _SQRT2
    zc = z.conj()
    norm2 = state_norm(state) ** 2
    total = np.zeros(z.shape, dtype=complex)
    terms = state.terms
    for j, (cj, aj) in enumerate(terms):
        for k, (ck, ak) in enumerate(terms[j:], start=j):
            expo = -0.5 * abs(aj) ** 2 - 0.5 * abs(ak) ** 2 + ak.conjugate() * aj - 2.0 * (zc - ak.conjugate()) * (z - aj)
            contrib = cj * ck.conjugate() * np.exp(expo)
            # the (k, j) term is the complex conjugate of (j, k)
            total += contrib if k == j else 2.0 * contrib.real
    total /= math.pi * norm2
    residue = float(np.max(np.abs(total.imag)))
    scale = float(np.max(np.abs(total.real)))
    if residue > 1e-10 * max(scale, 1.0):
        raise ArithmeticError(f"Wigner function has imaginary residue {residue:.2e}")
    grid = WignerGrid(spec, total.real.copy())
    deviation = abs(grid.integral() - 1.0)
    if deviation > COVERAGE_TOL:
        raise GridCoverageError(f"grid integral deviates from 1 by {deviation:.3e}; enlarge the grid")
    return grid
