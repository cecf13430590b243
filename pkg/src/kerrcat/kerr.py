"""Self-Kerr decomposition of a coherent state into N coherent components.

Labels k run 1..N as in the physics literature; arrays are stored 0-based, so
component k lives at index ``k - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .coherent import (
    FockVector,
    SingleModeState,
    _frozen,
    check_truncation,
    coherent_fock_amplitudes,
    TRUNCATION_TOL,
)
from .errors import DomainError


class KerrConvention(NamedTuple):
    """Diagonal Kerr phase exp(i * theta_sign * pi/N * f(n)) followed by a rotation exp(i * rotation * n)."""

    phase: str
    theta_sign: int
    rotation: float
    min_fidelity: float


# Found by brute-force search over f(n) in {n^2, n(n-1)}, theta = +-pi/N and
# quarter-turn rotations, against kerr_state for (alpha, N) in {1,2,3} x {1,2,3,5}.
KERR_CONVENTION = KerrConvention(phase="n^2", theta_sign=+1, rotation=-math.pi / 2, min_fidelity=1.0 - 1e-15)


@dataclass(frozen=True)
class KerrCoefficients:
    n_components: int
    coeffs: np.ndarray
    phases: np.ndarray

    def c(self, k: int) -> complex:
        """Coefficient c_k with 1-based ``k``."""
        return complex(self.coeffs[k - 1])


@dataclass(frozen=True)
class SchemeConfig:
    """Input amplitude, number of Kerr components and the CSS pair to be prepared."""

    alpha: float
    n_components: int
    target_pair: tuple[int, int]

    def __post_init__(self):
        k, l = self.target_pair
        n = self.n_components
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be positive and finite, got {self.alpha}")
        if n < 3 or n % 2 == 0:
            raise DomainError(f"the scheme needs an odd number of components N >= 3, got {n}")
        if not 1 <= k < l <= n:
            raise DomainError(f"target pair must satisfy 1 <= k < l <= N={n}, got ({k}, {l})")

    def with_alpha(self, alpha: float) -> "SchemeConfig":
        return SchemeConfig(alpha, self.n_components, self.target_pair)


def kerr_coefficients(N: int) -> KerrCoefficients:
    """c_k = (1/N) sum_{l=0}^{N-1} (-1)^l exp(-i pi l (2k - l) / N), k = 1..N."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    k = np.arange(1, N + 1)[:, None]
    l = np.arange(N)[None, :]
    sign = np.where(l % 2 == 0, 1.0, -1.0)
    coeffs = (sign * np.exp(-1j * np.pi * l * (2 * k - l) / N)).sum(axis=1) / N
    mods = np.abs(coeffs)
    if np.max(np.abs(mods - 1.0 / math.sqrt(N))) > 1e-12:
        raise ArithmeticError(f"Kerr coefficients lost unit modulus for N={N}")
    return KerrCoefficients(N, _frozen(coeffs), _frozen(np.angle(coeffs), dtype=float))


def kerr_amplitudes(alpha: float, N: int) -> np.ndarray:
    """alpha_k = i alpha exp(2 pi i k / N), k = 1..N (0-based array)."""
    k = np.arange(1, N + 1)
    return 1j * alpha * np.exp(2j * np.pi * k / N)


def kerr_state(alpha: float, N: int) -> SingleModeState:
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"alpha must be positive and finite, got {alpha}")
    coeffs = kerr_coefficients(N).coeffs
    return SingleModeState.from_terms(zip(coeffs, kerr_amplitudes(alpha, N)))


def kerr_evolution_oracle(alpha: float, N: int, n_max: int | None = None, tol: float = TRUNCATION_TOL) -> FockVector:
    """Evolve |alpha> in the Fock basis under the Kerr phase of :data:`KERR_CONVENTION`."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if n_max is None:
        m = alpha**2
        n_max = math.ceil(m + 10.0 * math.sqrt(m) + 20.0)
    n = np.arange(n_max + 1)
    phase = n**2 if KERR_CONVENTION.phase == "n^2" else n * (n - 1)
    theta = KERR_CONVENTION.theta_sign * math.pi / N
    # reduce mod 2N before multiplying so large n^2 keeps full phase precision
    reduced = np.mod(phase, 2 * N)
    vec = coherent_fock_amplitudes(alpha, n_max) * np.exp(1j * (theta * reduced + KERR_CONVENTION.rotation * n))
    check_truncation(vec, tol)
    return FockVector(_frozen(vec))
