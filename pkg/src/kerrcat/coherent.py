"""Closed-form algebra of finite coherent-state superpositions.

A coherent amplitude is represented by a plain Python ``complex``. Quadratures
follow x = (a + a^dagger)/sqrt(2), so ``|b>`` has mean position sqrt(2) Re b,
mean momentum sqrt(2) Im b and variance 1/2 in each.

The Fock-basis expansion in this module is only used as a brute-force check
of the Gram-matrix formulas.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, NumericalError, TruncationError

MERGE_TOL = 1e-12
TRUNCATION_TOL = 1e-10
_IMAG_RESIDUE = 1e-10
_SQRT2 = math.sqrt(2.0)


def _as_amplitude(a) -> complex:
    a = complex(a)
    if not cmath.isfinite(a):
        raise DomainError(f"non-finite amplitude {a!r}")
    return a


def _merge(keys: list[tuple[complex, ...]], coeffs: list[complex], tol: float):
    """Collapse terms whose amplitude tuples agree within ``tol``."""
    out_keys: list[tuple[complex, ...]] = []
    out_coeffs: list[complex] = []
    for key, c in zip(keys, coeffs):
        for i, other in enumerate(out_keys):
            if all(abs(u - v) <= tol for u, v in zip(key, other)):
                out_coeffs[i] += c
                break
        else:
            out_keys.append(key)
            out_coeffs.append(c)
    return out_keys, out_coeffs


def _frozen(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SingleModeState:
    """Finite superposition ``sum_j coeffs[j] |amps[j]>`` (not necessarily normalized)."""

    coeffs: np.ndarray
    amps: np.ndarray

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[complex, complex]], merge_tol: float = MERGE_TOL):
        """Build a state from ``(coeff, amplitude)`` pairs, merging repeated amplitudes."""
        keys, coeffs = [], []
        for c, a in terms:
            c = complex(c)
            if not cmath.isfinite(c):
                raise DomainError(f"non-finite coefficient {c!r}")
            keys.append((_as_amplitude(a),))
            coeffs.append(c)
        if not keys:
            raise DomainError("a state needs at least one term")
        keys, coeffs = _merge(keys, coeffs, merge_tol)
        return cls(_frozen(coeffs), _frozen([k[0] for k in keys]))

    @classmethod
    def coherent(cls, a: complex, coeff: complex = 1.0):
        return cls.from_terms([(coeff, a)])

    @classmethod
    def vacuum(cls):
        return cls.coherent(0.0)

    @property
    def terms(self) -> list[tuple[complex, complex]]:
        return [(complex(c), complex(a)) for c, a in zip(self.coeffs, self.amps)]

    def __len__(self):
        return len(self.coeffs)

    def scaled(self, factor: complex) -> "SingleModeState":
        return SingleModeState(_frozen(self.coeffs * factor), self.amps)

    def normalized(self) -> "SingleModeState":
        return self.scaled(1.0 / state_norm(self))

    def reflected(self) -> "SingleModeState":
        """Point reflection amp -> -amp in phase space."""
        return SingleModeState(self.coeffs, _frozen(-self.amps))


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Finite superposition ``sum_j coeffs[j] |amps3[j]>|amps4[j]>``."""

    coeffs: np.ndarray
    amps3: np.ndarray
    amps4: np.ndarray

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[complex, complex, complex]], merge_tol: float = MERGE_TOL):
        keys, coeffs = [], []
        for c, a3, a4 in terms:
            c = complex(c)
            if not cmath.isfinite(c):
                raise DomainError(f"non-finite coefficient {c!r}")
            keys.append((_as_amplitude(a3), _as_amplitude(a4)))
            coeffs.append(c)
        if not keys:
            raise DomainError("a state needs at least one term")
        keys, coeffs = _merge(keys, coeffs, merge_tol)
        return cls(_frozen(coeffs), _frozen([k[0] for k in keys]), _frozen([k[1] for k in keys]))

    @property
    def terms(self) -> list[tuple[complex, complex, complex]]:
        return [(complex(c), complex(a), complex(b)) for c, a, b in zip(self.coeffs, self.amps3, self.amps4)]

    def __len__(self):
        return len(self.coeffs)


@dataclass(frozen=True, eq=False)
class FockVector:
    """Photon-number amplitudes ``coeffs[n]`` for n = 0..n_max."""

    coeffs: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def coherent_overlap(a: complex, b: complex) -> complex:
    """Return <a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)."""
    a, b = complex(a), complex(b)
    if a == b:
        return 1.0 + 0.0j
    return cmath.exp(-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2 + a.conjugate() * b)


def overlap_matrix(amps_left, amps_right) -> np.ndarray:
    """Matrix of overlaps <left_i|right_j>, vectorized form of :func:`coherent_overlap`."""
    a = np.asarray(amps_left, dtype=complex)[:, None]
    b = np.asarray(amps_right, dtype=complex)[None, :]
    return np.exp(-0.5 * np.abs(a) ** 2 - 0.5 * np.abs(b) ** 2 + a.conj() * b)


def gram_matrix(amps) -> np.ndarray:
    g = overlap_matrix(amps, amps)
    np.fill_diagonal(g, 1.0)
    return g


def quadrature_wavefunction(x, b: complex):
    """Position-quadrature wavefunction <x|b> of a coherent state.

    Accepts scalar or array ``x``. The phase includes the -i Re(b) Im(b) term
    so that the result is consistent with :func:`coherent_overlap`.
    """
    b = complex(b)
    x = np.asarray(x, dtype=float)
    out = math.pi ** -0.25 * np.exp(
        -0.5 * (x - _SQRT2 * b.real) ** 2 + 1j * (_SQRT2 * x * b.imag - b.real * b.imag)
    )
    return complex(out) if out.ndim == 0 else out


def log_quadrature_wavefunction(x: float, amps) -> np.ndarray:
    """Complex logarithm of <x|b> for each amplitude in ``amps`` (avoids underflow)."""
    b = np.asarray(amps, dtype=complex)
    return (
        -0.25 * math.log(math.pi)
        - 0.5 * (x - _SQRT2 * b.real) ** 2
        + 1j * (_SQRT2 * x * b.imag - b.real * b.imag)
    )


def inner_product(s1: SingleModeState, s2: SingleModeState) -> complex:
    """<s1|s2> evaluated through the overlap matrix of the two amplitude sets."""
    return complex(s1.coeffs.conj() @ overlap_matrix(s1.amps, s2.amps) @ s2.coeffs)


def _positive_real(value: complex, what: str) -> float:
    re, im = value.real, value.imag
    if not re > 0.0:
        raise NumericalError(f"{what} evaluated to {value!r}; the Gram form is not positive")
    if abs(im) > _IMAG_RESIDUE * re:
        raise NumericalError(f"{what} has imaginary residue {im:.3e} (real part {re:.3e})")
    return re


def state_norm(s: SingleModeState) -> float:
    """Norm of a (non-orthogonal) coherent superposition via its Gram matrix."""
    sq = complex(s.coeffs.conj() @ gram_matrix(s.amps) @ s.coeffs)
    return math.sqrt(_positive_real(sq, "squared norm"))


def two_mode_inner(t1: TwoModeState, t2: TwoModeState) -> complex:
    g = overlap_matrix(t1.amps3, t2.amps3) * overlap_matrix(t1.amps4, t2.amps4)
    return complex(t1.coeffs.conj() @ g @ t2.coeffs)


def two_mode_norm(t: TwoModeState) -> float:
    return math.sqrt(_positive_real(two_mode_inner(t, t), "squared norm"))


def state_fidelity(s1: SingleModeState, s2: SingleModeState) -> float:
    """|<s1|s2>|^2 / (||s1||^2 ||s2||^2), clipped to [0, 1]."""
    n1, n2 = state_norm(s1), state_norm(s2)
    f = abs(inner_product(s1, s2)) ** 2 / (n1 * n2) ** 2
    return min(max(f, 0.0), 1.0)


def fock_cutoff(s: SingleModeState) -> int:
    """Cutoff ceil(m + 10 sqrt(m) + 20), m the largest mean photon number among the terms."""
    m = float(np.max(np.abs(s.amps) ** 2))
    return math.ceil(m + 10.0 * math.sqrt(m) + 20.0)


def coherent_fock_amplitudes(a: complex, n_max: int) -> np.ndarray:
    """<n|a> for n = 0..n_max, accumulated in log space."""
    n = np.arange(n_max + 1)
    if a == 0:
        return (n == 0).astype(complex)
    log_amp = -0.5 * abs(a) ** 2 + n * np.log(complex(a)) - 0.5 * gammaln(n + 1)
    return np.exp(log_amp)


def check_truncation(vec: np.ndarray, tol: float = TRUNCATION_TOL) -> None:
    total = float(np.sum(np.abs(vec) ** 2))
    tail = float(np.abs(vec[-1]) ** 2)
    if total > 0 and tail > tol * total:
        raise TruncationError(
            f"last Fock level n={len(vec) - 1} holds {tail / total:.2e} of the norm (limit {tol:.0e})"
        )


def fock_expansion(s: SingleModeState, n_max: int | None = None, tol: float = TRUNCATION_TOL) -> FockVector:
    """Expand a coherent superposition in the photon-number basis up to ``n_max``."""
    if n_max is None:
        n_max = fock_cutoff(s)
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    vec = np.zeros(n_max + 1, dtype=complex)
    for c, a in zip(s.coeffs, s.amps):
        vec += c * coherent_fock_amplitudes(a, n_max)
    check_truncation(vec, tol)
    return FockVector(_frozen(vec))


def fock_fidelity(f1: FockVector, f2: FockVector) -> float:
    n = min(len(f1.coeffs), len(f2.coeffs))
    ov = np.vdot(f1.coeffs[:n], f2.coeffs[:n])
    return float(abs(ov) ** 2 / (f1.norm() ** 2 * f2.norm() ** 2))
