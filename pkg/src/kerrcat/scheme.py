"""Beam-splitter interference, homodyne conditioning and CSS decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .coherent import (
    MERGE_TOL,
    SingleModeState,
    TwoModeState,
    gram_matrix,
    log_quadrature_wavefunction,
    quadrature_wavefunction,
    state_norm,
)
from .errors import DegenerateOutcomeError, DomainError, UnrecognizedAmplitudeError
from .kerr import SchemeConfig, kerr_amplitudes, kerr_state

_SQRT2 = math.sqrt(2.0)
DEGENERATE_NORM = 1e-300
_LOG_DEGENERATE = math.log(DEGENERATE_NORM)


class CSSLabel(NamedTuple):
    k: int
    l: int

    @classmethod
    def of(cls, k: int, l: int) -> "CSSLabel":
        if k == l:
            raise DomainError(f"a CSS label needs two distinct indices, got ({k}, {l})")
        return cls(min(k, l), max(k, l))

    def __str__(self):
        return f"{self.k},{self.l}"


@dataclass(frozen=True, eq=False)
class ConditionalResult:
    """Mode-4 state after the homodyne outcome ``x_m`` in mode 3.

    ``d0`` and ``d`` are the vacuum and CSS amplitudes of the *normalized*
    ``state4``; only their ratios carry physical meaning. They are ``None``
    when no :class:`SchemeConfig` was supplied to label the amplitudes.
    """

    x_m: float
    density: float
    state4: SingleModeState
    d0: complex | None = None
    d: dict[CSSLabel, complex] | None = None

    def ratio(self, label, reference) -> float:
        """|d_label / d_reference|; ``label`` may be 0 for the vacuum channel."""
        num = self.d0 if label == 0 else self.d[CSSLabel.of(*label)]
        return abs(num / self.d[CSSLabel.of(*reference)])


def beam_splitter(state_a: SingleModeState, state_b: SingleModeState) -> TwoModeState:
    """Balanced beam splitter: |a>|b> -> |(a+b)/sqrt2>|(a-b)/sqrt2>, term by term."""
    terms = [
        (ca * cb, (a + b) / _SQRT2, (a - b) / _SQRT2)
        for ca, a in state_a.terms
        for cb, b in state_b.terms
    ]
    return TwoModeState.from_terms(terms)


def _conditioned_coeffs(two_mode: TwoModeState, x_m: float):
    """Mode-4 coefficients rescaled by exp(-shift), plus the shift (log scale)."""
    with np.errstate(divide="ignore"):
        logs = np.log(two_mode.coeffs.astype(complex)) + log_quadrature_wavefunction(x_m, two_mode.amps3)
    shift = float(np.max(logs.real))
    return np.exp(logs - shift), shift


def condition_on_quadrature(two_mode: TwoModeState, x_m: float, config: SchemeConfig | None = None) -> ConditionalResult:
    """Project mode 3 onto the quadrature eigenstate ``x_m`` and renormalize mode 4.

    The kernel is evaluated in log space, so outcomes far in the tails still
    give an exact normalized state as long as the unnormalized norm stays
    above 1e-300.
    """
    x_m = float(x_m)
    scaled, shift = _conditioned_coeffs(two_mode, x_m)
    unnormalized = SingleModeState.from_terms(zip(scaled, two_mode.amps4))
    norm_scaled = state_norm(unnormalized)
    log_norm = shift + math.log(norm_scaled)
    if log_norm < _LOG_DEGENERATE:
        raise DegenerateOutcomeError(f"outcome x_m={x_m} has norm exp({log_norm:.1f}) < {DEGENERATE_NORM:g}")
    state4 = unnormalized.scaled(1.0 / norm_scaled)
    density = math.exp(2.0 * log_norm)
    if config is None:
        return ConditionalResult(x_m, density, state4)
    d0, d = css_decompose(state4, config)
    return ConditionalResult(x_m, density, state4, d0, d)


def css_normalization(a: complex, b: complex) -> float:
    """N_CSS = (2 + 2 exp(-|a - b|^2))^(-1/2)."""
    return (2.0 + 2.0 * math.exp(-abs(a - b) ** 2)) ** -0.5


def css_state(a: complex, b: complex) -> SingleModeState:
    """Normalized even cat N_CSS (|(a-b)/sqrt2> + |(b-a)/sqrt2>)."""
    a, b = complex(a), complex(b)
    if abs(a - b) <= MERGE_TOL:
        raise DomainError("css_state needs distinct amplitudes; equal ones belong to the vacuum channel")
    beta = (a - b) / _SQRT2
    n = css_normalization(a, b)
    # canonical ordering makes css_state(a, b) and css_state(b, a) identical
    branches = sorted((beta, -beta), key=lambda z: (z.real, z.imag))
    return SingleModeState.from_terms([(n, branches[0]), (n, branches[1])])


def css_labels(n_components: int) -> list[CSSLabel]:
    return [CSSLabel(k, l) for k in range(1, n_components + 1) for l in range(k + 1, n_components + 1)]


def css_decompose(state4: SingleModeState, config: SchemeConfig):
    """Split a mode-4 state into vacuum amplitude ``d0`` and CSS amplitudes ``d[(k, l)]``.

    Each CSS_{k,l} contributes the branch pair +-(alpha_k - alpha_l)/sqrt2;
    the two branch coefficients are averaged and divided by N_CSS.
    """
    amps = kerr_amplitudes(config.alpha, config.n_components)
    tol = 1e-9 * config.alpha
    labels = css_labels(config.n_components)
    branch = {lab: (amps[lab.k - 1] - amps[lab.l - 1]) / _SQRT2 for lab in labels}
    plus = dict.fromkeys(labels, 0j)
    minus = dict.fromkeys(labels, 0j)
    d0 = 0j
    for c, a in state4.terms:
        if abs(a) <= tol:
            d0 += c
            continue
        for lab, beta in branch.items():
            if abs(a - beta) <= tol:
                plus[lab] += c
                break
            if abs(a + beta) <= tol:
                minus[lab] += c
                break
        else:
            raise UnrecognizedAmplitudeError(
                f"amplitude {a:.6g} matches no (k,l) pair for alpha={config.alpha}, N={config.n_components}"
            )
    d = {}
    for lab in labels:
        n = css_normalization(amps[lab.k - 1], amps[lab.l - 1])
        d[lab] = 0.5 * (plus[lab] + minus[lab]) / n
    return d0, d


def resynthesize(d0: complex, d: dict, config: SchemeConfig) -> SingleModeState:
    """Rebuild d0 |0> + sum d_kl |CSS_kl> as a coherent superposition."""
    amps = kerr_amplitudes(config.alpha, config.n_components)
    terms = [(d0, 0.0)]
    for lab, value in d.items():
        css = css_state(amps[lab.k - 1], amps[lab.l - 1])
        terms.extend((value * c, a) for c, a in css.terms)
    return SingleModeState.from_terms(terms)


def target_peak_quadrature(config: SchemeConfig) -> float:
    """Mean quadrature of the mode-3 component (alpha_k + alpha_l)/sqrt2 of the target pair."""
    k, l = config.target_pair
    amps = kerr_amplitudes(config.alpha, config.n_components)
    return float(_SQRT2 * ((amps[k - 1] + amps[l - 1]) / _SQRT2).real)


def double_kerr_state(config: SchemeConfig) -> TwoModeState:
    """Two identical Kerr states mixed on the balanced beam splitter."""
    s = kerr_state(config.alpha, config.n_components)
    return beam_splitter(s, s)


def prepare(config: SchemeConfig, x_m: float | None = None) -> ConditionalResult:
    """Full pipeline; ``x_m`` defaults to the target peak."""
    if x_m is None:
        x_m = target_peak_quadrature(config)
    return condition_on_quadrature(double_kerr_state(config), x_m, config)


def target_css(config: SchemeConfig) -> SingleModeState:
    k, l = config.target_pair
    amps = kerr_amplitudes(config.alpha, config.n_components)
    return css_state(amps[k - 1], amps[l - 1])


def quadrature_density(two_mode: TwoModeState, x) -> np.ndarray:
    """Born density of the mode-3 quadrature outcome at each point of ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    kernel = np.stack([quadrature_wavefunction(x, b) for b in two_mode.amps3], axis=1)
    v = kernel * two_mode.coeffs[None, :]
    g4 = gram_matrix(two_mode.amps4)
    p = np.einsum("xi,ij,xj->x", v.conj(), g4, v).real
    return np.clip(p, 0.0, None)


def density_grid(two_mode: TwoModeState, margin: float = 8.0, points_per_unit: float = 200.0):
    """Grid covering every mode-3 peak with ``margin``, resolved against interference fringes.

    The spacing adapts to the largest momentum difference between mode-3
    components, which sets the fastest oscillation of the density.
    """
    amps3 = two_mode.amps3
    reach = _SQRT2 * float(np.max(np.abs(amps3.real)))
    lo, hi = -reach - margin, reach + margin
    fringe_k = _SQRT2 * float(np.ptp(amps3.imag)) if len(amps3) > 1 else 0.0
    step = min(1.0 / points_per_unit, (2 * math.pi / max(fringe_k, 1e-12)) / 40.0)
    n = int(math.ceil((hi - lo) / step)) + 1
    x = np.linspace(lo, hi, n)
    return x, quadrature_density(two_mode, x)


def sample_homodyne(two_mode: TwoModeState, seed: int, count: int) -> np.ndarray:
    """Draw ``count`` quadrature outcomes in mode 3 by inverse-CDF sampling."""
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    x, p = density_grid(two_mode)
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (p[1:] + p[:-1]) * np.diff(x))])
    cdf /= cdf[-1]
    # drop flat stretches so the inverse map is single-valued
    keep = np.concatenate([[True], np.diff(cdf) > 0])
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    return np.interp(u, cdf[keep], x[keep])
