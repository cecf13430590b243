"""Parameter studies: vacuum-amplitude scans, zero refinement, radii and peak separation."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .coherent import state_fidelity
from .errors import DomainError, KerrCatError
from .kerr import SchemeConfig, kerr_amplitudes
from .scheme import CSSLabel, prepare, target_css

_SQRT2 = math.sqrt(2.0)
ZERO_THRESHOLD = 1e-3
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ScanPoint:
    alpha: float
    x_m: float
    vacuum_ratio: float
    secondary_ratio: float
    fidelity: float
    density: float
    error: str | None = None


@dataclass(frozen=True)
class RadiiReport:
    alpha: float
    n_components: int
    radii: tuple[float, ...]
    multiplicity: tuple[int, ...]
    separations: tuple[tuple[int, ...], ...]  # |k - l| values giving each radius


@dataclass(frozen=True)
class Separability:
    pairs: dict = field(repr=False)
    target_min_separation: float  # to the other CSS peaks
    target_min_vacuum_separation: float  # to the k = l (vacuum channel) peaks


def circle_radii(alpha: float, N: int) -> RadiiReport:
    """Radii alpha sqrt(1 - cos(2 pi (k - l) / N)) of the mode-4 CSS circles."""
    if N < 3 or N % 2 == 0:
        raise DomainError(f"circle radii need odd N >= 3, got {N}")
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    n = (N - 1) // 2
    radii, mult, seps = [], [], []
    # |k - l| = j and N - j give the same chord
    for j in range(1, n + 1):
        radii.append(alpha * math.sqrt(1.0 - math.cos(2.0 * math.pi * j / N)))
        classes = (j, N - j)
        seps.append(classes)
        mult.append(sum(N - s for s in classes))
    return RadiiReport(alpha, N, tuple(radii), tuple(mult), tuple(seps))


def evaluate(config: SchemeConfig, x_m: float | None = None) -> ScanPoint:
    """One pipeline run reduced to the quantities plotted against alpha."""
    try:
        res = prepare(config, x_m)
        target = CSSLabel.of(*config.target_pair)
        dt = res.d[target]
        vac = abs(res.d0 / dt)
        others = [abs(v / dt) for lab, v in res.d.items() if lab != target]
        sec = max(others) if others else 0.0
        fid = state_fidelity(res.state4, target_css(config))
        return ScanPoint(config.alpha, res.x_m, vac, sec, fid, res.density)
    except (KerrCatError, ZeroDivisionError, ValueError) as exc:
        nan = float("nan")
        return ScanPoint(config.alpha, nan if x_m is None else x_m, nan, nan, nan, nan, error=f"{type(exc).__name__}: {exc}")


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("KERRCAT_THREADS", "1")))
    except ValueError:
        return 1


def scan_vacuum(
    alpha_min: float,
    alpha_max: float,
    steps: int,
    config: SchemeConfig,
    track_peak: bool = True,
    x_m: float | None = None,
) -> list[ScanPoint]:
    """Run the pipeline on an even alpha grid.

    With ``track_peak`` the homodyne outcome follows the target peak at each
    alpha; otherwise the fixed ``x_m`` is used for every point.
    """
    if alpha_min == alpha_max:
        alphas = np.array([alpha_min])
    else:
        if not 0 < alpha_min < alpha_max or steps < 2:
            raise DomainError(f"invalid scan range [{alpha_min}, {alpha_max}] with {steps} steps")
        alphas = np.linspace(alpha_min, alpha_max, steps)
    if not track_peak and x_m is None:
        raise DomainError("a fixed-outcome scan needs x_m")
    fixed = None if track_peak else x_m

    def run(a):
        return evaluate(config.with_alpha(float(a)), fixed)

    workers = _workers()
    if workers == 1:
        return [run(a) for a in alphas]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, alphas))


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-6) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on [a, b]; returns (argmin, min)."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def local_minima(values: Sequence[float]) -> list[int]:
    """Indices i with values[i-1] > values[i] <= values[i+1] (finite values only)."""
    v = np.asarray(values, dtype=float)
    return [
        i
        for i in range(1, len(v) - 1)
        if np.isfinite(v[i - 1 : i + 2]).all() and v[i - 1] > v[i] <= v[i + 1]
    ]


@dataclass(frozen=True)
class VacuumZero:
    alpha: float
    vacuum_ratio: float
    bracket: tuple[float, float]


def find_vacuum_zeros(
    points: Sequence[ScanPoint],
    config: SchemeConfig,
    track_peak: bool = True,
    x_m: float | None = None,
    tol: float = 1e-6,
    threshold: float = ZERO_THRESHOLD,
) -> list[VacuumZero]:
    """Refine every bracketed minimum of the vacuum ratio by golden-section search.

    Minima whose refined ratio stays below ``threshold`` count as zeros.
    """
    if len(points) < 3:
        return []
    fixed = None if track_peak else x_m

    def ratio(a):
        return evaluate(config.with_alpha(a), fixed).vacuum_ratio

    zeros = []
    for i in local_minima([p.vacuum_ratio for p in points]):
        lo, hi = points[i - 1].alpha, points[i + 1].alpha
        a_star, r_star = golden_section(ratio, lo, hi, tol)
        if r_star < threshold and lo < a_star < hi:
            zeros.append(VacuumZero(a_star, r_star, (lo, hi)))
    return zeros


def decay_profile(config: SchemeConfig, alphas: Sequence[float]) -> list[tuple[float, float]]:
    """Largest non-target CSS ratio at each alpha (tracked peak)."""
    alphas = list(alphas)
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise DomainError("alphas must be strictly increasing")
    return [(a, evaluate(config.with_alpha(a)).secondary_ratio) for a in alphas]


def envelope(profile: Sequence[tuple[float, float]], window: float = 0.5) -> list[float]:
    """Maximum of the profile over consecutive alpha windows of width ``window``."""
    if not profile:
        return []
    start = profile[0][0]
    bins: dict[int, float] = {}
    for a, v in profile:
        j = int(math.floor((a - start) / window + 1e-12))
        bins[j] = max(bins.get(j, -math.inf), v)
    return [bins[j] for j in sorted(bins)]


def is_non_increasing(values: Sequence[float]) -> bool:
    return all(b <= a for a, b in zip(values, values[1:]))


def gaussian_overlap(separation: float) -> float:
    """Overlap integral of two variance-1/2 quadrature Gaussians a distance ``separation`` apart."""
    return math.exp(-separation**2 / 4.0)


def mode3_peaks(config: SchemeConfig) -> dict[tuple[int, int], float]:
    """Quadrature mean of each distinct mode-3 component (alpha_k + alpha_l)/sqrt2, k <= l."""
    amps = kerr_amplitudes(config.alpha, config.n_components)
    n = config.n_components
    return {
        (k, l): float((amps[k - 1] + amps[l - 1]).real)
        for k in range(1, n + 1)
        for l in range(k, n + 1)
    }


def mode3_separability(config: SchemeConfig) -> Separability:
    """Pairwise separations and Gaussian overlaps of the mode-3 quadrature peaks."""
    peaks = mode3_peaks(config)
    keys = list(peaks)
    pairs = {}
    for i, p in enumerate(keys):
        for q in keys[i + 1 :]:
            sep = abs(peaks[p] - peaks[q])
            pairs[(p, q)] = (sep, gaussian_overlap(sep))
    target = tuple(config.target_pair)
    css = [abs(peaks[target] - v) for key, v in peaks.items() if key != target and key[0] != key[1]]
    vac = [abs(peaks[target] - v) for key, v in peaks.items() if key[0] == key[1]]
    return Separability(pairs, min(css), min(vac))
