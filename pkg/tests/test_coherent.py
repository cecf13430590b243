import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from kerrcat import (
    NumericalError,
    SingleModeState,
    TruncationError,
    coherent_overlap,
    fock_expansion,
    quadrature_wavefunction,
    state_fidelity,
    state_norm,
)
from kerrcat.coherent import fock_cutoff, inner_product

from conftest import amplitudes, random_state


def fock_series_overlap(a, b, n_max=60):
    # <a|b> = e^{-|a|^2/2 - |b|^2/2} sum_n conj(a)^n b^n / n!
    total = sum((a.conjugate() * b) ** n / math.factorial(n) for n in range(n_max + 1))
    return math.exp(-abs(a) ** 2 / 2 - abs(b) ** 2 / 2) * total


def test_overlap_identity_cases():
    assert coherent_overlap(0, 0) == 1
    assert coherent_overlap(2 + 3j, 2 + 3j) == 1


def test_overlap_against_fock_series():
    expected = fock_series_overlap(0j, 1 + 0j, n_max=30)
    assert expected == pytest.approx(0.6065307, abs=1e-7)
    assert coherent_overlap(0, 1) == pytest.approx(expected, abs=1e-15)
    for a, b in [(0.3 - 1.1j, -0.7 + 0.2j), (1.5j, 2.0 - 0.5j)]:
        assert coherent_overlap(a, b) == pytest.approx(fock_series_overlap(a, b), abs=1e-13)


@given(amplitudes, amplitudes)
def test_overlap_hermitian_symmetry(a, b):
    assert abs(coherent_overlap(a, b) - coherent_overlap(b, a).conjugate()) < 1e-14


@given(amplitudes, amplitudes)
def test_overlap_cauchy_schwarz(a, b):
    ov = abs(coherent_overlap(a, b))
    assert ov <= 1.0 + 1e-15
    if abs(a - b) > 1e-6:
        assert ov < 1.0


def test_quadrature_wavefunction_vacuum():
    assert quadrature_wavefunction(0.0, 0) == pytest.approx(math.pi**-0.25, abs=1e-15)
    assert math.pi**-0.25 == pytest.approx(0.7511255, abs=1e-7)


def test_quadrature_wavefunction_normalized():
    b = 1.3 - 0.7j
    c = math.sqrt(2) * b.real
    val, _ = quad(lambda x: abs(quadrature_wavefunction(x, b)) ** 2, c - 10, c + 10, epsabs=1e-13)
    assert val == pytest.approx(1.0, abs=1e-10)


def test_quadrature_wavefunction_peak():
    b = 2 + 1j
    x = np.arange(0.0, 6.0, 1e-4)
    peak = x[np.argmax(np.abs(quadrature_wavefunction(x, b)))]
    assert peak == pytest.approx(2 * math.sqrt(2), abs=1e-4)
    assert 2 * math.sqrt(2) == pytest.approx(2.8284271, abs=1e-7)


def test_quadrature_wavefunction_consistent_with_overlap():
    # <a|b> = int conj(<x|a>) <x|b> dx checks the phase convention
    a, b = 0.4 + 1.2j, -0.9 + 0.3j
    re, _ = quad(lambda x: (quadrature_wavefunction(x, a).conjugate() * quadrature_wavefunction(x, b)).real, -12, 12)
    im, _ = quad(lambda x: (quadrature_wavefunction(x, a).conjugate() * quadrature_wavefunction(x, b)).imag, -12, 12)
    assert complex(re, im) == pytest.approx(coherent_overlap(a, b), abs=1e-10)


def test_fock_expansion_vacuum():
    f = fock_expansion(SingleModeState.vacuum(), 5)
    np.testing.assert_array_equal(f.coeffs, [1, 0, 0, 0, 0, 0])


def test_fock_expansion_coherent_series():
    f = fock_expansion(SingleModeState.coherent(1.0))
    n = np.arange(f.n_max + 1)
    expected = np.array([math.exp(-0.5) / math.sqrt(math.factorial(int(k))) for k in n])
    np.testing.assert_allclose(f.coeffs.real, expected, rtol=1e-12, atol=1e-300)


def test_fock_truncation_error():
    with pytest.raises(TruncationError):
        fock_expansion(SingleModeState.coherent(3.0), 5)


def test_fock_cutoff_rule():
    s = SingleModeState.from_terms([(1, 2.0), (1, -1j)])
    assert fock_cutoff(s) == math.ceil(4 + 10 * 2 + 20)


def test_norm_matches_fock_oracle(rng):
    for n_terms in (3, 4):
        s = random_state(rng, n_terms)
        assert state_norm(s) == pytest.approx(fock_expansion(s).norm(), abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=2**32 - 1))
def test_gram_norm_vs_fock_property(n_terms, seed):
    s = random_state(np.random.default_rng(seed), n_terms)
    assert abs(state_norm(s) - fock_expansion(s).norm()) < 1e-8


def test_norm_single_term_and_cat():
    assert state_norm(SingleModeState.coherent(3 - 1j)) == pytest.approx(1.0, abs=1e-15)
    ak, al = 0.7 + 0.2j, -0.5 + 1.1j
    beta = (ak - al) / math.sqrt(2)
    cat = SingleModeState.from_terms([(1, beta), (1, -beta)])
    assert state_norm(cat) == pytest.approx(math.sqrt(2 + 2 * math.exp(-abs(ak - al) ** 2)), rel=1e-14)


def test_norm_rejects_cancellation():
    s = SingleModeState.from_terms([(1, 0.5), (-1, 0.5 + 1e-11)])
    with pytest.raises(NumericalError):
        state_norm(s)


def test_merge_of_duplicate_amplitudes():
    s = SingleModeState.from_terms([(1, 1.0), (2, 1.0 + 1e-14), (1, -1.0)])
    assert len(s) == 2
    assert s.coeffs[0] == pytest.approx(3)


def test_quadrature_marginal_equals_norm(rng):
    for _ in range(3):
        s = random_state(rng, 3)

        def dens(x):
            psi = sum(c * quadrature_wavefunction(x, a) for c, a in s.terms)
            return abs(psi) ** 2

        val, _ = quad(dens, -20, 20, limit=400, epsabs=1e-12)
        assert val == pytest.approx(state_norm(s) ** 2, abs=1e-8 * max(1.0, val))


def test_fidelity_examples():
    s = SingleModeState.from_terms([(1, 1.0), (0.5j, -2.0)])
    assert state_fidelity(s, s) == pytest.approx(1.0, abs=1e-14)
    assert state_fidelity(SingleModeState.vacuum(), SingleModeState.coherent(2.0)) == pytest.approx(math.exp(-4), rel=1e-13)
    assert math.exp(-4) == pytest.approx(0.0183156, abs=1e-7)


def test_fidelity_symmetric_and_scale_invariant(rng):
    a, b = random_state(rng, 3), random_state(rng, 4)
    f = state_fidelity(a, b)
    assert 0.0 <= f <= 1.0
    assert state_fidelity(b, a) == pytest.approx(f, abs=1e-13)
    assert state_fidelity(a.scaled(3 - 2j), b.scaled(0.01)) == pytest.approx(f, abs=1e-13)


def test_inner_product_matches_fock():
    a = SingleModeState.from_terms([(1, 1.0 + 0.5j), (0.3, -1j)])
    b = SingleModeState.from_terms([(2j, 0.2), (1, 1.5)])
    fa, fb = fock_expansion(a, 60), fock_expansion(b, 60)
    assert inner_product(a, b) == pytest.approx(np.vdot(fa.coeffs, fb.coeffs), abs=1e-12)
