import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from harmony import measures, qmat, states
from harmony.errors import InvalidSpectrum, InvalidState, OutOfRange, SpectrumViolation
from harmony.measures import LambdaSpectrum
from harmony.states import DensityMatrix, RandomSpec
from harmony.tolerances import DEFAULT

BELL = states.from_pure(states.bell_state("phi+"))
ZERO = states.from_pure(states.basis_state("00"))
MIXED = DensityMatrix(np.eye(4) / 4)
BD7 = states.bell_diagonal([0.7, 0.1, 0.1, 0.1])


def mp_binary_entropy(x):
    with mpmath.workdps(50):
        x = mpmath.mpf(x)
        return float(-x * mpmath.log(x) - (1 - x) * mpmath.log1p(-x))


def test_spin_flip_examples():
    np.testing.assert_allclose(measures.spin_flip(ZERO), np.diag([0, 0, 0, 1]), atol=1e-15)
    np.testing.assert_allclose(measures.spin_flip(MIXED), np.eye(4) / 4, atol=1e-15)
    np.testing.assert_allclose(measures.spin_flip(BELL), BELL.mat, atol=1e-15)


def test_disharmony_poly_examples():
    assert measures.disharmony_poly(MIXED) == pytest.approx(1 / 16, abs=1e-15)
    assert measures.disharmony_poly(BELL) == pytest.approx(-1, abs=1e-14)
    assert measures.disharmony_poly(ZERO) == 0


def test_harmony_examples():
    assert measures.harmony(BELL) == pytest.approx(1, abs=1e-12)
    assert measures.harmony(ZERO) == 0
    assert measures.harmony(BD7) == pytest.approx(0.2048, abs=1e-12)
    assert measures.harmony(states.nonconvexity_family(0.6)[2]) == pytest.approx(0.64, abs=1e-12)


def test_lambda_spectrum_examples():
    np.testing.assert_allclose(measures.lambda_spectrum(MIXED).lambdas, [0.25] * 4, atol=1e-12)
    np.testing.assert_allclose(measures.lambda_spectrum(BELL).lambdas, [1, 0, 0, 0], atol=1e-12)
    np.testing.assert_allclose(measures.lambda_spectrum(BD7).lambdas, [0.7, 0.1, 0.1, 0.1], atol=1e-12)


def test_bell_diagonal_lambdas_by_direct_eigenvalues():
    # square roots of the plain product eigenvalues, no block trick
    mu = qmat.gen_eigvals(measures.rho_rho_tilde(BD7))
    assert np.abs(mu.imag).max() <= 1e-12
    np.testing.assert_allclose(np.sort(np.sqrt(mu.real))[::-1], [0.7, 0.1, 0.1, 0.1], atol=1e-8)


def test_concurrence_examples():
    assert measures.concurrence(BELL) == pytest.approx(1, abs=1e-12)
    assert measures.concurrence(MIXED) == 0
    assert measures.concurrence(states.bell_diagonal([0.4, 0.3, 0.2, 0.1])) == 0


def test_binary_entropy_examples():
    assert measures.binary_entropy(0.5) == pytest.approx(math.log(2), abs=1e-15)
    assert measures.binary_entropy(0) == 0 and measures.binary_entropy(1) == 0
    x = 0.9330127
    assert measures.binary_entropy(x) == pytest.approx(mp_binary_entropy(x), abs=1e-14)
    # the quoted figure 0.24576 is a rounded value; the exact one is 0.2457754
    assert measures.binary_entropy(x) == pytest.approx(0.24576, abs=1e-4)
    with pytest.raises(OutOfRange):
        measures.binary_entropy(1.2)


@given(st.floats(0, 1))
def test_binary_entropy_matches_mpmath(x):
    if 0 < x < 1:
        assert measures.binary_entropy(x) == pytest.approx(mp_binary_entropy(x), rel=1e-12, abs=1e-300)


def test_eof_examples():
    assert measures.entanglement_of_formation(BELL) == pytest.approx(math.log(2), abs=1e-12)
    assert measures.entanglement_of_formation(MIXED) == 0
    assert measures.entanglement_of_formation(ZERO) == 0
    assert measures.eof_from_concurrence(0.5) == pytest.approx(
        mp_binary_entropy((1 + math.sqrt(0.75)) / 2), abs=1e-14)


def test_purity_and_entropy_examples():
    assert measures.purity(BELL) == pytest.approx(1, abs=1e-14)
    assert measures.purity(DensityMatrix(np.eye(2) / 2)) == pytest.approx(0.5)
    assert measures.von_neumann_entropy(BELL) == pytest.approx(0, abs=1e-12)
    assert measures.von_neumann_entropy(DensityMatrix(np.eye(2) / 2)) == pytest.approx(math.log(2))
    ref = -(2 / 3) * math.log(2 / 3) - (1 / 3) * math.log(1 / 3)
    assert measures.von_neumann_entropy(DensityMatrix(np.diag([2 / 3, 1 / 3]))) == pytest.approx(ref, abs=1e-14)
    assert ref == pytest.approx(0.636514, abs=1e-6)


def test_pure_harmony_examples():
    assert measures.pure_harmony(states.bell_state("phi+")) == pytest.approx(1, abs=1e-14)
    assert measures.pure_harmony(states.basis_state("01")) == 0
    psi = states.PureState([math.sqrt(3) / 2, 0, 0, 0.5])
    assert measures.pure_harmony(psi) == pytest.approx(9 / 16, abs=1e-14)


def test_spin_flip_vector_matches_matrix_form():
    psi = states.random_pure(2, RandomSpec(5))
    np.testing.assert_allclose(measures.spin_flip_vector(psi),
                               qmat.YY @ psi.amplitudes.conj(), atol=1e-15)


def test_harmony_bounds_examples():
    assert measures.harmony_bounds(1) == pytest.approx((1, 1))
    assert measures.harmony_bounds(0) == (0, 0)
    assert measures.harmony_bounds(0.4) == pytest.approx((0.0256, 0.2048), abs=1e-15)
    with pytest.raises(OutOfRange):
        measures.harmony_bounds(1.5)


def test_disharmony_from_spectrum_examples():
    assert measures.disharmony_from_spectrum([1, 0, 0, 0]) == -1
    assert measures.disharmony_from_spectrum([0.25] * 4) == pytest.approx(1 / 16, abs=1e-16)
    assert measures.disharmony_from_spectrum([0.7, 0.1, 0.1, 0.1]) == pytest.approx(-0.2048, abs=1e-15)


@given(st.lists(st.floats(0, 0.25), min_size=4, max_size=4), st.permutations(range(4)))
def test_disharmony_from_spectrum_order_free(lam, perm):
    a = measures.disharmony_factors(lam)
    b = measures.disharmony_factors([lam[i] for i in perm])
    assert a == pytest.approx(b, abs=1e-15)


def test_lambda_spectrum_validation():
    with pytest.raises(InvalidSpectrum):
        LambdaSpectrum([0.5, -0.1, 0, 0])
    with pytest.raises(InvalidSpectrum):
        LambdaSpectrum([0.9, 0.2, 0, 0])
    with pytest.raises(InvalidSpectrum):
        LambdaSpectrum([0.1, 0.1, 0.1])
    assert LambdaSpectrum([0.1, 0.4, 0.2, 0.3]).lambdas == (0.4, 0.3, 0.2, 0.1)


def test_spectrum_violation_on_nonphysical_input():
    # admitted only because the PSD tolerance is loosened; rho rho~ then has a negative eigenvalue
    tol = DEFAULT.with_overrides(psd=1e-2)
    rho = DensityMatrix(np.diag([0.5, 0.25, 0.2505, -0.0005]), tol=tol)
    with pytest.raises(SpectrumViolation, match="real part"):
        measures.lambda_spectrum(rho)


def test_two_qubit_guard():
    with pytest.raises(InvalidState, match="2-qubit measure requires n_qubits=2"):
        measures.harmony(states.from_pure(states.ghz_state()))


def test_crosscheck_routes_on_analytic_states():
    for rho, d in ((BELL, -1.0), (MIXED, 1 / 16)):
        routes = measures.disharmony_routes(rho)
        assert measures.route_discrepancy(routes) <= 1e-10
        assert routes["polynomial"] == pytest.approx(d, abs=1e-10)


def test_r_matrix_literal_spectrum_agrees():
    rho = states.random_mixed(2, 4, RandomSpec(8))
    w = np.linalg.eigvalsh(measures.r_matrix(rho))[::-1]
    np.testing.assert_allclose(w, measures.r_spectrum(rho).lambdas, atol=1e-7)


@given(st.integers(0, 2 ** 31), st.integers(1, 4))
def test_route_agreement_and_envelope(seed, rank):
    rho = states.random_mixed(2, rank, RandomSpec(seed, 0, states.Ensemble.INDUCED_MIXED, rank))
    routes = measures.disharmony_routes(rho)
    assert measures.route_discrepancy(routes) <= 1e-9
    h, c = measures.harmony(rho), measures.concurrence(rho)
    lo, hi = measures.harmony_bounds(min(c, 1))
    assert lo - 1e-9 <= h <= hi + 1e-9
    assert h <= c + 1e-9


@given(st.integers(0, 2 ** 31))
def test_pure_state_laws(seed):
    psi = states.random_pure(2, RandomSpec(seed))
    rep = measures.pure_report(psi)
    assert abs(rep["harmony"] - rep["pure_harmony"]) <= 1e-10
    assert abs(rep["purity_a"] - rep["purity_from_harmony"]) <= 1e-10
    assert abs(rep["concurrence"] - rep["concurrence_from_det"]) <= 1e-8
    assert abs(rep["concurrence"] - rep["pure_harmony"] ** 0.25) <= 1e-8


def test_upper_envelope_saturation():
    for c in np.arange(1, 10) / 10:
        rho = states.bell_diagonal([(1 + c) / 2] + [(1 - c) / 6] * 3)
        assert measures.concurrence(rho) == pytest.approx(c, abs=1e-12)
        assert measures.harmony(rho) == pytest.approx(measures.harmony_bounds(c)[1], abs=1e-9)


def test_measure_report_fields():
    rep = measures.measure_report(BELL)
    assert rep.harmony == pytest.approx(1, abs=1e-12)
    assert rep.eof == pytest.approx(math.log(2), abs=1e-12)
    assert rep.purity_a == pytest.approx(0.5)
    assert rep.harmony_in_range
    row = rep.as_row()
    assert set(row) >= {"lambda1", "lambda4", "lambda_sum", "route_discrepancy"}
