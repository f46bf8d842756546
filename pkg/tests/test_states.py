import numpy as np
import pytest
from hypothesis import given, strategies as st

from harmony import states
from harmony.errors import InvalidDistribution, InvalidRank, InvalidState, InvalidSubset, OutOfRange
from harmony.states import Ensemble, RandomSpec


def bell_projector():
    m = np.zeros((4, 4))
    m[np.ix_([0, 3], [0, 3])] = 0.5
    return m


def test_from_pure_examples():
    np.testing.assert_array_equal(states.from_pure(states.basis_state("00")).mat,
                                  np.diag([1, 0, 0, 0]))
    rho = states.from_pure(states.bell_state("phi+"))
    np.testing.assert_allclose(rho.mat, bell_projector(), atol=1e-15)
    psi = states.random_pure(2, RandomSpec(3))
    assert np.trace(states.from_pure(psi).mat).real == pytest.approx(1, abs=1e-12)


def test_bell_states():
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(states.bell_state(states.Bell.PHI_PLUS).amplitudes, [s, 0, 0, s])
    np.testing.assert_allclose(states.bell_state("psi+").amplitudes, [0, s, s, 0])


def test_bell_diagonal_examples():
    np.testing.assert_allclose(states.bell_diagonal([1, 0, 0, 0]).mat, bell_projector(), atol=1e-15)
    np.testing.assert_allclose(states.bell_diagonal([0.25] * 4).mat, np.eye(4) / 4, atol=1e-15)
    with pytest.raises(InvalidDistribution):
        states.bell_diagonal([0.5, 0.5, 0.5, -0.5])
    with pytest.raises(InvalidDistribution):
        states.bell_diagonal([0.5, 0.2, 0.2, 0.2])


def test_nonconvexity_boundaries():
    plus, minus, mix = states.nonconvexity_family(1.0)
    np.testing.assert_allclose(plus.mat, np.diag([1, 0, 0, 0]), atol=1e-15)
    np.testing.assert_allclose(minus.mat, np.diag([0, 0, 0, 1]), atol=1e-15)
    np.testing.assert_allclose(mix.mat, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    plus, minus, mix = states.nonconvexity_family(0.0)
    for r in (plus, minus, mix):
        np.testing.assert_allclose(r.mat, bell_projector(), atol=1e-15)
    with pytest.raises(OutOfRange):
        states.nonconvexity_family(1.5)


def test_density_matrix_validation():
    with pytest.raises(InvalidState, match="Hermitian"):
        states.DensityMatrix(np.array([[0.5, 1], [0, 0.5]]))
    with pytest.raises(InvalidState, match="trace"):
        states.DensityMatrix(np.eye(2))
    with pytest.raises(InvalidState, match="positive semidefinite"):
        states.DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidState):
        states.DensityMatrix(np.eye(3) / 3)
    with pytest.raises(InvalidState):
        states.PureState([1, 1, 0, 0])


def test_random_pure_norm_and_determinism():
    spec = RandomSpec(42, 5)
    a = states.random_pure(3, spec).amplitudes
    b = states.random_pure(3, spec).amplitudes
    assert abs(np.linalg.norm(a) - 1) <= 1e-10
    assert a.tobytes() == b.tobytes()
    assert states.random_pure(3, spec.child(6)).amplitudes.tobytes() != a.tobytes()


def test_haar_marginal_purity_mean():
    # Lubkin's average purity (dA + dB) / (dA dB + 1) = 4/5 for two qubits
    vals = []
    for i in range(10_000):
        psi = states.random_pure(2, RandomSpec(11, i))
        rho_a = states.partial_trace(states.from_pure(psi), [0])
        vals.append(np.sum(np.abs(rho_a.mat) ** 2))
    assert abs(np.mean(vals) - 0.8) <= 0.01


def test_random_mixed_rank_and_validity():
    for rank in (1, 2, 3, 4):
        spec = RandomSpec(9, rank, Ensemble.INDUCED_MIXED, rank)
        rho = states.random_mixed(2, rank, spec)
        w = np.linalg.eigvalsh(rho.mat)
        assert w.min() >= -1e-9
        assert np.trace(rho.mat).real == pytest.approx(1, abs=1e-12)
        assert int((w > 1e-12).sum()) == rank
    with pytest.raises(InvalidRank):
        states.random_mixed(2, 5, RandomSpec(0))


def test_rank_one_is_pure():
    rho = states.random_mixed(3, 1, RandomSpec(4))
    assert np.sum(np.abs(rho.mat) ** 2) == pytest.approx(1, abs=1e-12)


def test_induced_rank4_purity_mean():
    # (N + K) / (N K + 1) with N = K = 4
    vals = [np.sum(np.abs(states.random_mixed(2, 4, RandomSpec(21, i)).mat) ** 2)
            for i in range(10_000)]
    assert abs(np.mean(vals) - 8 / 17) <= 0.01


def test_partial_trace_examples():
    bell = states.from_pure(states.bell_state("phi+"))
    np.testing.assert_allclose(states.partial_trace(bell, [0]).mat, np.eye(2) / 2, atol=1e-15)
    prod = states.from_pure(states.basis_state("01"))
    np.testing.assert_allclose(states.partial_trace(prod, [1]).mat, np.diag([0, 1]), atol=1e-15)
    ghz = states.from_pure(states.ghz_state())
    np.testing.assert_allclose(states.partial_trace(ghz, [0]).mat, np.eye(2) / 2, atol=1e-15)


def test_partial_trace_against_einsum(rng):
    rho = states.random_mixed(3, 5, RandomSpec(2))
    t = rho.mat.reshape([2] * 6)
    np.testing.assert_allclose(states.partial_trace(rho, [0, 2]).mat,
                               np.einsum("abcdbf->acdf", t).reshape(4, 4), atol=1e-15)
    np.testing.assert_allclose(states.partial_trace(rho, [1]).mat,
                               np.einsum("abcaec->be", t), atol=1e-15)


def test_partial_trace_bad_subset():
    rho = states.from_pure(states.ghz_state())
    for keep in ([], [0, 1, 2], [3], [0, 0]):
        with pytest.raises(InvalidSubset):
            states.partial_trace(rho, keep)


@given(st.integers(0, 2 ** 31))
def test_schmidt_symmetry(seed):
    rho = states.from_pure(states.random_pure(2, RandomSpec(seed)))
    wa = np.linalg.eigvalsh(states.partial_trace(rho, [0]).mat)
    wb = np.linalg.eigvalsh(states.partial_trace(rho, [1]).mat)
    np.testing.assert_allclose(wa, wb, atol=1e-10)


@given(st.integers(0, 2 ** 31), st.integers(1, 8))
def test_partial_trace_composes(seed, rank):
    rho = states.random_mixed(3, rank, RandomSpec(seed))
    two_step = states.partial_trace(states.partial_trace(rho, [0, 1]), [0])
    np.testing.assert_allclose(two_step.mat, states.partial_trace(rho, [0]).mat, atol=1e-12)
    two_step = states.partial_trace(states.partial_trace(rho, [1, 2]), [1])
    np.testing.assert_allclose(two_step.mat, states.partial_trace(rho, [2]).mat, atol=1e-12)
