import math

import numpy as np
import pytest

from harmony import measures, states, verify
from harmony.errors import ConfigError, OutOfRange
from harmony.states import DensityMatrix, RandomSpec
from harmony.verify import DecompositionSearchConfig

FAST = DecompositionSearchConfig(restarts=4, max_iters=800)


def test_bell_with_single_branch():
    rho = states.from_pure(states.bell_state("phi+"))
    rep = verify.eof_decomposition_search(rho, DecompositionSearchConfig(k_states=1, restarts=1))
    assert rep.searched_eof == pytest.approx(math.log(2), abs=1e-12)
    assert abs(rep.gap) <= 1e-9


def test_classical_mixture_reaches_zero():
    rho = DensityMatrix(np.diag([0.5, 0, 0, 0.5]))
    rep = verify.eof_decomposition_search(rho, DecompositionSearchConfig(k_states=4))
    assert rep.closed_form_eof == 0
    assert rep.searched_eof <= 1e-6


def test_bell_diagonal_spot_value():
    rho = states.bell_diagonal([0.7, 0.1, 0.1, 0.1])
    closed = measures.binary_entropy((1 + math.sqrt(0.84)) / 2)
    rep = verify.eof_decomposition_search(rho, DecompositionSearchConfig())
    assert rep.closed_form_eof == pytest.approx(closed, abs=1e-12)
    assert rep.closed_form_eof == pytest.approx(0.17344, abs=1e-5)
    assert -1e-6 <= rep.gap <= 1e-3
    assert rep.max_reconstruction_error <= 1e-8
    assert len(rep.restart_trace) == 20


def test_search_is_deterministic():
    rho = states.random_mixed(2, 3, RandomSpec(4))
    a = verify.eof_decomposition_search(rho, FAST)
    b = verify.eof_decomposition_search(rho, FAST)
    assert a.restart_trace == b.restart_trace


def test_reconstruction_checked_every_iterate():
    rho = states.random_mixed(2, 4, RandomSpec(5))
    cfg = DecompositionSearchConfig(restarts=1, max_iters=200, check_every_iterate=True)
    assert verify.eof_decomposition_search(rho, cfg).max_reconstruction_error <= 1e-8


def test_k_below_rank_is_config_error():
    rho = states.random_mixed(2, 4, RandomSpec(6))
    with pytest.raises(ConfigError, match=r"K \(k_states=2\) must be >= rank 4"):
        verify.eof_decomposition_search(rho, DecompositionSearchConfig(k_states=2))


def test_nonmonotonicity_table():
    rows = {r["x"]: r for r in verify.reproduce_nonmonotonicity([0, 0.6, 1])}
    assert (rows[0]["h_mixture"], rows[0]["h_plus"], rows[0]["convexity_gap"]) == pytest.approx((1, 1, 0), abs=1e-12)
    assert (rows[1]["h_mixture"], rows[1]["h_plus"], rows[1]["convexity_gap"]) == pytest.approx((0, 0, 0), abs=1e-12)
    r = rows[0.6]
    assert r["h_mixture"] == pytest.approx(0.64, abs=1e-12)
    assert r["h_plus"] == pytest.approx(0.4096, abs=1e-12)
    assert r["h_minus"] == pytest.approx(0.4096, abs=1e-12)
    assert r["convexity_gap"] == pytest.approx(0.2304, abs=1e-12)
    with pytest.raises(OutOfRange):
        verify.reproduce_nonmonotonicity([1.1])


def test_local_unitary_identity_and_bell():
    rho = states.random_mixed(2, 3, RandomSpec(7))
    same = states.local_unitary(rho, np.eye(2), np.eye(2))
    assert measures.harmony(same) == measures.harmony(rho)
    bell = states.from_pure(states.bell_state("psi-"))
    rng = RandomSpec(8).rng()
    for _ in range(20):
        ua, ub = states.haar_unitary(rng, 2), states.haar_unitary(rng, 2)
        assert measures.harmony(states.local_unitary(bell, ua, ub)) == pytest.approx(1, abs=1e-10)


def test_local_unitary_sweep_small():
    assert verify.local_unitary_sweep(100, RandomSpec(9)) <= 1e-9
