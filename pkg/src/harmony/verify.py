"""Independent numerical checks of the closed-form results.

The decomposition search here evaluates the entanglement of formation straight
from its definition, as a minimum of average subsystem entropy over pure-state
ensembles, and never touches the spin-flip machinery it is meant to check.
"""

import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import measures
from .errors import ConfigError, OutOfRange
from .states import (DensityMatrix, RandomSpec, haar_unitary, local_unitary,
                     nonconvexity_family, induced_from_rng)


@dataclass(frozen=True)
class DecompositionSearchConfig:
    k_states: int = 8
    restarts: int = 20
    max_iters: int = 2000
    step_initial: float = math.pi / 8
    step_decay: float = 0.95
    decay_every: int = 20
    tolerance: float = 1e-12
    seed: int = 0
    check_every_iterate: bool = False

    def validate(self, rank: int):
        if self.k_states < rank:
            raise ConfigError(f"K (k_states={self.k_states}) must be >= rank {rank} of the state")
        if self.restarts < 1:
            raise ConfigError("restarts must be >= 1")
        if self.max_iters < 0 or self.decay_every < 1:
            raise ConfigError("max_iters must be >= 0 and decay_every >= 1")
        if not 0 < self.step_decay <= 1 or self.step_initial <= 0:
            raise ConfigError("need step_initial > 0 and 0 < step_decay <= 1")


@dataclass
class VerificationReport:
    closed_form_eof: float
    searched_eof: float
    gap: float
    route_discrepancies: dict
    restart_trace: List[float]
    max_reconstruction_error: float
    config: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        return {
            "closed_form_eof": self.closed_form_eof,
            "searched_eof": self.searched_eof,
            "gap": self.gap,
            "route_discrepancy": measures.route_discrepancy(self.route_discrepancies),
            "max_reconstruction_error": self.max_reconstruction_error,
        }


def _branch_term(b) -> float:
    """p * S(rho_A) for one unnormalized branch (b00, b01, b10, b11)."""
    p = abs(b[0]) ** 2 + abs(b[1]) ** 2 + abs(b[2]) ** 2 + abs(b[3]) ** 2
    if p <= 1e-300:
        return 0.0
    q = abs(b[0] * b[3] - b[1] * b[2]) ** 2 / (p * p)
    root = math.sqrt(max(0.0, 1.0 - 4.0 * q))
    hi, lo = (1 + root) / 2, (1 - root) / 2
    ent = -hi * math.log(hi) if hi > 0 else 0.0
    if lo > 0:
        ent -= lo * math.log(lo)
    return p * ent


def _reconstruction_error(rho: DensityMatrix, branches: np.ndarray) -> float:
    rec = branches.T @ branches.conj()
    return float(np.max(np.abs(rec - rho.mat)))


def _search_once(rho, a, cfg, restart):
    rng = RandomSpec(cfg.seed, restart).rng()
    r = a.shape[1]
    k = cfg.k_states
    v = haar_unitary(rng, k)[:, :r]
    branches = v @ a.T
    contrib = [_branch_term(row) for row in branches.tolist()]
    # a single branch admits no two-row move
    n = cfg.max_iters if k > 1 else 0
    first = rng.integers(0, k, size=n)
    second = (first + rng.integers(1, k, size=n)) % k
    steps = cfg.step_initial * cfg.step_decay ** (np.arange(n) // cfg.decay_every)
    thetas = rng.standard_normal(n) * steps
    phases = np.exp(1j * rng.uniform(0.0, 2 * math.pi, size=n))
    worst_rec = 0.0
    for it in range(n):
        i, j = first[it], second[it]
        c, s = math.cos(thetas[it]), math.sin(thetas[it])
        e = phases[it]
        g = np.array([[c, -e * s], [s / e, c]])
        rows = g @ v[[i, j]]
        new_b = rows @ a.T
        ti, tj = _branch_term(new_b[0].tolist()), _branch_term(new_b[1].tolist())
        if ti + tj - contrib[i] - contrib[j] < -cfg.tolerance:
            v[[i, j]] = rows
            branches[[i, j]] = new_b
            contrib[i], contrib[j] = ti, tj
        if cfg.check_every_iterate:
            worst_rec = max(worst_rec, _reconstruction_error(rho, branches))
    final = v @ a.T
    worst_rec = max(worst_rec, _reconstruction_error(rho, final))
    return sum(_branch_term(row) for row in final.tolist()), worst_rec


def eof_decomposition_search(rho: DensityMatrix,
                             cfg: DecompositionSearchConfig = DecompositionSearchConfig()
                             ) -> VerificationReport:
    """Minimize the average branch entropy over decompositions of ``rho``.

    Decompositions are parameterized by K x r isometries V acting on the
    eigen-factor of ``rho``; local moves are random two-row unitary rotations
    of V with a geometrically shrinking angle, accepted only when they lower
    the objective.
    """
    if rho.n_qubits != 2:
        raise ConfigError("the decomposition search is for 2-qubit states")
    w, vecs = rho.eigh()
    keep = w > rho.tol.rank_cutoff
    a = vecs[:, keep] * np.sqrt(w[keep])
    cfg.validate(a.shape[1])
    results = [_search_once(rho, a, cfg, restart) for restart in range(cfg.restarts)]
    trace = [b for b, _ in results]
    searched = min(trace)
    closed = measures.entanglement_of_formation(rho)
    return VerificationReport(
        closed_form_eof=closed,
        searched_eof=searched,
        gap=searched - closed,
        route_discrepancies=measures.disharmony_routes(rho),
        restart_trace=trace,
        max_reconstruction_error=max(e for _, e in results),
        config=asdict(cfg),
    )


def crosscheck_disharmony_routes(rho: DensityMatrix) -> float:
    """Largest pairwise gap among the polynomial, general-eigenvalue and R routes."""
    return measures.route_discrepancy(measures.disharmony_routes(rho))


def reproduce_nonmonotonicity(xs: Sequence[float]) -> List[dict]:
    rows = []
    for x in xs:
        if not 0.0 <= x <= 1.0:
            raise OutOfRange(f"x must lie in [0, 1], got {x}")
        plus, minus, mix = nonconvexity_family(x)
        h_mix = measures.harmony(mix)
        h_plus, h_minus = measures.harmony(plus), measures.harmony(minus)
        rows.append({
            "x": float(x),
            "h_mixture": h_mix,
            "h_plus": h_plus,
            "h_minus": h_minus,
            "convexity_gap": h_mix - 0.5 * h_plus - 0.5 * h_minus,
        })
    return rows


def random_two_qubit_state(rng: np.random.Generator, rank: Optional[int] = None) -> DensityMatrix:
    """Induced-measure 2-qubit state; rank drawn uniformly from 1..4 unless given."""
    r = int(rng.integers(1, 5)) if rank is None else rank
    return DensityMatrix(induced_from_rng(rng, 4, r))


def local_unitary_sweep(n: int, spec: RandomSpec) -> float:
    """Max |H(U rho U^H) - H(rho)| over ``n`` random states and local unitaries."""
    if n < 1:
        raise ConfigError("n must be >= 1")
    worst = 0.0
    for i in range(n):
        rng = spec.child(i).rng()
        rho = random_two_qubit_state(rng)
        ua, ub = haar_unitary(rng, 2), haar_unitary(rng, 2)
        worst = max(worst, abs(measures.harmony(local_unitary(rho, ua, ub))
                               - measures.harmony(rho)))
    return worst
