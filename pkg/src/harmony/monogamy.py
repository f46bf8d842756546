"""Harmony shared among three qubits.

For a pivot qubit X and the other two qubits Y < Z (in register order), the
functions here evaluate the two-qubit harmonies of the XY and XZ marginals and
the harmony between X and the pair YZ.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import qmat
from .errors import ConfigError, InvalidState, InvalidSubset, NotPure
from .measures import harmony, lambda_spectrum, purity, rho_rho_tilde
from .states import DensityMatrix, RandomSpec, haar_unitary, partial_trace


def _others(rho: DensityMatrix, pivot: int) -> Tuple[int, int]:
    if rho.n_qubits != 3:
        raise InvalidState(f"monogamy needs a 3-qubit state, got n_qubits={rho.n_qubits}")
    if pivot not in (0, 1, 2):
        raise InvalidSubset(f"pivot must be 0, 1 or 2, got {pivot}")
    y, z = (q for q in range(3) if q != pivot)
    return y, z


def pair_marginals(rho: DensityMatrix, pivot: int):
    y, z = _others(rho, pivot)
    return partial_trace(rho, [pivot, y]), partial_trace(rho, [pivot, z])


def marginal_harmonies(rho: DensityMatrix, pivot: int = 0) -> Tuple[float, float]:
    """(H_XY, H_XZ) for X = ``pivot``."""
    rho_xy, rho_xz = pair_marginals(rho, pivot)
    return harmony(rho_xy), harmony(rho_xz)


def _require_pure(rho: DensityMatrix):
    g = purity(rho)
    if g < 1 - rho.tol.purity:
        raise NotPure(f"state purity {g!r} is below 1 - {rho.tol.purity:.0e}")


def harmony_x_yz(rho: DensityMatrix, pivot: int = 0) -> float:
    """(4 det rho_X)^2, valid only for pure three-qubit inputs."""
    _others(rho, pivot)
    _require_pure(rho)
    rho_x = partial_trace(rho, [pivot])
    return (4 * qmat.det(rho_x.mat).real) ** 2


def pure_monogamy_residual(rho: DensityMatrix, pivot: int = 0) -> float:
    h_xy, h_xz = marginal_harmonies(rho, pivot)
    return harmony_x_yz(rho, pivot) - h_xy - h_xz


def mixed_corollary_check(rho: DensityMatrix, pivot: int = 0) -> float:
    """H_XY^2 + H_XZ^2, which can never exceed 1."""
    h_xy, h_xz = marginal_harmonies(rho, pivot)
    return h_xy ** 2 + h_xz ** 2


def trace_term(rho2: DensityMatrix) -> float:
    """tr(rho rho_tilde) for a two-qubit state; its square bounds the harmony of
    any state with at most two nonzero lambdas."""
    return float(np.trace(rho_rho_tilde(rho2)).real)


def _purification_factor(rho: DensityMatrix) -> np.ndarray:
    """Columns sqrt(mu_j) e_j over the numerically nonzero spectrum."""
    w, v = rho.eigh()
    keep = w > rho.tol.rank_cutoff
    return v[:, keep] * np.sqrt(w[keep])


def decomposition_sqrt_harmony(rho: DensityMatrix, v: np.ndarray, pivot: int,
                               factor: Optional[np.ndarray] = None) -> float:
    """sum_k p_k sqrt(H_X(YZ)(phi_k)) for the decomposition generated by isometry ``v``.

    Row k of ``v @ factor.T`` is the unnormalized branch p_k^(1/2) |phi_k>.
    """
    a = _purification_factor(rho) if factor is None else factor
    branches = v @ a.T
    t = branches.reshape(-1, 2, 2, 2)
    t = np.moveaxis(t, pivot + 1, 1).reshape(-1, 2, 4)
    p = np.einsum("kij,kij->k", t, t.conj()).real
    red = t @ np.conj(np.swapaxes(t, 1, 2))
    dets = (red[:, 0, 0] * red[:, 1, 1] - red[:, 0, 1] * red[:, 1, 0]).real
    live = p > 1e-300
    return float(np.sum(4 * dets[live] / p[live]))


def decomposition_min_upper_bound(rho: DensityMatrix, pivot: int, n_decompositions: int,
                                  spec: RandomSpec, k_states: Optional[int] = None,
                                  return_trace: bool = False):
    """Smallest sum_k p_k sqrt(H_X(YZ)) over ``n_decompositions`` random decompositions.

    Decomposition i is built from the i-th Haar unitary drawn from ``spec``'s
    stream, so a larger ``n_decompositions`` samples a superset.
    """
    _others(rho, pivot)
    if n_decompositions < 1:
        raise ConfigError("n_decompositions must be >= 1")
    a = _purification_factor(rho)
    r = a.shape[1]
    k = 2 * rho.dim if k_states is None else int(k_states)
    if k < r:
        raise ConfigError(f"K (k_states={k}) must be >= rank {r}")
    rng = spec.rng()
    best = np.inf
    running = []
    for _ in range(n_decompositions):
        v = haar_unitary(rng, k)[:, :r]
        best = min(best, decomposition_sqrt_harmony(rho, v, pivot, a))
        running.append(best)
    return (best, running) if return_trace else best


@dataclass
class MonogamyReport:
    pivot: int
    h_xy: float
    h_xz: float
    corollary_lhs: float
    h_x_yz: Optional[float] = None
    residual_pure: Optional[float] = None
    decomposition_bound: Optional[float] = None
    source: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        return {
            "pivot": self.pivot,
            "h_xy": self.h_xy,
            "h_xz": self.h_xz,
            "h_x_yz": self.h_x_yz,
            "residual_pure": self.residual_pure,
            "corollary_lhs": self.corollary_lhs,
            "decomposition_bound": self.decomposition_bound,
        }


def monogamy_report(rho: DensityMatrix, pivot: int = 0, n_decompositions: int = 0,
                    spec: Optional[RandomSpec] = None, source: Optional[dict] = None
                    ) -> MonogamyReport:
    h_xy, h_xz = marginal_harmonies(rho, pivot)
    rep = MonogamyReport(pivot, h_xy, h_xz, h_xy ** 2 + h_xz ** 2, source=source or {})
    if purity(rho) >= 1 - rho.tol.purity:
        rep.h_x_yz = harmony_x_yz(rho, pivot)
        rep.residual_pure = rep.h_x_yz - h_xy - h_xz
    if n_decompositions:
        rep.decomposition_bound = decomposition_min_upper_bound(
            rho, pivot, n_decompositions, spec or RandomSpec(0))
    return rep


def marginal_small_lambdas(rho: DensityMatrix, pivot: int = 0) -> float:
    """Largest of lambda_3, lambda_4 over the XY and XZ marginals."""
    out = 0.0
    for m in pair_marginals(rho, pivot):
        lam = lambda_spectrum(m)
        out = max(out, lam[2], lam[3])
    return out
