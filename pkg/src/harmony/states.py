"""Pure and mixed states of one to three qubits.

Basis order is ``|0...0>, ..., |1...1>`` with the leftmost qubit most
significant, so qubit 0 is the slowest-varying tensor index.
"""

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import qmat
from .errors import (InvalidDistribution, InvalidRank, InvalidState,
                     InvalidSubset, OutOfRange)
from .tolerances import DEFAULT, Tolerances

MAX_QUBITS = 3
RNG_ALGORITHM = "numpy.PCG64 via SeedSequence(entropy=seed, spawn_key=(stream,))"


def _n_qubits_for(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2 ** n != dim or n > MAX_QUBITS:
        raise InvalidState(f"dimension {dim} is not 2**n for n in 1..{MAX_QUBITS}")
    return n


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    n_qubits: int = field(default=0)

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        n = _n_qubits_for(amp.size)
        if self.n_qubits and self.n_qubits != n:
            raise InvalidState(f"n_qubits={self.n_qubits} does not match {amp.size} amplitudes")
        if not np.all(np.isfinite(amp)):
            raise InvalidState("amplitudes must be finite")
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > DEFAULT.norm:
            raise InvalidState(f"state norm {norm!r} differs from 1 by more than {DEFAULT.norm:.0e}")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "n_qubits", n)

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        amp = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amp)
        if norm == 0:
            raise InvalidState("zero vector cannot be normalized")
        return cls(amp / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated density matrix: Hermitian, unit trace, PSD (within tolerance)."""

    mat: np.ndarray
    n_qubits: int = field(default=0)
    tol: Tolerances = field(default=DEFAULT, repr=False)

    def __post_init__(self):
        try:
            m = np.array(qmat.as_matrix(self.mat), dtype=np.complex128)
        except ValueError as exc:
            raise InvalidState(str(exc)) from None
        n = _n_qubits_for(m.shape[0])
        if self.n_qubits and self.n_qubits != n:
            raise InvalidState(f"n_qubits={self.n_qubits} does not match dimension {m.shape[0]}")
        tol = self.tol
        herr = qmat.hermiticity_error(m)
        if herr > tol.hermitian:
            raise InvalidState(
                f"not Hermitian: relative Frobenius error {herr:.3e} > {tol.hermitian:.0e}")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > tol.trace:
            raise InvalidState(f"trace {tr!r} differs from 1 by more than {tol.trace:.0e}")
        wmin = np.linalg.eigvalsh(m)[0]
        if wmin < -tol.psd:
            raise InvalidState(
                f"not positive semidefinite: eigenvalue {wmin:.3e} < -{tol.psd:.0e}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "n_qubits", n)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigh(self):
        return qmat.herm_eig(self.mat, self.tol)


def from_pure(psi: PureState) -> DensityMatrix:
    a = psi.amplitudes
    return DensityMatrix(np.outer(a, a.conj()))


def basis_state(bits: str) -> PureState:
    """Computational basis state from a bit string such as ``"01"``."""
    if not bits or set(bits) - {"0", "1"} or len(bits) > MAX_QUBITS:
        raise InvalidState(f"bad basis label {bits!r}")
    amp = np.zeros(2 ** len(bits), dtype=complex)
    amp[int(bits, 2)] = 1.0
    return PureState(amp)


class Bell(enum.Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


_BELL_AMPS = {
    Bell.PHI_PLUS: (1, 0, 0, 1),
    Bell.PHI_MINUS: (1, 0, 0, -1),
    Bell.PSI_PLUS: (0, 1, 1, 0),
    Bell.PSI_MINUS: (0, 1, -1, 0),
}


def bell_state(kind) -> PureState:
    kind = Bell(kind)
    return PureState(np.array(_BELL_AMPS[kind], dtype=complex) / np.sqrt(2))


def ghz_state() -> PureState:
    amp = np.zeros(8, dtype=complex)
    amp[0] = amp[7] = 1 / np.sqrt(2)
    return PureState(amp)


def w_state() -> PureState:
    amp = np.zeros(8, dtype=complex)
    amp[[1, 2, 4]] = 1 / np.sqrt(3)
    return PureState(amp)


def bell_diagonal(p: Sequence[float]) -> DensityMatrix:
    """Mixture ``sum_i p_i |B_i><B_i|`` over (phi+, phi-, psi+, psi-)."""
    p = np.asarray(p, dtype=float)
    if p.shape != (4,) or np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InvalidDistribution(f"need four nonnegative weights, got {p.tolist()}")
    if abs(p.sum() - 1.0) > 1e-12:
        raise InvalidDistribution(f"weights sum to {p.sum()!r}, not 1")
    rho = np.zeros((4, 4), dtype=complex)
    for w, kind in zip(p, Bell):
        a = bell_state(kind).amplitudes
        rho += w * np.outer(a, a.conj())
    return DensityMatrix(rho)


def nonconvexity_family(x: float):
    """The pure pair rho_plus, rho_minus and their equal mixture.

    ``rho_pm = (1 +- x)/2 |00><00| + sqrt(1-x^2)/2 (|00><11| + |11><00|)
    + (1 -+ x)/2 |11><11|``.
    """
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"x must lie in [0, 1], got {x}")
    off = np.sqrt(1.0 - x * x) / 2

    def build(sign):
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = (1 + sign * x) / 2
        m[3, 3] = (1 - sign * x) / 2
        m[0, 3] = m[3, 0] = off
        return m

    plus, minus = build(+1), build(-1)
    return DensityMatrix(plus), DensityMatrix(minus), DensityMatrix(0.5 * plus + 0.5 * minus)


# --- sampling ---------------------------------------------------------------

class Ensemble(enum.Enum):
    HAAR_PURE = "haar"
    INDUCED_MIXED = "induced"


@dataclass(frozen=True)
class RandomSpec:
    seed: int
    stream: int = 0
    ensemble: Ensemble = Ensemble.HAAR_PURE
    rank: Optional[int] = None

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=int(self.seed) & (2 ** 64 - 1),
                                    spawn_key=(int(self.stream) & (2 ** 64 - 1),))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, stream: int) -> "RandomSpec":
        return RandomSpec(self.seed, stream, self.ensemble, self.rank)


RANDOM_SPEC_DEFAULT = RandomSpec(seed=0)


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = complex_normal(rng, dim)
    return v / np.linalg.norm(v)


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unitary (QR of a Ginibre matrix with the phase fix)."""
    z = complex_normal(rng, (dim, dim)) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def induced_from_rng(rng: np.random.Generator, dim: int, rank: int) -> np.ndarray:
    g = haar_vector(rng, dim * rank).reshape(dim, rank)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(n_qubits: int, spec: RandomSpec) -> PureState:
    if spec.ensemble is not Ensemble.HAAR_PURE:
        raise ValueError("random_pure requires the HAAR_PURE ensemble")
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise OutOfRange(f"n_qubits must be in 1..{MAX_QUBITS}")
    return PureState(haar_vector(spec.rng(), 2 ** n_qubits))


def random_mixed(n_qubits: int, rank: int, spec: RandomSpec) -> DensityMatrix:
    """Induced-measure mixed state: trace out a ``rank``-dimensional ancilla."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise OutOfRange(f"n_qubits must be in 1..{MAX_QUBITS}")
    dim = 2 ** n_qubits
    if not 1 <= rank <= dim:
        raise InvalidRank(f"rank must be in 1..{dim}, got {rank}")
    return DensityMatrix(induced_from_rng(spec.rng(), dim, rank))


# --- reduction --------------------------------------------------------------

def partial_trace_matrix(m: np.ndarray, n_qubits: int, keep: Iterable[int]) -> np.ndarray:
    keep = sorted(set(keep))
    drop = [q for q in range(n_qubits) if q not in keep]
    t = np.asarray(m).reshape((2,) * (2 * n_qubits))
    # trace pairs from the highest index down so earlier axis numbers stay valid
    cur = n_qubits
    for q in sorted(drop, reverse=True):
        t = np.trace(t, axis1=q, axis2=q + cur)
        cur -= 1
    d = 2 ** len(keep)
    return t.reshape(d, d)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the qubits in ``keep``, kept in ascending qubit order."""
    keep = [keep] if isinstance(keep, (int, np.integer)) else list(keep)
    n = rho.n_qubits
    if not keep or len(set(keep)) != len(keep) or len(keep) >= n \
            or any(not 0 <= q < n for q in keep):
        raise InvalidSubset(f"keep={keep} must be a nonempty proper subset of 0..{n - 1}")
    return DensityMatrix(partial_trace_matrix(rho.mat, n, keep), tol=rho.tol)


def local_unitary(rho: DensityMatrix, u_a, u_b) -> DensityMatrix:
    u = qmat.kron(u_a, u_b)
    return DensityMatrix(u @ rho.mat @ u.conj().T, tol=rho.tol)
