"""Two-qubit entanglement measures built on the spin-flipped state.

Entropies are in nats throughout.
"""

import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from . import qmat
from .errors import (ImaginaryResidue, InvalidSpectrum, InvalidState,
                     OutOfRange, RouteMismatch, SpectrumViolation)
from .states import DensityMatrix, PureState, from_pure, partial_trace
from .tolerances import DEFAULT, Tolerances

LOG_BASE = "e"


def _require_two_qubits(rho: DensityMatrix):
    if rho.n_qubits != 2:
        raise InvalidState(f"2-qubit measure requires n_qubits=2, got {rho.n_qubits}")


@dataclass(frozen=True)
class LambdaSpectrum:
    """The four square roots of the eigenvalues of rho * rho_tilde, decreasing."""

    lambdas: Tuple[float, float, float, float]
    tol: float = field(default=1e-9, repr=False, compare=False)

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lambdas)
        if len(lam) != 4 or not all(math.isfinite(v) for v in lam):
            raise InvalidSpectrum(f"need four finite values, got {self.lambdas!r}")
        if min(lam) < 0:
            raise InvalidSpectrum(f"negative entry in {lam}")
        if sum(lam) > 1 + self.tol:
            raise InvalidSpectrum(f"sum {sum(lam)!r} exceeds 1 + {self.tol:.0e}")
        object.__setattr__(self, "lambdas", tuple(sorted(lam, reverse=True)))

    def __iter__(self):
        return iter(self.lambdas)

    def __getitem__(self, i):
        return self.lambdas[i]

    @property
    def total(self) -> float:
        return sum(self.lambdas)

    @property
    def concurrence(self) -> float:
        l1, l2, l3, l4 = self.lambdas
        return max(0.0, l1 - l2 - l3 - l4)


# --- spin flip and the polynomial route -------------------------------------

def spin_flip(rho: DensityMatrix) -> np.ndarray:
    """rho_tilde = (Y (x) Y) conj(rho) (Y (x) Y) in the product basis."""
    _require_two_qubits(rho)
    return qmat.YY @ rho.mat.conj() @ qmat.YY


def rho_rho_tilde(rho: DensityMatrix) -> np.ndarray:
    return rho.mat @ spin_flip(rho)


def disharmony_poly(rho: DensityMatrix) -> float:
    """-2 tr[(rho rho~)^2] + [tr(rho rho~)]^2 + 8 det(rho), no eigenvalues needed."""
    m = rho_rho_tilde(rho)
    t1 = np.trace(m)
    t2 = np.trace(m @ m)
    d = -2.0 * t2 + t1 * t1 + 8.0 * qmat.det(rho.mat)
    if abs(d.imag) > rho.tol.imag_residue:
        raise ImaginaryResidue(
            f"imaginary part {d.imag:.3e} exceeds {rho.tol.imag_residue:.0e}")
    return float(d.real)


def harmony(rho: DensityMatrix) -> float:
    """max{0, -D}. Values marginally above 1 are returned unclipped."""
    return max(0.0, -disharmony_poly(rho))


# --- spectrum routes --------------------------------------------------------

def rho_rho_tilde_eigvals(rho: DensityMatrix) -> np.ndarray:
    """Eigenvalues of the non-Hermitian product rho * rho_tilde, as computed."""
    return qmat.gen_eigvals(rho_rho_tilde(rho))


def _check_mu(mu: np.ndarray, tol: Tolerances):
    bad_im = np.max(np.abs(mu.imag))
    if bad_im > tol.spectrum_imag:
        raise SpectrumViolation(
            f"eigenvalue of rho*rho_tilde with imaginary part {bad_im:.3e} > {tol.spectrum_imag:.0e}")
    bad_re = np.min(mu.real)
    if bad_re < -tol.spectrum_neg:
        raise SpectrumViolation(
            f"eigenvalue of rho*rho_tilde with real part {bad_re:.3e} < -{tol.spectrum_neg:.0e}")


def lambda_spectrum(rho: DensityMatrix) -> LambdaSpectrum:
    """Square roots of the eigenvalues of rho * rho_tilde, in decreasing order.

    The 8x8 block matrix ``[[0, rho], [rho_tilde, 0]]`` has eigenvalues
    ``+-sqrt(mu_i)`` where ``mu_i`` are the eigenvalues of ``rho rho_tilde``.
    Taking the lambdas from it directly keeps absolute accuracy near zero,
    where ``sqrt(mu)`` would amplify rounding in ``mu`` to ~1e-8.
    """
    rt = spin_flip(rho)
    e = qmat.gen_eigvals(qmat.block_offdiag(rho.mat, rt))
    e = e[np.argsort(-np.abs(e), kind="stable")]
    a, b = e[0::2], e[1::2]
    mu = 0.5 * (a * a + b * b)
    _check_mu(mu, rho.tol)
    lam = np.where(mu.real >= 0, 0.5 * (np.abs(a) + np.abs(b)), 0.0)
    return LambdaSpectrum(lam)


def r_matrix(rho: DensityMatrix) -> np.ndarray:
    """R = sqrt(sqrt(rho) rho_tilde sqrt(rho)), formed literally."""
    s = qmat.psd_sqrt(rho.mat, rho.tol)
    inner = s @ spin_flip(rho) @ s
    return qmat.psd_sqrt(0.5 * (inner + inner.conj().T), rho.tol)


def r_spectrum(rho: DensityMatrix) -> LambdaSpectrum:
    """Eigenvalues of R via the Hermitian eigensolver.

    ``R^2 = B^H B`` with ``B = sqrt(rho_tilde) sqrt(rho)``, so the eigenvalues of
    R are the singular values of B; they are read off the Hermitian 8x8 matrix
    ``[[0, B], [B^H, 0]]`` whose spectrum is ``+-sigma_i``.
    """
    tol = rho.tol
    s = qmat.psd_sqrt(rho.mat, tol)
    st = qmat.psd_sqrt(spin_flip(rho), tol)
    b = st @ s
    w, _ = qmat.herm_eig(qmat.block_offdiag(b, b.conj().T), tol)
    return LambdaSpectrum(np.clip(w[:4], 0.0, None))


def concurrence(rho: DensityMatrix) -> float:
    return lambda_spectrum(rho).concurrence


def concurrence_via_r(rho: DensityMatrix) -> float:
    return r_spectrum(rho).concurrence


def disharmony_factors(lam: Sequence[float]) -> float:
    l1, l2, l3, l4 = lam
    return ((-l1 + l2 + l3 + l4) * (l1 - l2 + l3 + l4)
            * (l1 + l2 - l3 + l4) * (l1 + l2 + l3 - l4))


def disharmony_from_spectrum(lam, tol: Tolerances = DEFAULT) -> float:
    """Four-factor product over the lambdas; independent of their order.

    When the largest lambda dominates the other three, the same quantity is
    also evaluated as ``-C (C+2l3+2l4)(C+2l4+2l2)(C+2l2+2l3)`` and the two
    forms must agree.
    """
    if not isinstance(lam, LambdaSpectrum):
        lam = LambdaSpectrum(lam)
    d = disharmony_factors(lam.lambdas)
    l1, l2, l3, l4 = lam.lambdas
    c = l1 - l2 - l3 - l4
    if c >= 0:
        h = c * (c + 2 * l3 + 2 * l4) * (c + 2 * l4 + 2 * l2) * (c + 2 * l2 + 2 * l3)
        if abs(h + d) > tol.cross_form:
            raise RouteMismatch(f"factor form {d!r} vs concurrence form {-h!r}")
    return d


def disharmony_routes(rho: DensityMatrix) -> dict:
    return {
        "polynomial": disharmony_poly(rho),
        "spectrum": disharmony_from_spectrum(lambda_spectrum(rho), rho.tol),
        "hermitian_r": disharmony_from_spectrum(r_spectrum(rho), rho.tol),
    }


def route_discrepancy(routes: dict) -> float:
    v = list(routes.values())
    return max(abs(a - b) for i, a in enumerate(v) for b in v[i + 1:])


# --- entropies --------------------------------------------------------------

def binary_entropy(x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise OutOfRange(f"binary entropy needs x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log(x) - (1 - x) * math.log1p(-x)


def eof_from_concurrence(c: float) -> float:
    c = min(max(float(c), 0.0), 1.0)
    return binary_entropy((1 + math.sqrt(1 - c * c)) / 2)


def entanglement_of_formation(rho: DensityMatrix) -> float:
    return eof_from_concurrence(concurrence(rho))


def purity(rho: DensityMatrix) -> float:
    m = rho.mat
    return float(np.sum(np.abs(m) ** 2))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    w, _ = rho.eigh()
    w = w[w > 0]
    return float(-np.sum(w * np.log(w)))


# --- pure states ------------------------------------------------------------

def spin_flip_vector(psi: PureState) -> np.ndarray:
    """(Y (x) Y)|psi*>: a|00>+b|11>+c|01>+d|10> -> -b*|00> - a*|11> + d*|01> + c*|10>."""
    if psi.n_qubits != 2:
        raise InvalidState(f"2-qubit measure requires n_qubits=2, got {psi.n_qubits}")
    a00, a01, a10, a11 = psi.amplitudes
    return np.array([-np.conj(a11), np.conj(a10), np.conj(a01), -np.conj(a00)])


def pure_harmony(psi: PureState) -> float:
    overlap = np.vdot(spin_flip_vector(psi), psi.amplitudes)
    return float(abs(overlap) ** 4)


def harmony_bounds(c: float) -> Tuple[float, float]:
    """(C^4, C (2+C)^3 / 27): the range harmony can take at fixed concurrence."""
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise OutOfRange(f"concurrence must lie in [0, 1], got {c}")
    return c ** 4, c * (2 + c) ** 3 / 27


# --- report -----------------------------------------------------------------

@dataclass(frozen=True)
class MeasureReport:
    harmony: float
    disharmony: float
    concurrence: float
    eof: float
    purity_a: float
    lambdas: LambdaSpectrum
    route_discrepancy: float
    harmony_in_range: bool

    def as_row(self) -> dict:
        row = {k: getattr(self, k) for k in
               ("harmony", "disharmony", "concurrence", "eof", "purity_a")}
        for i, v in enumerate(self.lambdas, 1):
            row[f"lambda{i}"] = v
        row["lambda_sum"] = self.lambdas.total
        row["route_discrepancy"] = self.route_discrepancy
        row["harmony_in_range"] = int(self.harmony_in_range)
        return row


def measure_report(rho: DensityMatrix) -> MeasureReport:
    _require_two_qubits(rho)
    lam = lambda_spectrum(rho)
    d = disharmony_poly(rho)
    routes = {
        "polynomial": d,
        "spectrum": disharmony_from_spectrum(lam, rho.tol),
        "hermitian_r": disharmony_from_spectrum(r_spectrum(rho), rho.tol),
    }
    h = max(0.0, -d)
    return MeasureReport(
        harmony=h,
        disharmony=d,
        concurrence=lam.concurrence,
        eof=eof_from_concurrence(lam.concurrence),
        purity_a=purity(partial_trace(rho, [0])),
        lambdas=lam,
        route_discrepancy=route_discrepancy(routes),
        harmony_in_range=0.0 <= h <= 1.0,
    )


def pure_report(psi: PureState) -> dict:
    """The pure-state shortcuts next to their general-route counterparts."""
    rho = from_pure(psi)
    rho_a = partial_trace(rho, [0])
    h_pure = pure_harmony(psi)
    return {
        "harmony": harmony(rho),
        "pure_harmony": h_pure,
        "concurrence": concurrence(rho),
        "purity_a": purity(rho_a),
        "purity_from_harmony": 1 - 0.5 * math.sqrt(h_pure),
        "concurrence_from_det": math.sqrt(max(0.0, 4 * qmat.det(rho_a.mat).real)),
    }
