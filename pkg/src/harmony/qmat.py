"""Dense complex linear algebra for 2x2, 4x4 and 8x8 matrices.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``; scalars
are Python ``complex``. All functions are pure and never modify their inputs.
"""

import math

import numpy as np

from . import _kernels
from .errors import DimensionOverflow, NonConvergence, NotHermitian, NotPSD
from .tolerances import DEFAULT, Tolerances

ALLOWED_DIMS = (2, 4, 8)
MAX_DIM = 8

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(m, dims=ALLOWED_DIMS) -> np.ndarray:
    """Coerce ``m`` to a square complex128 array, checking shape and finiteness."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if dims is not None and a.shape[0] not in dims:
        raise ValueError(f"matrix dimension {a.shape[0]} not in {tuple(dims)}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def adjoint(m) -> np.ndarray:
    return np.asarray(m).conj().T


def frobenius(m) -> float:
    m = np.asarray(m).ravel()
    return math.sqrt(np.vdot(m, m).real)


def trace(m) -> complex:
    return complex(np.trace(m))


def hermiticity_error(m) -> float:
    """Relative Frobenius distance of ``m`` from its adjoint."""
    return frobenius(m - adjoint(m)) / max(1.0, frobenius(m))


def det(m) -> complex:
    """Determinant by LU factorization with partial pivoting."""
    a = np.array(as_matrix(m, dims=None), order="C")
    return complex(_kernels.lu_det(a))


def gen_eigvals(m, max_iter=None) -> np.ndarray:
    """All eigenvalues of a general square matrix, with multiplicity, unordered.

    Householder reduction to Hessenberg form followed by Wilkinson-shifted
    complex QR with deflation. The iteration cap defaults to ``100 * dim``.

    Raises
    ------
    NonConvergence
        If the QR sweep count exceeds the cap.
    """
    a = np.array(as_matrix(m, dims=None), order="C")
    n = a.shape[0]
    if n > MAX_DIM:
        raise DimensionOverflow(f"gen_eigvals supports dim <= {MAX_DIM}, got {n}")
    cap = 100 * n if max_iter is None else int(max_iter)
    _kernels.hessenberg_inplace(a)
    vals, its, ok = _kernels.hessenberg_qr_eigvals(a, cap)
    if not ok:
        raise NonConvergence(f"QR iteration did not converge within {cap} sweeps")
    return vals


def herm_eig(m, tol: Tolerances = DEFAULT):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(w, v)`` with real eigenvalues ``w`` in decreasing order and the
    matching orthonormal eigenvectors as the columns of ``v``.
    """
    a = as_matrix(m, dims=None)
    err = hermiticity_error(a)
    if err > tol.hermitian:
        raise NotHermitian(
            f"||m - m^H||_F / max(1, ||m||_F) = {err:.3e} exceeds {tol.hermitian:.1e}")
    w, v = np.linalg.eigh(0.5 * (a + adjoint(a)))
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(m, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Principal square root of a positive-semidefinite Hermitian matrix.

    Eigenvalues in ``[-tol.psd * scale, 0)`` are clamped to zero.
    """
    a = as_matrix(m, dims=None)
    w, v = herm_eig(a, tol)
    floor = -tol.psd * max(1.0, frobenius(a))
    if w[-1] < floor:
        raise NotPSD(f"smallest eigenvalue {w[-1]:.3e} is below {floor:.1e}")
    root = np.sqrt(np.clip(w, 0.0, None))
    s = (v * root) @ adjoint(v)
    return 0.5 * (s + adjoint(s))


def kron(a, b) -> np.ndarray:
    """Kronecker product; the left factor indexes the most significant qubit."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    n = a.shape[0] * b.shape[0]
    if n > MAX_DIM:
        raise DimensionOverflow(f"Kronecker product dimension {n} exceeds {MAX_DIM}")
    return np.kron(a, b)


def kron_all(*factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for f in factors:
        out = kron(out, f)
    return out


def block_offdiag(upper, lower) -> np.ndarray:
    """The 2n x 2n matrix [[0, upper], [lower, 0]]."""
    n = upper.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    out[:n, n:] = upper
    out[n:, :n] = lower
    return out


# sigma_y (x) sigma_y, maps |00> -> -|11>, |01> -> |10>
YY = kron(SIGMA_Y, SIGMA_Y)
