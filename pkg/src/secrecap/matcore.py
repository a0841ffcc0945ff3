"""Dense symmetric linear algebra kernel for small matrices.

All routines operate on plain float64 numpy arrays.  The problem sizes in
this package are tiny (transmit dimensions well below ~64), so the solvers
favour determinism and tight residual control over speed: the symmetric
eigensolver is a cyclic Jacobi sweep with a fixed rotation order, and
factorizations are straightforward textbook loops with explicit pivot
checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NotPositiveDefiniteError,
    NotPsdError,
    NumericalError,
    ShapeError,
)

# Relative tolerance used for PSD clamping and ordering tests unless a call
# site overrides it.
DEFAULT_PSD_TOL = 1e-9

_JACOBI_SWEEP_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 100


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-d float64 array."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got ndim={m.ndim}")
    return m


def as_square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


def symmetrize(a) -> np.ndarray:
    """Return the exactly symmetric part 0.5*(A + A^T) of a square matrix."""
    m = as_square(a)
    return 0.5 * (m + m.T)


def frobenius(a) -> float:
    return float(np.linalg.norm(a))


def sym_eig(a, *, sweep_tol: float = _JACOBI_SWEEP_TOL,
            max_sweeps: int = _JACOBI_MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(w, q)`` with eigenvalues ``w`` sorted descending and
    orthonormal eigenvector columns ``q`` such that ``a = q @ diag(w) @ q.T``.

    The sweep order is fixed (row-major over the strict upper triangle), so
    the result is deterministic for a given input.  Convergence is declared
    when the off-diagonal Frobenius norm drops below ``sweep_tol * ||a||_F``;
    failure to converge within ``max_sweeps`` raises
    :class:`~secrecap.errors.NumericalError` carrying the final residual.
    """
    m = symmetrize(a)
    n = m.shape[0]
    if n == 0:
        return np.empty(0), np.empty((0, 0))
    q = np.eye(n)
    scale = frobenius(m)
    if scale == 0.0:
        return np.zeros(n), q

    def offdiag(x):
        strict = x - np.diag(np.diag(x))
        return float(np.linalg.norm(strict))

    converged = False
    off = offdiag(m)
    for _ in range(max_sweeps):
        if off <= sweep_tol * scale:
            converged = True
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apq = m[p, r]
                if apq == 0.0:
                    continue
                tau = (m[r, r] - m[p, p]) / (2.0 * apq)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + np.hypot(tau, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                app, arr = m[p, p], m[r, r]
                col_p = m[:, p].copy()
                col_r = m[:, r].copy()
                m[:, p] = c * col_p - s * col_r
                m[:, r] = s * col_p + c * col_r
                row_p = m[p, :].copy()
                row_r = m[r, :].copy()
                m[p, :] = c * row_p - s * row_r
                m[r, :] = s * row_p + c * row_r
                # Set the rotated entries from closed forms to kill
                # cancellation error on the diagonal.
                m[p, p] = app - t * apq
                m[r, r] = arr + t * apq
                m[p, r] = 0.0
                m[r, p] = 0.0
                qp = q[:, p].copy()
                qr = q[:, r].copy()
                q[:, p] = c * qp - s * qr
                q[:, r] = s * qp + c * qr
        off = offdiag(m)
    else:
        converged = off <= sweep_tol * scale
    if not converged:
        raise NumericalError(
            f"jacobi eigensolver did not converge in {max_sweeps} sweeps "
            f"(off-diagonal residual {off:.3e})",
            residual=off,
        )
    w = np.diag(m).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], q[:, order]


def min_eigenvalue(a) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    w, _ = sym_eig(a)
    return float(w[-1]) if w.size else 0.0


def psd_sqrt(a, *, tol: float = DEFAULT_PSD_TOL) -> np.ndarray:
    """Symmetric PSD square root of a PSD matrix.

    Eigenvalues down to ``-1e-6 * ||a||_F`` are tolerated and clamped to
    zero; anything more negative raises :class:`NotPsdError`.
    """
    w, q = sym_eig(a)
    if w.size == 0:
        return np.empty((0, 0))
    scale = frobenius(a)
    if w[-1] < -1e-6 * max(scale, 1e-300):
        raise NotPsdError(
            f"matrix is not PSD (min eigenvalue {w[-1]:.3e})",
            min_eigenvalue=float(w[-1]),
        )
    w = np.where(w > 0.0, w, 0.0)
    root = q @ np.diag(np.sqrt(w)) @ q.T
    return symmetrize(root)


def cholesky(a) -> np.ndarray:
    """Lower-triangular Cholesky factor of a positive definite matrix.

    Raises :class:`NotPositiveDefiniteError` (with the failing pivot index)
    when a pivot falls below ``1e-12 * ||a||_F``.
    """
    m = as_square(a)
    n = m.shape[0]
    scale = frobenius(m)
    low = np.zeros((n, n))
    for j in range(n):
        d = m[j, j] - low[j, :j] @ low[j, :j]
        if d <= 1e-12 * scale or not np.isfinite(d):
            raise NotPositiveDefiniteError(
                f"matrix is not positive definite (pivot {j} = {d:.3e})",
                pivot_index=j,
            )
        low[j, j] = np.sqrt(d)
        if j + 1 < n:
            low[j + 1:, j] = (m[j + 1:, j] - low[j + 1:, :j] @ low[j, :j]) / low[j, j]
    return low


def logdet_pd(a) -> float:
    """Natural log-determinant of a positive definite matrix via Cholesky."""
    low = cholesky(a)
    if low.shape[0] == 0:
        return 0.0
    return float(2.0 * np.sum(np.log(np.diag(low))))


def det_lu(a) -> float:
    """Determinant of a general square matrix by partial-pivot LU."""
    m = as_square(a).copy()
    n = m.shape[0]
    sign = 1.0
    det = 1.0
    for j in range(n):
        piv = j + int(np.argmax(np.abs(m[j:, j])))
        if m[piv, j] == 0.0:
            return 0.0
        if piv != j:
            m[[j, piv], :] = m[[piv, j], :]
            sign = -sign
        det *= m[j, j]
        m[j + 1:, j:] -= np.outer(m[j + 1:, j] / m[j, j], m[j, j:])
    return float(sign * det)


def psd_order_leq(a, b, tol: float = DEFAULT_PSD_TOL) -> bool:
    """True when ``a <= b`` in the positive semidefinite order.

    The test is ``lambda_min(b - a) >= -tol * max(1, ||b - a||_F)``.
    """
    ma = as_square(a)
    mb = as_square(b)
    if ma.shape != mb.shape:
        raise ShapeError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    diff = symmetrize(mb - ma)
    if diff.shape[0] == 0:
        return True
    return min_eigenvalue(diff) >= -tol * max(1.0, frobenius(diff))


@dataclass(frozen=True)
class PencilSpectrum:
    """Generalized eigenvalues and eigenvectors of a definite pencil.

    ``phi`` is sorted descending and strictly positive; ``vectors`` holds the
    eigenvector columns G with ``G.T @ a @ G = diag(phi)`` and
    ``G.T @ b @ G = I``; ``above_one`` counts entries of ``phi`` strictly
    greater than one.
    """

    phi: np.ndarray
    vectors: np.ndarray
    above_one: int

    def __post_init__(self):
        self.phi.setflags(write=False)
        self.vectors.setflags(write=False)

    @property
    def dim(self) -> int:
        return int(self.phi.size)


def gen_eig_pencil(a, b) -> PencilSpectrum:
    """Solve the symmetric definite generalized eigenproblem (a, b).

    Both arguments must be positive definite.  Reduces via the Cholesky
    factor L of ``b`` to a standard symmetric problem on ``L^-1 a L^-T`` and
    maps the eigenvectors back with ``G = L^-T Q``.
    """
    ma = symmetrize(a)
    mb = symmetrize(b)
    if ma.shape != mb.shape:
        raise ShapeError(f"pencil members differ in shape: {ma.shape} vs {mb.shape}")
    low = cholesky(mb)
    if low.shape[0] == 0:
        return PencilSpectrum(np.empty(0), np.empty((0, 0)), 0)
    reduced = np.linalg.solve(low, np.linalg.solve(low, ma).T).T
    w, q = sym_eig(symmetrize(reduced))
    if w[-1] <= 0.0:
        raise NumericalError(
            f"pencil produced a non-positive eigenvalue ({w[-1]:.3e}); "
            "inputs are not a definite pair",
            residual=float(w[-1]),
        )
    vectors = np.linalg.solve(low.T, q)
    above = int(np.sum(w > 1.0))
    return PencilSpectrum(w.copy(), vectors, above)
