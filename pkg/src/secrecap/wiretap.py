"""Secrecy capacity of the MIMO Gaussian wiretap channel.

The channel has a legitimate receiver and an eavesdropper, each observing
the transmit vector through its own real channel matrix plus unit-variance
Gaussian noise, and the input covariance is bounded above by a fixed PSD
matrix in the semidefinite order.  The capacity is computed in closed form
from the generalized eigenvalues of a definite pencil built from the two
Gram matrices; a deterministic grid oracle over feasible covariances is
provided as an independent cross-check.

All rates are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore
from .errors import (
    ConstraintViolationError,
    NotPsdError,
    ShapeError,
    UnsupportedDimensionError,
)


@dataclass(frozen=True)
class WiretapScenario:
    """Channel pair plus covariance constraint.

    ``h_legit`` and ``h_eaves`` are the channel matrices of the legitimate
    receiver and the eavesdropper (both with ``dim`` columns); ``s`` is the
    PSD input covariance bound.
    """

    h_legit: np.ndarray
    h_eaves: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        h_l = matcore.as_matrix(self.h_legit)
        h_e = matcore.as_matrix(self.h_eaves)
        s = matcore.symmetrize(self.s)
        t = s.shape[0]
        if h_l.shape[1] != t:
            raise ShapeError(
                f"legitimate channel has {h_l.shape[1]} columns, constraint is {t}x{t}")
        if h_e.shape[1] != t:
            raise ShapeError(
                f"eavesdropper channel has {h_e.shape[1]} columns, constraint is {t}x{t}")
        if t > 0:
            lam = matcore.min_eigenvalue(s)
            if lam < -matcore.DEFAULT_PSD_TOL * max(1.0, matcore.frobenius(s)):
                raise NotPsdError(
                    f"constraint matrix is not PSD (min eigenvalue {lam:.3e})",
                    min_eigenvalue=lam,
                )
        for name, arr in (("h_legit", h_l), ("h_eaves", h_e), ("s", s)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.s.shape[0]

    def swapped(self) -> "WiretapScenario":
        """Scenario with the receiver roles exchanged."""
        return WiretapScenario(self.h_eaves, self.h_legit, self.s)


@dataclass(frozen=True)
class CapacityResult:
    """Closed-form capacity value with its pencil spectrum and maximizer."""

    value_nats: float
    spectrum: matcore.PencilSpectrum
    b_star: np.ndarray

    def __post_init__(self):
        self.b_star.setflags(write=False)


def build_pencil(sc: WiretapScenario) -> tuple[np.ndarray, np.ndarray]:
    """Definite pencil (I + S^1/2 Hl^T Hl S^1/2, I + S^1/2 He^T He S^1/2)."""
    s_half = matcore.psd_sqrt(sc.s)
    eye = np.eye(sc.dim)
    a = matcore.symmetrize(eye + s_half @ sc.h_legit.T @ sc.h_legit @ s_half)
    b = matcore.symmetrize(eye + s_half @ sc.h_eaves.T @ sc.h_eaves @ s_half)
    return a, b


def _rank_reduction(sc: WiretapScenario):
    """Restrict a scenario to the range of its constraint matrix.

    Returns ``(reduced_scenario, basis)`` where ``basis`` is the t x theta
    orthonormal range basis, or ``(sc, None)`` when S has full rank.
    Eigenvalues of S below ``1e-9 * ||S||_F`` count as zero.
    """
    w, q = matcore.sym_eig(sc.s)
    cut = 1e-9 * matcore.frobenius(sc.s)
    theta = int(np.sum(w > cut))
    if theta == sc.dim:
        return sc, None
    basis = q[:, :theta]
    reduced = WiretapScenario(
        sc.h_legit @ basis, sc.h_eaves @ basis, np.diag(w[:theta]))
    return reduced, basis


def reduce_rank_deficient(sc: WiretapScenario) -> WiretapScenario:
    """Equivalent scenario with a positive definite constraint matrix.

    Drops the null directions of S (the input is forced into range(S) by
    the covariance bound, so the capacity is unchanged).  Full-rank S passes
    through untouched.
    """
    reduced, _ = _rank_reduction(sc)
    return reduced


def secrecy_capacity(sc: WiretapScenario) -> CapacityResult:
    """Secrecy capacity under the matrix constraint, with its maximizer.

    The value is ``0.5 * sum(log phi_j)`` over the pencil eigenvalues that
    exceed one; it is zero exactly when none do.  Rank-deficient constraint
    matrices are reduced first and the optimal covariance is embedded back
    on range(S).
    """
    reduced, basis = _rank_reduction(sc)
    if reduced.dim == 0:
        empty = matcore.PencilSpectrum(np.empty(0), np.empty((0, 0)), 0)
        return CapacityResult(0.0, empty, np.zeros((sc.dim, sc.dim)))
    a, b = build_pencil(reduced)
    spectrum = matcore.gen_eig_pencil(a, b)
    value = 0.5 * float(np.sum(np.log(spectrum.phi[: spectrum.above_one])))
    b_star = _maximizer_from_spectrum(reduced.s, spectrum)
    if basis is not None:
        b_star = matcore.symmetrize(basis @ b_star @ basis.T)
    return CapacityResult(max(value, 0.0), spectrum, b_star)


def _maximizer_from_spectrum(s: np.ndarray,
                             spectrum: matcore.PencilSpectrum) -> np.ndarray:
    """Optimal covariance S^1/2 P S^1/2 for the projector P onto the span of
    the eigenvectors whose eigenvalue exceeds one."""
    t = s.shape[0]
    if spectrum.above_one == 0:
        return np.zeros((t, t))
    g1 = spectrum.vectors[:, : spectrum.above_one]
    qbasis, _ = np.linalg.qr(g1)
    proj = qbasis @ qbasis.T
    s_half = matcore.psd_sqrt(s)
    return matcore.symmetrize(s_half @ proj @ s_half)


def optimal_covariance(sc: WiretapScenario) -> np.ndarray:
    """Covariance attaining the secrecy capacity (zero matrix when the
    eavesdropper dominates every direction)."""
    return secrecy_capacity(sc).b_star


def _check_feasible(sc: WiretapScenario, b, tol: float) -> np.ndarray:
    m = matcore.symmetrize(b)
    if m.shape[0] != sc.dim:
        raise ShapeError(f"covariance is {m.shape}, expected {sc.dim}x{sc.dim}")
    if not matcore.psd_order_leq(np.zeros_like(m), m, tol):
        raise ConstraintViolationError(
            "covariance is not positive semidefinite", side="lower")
    if not matcore.psd_order_leq(m, sc.s, tol):
        raise ConstraintViolationError(
            "covariance exceeds the constraint matrix", side="upper")
    return m


def _half_logdet(h: np.ndarray, b: np.ndarray) -> float:
    r = h.shape[0]
    gram = matcore.symmetrize(np.eye(r) + h @ b @ h.T)
    return 0.5 * matcore.logdet_pd(gram)


def rate_no_prefix(sc: WiretapScenario, b,
                   tol: float = matcore.DEFAULT_PSD_TOL) -> float:
    """Binning-only secrecy rate at covariance ``b``:
    0.5 log|I + Hl B Hl^T| - 0.5 log|I + He B He^T|.

    ``b`` must satisfy 0 <= B <= S in the PSD order (within ``tol``); the
    returned value may be negative for unfavourable covariances.
    """
    m = _check_feasible(sc, b, tol)
    return _half_logdet(sc.h_legit, m) - _half_logdet(sc.h_eaves, m)


def rate_artificial_noise(sc: WiretapScenario, b,
                          tol: float = matcore.DEFAULT_PSD_TOL) -> float:
    """Secrecy rate of the artificial-noise scheme at noise covariance ``b``.

    The transmitter always uses the full covariance S, splitting it into a
    message part S - B and a deliberately transmitted noise part B:
    0.5 log(|I + Hl S Hl^T| / |I + Hl B Hl^T|)
    - 0.5 log(|I + He S He^T| / |I + He B He^T|).
    """
    m = _check_feasible(sc, b, tol)
    legit = _half_logdet(sc.h_legit, sc.s) - _half_logdet(sc.h_legit, m)
    eaves = _half_logdet(sc.h_eaves, sc.s) - _half_logdet(sc.h_eaves, m)
    return legit - eaves


# ---------------------------------------------------------------------------
# Deterministic grid oracle
# ---------------------------------------------------------------------------

_GRID_POINT_LIMIT = 40_000_000


def _rotation_grid(t: int, axes: list[np.ndarray]) -> np.ndarray:
    """Stack of rotation matrices for a grid of Givens angles.

    ``axes`` holds one angle array per Givens plane: none for t=1, one for
    t=2, three (planes (0,1), (0,2), (1,2)) for t=3.
    """
    if t == 1:
        return np.ones((1, 1, 1))
    if t == 2:
        th = axes[0]
        c, s = np.cos(th), np.sin(th)
        q = np.zeros((th.size, 2, 2))
        q[:, 0, 0] = c
        q[:, 0, 1] = -s
        q[:, 1, 0] = s
        q[:, 1, 1] = c
        return q

    def plane(theta, i, j):
        q = np.zeros((theta.size, 3, 3))
        q[:, 0, 0] = q[:, 1, 1] = q[:, 2, 2] = 1.0
        q[:, i, i] = np.cos(theta)
        q[:, j, j] = np.cos(theta)
        q[:, i, j] = -np.sin(theta)
        q[:, j, i] = np.sin(theta)
        return q

    qa = plane(axes[0], 0, 1)
    qb = plane(axes[1], 0, 2)
    qc = plane(axes[2], 1, 2)
    prod = np.einsum("aij,bjk,ckl->abcil", qa, qb, qc)
    return prod.reshape(-1, 3, 3)


def _batch_half_logdet(h: np.ndarray, b_batch: np.ndarray) -> np.ndarray:
    """0.5 log|I + H B H^T| for a stack of covariances, vectorized."""
    r = h.shape[0]
    m = np.einsum("ij,njk,lk->nil", h, b_batch, h)
    m[:, np.arange(r), np.arange(r)] += 1.0
    if r == 1:
        det = m[:, 0, 0]
    elif r == 2:
        det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    else:
        _, logdet = np.linalg.slogdet(m)
        return 0.5 * logdet
    return 0.5 * np.log(det)


def _objective_batch(sc: WiretapScenario, b_batch: np.ndarray,
                     objective: str) -> np.ndarray:
    legit = _batch_half_logdet(sc.h_legit, b_batch)
    eaves = _batch_half_logdet(sc.h_eaves, b_batch)
    if objective == "no_prefix":
        return legit - eaves
    if objective == "artificial_noise":
        const = (_half_logdet(sc.h_legit, sc.s)
                 - _half_logdet(sc.h_eaves, sc.s))
        return const - legit + eaves
    raise ValueError(f"unknown objective {objective!r}")


def _covariances_from_params(s_half: np.ndarray, angle_axes, c_axes):
    """All covariances S^1/2 Q diag(c) Q^T S^1/2 on the parameter grid.

    Returns ``(b_batch, params)`` where ``params`` is the (n, k) array of
    grid coordinates (angles first, then per-axis power fractions).
    """
    t = s_half.shape[0]
    rot = _rotation_grid(t, list(angle_axes))
    mesh = np.meshgrid(*c_axes, indexing="ij")
    c = np.stack([m.ravel() for m in mesh], axis=-1)  # (nc, t)
    # W = Q diag(c) Q^T for every (rotation, fraction) pair.
    scaled = rot[:, None, :, :] * c[None, :, None, :]
    w = np.einsum("nmij,nkj->nmik", scaled, rot)
    w = w.reshape(-1, t, t)
    b_batch = s_half @ w @ s_half
    if angle_axes:
        ang_mesh = np.meshgrid(*angle_axes, indexing="ij")
        ang = np.stack([m.ravel() for m in ang_mesh], axis=-1)
        params = np.concatenate(
            [np.repeat(ang, c.shape[0], axis=0),
             np.tile(c, (ang.shape[0], 1))], axis=1)
    else:
        params = c
    return b_batch, params


def _grid_objective_max(sc: WiretapScenario, resolution: int, objective: str,
                        refine: int = 3):
    """Maximize a rate objective over a deterministic covariance net.

    The net is ``B = S^1/2 Q diag(c) Q^T S^1/2`` with per-axis fractions
    ``c`` on a uniform [0, 1] grid and ``Q`` swept over a Givens-angle grid.
    After the coarse pass the incumbent is polished by ``refine`` shrinking
    local grids, which keeps every candidate feasible and the search fully
    deterministic.  Returns ``(value, b_best)``.
    """
    t = sc.dim
    if t > 3:
        raise UnsupportedDimensionError(
            f"grid oracle supports at most 3 transmit dimensions, got {t}")
    if t == 0:
        return 0.0, np.zeros((0, 0))
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    s_half = matcore.psd_sqrt(sc.s)

    n_angles = {1: 0, 2: 1, 3: 3}[t]
    angle_span = {1: 0.0, 2: np.pi / 2.0, 3: np.pi}[t]
    total = (max(resolution, 1) ** n_angles) * (resolution + 1) ** t
    if total > _GRID_POINT_LIMIT:
        raise UnsupportedDimensionError(
            f"grid of {total} points exceeds the oracle budget; "
            "lower the resolution")

    angle_axes = [np.linspace(0.0, angle_span, resolution, endpoint=False)
                  for _ in range(n_angles)]
    c_axes = [np.linspace(0.0, 1.0, resolution + 1) for _ in range(t)]

    best_val = -np.inf
    best_params = None
    best_b = np.zeros((t, t))

    def evaluate(ang_axes, frac_axes):
        nonlocal best_val, best_params, best_b
        b_batch, params = _covariances_from_params(s_half, ang_axes, frac_axes)
        vals = _objective_batch(sc, b_batch, objective)
        k = int(np.argmax(vals))
        if vals[k] > best_val:
            best_val = float(vals[k])
            best_params = params[k]
            best_b = b_batch[k]

    evaluate(angle_axes, c_axes)

    ang_step = angle_span / resolution if n_angles else 0.0
    c_step = 1.0 / resolution
    pts = 9
    for _ in range(refine):
        center = best_params
        ang_axes = [np.linspace(center[i] - ang_step, center[i] + ang_step, pts)
                    for i in range(n_angles)]
        frac_axes = []
        for i in range(t):
            ci = center[n_angles + i]
            lo = max(0.0, ci - c_step)
            hi = min(1.0, ci + c_step)
            frac_axes.append(np.linspace(lo, hi, pts))
        evaluate(ang_axes, frac_axes)
        ang_step *= 2.0 / (pts - 1)
        c_step *= 2.0 / (pts - 1)

    return best_val, matcore.symmetrize(best_b)


def brute_force_capacity(sc: WiretapScenario, resolution: int = 64) -> float:
    """Grid-search lower bound on the secrecy capacity.

    Exhaustive over a deterministic rotation/fraction net (see
    :func:`grid_rate_maximum`); accurate to O(1/resolution).  Only small
    transmit dimensions are supported, the parameter count grows
    exponentially with ``t``.
    """
    value, _ = _grid_objective_max(sc, resolution, "no_prefix")
    return max(value, 0.0)


def grid_rate_maximum(sc: WiretapScenario, resolution: int = 64,
                      objective: str = "no_prefix"):
    """Maximize one of the two rate characterizations over the covariance net.

    ``objective`` is ``"no_prefix"`` (binning-only rate) or
    ``"artificial_noise"``.  Returns ``(value, b_best)``.
    """
    return _grid_objective_max(sc, resolution, objective)
