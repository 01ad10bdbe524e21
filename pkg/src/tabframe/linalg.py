"""Dense real matrices and a one-sided Jacobi SVD.

Matrices are 2-D float64 numpy arrays; :func:`as_matrix` validates them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, NumericError

OFF_DIAGONAL_TOL = 1e-12
MAX_SWEEPS = 60


def as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=float)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got {m.ndim} dimensions")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    out = a @ b
    if not np.all(np.isfinite(out)):
        raise DomainError("matrix product overflowed")
    return out


def transpose(a) -> np.ndarray:
    return as_matrix(a).T.copy()


@dataclass(frozen=True)
class SvdResult:
    u: np.ndarray  # m x r, orthonormal columns
    s: np.ndarray  # r singular values, non-increasing
    vt: np.ndarray  # r x n, orthonormal rows

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.s) @ self.vt

    def __iter__(self):
        return iter((self.u, self.s, self.vt))


def _jacobi_columns(w: np.ndarray, tol: float, max_sweeps: int):
    """Rotate column pairs of ``w`` in place until all pairs are orthogonal.

    Returns the accumulated right rotation ``v`` such that original @ v == w.
    """
    n = w.shape[1]
    v = np.eye(n)
    # column-major copies make the pair updates contiguous
    cols = np.asfortranarray(w)
    vc = np.asfortranarray(v)
    worst = 0.0
    for _ in range(max_sweeps):
        worst = 0.0
        rotated = False
        for p in range(n - 1):
            ap = cols[:, p]
            for q in range(p + 1, n):
                aq = cols[:, q]
                alpha = float(ap @ ap)
                beta = float(aq @ aq)
                if alpha == 0.0 or beta == 0.0:
                    continue
                gamma = float(ap @ aq)
                off = abs(gamma) / math.sqrt(alpha * beta)
                if off > worst:
                    worst = off
                if off <= tol:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                new_p = c * ap - s * aq
                cols[:, q] = s * ap + c * aq
                cols[:, p] = new_p
                vp = vc[:, p].copy()
                vc[:, p] = c * vp - s * vc[:, q]
                vc[:, q] = s * vp + c * vc[:, q]
        if not rotated:
            return cols, vc
    raise NumericError(
        f"Jacobi SVD did not converge in {max_sweeps} sweeps (largest relative off-diagonal {worst:.3e})",
        achieved=worst,
    )


def _complete_basis(u: np.ndarray, good: np.ndarray) -> np.ndarray:
    """Replace the columns of ``u`` not flagged ``good`` with an orthonormal completion."""
    m = u.shape[0]
    basis = [u[:, j] for j in range(u.shape[1]) if good[j]]
    for j in np.flatnonzero(~good):
        q = np.array(basis).T if basis else np.zeros((m, 0))
        proj = np.eye(m) - q @ q.T
        cand = proj[:, int(np.argmax(np.sum(proj * proj, axis=0)))]
        for _ in range(2):
            if basis:
                cand = cand - q @ (q.T @ cand)
            cand = cand / np.linalg.norm(cand)
        u[:, j] = cand
        basis.append(cand)
    return u


def svd(a, tol: float = OFF_DIAGONAL_TOL, max_sweeps: int = MAX_SWEEPS) -> SvdResult:
    """Thin SVD ``a = u @ diag(s) @ vt`` by cyclic one-sided Jacobi rotations.

    Columns of the taller orientation are orthogonalized until every pair
    satisfies ``|a_p . a_q| <= tol * |a_p| |a_q|``. Singular values come out
    non-increasing, and each pair of singular vectors is signed so the
    largest-magnitude entry of the ``u`` column is positive.
    """
    a = as_matrix(a)
    m, n = a.shape
    if m == 0 or n == 0:
        raise DomainError("svd of an empty matrix")
    flip = m < n
    w = (a.T if flip else a).copy()
    cols, v = _jacobi_columns(w, tol, max_sweeps)

    sigma = np.sqrt(np.einsum("ij,ij->j", cols, cols))
    order = np.argsort(-sigma, kind="stable")
    sigma, cols, v = sigma[order], cols[:, order], v[:, order]

    rows = cols.shape[0]
    floor = max(rows, cols.shape[1]) * np.finfo(float).eps * (sigma[0] if sigma.size else 0.0)
    good = sigma > floor
    u = np.zeros_like(cols)
    u[:, good] = cols[:, good] / sigma[good]
    if not np.all(good):
        u = _complete_basis(u, good)

    if flip:
        u, v = v, u
    # sign convention: largest |entry| of each u column is positive
    pivots = np.argmax(np.abs(u), axis=0)
    signs = np.where(u[pivots, np.arange(u.shape[1])] < 0, -1.0, 1.0)
    u = u * signs
    v = v * signs
    return SvdResult(np.ascontiguousarray(u), sigma, np.ascontiguousarray(v.T))
