"""Dense matrix primitives and a cyclic Jacobi eigensolver for symmetric matrices.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConvergenceError, ShapeError, ValidationError

MAX_SWEEPS = 100
OFF_TOL = 1e-12
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class EigenResult:
    """Full spectrum of a symmetric matrix.

    ``eigenvalues`` is sorted descending and column ``i`` of ``eigenvectors``
    pairs with ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return mat_mul(q * self.eigenvalues, q.T)


def as_matrix(a, name="matrix") -> np.ndarray:
    m = np.asarray(a, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains non-finite entries")
    return m


def mat_mul(a, b) -> np.ndarray:
    """Matrix product ``a @ b``; 1-D operands are treated as column vectors."""
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}"
        )
    return a @ b


@njit(cache=True)
def _jacobi(a, max_sweeps, tol):
    # only the upper triangle of a is read and written; on return its diagonal
    # holds the eigenvalues and the rows of vt the matching eigenvectors
    n = a.shape[0]
    vt = np.eye(n)
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * a[i, j] * a[i, j]
        off = np.sqrt(off)
        if off <= tol:
            return vt, sweep, off, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                g = 100.0 * abs(apq)
                if sweep > 3 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    # below the rounding level of both diagonal entries
                    a[p, q] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(p):
                    g = a[k, p]
                    h = a[k, q]
                    a[k, p] = c * g - s * h
                    a[k, q] = s * g + c * h
                for k in range(p + 1, q):
                    g = a[p, k]
                    h = a[k, q]
                    a[p, k] = c * g - s * h
                    a[k, q] = s * g + c * h
                for k in range(q + 1, n):
                    g = a[p, k]
                    h = a[q, k]
                    a[p, k] = c * g - s * h
                    a[q, k] = s * g + c * h
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                for k in range(n):
                    vp = vt[p, k]
                    vq = vt[q, k]
                    vt[p, k] = c * vp - s * vq
                    vt[q, k] = s * vp + c * vq
    return vt, max_sweeps, off, False


def check_symmetric(m: np.ndarray, tol: float = SYMMETRY_TOL) -> None:
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got {m.shape[0]}x{m.shape[1]}")
    dev = np.abs(m - m.T)
    if m.size and dev.max() > tol:
        i, j = np.unravel_index(np.argmax(dev), dev.shape)
        raise ValidationError(
            f"matrix is not symmetric: |m[{i}][{j}] - m[{j}][{i}]| = {dev[i, j]:.3e}"
        )


def sym_eigen(m, max_sweeps: int = MAX_SWEEPS, tol: float = OFF_TOL) -> EigenResult:
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Iteration stops once the Frobenius norm of the off-diagonal part drops
    below ``tol * max(1, ||m||_F)``. Eigenvalues come back in descending order
    (ties keep their diagonal position) and every eigenvector has its largest
    absolute entry made non-negative.
    """
    m = as_matrix(m)
    check_symmetric(m)
    n = m.shape[0]
    if n == 0:
        raise ShapeError("cannot eigendecompose an empty matrix")
    a = np.triu(0.5 * (m + m.T))
    scale = max(1.0, float(np.linalg.norm(a)))
    vt, sweeps, off, ok = _jacobi(a, max_sweeps, tol * scale)
    if not ok:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", off)

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vt[order].T.copy()
    idx = np.argmax(np.abs(vectors), axis=0)
    flip = vectors[idx, np.arange(n)] < 0
    vectors[:, flip] *= -1.0
    return EigenResult(values, vectors, sweeps)


def double_center(delta) -> np.ndarray:
    """``-1/2 * J @ (delta**2) @ J`` with ``J`` the centering projector.

    Evaluated through row/column means so the result is exactly symmetric.
    Accepts a ``DissimilarityMatrix`` or a bare square array.
    """
    d = as_matrix(getattr(delta, "d", delta), "dissimilarities")
    if d.shape[0] != d.shape[1]:
        raise ShapeError(f"expected a square matrix, got {d.shape[0]}x{d.shape[1]}")
    d2 = d * d
    row = d2.mean(axis=1)
    grand = d2.mean()
    b = -0.5 * (d2 - (row[:, None] + row[None, :]) + grand)
    # squared entries are symmetric, so column means equal row means
    return b
