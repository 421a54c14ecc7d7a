"""Pure NumPy cyclic Jacobi sweeps for complex Hermitian matrices.

Fallback used when the compiled extension ``landauer_lab._jacobi`` is not
available.  Same algorithm, same thresholds; ``linalg.herm_eig`` wraps either
backend.  Row/column rotations are expressed as vector operations so the
fallback stays usable up to dimension a few hundred.
"""

from __future__ import annotations

import numpy as np

AVAILABLE = True


def _off_norm_sq(a: np.ndarray) -> float:
    d = np.abs(np.diagonal(a)) ** 2
    return float(np.sum(np.abs(a) ** 2) - np.sum(d))


def jacobi_sweeps(a: np.ndarray, v: np.ndarray, tol: float, max_sweeps: int):
    """Run cyclic-by-rows Jacobi rotations in place.

    ``a`` is destroyed (driven to diagonal form), ``v`` accumulates the
    rotations (columns become eigenvectors).  Returns ``(sweeps, converged)``.
    """
    n = a.shape[0]
    fro = float(np.linalg.norm(a))
    if fro == 0.0:
        return 0, True
    thresh = tol * fro
    thresh_sq = thresh * thresh
    skip = thresh / n  # per-pivot skip level; guarantees off-norm <= thresh
    for sweep in range(max_sweeps):
        if _off_norm_sq(a) <= thresh_sq:
            return sweep, True
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                ag = abs(g)
                if ag <= skip:
                    continue
                alpha = a[p, p].real
                beta = a[q, q].real
                tau = (alpha - beta) / (2.0 * ag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = (t * c) * np.conj(g / ag)
                sc = np.conj(s)
                # A <- R^H A R with R[p,p]=c, R[p,q]=-conj(s), R[q,p]=s, R[q,q]=c
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp + s * colq
                a[:, q] = -sc * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp + sc * rowq
                a[q, :] = -s * rowp + c * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + s * vq
                v[:, q] = -sc * vp + c * vq
    return max_sweeps, _off_norm_sq(a) <= thresh_sq
