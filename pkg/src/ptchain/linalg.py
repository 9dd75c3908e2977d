"""Small dense complex linear algebra.

Matrices here are tiny (N <= 64), so everything is written for clarity and
for batching over many energies at once rather than for large-N speed.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np

from .errors import EigenFailure, IllConditionedWarning, InvalidSize, SingularMatrix

PIVOT_FLOOR = 1e-300
PIVOT_RATIO_WARN = 1e12
MAX_INVERT_N = 64
MAX_EIG_N = 32


class LUFactors(NamedTuple):
    lu: np.ndarray         # (B, n, n) unit-lower L below the diagonal, U on and above
    perm: np.ndarray       # (B, n) row permutation, A[perm] = L U
    singular: np.ndarray   # (B,) pivot fell below PIVOT_FLOOR
    pivot_ratio: np.ndarray  # (B,) max|pivot| / min|pivot|


def lu_factor(a) -> LUFactors:
    """Batched LU decomposition with partial pivoting over the last two axes."""
    a = np.array(a, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    n = a.shape[-1]
    lu = a.reshape(-1, n, n).copy()
    nb = lu.shape[0]
    rows = np.arange(nb)
    perm = np.tile(np.arange(n), (nb, 1))
    singular = np.zeros(nb, dtype=bool)
    pmax = np.zeros(nb)
    pmin = np.full(nb, np.inf)
    for k in range(n):
        p = k + np.argmax(np.abs(lu[:, k:, k]), axis=1)
        swap = p != k
        if np.any(swap):
            r = rows[swap]
            lu[r, k], lu[r, p[swap]] = lu[r, p[swap]].copy(), lu[r, k].copy()
            perm[r, k], perm[r, p[swap]] = perm[r, p[swap]].copy(), perm[r, k].copy()
        piv = lu[:, k, k]
        mag = np.abs(piv)
        bad = ~(mag >= PIVOT_FLOOR)
        singular |= bad
        pmax = np.maximum(pmax, mag)
        pmin = np.minimum(pmin, mag)
        if k + 1 < n:
            piv = np.where(bad, 1.0, piv)
            lu[:, k + 1:, k] /= piv[:, None]
            lu[:, k + 1:, k + 1:] -= lu[:, k + 1:, k, None] * lu[:, k, None, k + 1:]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = np.where(singular, np.inf, pmax / pmin)
    return LUFactors(lu, perm, singular, ratio)


def lu_solve(factors: LUFactors, b) -> np.ndarray:
    """Solve ``A x = b`` for every matrix in the batch; ``b`` has shape (B, n, m)."""
    lu, perm = factors.lu, factors.perm
    nb, n, _ = lu.shape
    x = np.asarray(b, dtype=complex)[np.arange(nb)[:, None], perm].copy()
    for i in range(1, n):
        x[:, i] -= np.einsum("bj,bjm->bm", lu[:, i, :i], x[:, :i])
    diag = np.where(factors.singular[:, None], 1.0, np.diagonal(lu, axis1=1, axis2=2))
    for i in range(n - 1, -1, -1):
        x[:, i] -= np.einsum("bj,bjm->bm", lu[:, i, i + 1:], x[:, i + 1:])
        x[:, i] /= diag[:, i, None]
    return x


def batched_inverse(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of each matrix in a stack.

    Returns ``(inverse, singular, pivot_ratio)``; entries flagged singular hold
    garbage and must not be used.
    """
    a = np.asarray(a)
    n = a.shape[-1]
    if n > MAX_INVERT_N:
        raise InvalidSize(f"dense inversion is limited to n <= {MAX_INVERT_N}")
    f = lu_factor(a)
    eye = np.broadcast_to(np.eye(n, dtype=complex), f.lu.shape)
    inv = lu_solve(f, eye)
    return inv.reshape(a.shape), f.singular.reshape(a.shape[:-2]), f.pivot_ratio.reshape(a.shape[:-2])


def invert(m) -> np.ndarray:
    """Inverse of a single square matrix via LU with partial pivoting."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError("invert expects a single square matrix")
    inv, singular, ratio = batched_inverse(m[None])
    if singular[0]:
        raise SingularMatrix("pivot magnitude below 1e-300")
    if ratio[0] > PIVOT_RATIO_WARN:
        warnings.warn(f"pivot ratio {ratio[0]:.3g} exceeds {PIVOT_RATIO_WARN:g}",
                      IllConditionedWarning, stacklevel=2)
    return inv[0]


def solve(m, b) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    b = np.asarray(b, dtype=complex)
    f = lu_factor(m[None])
    if f.singular[0]:
        raise SingularMatrix("pivot magnitude below 1e-300")
    x = lu_solve(f, b.reshape(1, m.shape[0], -1))
    return x.reshape(b.shape)


# --- eigenvalues -------------------------------------------------------------

def hessenberg(a) -> tuple[np.ndarray, np.ndarray]:
    """Householder reduction ``A = Q H Q^H`` with ``H`` upper Hessenberg."""
    h = np.array(a, dtype=complex)
    n = h.shape[0]
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        x[0] += phase * alpha
        v = x / np.linalg.norm(x)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h, q


def _wilkinson_shift(a, b, c, d) -> complex:
    """Eigenvalue of [[a, b], [c, d]] closest to d."""
    half = 0.5 * (a - d)
    disc = np.sqrt(half * half + b * c)
    # the larger denominator gives the root nearest d without cancellation
    den = half + disc if abs(half + disc) >= abs(half - disc) else half - disc
    return d - b * c / den if den != 0 else d


def hessenberg_qr_eigvals(h, max_iter: int | None = None) -> np.ndarray:
    """Eigenvalues of an upper Hessenberg matrix by shifted QR with deflation."""
    h = np.array(h, dtype=complex)
    n = h.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    budget = 100 * n if max_iter is None else max_iter
    eps = np.finfo(float).eps
    total = 0
    since_deflation = 0
    hi = n - 1
    while hi > 0:
        lo = hi
        while lo > 0:
            scale = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if scale == 0.0:
                scale = np.abs(h[: hi + 1, : hi + 1]).max()
            if abs(h[lo, lo - 1]) <= eps * scale:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            since_deflation = 0
            continue
        total += 1
        since_deflation += 1
        if total > budget:
            raise EigenFailure(f"QR iteration did not converge in {budget} steps")
        if since_deflation % 11 == 10:
            # exceptional shift to break symmetric stalls
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1]) * (1 + 1j)
        else:
            mu = _wilkinson_shift(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        block = h[lo:hi + 1, lo:hi + 1]
        m = block.shape[0]
        block -= mu * np.eye(m)
        rotations = []
        for k in range(m - 1):
            x, y = block[k, k], block[k + 1, k]
            r = np.hypot(abs(x), abs(y))
            if r == 0.0:
                rotations.append(None)
                continue
            c, s = x / r, y / r
            g = np.array([[c.conjugate(), s.conjugate()], [-s, c]])
            block[k:k + 2, k:] = g @ block[k:k + 2, k:]
            rotations.append(g)
        for k, g in enumerate(rotations):
            if g is not None:
                block[: k + 2, k:k + 2] = block[: k + 2, k:k + 2] @ g.conj().T
        block += mu * np.eye(m)
    return np.diagonal(h).copy()


def inverse_iteration(a, eigval: complex, iterations: int = 8) -> np.ndarray:
    """Unit eigenvector of ``a`` for an already-converged eigenvalue.

    The start vector is a fixed, irregular vector. A symmetric start such as
    all-ones is orthogonal to half the eigenvectors of a reflection-symmetric
    chain. Iteration stops once the residual is at rounding level.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    scale = max(np.abs(a).max(), 1.0)
    shift = eigval + 1e-13 * scale * (1 + 1j)
    f = lu_factor((a - shift * np.eye(n))[None])
    if f.singular[0]:
        shift = eigval + 1e-10 * scale * (1 + 1j)
        f = lu_factor((a - shift * np.eye(n))[None])
    k = np.arange(n)
    x = np.cos(0.7 * k + 0.3) + 1j * np.sin(1.3 * k + 0.1) + 0.5
    x /= np.linalg.norm(x)
    for _ in range(iterations):
        x = lu_solve(f, x.reshape(1, n, 1)).reshape(n)
        x /= np.linalg.norm(x)
        if np.linalg.norm(a @ x - eigval * x) <= 1e-14 * scale * n:
            break
    return x


def eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and unit eigenvectors (columns) of a small complex matrix."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if n > MAX_EIG_N:
        raise InvalidSize(f"eigensolver is limited to n <= {MAX_EIG_N}")
    h, _ = hessenberg(a)
    vals = hessenberg_qr_eigvals(h)
    vecs = np.column_stack([inverse_iteration(a, lam) for lam in vals]) if n else np.zeros((0, 0))
    return vals, vecs
