"""Dense symmetric eigensolvers and exact rational quadratic forms.

Standard problems go through LAPACK (numpy.linalg.eigh); a vectorized cyclic
Jacobi sweep is kept as an independent reference solver for cross-checks.
Generalized symmetric-definite pencils are reduced by Cholesky.  Matrices
assembled in exact rational arithmetic can be solved at elevated precision
through mpmath, which the polynomial pipeline needs: its Gram matrices are
monomial-like and far too ill-conditioned for binary64 beyond degree ~10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np


class EigenError(RuntimeError):
    """Eigensolve failed (non-convergence or invalid pencil)."""


@dataclass(frozen=True)
class SymMatrix:
    """Dense symmetric real matrix with assembly provenance."""

    array: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        a = np.asarray(self.array, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("SymMatrix needs a square array")
        if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * (1.0 + np.abs(a).max())):
            raise ValueError("matrix is not symmetric")
        object.__setattr__(self, "array", 0.5 * (a + a.T))

    @property
    def dim(self) -> int:
        return self.array.shape[0]


def jacobi_eigh(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 64
                ) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization; returns (eigenvalues, column vectors).

    Reference implementation for cross-checking LAPACK on moderate sizes.
    """
    A = np.array(a, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    norm = np.linalg.norm(A)
    if norm == 0.0:
        return np.zeros(n), V
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(A * A) - np.sum(np.diag(A) ** 2), 0.0))
        if off <= tol * norm:
            return np.diag(A).copy(), V
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rp, rq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * rp - s * rq
                A[:, q] = s * rp + c * rq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    raise EigenError(f"Jacobi sweeps did not converge within {max_sweeps}")


def eig_sym(A: SymMatrix, tol: float = 1e-12, method: str = "lapack"
            ) -> list[tuple[float, np.ndarray]]:
    """All eigenpairs sorted by descending |eigenvalue|.

    Residuals ||A v - lambda v|| are verified against tol * ||A||; ties in
    absolute value (within tol) rank the positive eigenvalue first.
    """
    a = A.array
    if method == "lapack":
        w, V = np.linalg.eigh(a)
    elif method == "jacobi":
        w, V = jacobi_eigh(a)
    else:
        raise ValueError(f"unknown method {method!r}")
    norm = np.linalg.norm(a, 2) if a.size else 0.0
    resid = np.linalg.norm(a @ V - V * w, axis=0)
    if norm > 0 and np.any(resid > 10.0 * max(tol, 1e-15) * norm * a.shape[0]):
        raise EigenError(f"eigen residual too large: {resid.max():.3e}")
    # descending |lambda|; positive first on near-ties
    order = sorted(range(len(w)), key=lambda i: (-abs(w[i]), -w[i]))
    out = []
    for i in order:
        v = V[:, i]
        nz = np.nonzero(np.abs(v) > 1e-12)[0]
        if nz.size and v[nz[0]] < 0:
            v = -v
        out.append((float(w[i]), v))
    return out


def eig_gen_min(A: SymMatrix, B: SymMatrix, tol: float = 1e-12
                ) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue of the pencil (A, B): min over a of (a.Aa)/(a.Ba).

    B must be positive definite (checked by Cholesky).  The eigenvector is
    unit length with its first nonzero coordinate positive.
    """
    a, b = A.array, B.array
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    try:
        L = np.linalg.cholesky(b)
    except np.linalg.LinAlgError as exc:
        raise EigenError("B is not positive definite") from exc
    from scipy.linalg import solve_triangular

    Li_a = solve_triangular(L, a, lower=True)
    C = solve_triangular(L, Li_a.T, lower=True)
    C = 0.5 * (C + C.T)
    w, V = np.linalg.eigh(C)
    lam = float(w[0])
    y = V[:, 0]
    v = solve_triangular(L.T, y, lower=False)
    v = v / np.linalg.norm(v)
    nz = np.nonzero(np.abs(v) > 1e-12)[0]
    if nz.size and v[nz[0]] < 0:
        v = -v
    # Rayleigh-quotient consistency guard
    rq = float(v @ a @ v) / float(v @ b @ v)
    if not math.isfinite(rq) or abs(rq - lam) > max(1e-6, 1e3 * tol) * max(1.0, abs(lam)):
        raise EigenError(f"pencil solve inconsistent: {lam} vs Rayleigh {rq}")
    return lam, v


def pencil_min_exact(A: Sequence[Sequence[Fraction]], B: Sequence[Sequence[Fraction]],
                     dps: int = 60) -> tuple[float, np.ndarray]:
    """Smallest pencil eigenvalue for exact rational symmetric matrices.

    Cholesky reduction and the symmetric eigensolve run in mpmath at ``dps``
    digits, which removes the conditioning ceiling of binary64.  Returns the
    eigenvalue and unit eigenvector rounded back to floats.
    """
    import mpmath as mp

    n = len(A)
    with mp.workdps(dps):
        Am = mp.matrix(n, n)
        Bm = mp.matrix(n, n)
        for i in range(n):
            for j in range(n):
                Am[i, j] = mp.mpf(A[i][j].numerator) / A[i][j].denominator
                Bm[i, j] = mp.mpf(B[i][j].numerator) / B[i][j].denominator
        try:
            L = mp.cholesky(Bm)
        except ValueError as exc:
            raise EigenError("B is not positive definite") from exc
        Li = mp.inverse(L)
        C = Li * Am * Li.T
        C = (C + C.T) / 2
        E, Q = mp.eigsy(C)
        idx = min(range(n), key=lambda i: E[i])
        y = mp.matrix([Q[i, idx] for i in range(n)])
        v = mp.lu_solve(L.T, y)
        nv = mp.sqrt(sum(t * t for t in v))
        vec = np.array([float(t / nv) for t in v])
    nz = np.nonzero(np.abs(vec) > 1e-12)[0]
    if nz.size and vec[nz[0]] < 0:
        vec = -vec
    return float(E[idx]), vec


def rational_quadform(coeffs: Sequence[Fraction], M: Sequence[Sequence[Fraction]]
                      ) -> Fraction:
    """Exact a^T M a over the rationals."""
    n = len(coeffs)
    if len(M) != n or any(len(row) != n for row in M):
        raise ValueError("dimension mismatch")
    total = Fraction(0)
    for i in range(n):
        for j in range(n):
            total += Fraction(coeffs[i]) * Fraction(M[i][j]) * Fraction(coeffs[j])
    return total
