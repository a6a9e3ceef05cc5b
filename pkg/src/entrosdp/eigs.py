"""Matrix-free minimal eigenpair via single-vector LOBPCG.

Used to certify the Max-Cut lower-bound shift: the smallest eigenvalue
of C - diag(lambda*) makes lambda* + mu 1 dual feasible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linop import DualShiftedOperator, gershgorin_interval


@dataclass(frozen=True)
class EigResult:
    eigenvalue: float
    eigenvector: np.ndarray
    residual: float
    iterations: int


class EigenConvergenceError(RuntimeError):
    """Carries the best iterate when the residual tolerance is not met."""

    def __init__(self, best: EigResult, max_iter: int):
        super().__init__(
            f"LOBPCG did not converge in {max_iter} iterations "
            f"(residual {best.residual:.3e})"
        )
        self.best = best


def _orthonormal_basis(vectors, tol=1e-12):
    s = np.column_stack(vectors)
    q, r = np.linalg.qr(s)
    keep = np.abs(np.diag(r)) > tol * max(1.0, np.abs(r[0, 0]))
    return q[:, keep]


def min_eigenpair(
    op: DualShiftedOperator,
    tol: float = 1e-8,
    max_iter: int = 10_000,
    seed: int = 0,
) -> EigResult:
    """Smallest eigenpair of a symmetric operator, matrix-free.

    Single-vector LOBPCG: Rayleigh-Ritz on span{x, residual, previous
    direction} each iteration; no preconditioner. The residual tolerance
    is relative to a Gershgorin bound on ||H||.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = op.n
    iv = gershgorin_interval(op)
    scale = max(abs(iv.lower), abs(iv.upper), np.finfo(float).tiny)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    hx = op.apply(x)
    theta = float(x @ hx)
    p = None
    for it in range(1, max_iter + 1):
        r = hx - theta * x
        res = float(np.linalg.norm(r))
        if res <= tol * scale:
            return EigResult(eigenvalue=theta, eigenvector=x, residual=res, iterations=it - 1)
        cols = [x, r] if p is None else [x, r, p]
        s = _orthonormal_basis(cols)
        hs = op.apply(s)
        a = s.T @ hs
        a = (a + a.T) / 2.0
        w, q = np.linalg.eigh(a)
        y = q[:, 0]
        x_new = s @ y
        x_new /= np.linalg.norm(x_new)
        # conjugate direction: the Ritz combination minus its x-component
        if s.shape[1] > 1:
            p_new = s[:, 1:] @ y[1:]
            nrm = np.linalg.norm(p_new)
            p = p_new / nrm if nrm > 1e-14 else None
        x = x_new
        hx = op.apply(x)
        theta = float(x @ hx)
    r = hx - theta * x
    best = EigResult(
        eigenvalue=theta, eigenvector=x, residual=float(np.linalg.norm(r)), iterations=max_iter
    )
    if best.residual <= tol * scale:
        return best
    raise EigenConvergenceError(best, max_iter)
