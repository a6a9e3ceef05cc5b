"""Matvecs by the Gibbs factor Y = X^{1/2}.

Two routes: the half-exponential exp(-beta/2 H) applied via segmented
truncated-Taylor series, and the square-root Fermi-Dirac function
1/sqrt(1 + exp(beta x)) applied via an adaptive Chebyshev interpolant
and the three-term recurrence. A dense eigendecomposition reference is
provided for small-n testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
from numpy.polynomial import chebyshev as npcheb

from .linop import (
    DimensionMismatchError,
    DualShiftedOperator,
    SpectralInterval,
    gershgorin_interval,
)

HALF_EXPONENTIAL = "half-exponential"
SQRT_FERMI_DIRAC = "sqrt-fermi-dirac"

DEFAULT_EXPMV_TOL = 1e-8
DEFAULT_CHEB_TOL = 1e-5
DENSE_CAP = 512


class DegreeCapError(RuntimeError):
    """Chebyshev degree cap hit before reaching tolerance."""

    def __init__(self, cap, best_error):
        super().__init__(f"degree cap {cap} exceeded; best sup error {best_error:.3e}")
        self.cap = cap
        self.best_error = best_error


def fermi_dirac(x, beta):
    """F_beta(x) = 1/(1 + exp(beta x)), overflow-safe."""
    x = np.asarray(x, dtype=np.float64)
    bx = beta * x
    out = np.empty_like(bx)
    pos = bx > 0
    with np.errstate(over="ignore"):
        out[pos] = np.exp(-bx[pos]) / (1.0 + np.exp(-bx[pos]))
        out[~pos] = 1.0 / (1.0 + np.exp(bx[~pos]))
    return out if out.ndim else float(out)


def fermi_dirac_sqrt_scalar(x, beta):
    """1/sqrt(1 + exp(beta x)); for x > 0 rewritten to avoid overflow."""
    x = np.asarray(x, dtype=np.float64)
    bx = beta * x
    out = np.empty_like(bx)
    pos = bx > 0
    with np.errstate(over="ignore"):
        out[pos] = np.exp(-bx[pos] / 2.0) / np.sqrt(1.0 + np.exp(-bx[pos]))
        out[~pos] = 1.0 / np.sqrt(1.0 + np.exp(bx[~pos]))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ChebApprox:
    """Chebyshev interpolant on [a, b] in the shifted-scaled basis."""

    a: float
    b: float
    coeffs: np.ndarray
    sup_error: float

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        u = (2.0 * np.asarray(x, dtype=np.float64) - (self.a + self.b)) / (self.b - self.a)
        return npcheb.chebval(u, self.coeffs)


def cheb_fit(
    f: Callable,
    interval,
    tol: float,
    max_degree: int = 4096,
    grid_points: int = 10_000,
) -> ChebApprox:
    """Adaptive Chebyshev interpolation of f on [a, b].

    The degree is doubled until the trailing coefficients are negligible
    and the sup error, checked on a uniform grid, is at most tol. The
    achieved grid sup error is stored on the result.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a, b = (interval.lower, interval.upper) if isinstance(interval, SpectralInterval) else (float(interval[0]), float(interval[1]))
    if not a < b:
        raise ValueError("interval must have positive length")

    def mapped(u):
        return f(a + (b - a) * (np.asarray(u) + 1.0) / 2.0)

    grid = np.linspace(a, b, grid_points)
    target = np.asarray(f(grid), dtype=np.float64)
    scale = max(np.max(np.abs(target)), 1.0)

    best_error = math.inf
    deg = 4
    while deg <= max_degree:
        coeffs = npcheb.chebinterpolate(mapped, deg)
        tail = np.max(np.abs(coeffs[-2:]))
        approx = npcheb.chebval((2.0 * grid - (a + b)) / (b - a), coeffs)
        err = float(np.max(np.abs(approx - target)))
        best_error = min(best_error, err)
        if err <= tol and tail <= tol * scale:
            # drop negligible trailing coefficients, then restate the error
            keep = len(coeffs)
            floor = max(tol * 1e-3, 1e-15 * np.max(np.abs(coeffs)))
            while keep > 1 and abs(coeffs[keep - 1]) < floor:
                keep -= 1
            coeffs = coeffs[:keep]
            approx = npcheb.chebval((2.0 * grid - (a + b)) / (b - a), coeffs)
            err = float(np.max(np.abs(approx - target)))
            if err <= tol:
                return ChebApprox(a=a, b=b, coeffs=coeffs, sup_error=err)
        deg *= 2
    raise DegreeCapError(max_degree, best_error)


def cheb_apply(approx: ChebApprox, op: DualShiftedOperator, v: np.ndarray) -> np.ndarray:
    """Sum_k c_k p_k(H) v via the three-term recurrence.

    The operator is affinely rescaled to [-1, 1]; the caller guarantees
    the spectrum of H lies inside the fit interval.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != op.n:
        raise DimensionMismatchError("operand dimension does not match operator")
    alpha = 2.0 / (approx.b - approx.a)
    center = (approx.a + approx.b) / 2.0

    def scaled(u):
        return alpha * (op.apply(u) - center * u)

    c = approx.coeffs
    t_prev = v
    acc = c[0] * t_prev
    if len(c) == 1:
        return acc
    t_cur = scaled(v)
    acc = acc + c[1] * t_cur
    for k in range(2, len(c)):
        t_next = 2.0 * scaled(t_cur) - t_prev
        acc += c[k] * t_next
        t_prev, t_cur = t_cur, t_next
    return acc


def expmv(
    op: DualShiftedOperator,
    v: np.ndarray,
    t: float,
    tol: float = DEFAULT_EXPMV_TOL,
    max_terms: int = 200,
    segment_norm: float = 30.0,
) -> np.ndarray:
    """exp(t H) v by splitting into segments near the identity.

    H is shifted by the midpoint c of its Gershgorin interval so the
    segment count tracks the spectral radius about c rather than the
    raw norm; the scalar factor exp(h c) is restored per segment to
    keep exponents small. Each segment sums the truncated Taylor
    series until the term-to-sum norm ratio drops below tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != op.n:
        raise DimensionMismatchError("operand dimension does not match operator")
    iv = gershgorin_interval(op)
    center = (iv.lower + iv.upper) / 2.0
    radius = iv.range / 2.0
    s = max(
        1,
        int(math.ceil(abs(t) * radius / segment_norm)),
        int(math.ceil(abs(t * center) / 500.0)),
    )
    h = t / s
    scale = math.exp(h * center)
    hs = op.assemble()
    if center != 0.0:
        hs = (hs - center * sp.identity(op.n, format="csr")).tocsr()
    out = v
    for _ in range(s):
        term = out
        acc = out.copy()
        for j in range(1, max_terms + 1):
            term = (h / j) * (hs @ term)
            acc += term
            tn = np.linalg.norm(term)
            an = np.linalg.norm(acc)
            if not np.isfinite(tn) or not np.isfinite(an):
                raise FloatingPointError("non-finite intermediate in expmv")
            if tn <= tol * an:
                break
        out = scale * acc
    return out


class GibbsFactorOperator:
    """Matvec-capable Y(lambda): half-exponential or sqrt Fermi-Dirac.

    X = Y Y is represented implicitly; applying the operator twice
    targets X. For the sqrt-fermi-dirac kind the Chebyshev interpolant
    is built eagerly at construction unless one is supplied.
    """

    def __init__(
        self,
        shifted: DualShiftedOperator,
        beta: float,
        kind: str = HALF_EXPONENTIAL,
        interval: SpectralInterval | None = None,
        cheb: ChebApprox | None = None,
        expmv_tol: float = DEFAULT_EXPMV_TOL,
        cheb_tol: float = DEFAULT_CHEB_TOL,
    ):
        if beta <= 0:
            raise ValueError("beta must be positive")
        if kind not in (HALF_EXPONENTIAL, SQRT_FERMI_DIRAC):
            raise ValueError(f"unknown kind {kind!r}")
        self.shifted = shifted
        self.beta = float(beta)
        self.kind = kind
        self.interval = interval
        self.expmv_tol = expmv_tol
        self.cheb_tol = cheb_tol
        if kind == SQRT_FERMI_DIRAC:
            if cheb is not None:
                self.cheb = cheb
            else:
                if interval is None:
                    raise ValueError("sqrt-fermi-dirac kind requires a spectral interval")
                self.cheb = cheb_fit(
                    lambda x: fermi_dirac_sqrt_scalar(x, self.beta), interval, cheb_tol
                )
        else:
            self.cheb = None

    @property
    def n(self) -> int:
        return self.shifted.n

    def matvec(self, v: np.ndarray) -> np.ndarray:
        if self.kind == HALF_EXPONENTIAL:
            return expmv(self.shifted, v, -self.beta / 2.0, tol=self.expmv_tol)
        return cheb_apply(self.cheb, self.shifted, v)

    def __matmul__(self, v):
        return self.matvec(v)


def gibbs_matvec(y: GibbsFactorOperator, v: np.ndarray) -> np.ndarray:
    return y.matvec(v)


@dataclass(frozen=True)
class DenseReference:
    """Exact small-n quantities from a full eigendecomposition."""

    x: np.ndarray
    y: np.ndarray
    trace_x: float
    trace_x2: float
    trace_exp: float
    trace_log1pexp: float
    entropy: float
    entropy_binary: float
    eigvals: np.ndarray
    eigvecs: np.ndarray


def dense_reference(
    op: DualShiftedOperator, beta: float, kind: str = HALF_EXPONENTIAL, cap: int = DENSE_CAP
) -> DenseReference:
    """Exact X, Y = X^{1/2} and trace/entropy diagnostics; test oracle."""
    if op.n > cap:
        raise ValueError(f"dense reference capped at n={cap}, got {op.n}")
    h = op.to_dense()
    w, q = np.linalg.eigh((h + h.T) / 2.0)
    if kind == HALF_EXPONENTIAL:
        xw = np.exp(-beta * w)
    elif kind == SQRT_FERMI_DIRAC:
        xw = fermi_dirac(w, beta)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    x = (q * xw) @ q.T
    y = (q * np.sqrt(xw)) @ q.T
    with np.errstate(divide="ignore", invalid="ignore"):
        s_terms = np.where(xw > 0, xw * np.log(np.where(xw > 0, xw, 1.0)) - xw, 0.0)
        one_m = 1.0 - xw
        sb_terms = np.where(xw > 0, xw * np.log(np.where(xw > 0, xw, 1.0)), 0.0) + np.where(
            one_m > 0, one_m * np.log(np.where(one_m > 0, one_m, 1.0)), 0.0
        )
    return DenseReference(
        x=x,
        y=y,
        trace_x=float(np.sum(xw)),
        trace_x2=float(np.sum(xw**2)),
        trace_exp=float(np.sum(np.exp(-beta * w))),
        trace_log1pexp=float(np.sum(np.logaddexp(0.0, -beta * w))),
        entropy=float(np.sum(s_terms)),
        entropy_binary=float(np.sum(sb_terms)),
        eigvals=w,
        eigvecs=q,
    )
