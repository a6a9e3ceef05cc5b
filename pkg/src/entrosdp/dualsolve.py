"""Dual optimizers for the two specialized problem classes.

Diagonal constraint: noncommutative matrix scaling, the fixed-point
update lambda <- lambda + beta^{-1}(log b - log diag X(lambda)), which
exactly maximizes a Golden-Thompson minorizer of the dual objective and
therefore never decreases it.

Trace constraint: Newton's method on the scalar chemical potential,
with g' and g'' estimated from one probe batch through Y.

Both solvers run in a stochastic (estimator) mode and an exact mode
backed by the dense reference, which is the oracle for property tests.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .linop import DualShiftedOperator, SparseSymMatrix, SpectralInterval
from .matfunc import (
    DENSE_CAP,
    HALF_EXPONENTIAL,
    SQRT_FERMI_DIRAC,
    GibbsFactorOperator,
    cheb_fit,
    dense_reference,
    fermi_dirac,
    fermi_dirac_sqrt_scalar,
)
from .sketch import DEFAULT_BATCH, diag_estimate, draw_probes, trace_pair_estimate

STOCHASTIC = "stochastic"
EXACT = "exact"


@dataclass(frozen=True)
class DiagonalProblem:
    """min Tr[CX] s.t. X >= 0, diag(X) = b, entropically regularized."""

    C: SparseSymMatrix
    b: np.ndarray
    beta: float

    def __post_init__(self):
        b = np.asarray(self.b, dtype=np.float64)
        if b.shape != (self.C.n,):
            raise ValueError("b must have length n")
        if np.any(b <= 0):
            raise ValueError("b must be entrywise positive")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class TraceProblem:
    """min Tr[CX] s.t. 0 <= X <= I, Tr X = k, binary-entropy regularized."""

    C: SparseSymMatrix
    k: float
    beta: float
    interval: SpectralInterval

    def __post_init__(self):
        if not 0 < self.k < self.C.n:
            raise ValueError("k must satisfy 0 < k < n")
        if self.beta <= 0:
            raise ValueError("beta must be positive")


@dataclass
class SolveTrajectory:
    """Append-only per-iteration log plus a config echo."""

    config: dict
    rows: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)
    final_dual: np.ndarray | float | None = None

    def add(self, t, objective, residual, dual_norm, smoothed_mu, wall_ms):
        self.rows.append(
            dict(
                t=t,
                objective=objective,
                constraint_residual_estimate=residual,
                mu_or_lambda_norm=dual_norm,
                smoothed_mu=smoothed_mu,
                wall_ms=wall_ms,
            )
        )

    def column(self, name) -> np.ndarray:
        return np.array([row[name] for row in self.rows])

    def to_csv(self, path):
        cols = (
            "t",
            "objective",
            "constraint_residual_estimate",
            "mu_or_lambda_norm",
            "smoothed_mu",
            "wall_ms",
        )
        with open(path, "w") as fh:
            for key in sorted(self.config):
                fh.write(f"# {key}={self.config[key]}\n")
            fh.write(",".join(cols) + "\n")
            for row in self.rows:
                fh.write(",".join(_fmt(row[c]) for c in cols) + "\n")

    def save_snapshots(self, path):
        """Full dual-variable snapshots as a little-endian float64 array."""
        np.asarray(self.snapshots, dtype="<f8").tofile(path)


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "nan" if v is None else format(float(v), ".17g")


def scaling_step(lam: np.ndarray, a: np.ndarray, b: np.ndarray, beta: float) -> np.ndarray:
    """lambda + beta^{-1}(log b - log a), entrywise."""
    a = np.asarray(a, dtype=np.float64)
    if np.any(a <= 0):
        raise ValueError("diagonal estimate must be entrywise positive")
    if np.any(np.asarray(b) <= 0):
        raise ValueError("b must be entrywise positive")
    return lam + (np.log(b) - np.log(a)) / beta


def dual_objective_exact(problem: DiagonalProblem, lam: np.ndarray) -> float:
    """g(lambda) = b.lambda - beta^{-1} Tr[exp(-beta(C - diag(lambda)))]; test-only."""
    op = DualShiftedOperator(problem.C, "diagonal", lam)
    ref = dense_reference(op, problem.beta, HALF_EXPONENTIAL)
    return float(problem.b @ lam - ref.trace_exp / problem.beta)


def minorizer_exact(problem: DiagonalProblem, lam0: np.ndarray, lam: np.ndarray) -> float:
    """Golden-Thompson minorizer g0(lambda); equals g at lambda = lambda0."""
    op = DualShiftedOperator(problem.C, "diagonal", lam0)
    ref = dense_reference(op, problem.beta, HALF_EXPONENTIAL)
    diag_x0 = np.diag(ref.x)
    return float(problem.b @ lam - np.exp(problem.beta * (lam - lam0)) @ diag_x0 / problem.beta)


def solve_diagonal(
    problem: DiagonalProblem,
    batch_size: int = DEFAULT_BATCH,
    iters: int = 200,
    seed: int = 0,
    mode: str = STOCHASTIC,
    lam0: np.ndarray | None = None,
    expmv_tol: float = 1e-8,
    store_snapshots: bool = False,
) -> SolveTrajectory:
    """Noncommutative matrix scaling loop for the diagonal-constraint dual."""
    if iters < 1:
        raise ValueError("iters must be at least 1")
    if mode not in (STOCHASTIC, EXACT):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == EXACT and problem.C.n > DENSE_CAP:
        raise ValueError("exact mode requires n within the dense cap")
    n = problem.C.n
    lam = np.zeros(n) if lam0 is None else np.asarray(lam0, dtype=np.float64).copy()
    traj = SolveTrajectory(
        config=dict(
            solver="diagonal-scaling",
            n=n,
            beta=problem.beta,
            batch_size=batch_size,
            iters=iters,
            seed=seed,
            mode=mode,
            expmv_tol=expmv_tol,
        )
    )
    start = time.perf_counter()
    for t in range(1, iters + 1):
        op = DualShiftedOperator(problem.C, "diagonal", lam)
        if mode == EXACT:
            a = np.diag(dense_reference(op, problem.beta, HALF_EXPONENTIAL).x)
        else:
            y = GibbsFactorOperator(op, problem.beta, HALF_EXPONENTIAL, expmv_tol=expmv_tol)
            a = diag_estimate(y, draw_probes(n, batch_size, seed, iteration=t))
        lam = scaling_step(lam, a, problem.b, problem.beta)
        if not np.all(np.isfinite(lam)):
            raise FloatingPointError(f"non-finite dual variable at iteration {t}")
        if store_snapshots:
            traj.snapshots.append(lam.copy())
        traj.add(
            t=t,
            objective=float(problem.b @ lam),
            residual=float(np.max(np.abs(a - problem.b))),
            dual_norm=float(np.linalg.norm(lam)),
            smoothed_mu=None,
            wall_ms=(time.perf_counter() - start) * 1e3,
        )
    traj.final_dual = lam
    return traj


def newton_step(mu: float, a1: float, a2: float, k: float) -> float:
    """mu - (k - a1)/a2; requires the curvature estimate a2 < 0."""
    if a2 >= 0:
        raise ValueError("curvature estimate must be negative")
    return mu - (k - a1) / a2


def smooth_trajectory(mu_history, t: int) -> float:
    """Mean over the trailing window of size floor(t/2) (full prefix for t < 2)."""
    if not 1 <= t <= len(mu_history):
        raise ValueError("t out of range")
    window = t // 2
    if window < 1:
        return float(np.mean(mu_history[:t]))
    return float(np.mean(mu_history[t - window : t]))


def trace_derivatives_exact(eigvals: np.ndarray, mu: float, beta: float, k: float):
    """Exact (g'(mu), g''(mu)) for the trace-constrained dual from eigenvalues of C."""
    x = fermi_dirac(eigvals - mu, beta)
    trace_x = float(np.sum(x))
    return k - trace_x, float(-beta * np.sum((1.0 - x) * x))


def solve_trace(
    problem: TraceProblem,
    batch_size: int = DEFAULT_BATCH,
    iters: int = 400,
    seed: int = 0,
    mode: str = STOCHASTIC,
    mu0: float | None = None,
    cheb_tol: float = 1e-5,
) -> SolveTrajectory:
    """Stochastic Newton iteration for the trace-constrained dual.

    The Chebyshev interpolant of the square-root Fermi-Dirac function on
    [-R, R] is built once and reused; mu is kept inside [B1, B2] (where
    the optimizer lies) so that the spectrum of C - mu I stays inside
    the fit interval.
    """
    if iters < 1:
        raise ValueError("iters must be at least 1")
    if mode not in (STOCHASTIC, EXACT):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == EXACT and problem.C.n > DENSE_CAP:
        raise ValueError("exact mode requires n within the dense cap")
    n = problem.C.n
    b1, b2 = problem.interval.lower, problem.interval.upper
    r = max(problem.interval.range, np.finfo(float).eps)
    fit_interval = SpectralInterval(-r, r)
    mu = (b1 + b2) / 2.0 if mu0 is None else float(mu0)
    cheb = cheb_fit(
        lambda x: fermi_dirac_sqrt_scalar(x, problem.beta), fit_interval, cheb_tol
    )
    eigvals = None
    if mode == EXACT:
        eigvals = np.linalg.eigvalsh(problem.C.to_dense())
    traj = SolveTrajectory(
        config=dict(
            solver="trace-newton",
            n=n,
            beta=problem.beta,
            k=problem.k,
            batch_size=batch_size,
            iters=iters,
            seed=seed,
            mode=mode,
            cheb_tol=cheb_tol,
            interval_lower=b1,
            interval_upper=b2,
        )
    )
    history = []
    start = time.perf_counter()
    for t in range(1, iters + 1):
        if mode == EXACT:
            grad, curv = trace_derivatives_exact(eigvals, mu, problem.beta, problem.k)
            a1, a2 = problem.k - grad, curv
            residual = abs(grad)
        else:
            op = DualShiftedOperator(problem.C, "scalar", mu)
            y = GibbsFactorOperator(
                op, problem.beta, SQRT_FERMI_DIRAC, interval=fit_interval, cheb=cheb
            )
            t1, t2 = trace_pair_estimate(y, draw_probes(n, batch_size, seed, iteration=t))
            a1 = t1
            a2 = -problem.beta * (t1 - t2)
            residual = abs(problem.k - t1)
        mu = newton_step(mu, a1, a2, problem.k)
        mu = min(max(mu, b1), b2)
        history.append(mu)
        smoothed = smooth_trajectory(history, t)
        traj.add(
            t=t,
            objective=float(problem.k * mu),
            residual=float(residual),
            dual_norm=abs(mu),
            smoothed_mu=smoothed,
            wall_ms=(time.perf_counter() - start) * 1e3,
        )
    traj.final_dual = smooth_trajectory(history, iters)
    return traj
