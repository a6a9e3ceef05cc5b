"""Gaussian probes and square-root Hutchinson estimators.

Estimates of diag[X], Tr[X] and Tr[X^2] are built from matvecs by the
factor Y with X = Y Y, which gives universal relative variance for the
diagonal. Probe columns come from counter-based Philox streams keyed by
(seed, iteration, column) so serial and column-parallel generation agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GAUSSIAN = "gaussian"
RADEMACHER = "rademacher"

DEFAULT_BATCH = 8  # experimental batch size used throughout


def _column_rng(seed: int, iteration: int, column: int) -> np.random.Generator:
    key = np.array(
        [np.uint64(seed) & np.uint64(0xFFFFFFFFFFFFFFFF),
         (np.uint64(iteration) << np.uint64(32)) | np.uint64(column)],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class ProbeBatch:
    """n x N matrix of i.i.d. unit-variance probes plus its provenance."""

    Z: np.ndarray
    seed: int
    iteration: int
    distribution: str = GAUSSIAN

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    @property
    def batch_size(self) -> int:
        return self.Z.shape[1]


@dataclass
class SketchResult:
    """Intermediates of one sketch: V = Y Z, optionally W = Y V."""

    V: np.ndarray
    W: np.ndarray | None = None
    a: np.ndarray | None = None
    t1: float | None = None
    t2: float | None = None


def draw_probes(
    n: int,
    batch_size: int,
    seed: int,
    iteration: int = 0,
    distribution: str = GAUSSIAN,
) -> ProbeBatch:
    """Deterministic probe batch; column i streams from (seed, iteration, i)."""
    if n < 1 or batch_size < 1:
        raise ValueError("n and batch_size must be at least 1")
    if distribution not in (GAUSSIAN, RADEMACHER):
        raise ValueError(f"unknown distribution {distribution!r}")
    z = np.empty((n, batch_size))
    for i in range(batch_size):
        rng = _column_rng(seed, iteration, i)
        if distribution == GAUSSIAN:
            z[:, i] = rng.standard_normal(n)
        else:
            z[:, i] = rng.integers(0, 2, size=n) * 2.0 - 1.0
    return ProbeBatch(Z=z, seed=seed, iteration=iteration, distribution=distribution)


def diag_estimate(y, probes: ProbeBatch) -> np.ndarray:
    """a = (1/N) (V . V) 1_N with V = Y Z; unbiased for diag[X]."""
    v = y.matvec(probes.Z)
    return (v * v).mean(axis=1)


def trace_pair_estimate(y, probes: ProbeBatch) -> tuple[float, float]:
    """(t1, t2) unbiased for (Tr[X], Tr[X^2]); one extra block matvec for W."""
    v = y.matvec(probes.Z)
    w = y.matvec(v)
    n_probes = probes.batch_size
    t1 = float(np.sum(v * v)) / n_probes
    t2 = float(np.sum(w * w)) / n_probes
    return t1, t2


def sketch(y, probes: ProbeBatch, want_w: bool = False) -> SketchResult:
    v = y.matvec(probes.Z)
    res = SketchResult(V=v)
    res.a = (v * v).mean(axis=1)
    if want_w:
        res.W = y.matvec(v)
        n_probes = probes.batch_size
        res.t1 = float(np.sum(v * v)) / n_probes
        res.t2 = float(np.sum(res.W * res.W)) / n_probes
    return res


def covariance_check(
    y,
    dense_x: np.ndarray,
    trials: int,
    seed: int = 0,
    block: int = 1024,
) -> tuple[np.ndarray, np.ndarray]:
    """Empirical vs analytic covariance of the single-probe diagonal estimate.

    For the diagonal constraint pattern A_k = e_k e_k^T the analytic
    covariance of (Yz).(Yz) is 2 X_{ij}^2 (Wick's theorem). Test-only.
    """
    n = dense_x.shape[0]
    if n > 64:
        raise ValueError("covariance check is a small-n diagnostic")
    samples = np.empty((trials, n))
    done = 0
    blk = 0
    while done < trials:
        m = min(block, trials - done)
        probes = draw_probes(n, m, seed, iteration=blk)
        v = y.matvec(probes.Z)
        samples[done : done + m] = (v * v).T
        done += m
        blk += 1
    empirical = np.cov(samples, rowvar=False)
    analytic = 2.0 * dense_x**2
    return empirical, analytic
