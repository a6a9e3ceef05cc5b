"""Randomized spectral embedding of clustered graphs.

Solves the trace-constrained dual for the normalized Laplacian, then
recovers an approximate embedding Psi = (1/sqrt(k~)) Y Z whose Gram
matrix is an unbiased estimate of the smoothed spectral projector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .dualsolve import SolveTrajectory, TraceProblem, solve_trace
from .linop import DualShiftedOperator, SparseSymMatrix, SpectralInterval
from .matfunc import SQRT_FERMI_DIRAC, GibbsFactorOperator
from .sketch import DEFAULT_BATCH, draw_probes, trace_pair_estimate

LAPLACIAN_INTERVAL = SpectralInterval(0.0, 2.0)


@dataclass(frozen=True)
class ClusteredGraphConfig:
    """n vertices in n/m fully connected blocks plus sparse inter-block edges."""

    n: int
    m: int
    inter_prob: float | None = None  # defaults to 1/n
    seed: int = 0

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("block size m must be at least 2")
        if self.n % self.m != 0:
            raise ValueError("block size m must divide n")

    @property
    def clusters(self) -> int:
        return self.n // self.m


@dataclass(frozen=True)
class EmbeddingResult:
    """Rows of psi are the vertex embeddings; psi = (1/sqrt(k~)) Y Z."""

    psi: np.ndarray
    mu_star: float
    seed: int

    @property
    def k_tilde(self) -> int:
        return self.psi.shape[1]


def clustered_graph(config: ClusteredGraphConfig) -> SparseSymMatrix:
    n, m = config.n, config.m
    p = 1.0 / n if config.inter_prob is None else config.inter_prob
    rng = np.random.default_rng(config.seed)
    iu, ju = np.triu_indices(n, k=1)
    same_block = (iu // m) == (ju // m)
    inter = (~same_block) & (rng.random(iu.size) < p)
    keep = same_block | inter
    rows, cols = iu[keep], ju[keep]
    return SparseSymMatrix.from_triplets(
        n, np.concatenate([rows, cols]), np.concatenate([cols, rows]), np.ones(2 * rows.size)
    )


def normalized_laplacian(adjacency: SparseSymMatrix) -> SparseSymMatrix:
    """L = I - D^{-1/2} A D^{-1/2}; eigenvalues lie in [0, 2]."""
    degrees = np.asarray(adjacency.csr.sum(axis=1)).ravel()
    if np.any(degrees <= 0):
        raise ValueError("graph has an isolated vertex")
    d_isqrt = sp.diags(1.0 / np.sqrt(degrees))
    lap = sp.identity(adjacency.n) - d_isqrt @ adjacency.csr @ d_isqrt
    return SparseSymMatrix(n=adjacency.n, csr=lap.tocsr())


def default_k_tilde(k: int, n: int) -> int:
    """Embedding dimension O(k log n); constant 2 is a free knob."""
    return max(1, math.ceil(2.0 * k * math.log(n)))


def recover_embedding(
    problem: TraceProblem, mu_star: float, k_tilde: int, seed: int
) -> EmbeddingResult:
    """Psi = (1/sqrt(k~)) Y(mu*) Z for a fresh n x k~ Gaussian Z."""
    if k_tilde < 1:
        raise ValueError("embedding dimension must be at least 1")
    r = problem.interval.range
    y = GibbsFactorOperator(
        DualShiftedOperator(problem.C, "scalar", mu_star),
        problem.beta,
        SQRT_FERMI_DIRAC,
        interval=SpectralInterval(-r, r),
    )
    z = draw_probes(problem.C.n, k_tilde, seed, iteration=0).Z
    psi = y.matvec(z) / math.sqrt(k_tilde)
    return EmbeddingResult(psi=psi, mu_star=mu_star, seed=seed)


def gram_validation(result: EmbeddingResult, dense_x: np.ndarray) -> tuple[float, float]:
    """(scaled max entrywise deviation, relative Frobenius error) of G = Psi Psi^T."""
    g = result.psi @ result.psi.T
    diag = np.diag(dense_x)
    scale = np.sqrt(np.outer(diag, diag))
    scale = np.where(scale > 0, scale, 1.0)
    max_dev = float(np.max(np.abs(g - dense_x) / scale))
    rel_frob = float(np.linalg.norm(g - dense_x) / np.linalg.norm(dense_x))
    return max_dev, rel_frob


def verify_trace_constraint(
    y: GibbsFactorOperator, k: float, probes: int = 1000, seed: int = 0
) -> float:
    """|t1 - k|/k with t1 a Hutchinson trace estimate at the given batch size."""
    if probes < 1:
        raise ValueError("probes must be at least 1")
    t1, _ = trace_pair_estimate(y, draw_probes(y.n, probes, seed, iteration=0))
    return abs(t1 - k) / k


def run_embed_experiment(
    n: int,
    beta: float,
    batch_size: int = DEFAULT_BATCH,
    iters: int = 2000,
    m: int = 10,
    k_tilde: int | None = None,
    seed: int = 0,
    inter_prob: float | None = None,
    verify_probes: int = 1000,
    dense_cap: int = 512,
    adjacency: SparseSymMatrix | None = None,
    mode: str = "stochastic",
):
    """Graph, Laplacian, trace solve with smoothing, recovery, validation."""
    if adjacency is None:
        adjacency = clustered_graph(
            ClusteredGraphConfig(n=n, m=m, inter_prob=inter_prob, seed=seed)
        )
    n = adjacency.n
    lap = normalized_laplacian(adjacency)
    k = n // m
    problem = TraceProblem(C=lap, k=float(k), beta=beta, interval=LAPLACIAN_INTERVAL)
    traj = solve_trace(problem, batch_size=batch_size, iters=iters, seed=seed, mode=mode)
    mu_star = float(traj.final_dual)
    kt = default_k_tilde(k, n) if k_tilde is None else k_tilde
    result = recover_embedding(problem, mu_star, kt, seed=seed + 1)
    y = GibbsFactorOperator(
        DualShiftedOperator(lap, "scalar", mu_star),
        beta,
        SQRT_FERMI_DIRAC,
        interval=SpectralInterval(-LAPLACIAN_INTERVAL.range, LAPLACIAN_INTERVAL.range),
    )
    trace_err = verify_trace_constraint(y, k, probes=verify_probes, seed=seed + 2)
    validation = dict(
        k=k,
        k_tilde=kt,
        mu_star=mu_star,
        trace_relative_error=trace_err,
        verify_probes=verify_probes,
    )
    if n <= dense_cap:
        from .matfunc import dense_reference

        ref = dense_reference(
            DualShiftedOperator(lap, "scalar", mu_star), beta, SQRT_FERMI_DIRAC
        )
        max_dev, rel_frob = gram_validation(result, ref.x)
        validation["gram_max_deviation"] = max_dev
        validation["gram_relative_frobenius_error"] = rel_frob
    traj.config["application"] = "embed"
    traj.config["m"] = m
    traj.config["k_tilde"] = kt
    return traj, result, validation
