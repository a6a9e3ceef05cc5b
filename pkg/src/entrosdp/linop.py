"""Sparse symmetric matrices and implicitly shifted operators.

Everything downstream (matrix functions, estimators, solvers) touches
matrices only through matvecs, so the representations here are small:
a CSR-backed symmetric matrix and the shifted operator C - lambda . A.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class SparseSymMatrix:
    """Symmetric sparse matrix in CSR form.

    Construction goes through :meth:`from_triplets` / :meth:`from_dense`,
    which symmetrize the input; instances are immutable afterwards.
    """

    n: int
    csr: sp.csr_matrix = field(repr=False)

    @property
    def row_offsets(self) -> np.ndarray:
        return self.csr.indptr

    @property
    def col_indices(self) -> np.ndarray:
        return self.csr.indices

    @property
    def values(self) -> np.ndarray:
        return self.csr.data

    @property
    def nnz(self) -> int:
        return self.csr.nnz

    @classmethod
    def from_triplets(cls, n, rows, cols, vals) -> "SparseSymMatrix":
        """Build from unordered (i, j, val) triplets.

        Duplicates are summed, then the result is symmetrized as
        (M + M^T) / 2 and explicit zeros are dropped.
        """
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        if rows.shape != cols.shape or rows.shape != vals.shape:
            raise DimensionMismatchError("triplet arrays must have equal length")
        if rows.size and (rows.min() < 0 or rows.max() >= n or cols.min() < 0 or cols.max() >= n):
            raise DimensionMismatchError("triplet index out of range")
        m = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
        m = (m + m.T) * 0.5
        m.eliminate_zeros()
        m.sort_indices()
        return cls(n=n, csr=m)

    @classmethod
    def from_dense(cls, a) -> "SparseSymMatrix":
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatchError("dense input must be square")
        m = sp.csr_matrix((a + a.T) * 0.5)
        m.eliminate_zeros()
        m.sort_indices()
        return cls(n=a.shape[0], csr=m)

    @classmethod
    def zeros(cls, n) -> "SparseSymMatrix":
        return cls(n=n, csr=sp.csr_matrix((n, n)))

    @classmethod
    def identity(cls, n) -> "SparseSymMatrix":
        return cls(n=n, csr=sp.identity(n, format="csr"))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """M @ v for a vector or column block; cost O(nnz) per column."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape[0] != self.n:
            raise DimensionMismatchError(
                f"operand has leading dimension {v.shape[0]}, expected {self.n}"
            )
        return self.csr @ v

    def diagonal(self) -> np.ndarray:
        return self.csr.diagonal()

    def to_dense(self) -> np.ndarray:
        return self.csr.toarray()

    def __matmul__(self, v):
        return self.matvec(v)


def matvec(m: SparseSymMatrix, v: np.ndarray) -> np.ndarray:
    return m.matvec(v)


def load_edge_list(path, n: int | None = None) -> SparseSymMatrix:
    """Read a whitespace-delimited edge list: lines ``i j [weight]``.

    Indices are 0-based, edges undirected and listed once; the weight
    defaults to 1. Repeated edges accumulate.
    """
    rows, cols, vals = [], [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) not in (2, 3):
                raise ValueError(f"{path}:{lineno}: expected 'i j [weight]'")
            i, j = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
            rows += [i, j]
            cols += [j, i]
            vals += [w, w]
    if n is None:
        n = 1 + max(max(rows, default=-1), 0)
    return SparseSymMatrix.from_triplets(n, rows, cols, vals)


@dataclass(frozen=True)
class SpectralInterval:
    """Interval [lower, upper] enclosing the spectrum of an operator."""

    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError("interval lower bound exceeds upper bound")

    @property
    def range(self) -> float:
        return self.upper - self.lower

    def shifted(self, mu: float) -> "SpectralInterval":
        return SpectralInterval(self.lower - mu, self.upper - mu)


@dataclass(frozen=True)
class DualShiftedOperator:
    """The implicit operator C - lambda . A.

    kind 'diagonal': shift is a length-n vector, lambda . A = diag(shift).
    kind 'scalar': shift is a scalar mu, lambda . A = mu I.
    kind 'general': shift is a list of (A_k, lambda_k) pairs.
    """

    base: SparseSymMatrix
    kind: str = "diagonal"
    shift: object = None

    def __post_init__(self):
        if self.kind not in ("diagonal", "scalar", "general"):
            raise ValueError(f"unknown shift kind {self.kind!r}")
        if self.kind == "diagonal":
            s = np.zeros(self.base.n) if self.shift is None else np.asarray(self.shift, dtype=np.float64)
            if s.shape != (self.base.n,):
                raise DimensionMismatchError("diagonal shift must have length n")
            object.__setattr__(self, "shift", s)
        elif self.kind == "scalar":
            object.__setattr__(self, "shift", float(self.shift or 0.0))
        else:
            terms = list(self.shift or [])
            for a_k, _ in terms:
                if a_k.n != self.base.n:
                    raise DimensionMismatchError("constraint matrix dimension mismatch")
            object.__setattr__(self, "shift", terms)

    @property
    def n(self) -> int:
        return self.base.n

    def apply(self, v: np.ndarray) -> np.ndarray:
        """(C - lambda . A) v, as a sum of sparse matvecs."""
        v = np.asarray(v, dtype=np.float64)
        out = self.base.matvec(v)
        if self.kind == "diagonal":
            out -= self.shift[:, None] * v if v.ndim == 2 else self.shift * v
        elif self.kind == "scalar":
            out -= self.shift * v
        else:
            for a_k, lam_k in self.shift:
                out -= lam_k * a_k.matvec(v)
        return out

    def __matmul__(self, v):
        return self.apply(v)

    def assemble(self) -> sp.csr_matrix:
        """Explicit sparse form; used for Gershgorin discs and dense oracles."""
        m = self.base.csr
        if self.kind == "diagonal":
            return (m - sp.diags(self.shift)).tocsr()
        if self.kind == "scalar":
            return (m - self.shift * sp.identity(self.n)).tocsr()
        out = m.copy()
        for a_k, lam_k in self.shift:
            out = out - lam_k * a_k.csr
        return out.tocsr()

    def to_dense(self) -> np.ndarray:
        return self.assemble().toarray()


def shifted_apply(op: DualShiftedOperator, v: np.ndarray) -> np.ndarray:
    return op.apply(v)


def gershgorin_interval(op: DualShiftedOperator) -> SpectralInterval:
    """Enclosing spectral interval from Gershgorin discs of the assembled shift."""
    m = op.assemble()
    centers = m.diagonal()
    radii = np.asarray(np.abs(m).sum(axis=1)).ravel() - np.abs(centers)
    if centers.size == 0:
        return SpectralInterval(0.0, 0.0)
    return SpectralInterval(float(np.min(centers - radii)), float(np.max(centers + radii)))
