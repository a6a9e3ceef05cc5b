"""Matrix-free solvers for entropically regularized semidefinite programs."""

__version__ = "0.1.0"

from .linop import (
    DualShiftedOperator,
    SparseSymMatrix,
    SpectralInterval,
    gershgorin_interval,
    load_edge_list,
)
from .matfunc import (
    ChebApprox,
    GibbsFactorOperator,
    cheb_apply,
    cheb_fit,
    dense_reference,
    expmv,
    fermi_dirac,
    fermi_dirac_sqrt_scalar,
    gibbs_matvec,
)
from .sketch import ProbeBatch, diag_estimate, draw_probes, trace_pair_estimate
from .dualsolve import (
    DiagonalProblem,
    SolveTrajectory,
    TraceProblem,
    newton_step,
    scaling_step,
    smooth_trajectory,
    solve_diagonal,
    solve_trace,
)
from .eigs import EigResult, min_eigenpair
from .maxcut import BoundsReport, MaxCutInstance, erdos_renyi, run_maxcut_experiment
from .embed import (
    ClusteredGraphConfig,
    EmbeddingResult,
    clustered_graph,
    normalized_laplacian,
    recover_embedding,
    run_embed_experiment,
)

__all__ = [name for name in dir() if not name.startswith("_")]
