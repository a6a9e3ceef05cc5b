"""Experiment command-line front end.

Subcommands: maxcut, embed, solve-diagonal, solve-trace,
estimator-bench. Flags may be preloaded from a flat key=value config
file (flags take precedence, unknown keys are rejected). Each run
writes into one output directory: trajectory.csv plus per-command
results and a manifest.json echoing the configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .dualsolve import DiagonalProblem, TraceProblem, solve_diagonal, solve_trace
from .embed import run_embed_experiment
from .linop import (
    DualShiftedOperator,
    SparseSymMatrix,
    SpectralInterval,
    gershgorin_interval,
    load_edge_list,
)
from .matfunc import DENSE_CAP, HALF_EXPONENTIAL, GibbsFactorOperator, dense_reference
from .maxcut import run_maxcut_experiment
from .sketch import diag_estimate, draw_probes


def _build_parser():
    parser = argparse.ArgumentParser(prog="entrosdp", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output directory (required)")
        p.add_argument("--force", action="store_true", help="overwrite existing outputs")
        p.add_argument("--config", help="flat key=value config file; flags override")
        p.add_argument("--seed", type=int, help="master seed (default 0)")
        p.add_argument("--beta", type=float, help="inverse temperature")
        p.add_argument("--batch", type=int, help="probe batch size N (default 8)")
        p.add_argument("--iters", type=int, help="iteration count")
        p.add_argument("--mode", choices=["stochastic", "exact"], help="solver mode")
        p.add_argument("--threads", type=int, help="cap on worker threads")

    p = sub.add_parser("maxcut", help="Goemans-Williamson bounds on a random or given graph")
    common(p)
    p.add_argument("--n", type=int, help="problem size")
    p.add_argument("--p", type=float, help="edge probability (default 3/n)")
    p.add_argument("--graph", help="edge-list file instead of a random instance")
    p.add_argument("--samples", type=int, help="rounding samples (default 1000)")
    p.add_argument("--eig-tol", type=float, help="eigensolver residual tolerance")

    p = sub.add_parser("embed", help="spectral embedding of a clustered random graph")
    common(p)
    p.add_argument("--n", type=int, help="problem size")
    p.add_argument("--m", type=int, help="cluster block size (default 10)")
    p.add_argument("--graph", help="edge-list file instead of a random instance")
    p.add_argument("--k-tilde", type=int, help="embedding dimension (default ~2 k ln n)")
    p.add_argument("--inter-prob", type=float, help="inter-cluster edge probability")
    p.add_argument("--verify-probes", type=int, help="probes for the trace check")

    p = sub.add_parser("solve-diagonal", help="diagonal-constraint dual solve only")
    common(p)
    p.add_argument("--graph", help="edge-list file providing the cost matrix")
    p.add_argument("--n", type=int, help="random instance size (with --p)")
    p.add_argument("--p", type=float, help="random instance edge probability")
    p.add_argument("--save-dual", action="store_true", help="write dual snapshots (binary)")

    p = sub.add_parser("solve-trace", help="trace-constraint dual solve only")
    common(p)
    p.add_argument("--graph", help="edge-list file; cost is its normalized Laplacian")
    p.add_argument("--n", type=int, help="random clustered instance size (with --m)")
    p.add_argument("--m", type=int, help="cluster block size (default 10)")
    p.add_argument("--k", type=float, help="target trace (default n/m)")

    p = sub.add_parser("estimator-bench", help="diagonal-estimator error vs batch size")
    common(p)
    p.add_argument("--n", type=int, help="instance size (dense-cap bounded)")
    p.add_argument("--p", type=float, help="edge probability (default 3/n)")
    p.add_argument("--trials", type=int, help="trials per batch size (default 50)")
    p.add_argument("--batch-sizes", help="comma-separated batch sizes (default 1,2,4,8,16,32)")

    return parser


_DEFAULTS = dict(
    seed=0, beta=10.0, batch=8, iters=400, mode="stochastic",
    m=10, samples=1000, eig_tol=1e-8, verify_probes=1000,
    trials=50, batch_sizes="1,2,4,8,16,32",
)


def _load_config_file(path, valid_keys):
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{lineno}: expected key=value")
            key, _, raw = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in valid_keys:
                raise SystemExit(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = raw.strip()
    return values


def parse_config(argv) -> argparse.Namespace:
    parser = _build_parser()
    args = parser.parse_args(argv)
    valid = {k for k in vars(args) if k not in ("command", "config", "force")}
    if args.config:
        file_values = _load_config_file(args.config, valid)
        # re-parse with file entries expanded to flags ahead of the explicit
        # ones, so argparse handles casting and flags keep precedence
        file_flags = []
        for key, raw in file_values.items():
            flag = "--" + key.replace("_", "-")
            if isinstance(parser.get_default(key), bool) or key == "save_dual":
                if raw.lower() in ("1", "true", "yes"):
                    file_flags.append(flag)
            else:
                file_flags.extend([flag, raw])
        args = parser.parse_args([argv[0]] + file_flags + list(argv[1:]))
    for key, val in _DEFAULTS.items():
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, val)
    _validate(args)
    return args


def _validate(args):
    def fail(msg):
        raise SystemExit(f"error: {msg}")

    if not args.out:
        fail("--out is required")
    if args.beta is not None and args.beta <= 0:
        fail("--beta must be positive")
    if getattr(args, "batch", 0) is not None and args.batch < 1:
        fail("--batch must be at least 1")
    if getattr(args, "iters", 1) is not None and args.iters < 1:
        fail("--iters must be at least 1")
    if getattr(args, "n", None) is None and getattr(args, "graph", None) is None:
        fail("either --n or --graph is required")
    if getattr(args, "p", None) is not None and not 0 <= args.p <= 1:
        fail("--p must be a probability")
    if getattr(args, "samples", None) is not None and args.samples < 1:
        fail("--samples must be at least 1")
    if getattr(args, "threads", None):
        os.environ.setdefault("OMP_NUM_THREADS", str(args.threads))


def _prepare_outdir(args):
    out = args.out
    if os.path.exists(out) and os.listdir(out) and not args.force:
        raise SystemExit(f"error: output directory {out!r} is not empty (use --force)")
    os.makedirs(out, exist_ok=True)
    return out


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _manifest(out, args, wall_seconds):
    config = {k: v for k, v in vars(args).items() if k not in ("config",) and v is not None}
    _write_json(
        os.path.join(out, "manifest.json"),
        dict(command=args.command, config=config, version=__version__, wall_seconds=wall_seconds),
    )


def _cmd_maxcut(args, out):
    instance = None
    if args.graph:
        from .maxcut import MaxCutInstance

        instance = MaxCutInstance.from_adjacency(load_edge_list(args.graph))
    report, traj = run_maxcut_experiment(
        n=args.n or 0,
        beta=args.beta,
        batch_size=args.batch,
        iters=args.iters,
        seed=args.seed,
        samples=args.samples,
        p=args.p,
        instance=instance,
        mode=args.mode,
        eig_tol=args.eig_tol,
    )
    traj.to_csv(os.path.join(out, "trajectory.csv"))
    _write_json(os.path.join(out, "bounds.json"), report.to_dict())


def _cmd_embed(args, out):
    adjacency = load_edge_list(args.graph) if args.graph else None
    traj, result, validation = run_embed_experiment(
        n=args.n or 0,
        beta=args.beta,
        batch_size=args.batch,
        iters=args.iters,
        m=args.m,
        k_tilde=args.k_tilde,
        seed=args.seed,
        inter_prob=args.inter_prob,
        verify_probes=args.verify_probes,
        adjacency=adjacency,
        mode=args.mode,
    )
    traj.to_csv(os.path.join(out, "trajectory.csv"))
    np.savetxt(os.path.join(out, "embedding.csv"), result.psi, delimiter=",", fmt="%.17g")
    _write_json(os.path.join(out, "validation.json"), validation)


def _cmd_solve_diagonal(args, out):
    if args.graph:
        c = load_edge_list(args.graph)
    else:
        from .maxcut import erdos_renyi

        c = erdos_renyi(args.n, args.p if args.p is not None else 3.0 / args.n, args.seed).C
    problem = DiagonalProblem(C=c, b=np.ones(c.n), beta=args.beta)
    traj = solve_diagonal(
        problem,
        batch_size=args.batch,
        iters=args.iters,
        seed=args.seed,
        mode=args.mode,
        store_snapshots=args.save_dual,
    )
    traj.to_csv(os.path.join(out, "trajectory.csv"))
    if args.save_dual:
        traj.save_snapshots(os.path.join(out, "dual_snapshots.f64le"))


def _cmd_solve_trace(args, out):
    from .embed import LAPLACIAN_INTERVAL, ClusteredGraphConfig, clustered_graph, normalized_laplacian

    if args.graph:
        adjacency = load_edge_list(args.graph)
    else:
        adjacency = clustered_graph(ClusteredGraphConfig(n=args.n, m=args.m, seed=args.seed))
    lap = normalized_laplacian(adjacency)
    k = args.k if args.k is not None else lap.n / args.m
    problem = TraceProblem(C=lap, k=float(k), beta=args.beta, interval=LAPLACIAN_INTERVAL)
    traj = solve_trace(
        problem, batch_size=args.batch, iters=args.iters, seed=args.seed, mode=args.mode
    )
    traj.to_csv(os.path.join(out, "trajectory.csv"))


def _cmd_estimator_bench(args, out):
    from .maxcut import erdos_renyi

    n = args.n
    if n is None or n > DENSE_CAP:
        raise SystemExit(f"error: estimator-bench needs --n within the dense cap ({DENSE_CAP})")
    c = erdos_renyi(n, args.p if args.p is not None else 3.0 / n, args.seed).C
    op = DualShiftedOperator(c, "diagonal", np.zeros(n))
    truth = np.diag(dense_reference(op, args.beta, HALF_EXPONENTIAL).x)
    truth_norm = np.linalg.norm(truth)
    y = GibbsFactorOperator(op, args.beta, HALF_EXPONENTIAL)
    sizes = [int(s) for s in str(args.batch_sizes).split(",") if s.strip()]
    path = os.path.join(out, "estimator_bench.csv")
    with open(path, "w") as fh:
        fh.write(f"# n={n}\n# beta={args.beta}\n# trials={args.trials}\n# seed={args.seed}\n")
        fh.write("batch_size,trials,median_rel_err,mean_rel_err\n")
        for bi, size in enumerate(sizes):
            errs = np.empty(args.trials)
            for trial in range(args.trials):
                probes = draw_probes(n, size, args.seed, iteration=bi * args.trials + trial)
                a = diag_estimate(y, probes)
                errs[trial] = np.linalg.norm(a - truth) / truth_norm
            fh.write(
                f"{size},{args.trials},{np.median(errs):.17g},{np.mean(errs):.17g}\n"
            )


_COMMANDS = {
    "maxcut": _cmd_maxcut,
    "embed": _cmd_embed,
    "solve-diagonal": _cmd_solve_diagonal,
    "solve-trace": _cmd_solve_trace,
    "estimator-bench": _cmd_estimator_bench,
}


def run(args) -> int:
    out = _prepare_outdir(args)
    start = time.perf_counter()
    _COMMANDS[args.command](args, out)
    _manifest(out, args, time.perf_counter() - start)
    return 0


def main(argv=None) -> int:
    args = parse_config(sys.argv[1:] if argv is None else argv)
    try:
        return run(args)
    except (ValueError, FloatingPointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
