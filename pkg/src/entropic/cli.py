"""Command-line interface: ``entropic {sample,check,sweep,minimize,tomogram}``.

Exit status is 0 when every check is satisfied, 1 when any inequality report
is violated, 2 on invalid input or configuration.
"""
from __future__ import annotations

import argparse
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .classical import check_q, subadditivity_margin, tsallis_sum, reshape_joint
from .errors import BudgetExhausted, DimensionMismatch, EntropicError, ParseError
from .inequalities import (
    check_araki_lieb,
    check_quantum_subadditivity,
    check_tomogram_subadditivity,
    marginal_entropies,
    mutual_information_bipartite,
    quantum_q_entropy,
    tomogram_marginals,
)
from .linalg import (
    derive_seed,
    ginibre_density,
    haar_unitary,
    matrix_from_json,
    matrix_to_json,
    unitarity_error,
)
from .optimize import minimize_sigma
from .reports import InequalityReport, SuiteReport, dumps, reports_to_csv, rows_to_csv
from .shapes import BipartitionShape, as_shape, factorizations, padded_dim
from .states import SPIN_32, DensityMatrix, qudit32_omegas, tomogram, validate_density, zero_pad

DEFAULT_Q = (1.0, 1.5, 2.0, 3.0)
EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
UNITARY_TOL = 1e-9


class UsageError(EntropicError):
    pass


# ---------------------------------------------------------------------------
# helpers


def read_density(path: str) -> DensityMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return validate_density(matrix_from_json(text))


def prepare_state(rho: DensityMatrix, shape=None) -> tuple[DensityMatrix, list[BipartitionShape], int]:
    """Pad if needed and list the shapes to check; returns (state, shapes, padded dim)."""
    N = rho.dim
    if shape is not None:
        shape = as_shape(shape)
        if shape.size < N:
            raise UsageError(f"shape {shape.n} x {shape.m} is smaller than dim {N}")
        target, shapes = shape.size, [shape]
    else:
        target = padded_dim(N)
        shapes = factorizations(target)
    return zero_pad(rho, target), shapes, target


def q_values(args, minimum: float | None = 1.0) -> list[float]:
    qs = list(args.q) if args.q else list(DEFAULT_Q)
    out = []
    for q in qs:
        if minimum is None:
            out.append(check_q(q))
        else:
            out.append(check_q(q, minimum=minimum, inclusive=True))
    return out


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def emit_suite(suite: SuiteReport, args) -> int:
    if args.format == "csv":
        emit(reports_to_csv(suite.reports), args.out)
    else:
        emit(dumps(suite.to_dict()), args.out)
    return EXIT_VIOLATION if suite.violations else EXIT_OK


def load_unitary(source: str, dim: int, seed: int) -> tuple[np.ndarray, str]:
    if source == "identity":
        return np.eye(dim, dtype=np.complex128), "identity"
    if source == "haar":
        return haar_unitary(dim, seed), f"haar:{seed}"
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read unitary {source}: {exc}") from exc
    u = matrix_from_json(text)
    if u.shape[0] < dim:
        # a unitary on the unpadded space acts as identity on the padding
        big = np.eye(dim, dtype=np.complex128)
        big[: u.shape[0], : u.shape[0]] = u
        u = big
    if u.shape[0] != dim:
        raise DimensionMismatch(f"unitary is {u.shape[0]} x {u.shape[0]}, state is {dim} x {dim}")
    err = unitarity_error(u)
    if err > UNITARY_TOL:
        raise ParseError(f"matrix in {source} is not unitary (max |u^dagger u - I| = {err:.3e})")
    return u, f"file:{Path(source).name}"


def _config(args, **extra) -> dict:
    keys = ("command", "dim", "rank", "shape", "q", "trials", "seed", "input", "unitary", "labels",
            "restarts", "max_iters", "tol")
    cfg = {}
    for k in keys:
        if hasattr(args, k):
            v = getattr(args, k)
            if k == "q":
                v = list(v) if v else list(DEFAULT_Q)
            elif k == "shape" and v is not None:
                v = list(v)
            cfg[k] = v
    cfg.update(extra)
    return cfg


# ---------------------------------------------------------------------------
# commands


def cmd_sample(args) -> int:
    if args.dim is None or args.dim < 2:
        raise UsageError("--dim >= 2 is required")
    rank = args.dim if args.rank is None else args.rank
    rho = ginibre_density(args.dim, rank, args.seed)
    emit(matrix_to_json(rho) + "\n", args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    t0 = time.perf_counter()
    rho0 = read_density(args.input)
    qs = q_values(args)
    rho, shapes, target = prepare_state(rho0, args.shape)
    trials = 10 if args.trials is None else args.trials
    if trials < 0:
        raise UsageError("--trials must be >= 0")
    reports: list[InequalityReport] = []
    for shape in shapes:
        reports.append(check_araki_lieb(rho, shape))
        for q in qs:
            reports.append(check_quantum_subadditivity(rho, shape, q))
        for i in range(trials):
            s = derive_seed(args.seed, i)
            u = haar_unitary(target, s)
            t = tomogram(rho, u, unitary_label=f"haar:{s}")
            for q in qs:
                reports.append(check_tomogram_subadditivity(t, shape, q, seed=s))
    suite = SuiteReport(_config(args, trials=trials), reports,
                        extra={"padding": {"dim": rho0.dim, "padded_dim": target}})
    if args.timing:
        suite.wall_time = time.perf_counter() - t0
    return emit_suite(suite, args)


def _sweep_trial(job) -> list[InequalityReport]:
    dim, rank, target, shapes, qs, seed, trial = job
    state_seed = derive_seed(seed, trial, 0)
    u_seed = derive_seed(seed, trial, 1)
    rho = zero_pad(validate_density(ginibre_density(dim, rank, state_seed)), target)
    u = haar_unitary(target, u_seed)
    label = f"haar:{u_seed}"
    out = []
    for shape in shapes:
        out.append(check_araki_lieb(rho, shape, seed=state_seed))
        for q in qs:
            out.append(check_quantum_subadditivity(rho, shape, q, seed=state_seed))
            s1, s2 = marginal_entropies(rho, shape, q, u)
            out.append(InequalityReport.build("information_nonnegativity", quantum_q_entropy(rho, q), s1 + s2,
                                              q, shape, seed=state_seed, unitary_label=label))
    return out


def cmd_sweep(args) -> int:
    t0 = time.perf_counter()
    if args.dim is None or args.dim < 2:
        raise UsageError("--dim >= 2 is required")
    rank = args.dim if args.rank is None else args.rank
    if not 1 <= rank <= args.dim:
        raise UsageError("--rank must be in [1, dim]")
    trials = 100 if args.trials is None else args.trials
    if trials < 1:
        raise UsageError("--trials must be >= 1")
    qs = q_values(args)
    if args.shape is not None:
        shape = as_shape(args.shape)
        if shape.size < args.dim:
            raise UsageError(f"shape {shape.n} x {shape.m} is smaller than dim {args.dim}")
        target, shapes = shape.size, [shape]
    else:
        target = padded_dim(args.dim)
        shapes = factorizations(target)
    jobs = [(args.dim, rank, target, shapes, qs, args.seed, i) for i in range(trials)]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            chunks = list(pool.map(_sweep_trial, jobs, chunksize=max(1, trials // (4 * args.workers))))
    else:
        chunks = [_sweep_trial(j) for j in jobs]
    reports = [r for chunk in chunks for r in chunk]
    suite = SuiteReport(_config(args, trials=trials, rank=rank), reports,
                        extra={"padding": {"dim": args.dim, "padded_dim": target}})
    if args.timing:
        suite.wall_time = time.perf_counter() - t0
    return emit_suite(suite, args)


def cmd_minimize(args) -> int:
    rho0 = read_density(args.input)
    rho, shapes, target = prepare_state(rho0, args.shape)
    results = []
    for shape in shapes:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BudgetExhausted)
            res = minimize_sigma(rho, shape, restarts=args.restarts, max_iters=args.max_iters,
                                 tol=args.tol, seed=args.seed)
        mi = mutual_information_bipartite(rho, shape).value
        results.append({
            "shape": [shape.n, shape.m],
            "entropy": res.entropy,
            "mutual_information": mi,
            "sigma_minus_mutual_information": res.sigma - mi,
            "optimization": res.to_dict(),
        })
    if args.format == "csv":
        rows = []
        for r in results:
            o = r["optimization"]
            rows.append({"shape": "{}x{}".format(*r["shape"]), "sigma": o["sigma"],
                         "information": o["information"], "entropy": r["entropy"],
                         "mutual_information": r["mutual_information"],
                         "sigma_minus_mutual_information": r["sigma_minus_mutual_information"],
                         "iterations": o["iterations"], "restarts_used": o["restarts_used"],
                         "converged": o["converged"]})
        emit(rows_to_csv(rows), args.out)
    else:
        doc = {"config": _config(args), "padding": {"dim": rho0.dim, "padded_dim": target}, "results": results}
        emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_tomogram(args) -> int:
    rho0 = read_density(args.input)
    qs = q_values(args, minimum=None)
    rho, shapes, target = prepare_state(rho0, args.shape)
    shape = shapes[0]
    if args.labels == "spin" and target != rho0.dim:
        raise UsageError("spin labels need an unpadded state")
    u, label = load_unitary(args.unitary, target, args.seed)
    t = tomogram(rho, u, args.labels, shape=shape if args.labels == "pairs" else None, unitary_label=label)
    spin32 = t.labels == SPIN_32 and shape == (2, 2)

    rows = []
    for q in qs:
        h = tsallis_sum(t.probs, q)
        if spin32:
            # condition on the sign of the projection (the row split)
            rows_m, cols_m = qudit32_omegas(t)
            h_cond_on = tsallis_sum(rows_m, q)
        else:
            rows_m, cols_m = tomogram_marginals(t, shape)
            h_cond_on = tsallis_sum(cols_m, q)
        cond = h - h_cond_on
        rows.append({
            "q": q,
            "H_q": h,
            "H_q_rows": tsallis_sum(rows_m, q),
            "H_q_cols": tsallis_sum(cols_m, q),
            "H_q_conditional": cond,
            "chain_residual": h - (cond + h_cond_on),
            "subadditivity_margin": subadditivity_margin(reshape_joint(t.probs, shape), q),
        })
    if args.format == "csv":
        emit(rows_to_csv(rows), args.out)
        return EXIT_OK
    doc = {
        "config": _config(args),
        "padding": {"dim": rho0.dim, "padded_dim": target},
        "shape": [shape.n, shape.m],
        "conditioning": "sign_of_projection" if spin32 else "columns",
        "tomogram": t.to_dict(include_matrix=label.startswith("file:")),
    }
    if spin32:
        o1, o2 = qudit32_omegas(t)
        doc["omegas"] = {"omega1": [float(x) for x in o1], "omega2": [float(x) for x in o2]}
    doc["entropies"] = rows
    emit(dumps(doc), args.out)
    return EXIT_OK


COMMANDS = {
    "sample": cmd_sample,
    "check": cmd_check,
    "sweep": cmd_sweep,
    "minimize": cmd_minimize,
    "tomogram": cmd_tomogram,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base seed (64-bit integer)")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    shape = argparse.ArgumentParser(add_help=False)
    shape.add_argument("--shape", nargs=2, type=int, metavar=("N", "M"),
                       help="check only this n x m block shape (default: every factorization)")
    shape.add_argument("--q", type=float, action="append", help="q value (repeatable; default 1 1.5 2 3)")

    p = argparse.ArgumentParser(prog="entropic", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", parents=[common], help="random density matrix as matrix JSON")
    s.add_argument("--dim", type=int)
    s.add_argument("--rank", type=int)

    c = sub.add_parser("check", parents=[common, shape], help="check inequalities for one state")
    c.add_argument("--input", required=True, metavar="PATH")
    c.add_argument("--trials", type=int, help="Haar unitaries for tomographic checks (default 10)")
    c.add_argument("--timing", action="store_true", help="record wall time (output no longer reproducible)")

    w = sub.add_parser("sweep", parents=[common, shape], help="check inequalities over random states")
    w.add_argument("--dim", type=int)
    w.add_argument("--rank", type=int)
    w.add_argument("--trials", type=int, help="number of random states (default 100)")
    w.add_argument("--workers", type=int, default=1)
    w.add_argument("--timing", action="store_true", help="record wall time (output no longer reproducible)")

    m = sub.add_parser("minimize", parents=[common, shape], help="minimize the marginal entropy sum over U(N)")
    m.add_argument("--input", required=True, metavar="PATH")
    m.add_argument("--restarts", type=int, default=8)
    m.add_argument("--max-iters", type=int, default=5000)
    m.add_argument("--tol", type=float, default=1e-8)

    t = sub.add_parser("tomogram", parents=[common, shape], help="tomogram and its entropy table")
    t.add_argument("--input", required=True, metavar="PATH")
    t.add_argument("--unitary", default="identity", metavar="PATH|haar|identity")
    t.add_argument("--labels", choices=("linear", "spin", "pairs"), default="linear")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (EntropicError, ValueError) as exc:
        print(f"entropic {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
