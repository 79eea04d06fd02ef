"""Command-line drivers for constants analysis, sweeps, optimizer runs, and
bound verification.

Every command is deterministic given its full flag set; independent trials
(permutations, seeds) run on a worker pool capped by SHUFFLE_SGD_THREADS
and are written in trial order. Numeric outputs go to CSV (LF endings,
`.` decimal); each command also writes a JSON report carrying
schema_version and the effective configuration for provenance.

Exit codes: 0 success, 1 verdict failure (a verified bound was violated or
could not be certified), 2 usage / IO / parse errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time

import numpy as np

from . import bounds as bd
from . import constants as consts
from . import engine, losses, shuffle
from .data import ParseError, SparseDataset, gen_gaussian, load_libsvm, row_sq_norms

SCHEMA_VERSION = 1

# Refuse permutation studies whose rough cost estimate (nnz * perms * assumed
# power-iteration sweeps) exceeds this many operations, unless --force.
DEFAULT_COST_BUDGET = 2e10
_ASSUMED_ITERS = 500


class CliError(Exception):
    def __init__(self, message, code=2):
        self.code = code
        super().__init__(message)


def _max_workers() -> int | None:
    raw = os.environ.get("SHUFFLE_SGD_THREADS")
    if not raw:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        raise CliError(f"SHUFFLE_SGD_THREADS must be an integer, got {raw!r}")


def _fan_out(fn, items):
    """Run independent trials on the worker pool, yielding results in trial
    order (each trial derives its own PRNG streams, so scheduling cannot
    change any output)."""
    workers = _max_workers()
    if workers is None or workers <= 1 or len(items) <= 1:
        for item in items:
            yield fn(item)
        return
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(fn, items)


def _load_dataset(args) -> SparseDataset:
    if getattr(args, "gaussian", None):
        try:
            n, d = (int(t) for t in args.gaussian.split(","))
        except ValueError:
            raise CliError("--gaussian expects N,D")
        return gen_gaussian(n, d, args.seed)
    path = getattr(args, "input", None)
    if not path:
        raise CliError("provide --input PATH or --gaussian N,D")
    if not os.path.exists(path):
        raise CliError(f"input file not found: {path}")
    try:
        return load_libsvm(path, d=getattr(args, "features", None))
    except ParseError as exc:
        raise CliError(f"{path}: {exc}")


def _unit_regularity(ds: SparseDataset) -> losses.RegularityDiag:
    """Unit per-component constants: ratio experiments fix the loss scale so
    only the data matrix matters."""
    return losses.RegularityDiag("smooth", np.ones(ds.n))


def _check_budget(ds, num_perms, args):
    est = ds.nnz * num_perms * _ASSUMED_ITERS
    budget = getattr(args, "max_cost", None) or DEFAULT_COST_BUDGET
    if est > budget and not getattr(args, "force", False):
        raise CliError(
            f"estimated cost {est:.2e} ops exceeds budget {budget:.2e}; "
            "rerun with --force to proceed"
        )


def _write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(rows)


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _config_echo(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _int_list(text) -> list:
    try:
        return [int(t) for t in str(text).split(",") if t != ""]
    except ValueError:
        raise CliError(f"expected a comma-separated integer list, got {text!r}")


def cmd_analyze(args) -> int:
    t0 = time.time()
    ds = _load_dataset(args)
    _check_budget(ds, args.num_perms, args)
    reg = _unit_regularity(ds)
    report = consts.ratio_stats(
        ds,
        reg,
        b=args.b,
        num_perms=args.num_perms,
        seed=args.seed,
        tol=args.tol,
        compute_tilde=not args.no_tilde,
        max_workers=_max_workers(),
    )
    payload = report.to_json_dict()
    payload["config"] = _config_echo(args)
    payload["runtime_sec"] = time.time() - t0
    _write_json(args.out + ".json", payload)
    _write_csv(args.out + ".csv", report.to_csv_rows())
    print(
        f"L={report.L:.6g} mean(L/hatL)={report.ratio_summary['mean']:.4g} "
        f"std={report.ratio_summary['std']:.3g} runtime={payload['runtime_sec']:.2f}s"
    )
    return 0


def cmd_gaussian_sweep(args) -> int:
    grid = _int_list(args.grid)
    if not grid:
        raise CliError("grid must be nonempty")
    rows = [("n", "d", "perm_index", "ratio")]
    summary = [("n", "d", "num_perms", "mean_ratio", "std_ratio")]
    means = []
    for g in grid:
        if args.fixed == "d":
            n, d = g, args.fixed_value
        else:
            n, d = args.fixed_value, g
        ds = gen_gaussian(n, d, seed=consts.prng.mix64(args.seed, g))
        reg = _unit_regularity(ds)
        report = consts.ratio_stats(
            ds,
            reg,
            b=args.b,
            num_perms=args.perms,
            seed=args.seed,
            tol=args.tol,
            compute_tilde=False,
            max_workers=_max_workers(),
        )
        for j, r in enumerate(report.ratios):
            rows.append((n, d, j, repr(float(r))))
        summary.append(
            (n, d, args.perms, repr(report.ratio_summary["mean"]), repr(report.ratio_summary["std"]))
        )
        means.append(report.ratio_summary["mean"])
    _write_csv(args.out + ".csv", rows)
    _write_csv(args.out + ".summary.csv", summary)
    _write_json(
        args.out + ".json",
        {
            "schema_version": SCHEMA_VERSION,
            "config": _config_echo(args),
            "grid": grid,
            "mean_ratios": means,
        },
    )
    print(" ".join(f"{g}:{m:.4g}" for g, m in zip(grid, means)))
    return 0


def cmd_batch_sweep(args) -> int:
    ds = _load_dataset(args)
    b_grid = _int_list(args.b_grid)
    bad = [b for b in b_grid if b < 1 or ds.n % b != 0]
    if bad:
        divisors = [k for k in range(1, ds.n + 1) if ds.n % k == 0]
        raise CliError(f"batch sizes {bad} do not divide n={ds.n}; valid divisors: {divisors}")
    _check_budget(ds, args.perms * len(b_grid), args)
    reg = _unit_regularity(ds)
    L = consts.classical_constant(ds, reg)
    rows = [("b", "perm_index", "ratio")]
    summary = [("b", "num_perms", "mean_ratio", "std_ratio")]
    means = []
    for b in b_grid:
        ratios = []
        for j in range(args.perms):
            perm = shuffle.random_permutation(ds.n, args.seed, j)
            til = consts.tilde_constant(ds, reg, perm, b, tol=args.tol)
            ratios.append(L / til)
        for j, r in enumerate(ratios):
            rows.append((b, j, repr(float(r))))
        means.append(float(np.mean(ratios)))
        summary.append((b, args.perms, repr(means[-1]), repr(float(np.std(ratios)))))
    # log-log slope of the mean ratio against b
    logs_b = np.log(np.asarray(b_grid, dtype=float))
    logs_r = np.log(np.maximum(means, 1e-300))
    alpha = float(np.polyfit(logs_b, logs_r, 1)[0]) if len(b_grid) > 1 else float("nan")
    _write_csv(args.out + ".csv", rows)
    _write_csv(args.out + ".summary.csv", summary)
    _write_json(
        args.out + ".json",
        {
            "schema_version": SCHEMA_VERSION,
            "config": _config_echo(args),
            "b_grid": b_grid,
            "mean_ratios": means,
            "loglog_slope": alpha,
        },
    )
    print(f"alpha={alpha:.4g} " + " ".join(f"b={b}:{m:.4g}" for b, m in zip(b_grid, means)))
    return 0


def cmd_histogram(args) -> int:
    if args.bins < 1:
        raise CliError("bins must be >= 1")
    ds = _load_dataset(args)
    _check_budget(ds, args.num_perms, args)
    reg = _unit_regularity(ds)
    report = consts.ratio_stats(
        ds,
        reg,
        b=args.b,
        num_perms=args.num_perms,
        seed=args.seed,
        tol=args.tol,
        compute_tilde=False,
        max_workers=_max_workers(),
    )
    ratios = report.ratios
    density, edges = np.histogram(ratios, bins=args.bins, density=True)
    rows = [("bin_left", "bin_right", "density")]
    for i in range(len(density)):
        rows.append((repr(float(edges[i])), repr(float(edges[i + 1])), repr(float(density[i]))))
    mean = float(np.mean(ratios))
    cv = float(np.std(ratios) / mean) if mean else float("nan")
    _write_csv(args.out + ".csv", rows)
    _write_json(
        args.out + ".json",
        {
            "schema_version": SCHEMA_VERSION,
            "config": _config_echo(args),
            "mean_ratio": mean,
            "coefficient_of_variation": cv,
        },
    )
    print(f"mean={mean:.4g} cv={cv:.4g}")
    return 0


def _theoretical_step(ds, model, scheme, b, K, num_perms, seed, tol, proxy):
    """Assemble BoundInputs and the matching step size for a smooth run."""
    reg = losses.regularity(model)
    ref = consts.reference_minimizer(ds, model, tol=1e-10)
    if not ref.converged:
        raise CliError("reference minimizer did not converge; cannot size the step", code=1)
    x_star = ref.x
    sig = consts.sigma_star(ds, model, x_star, grad_tol=1e-6)
    D = float(np.linalg.norm(x_star))  # x0 = 0
    if scheme == "IG":
        perm0 = np.arange(ds.n)
        hat = consts.hat_constant(ds, reg, perm0, b, tol=tol)
        til = consts.tilde_constant(ds, reg, perm0, b, tol=tol)
        ynorm = consts.ystar_weighted_norm(ds, model, x_star, grad_tol=1e-6)
        inp = bd.BoundInputs(n=ds.n, b=b, K=K, hatL=hat, tildeL=til,
                             sigma_star=sig, D=D, ystar_norm=ynorm)
        return bd.step_size_ig(inp), inp, x_star
    report = consts.ratio_stats(ds, reg, b=b, num_perms=num_perms, seed=seed, tol=tol)
    hat = _proxy_value(report.hatL, proxy)
    til = _proxy_value(report.tildeL, proxy)
    inp = bd.BoundInputs(n=ds.n, b=b, K=K, hatL=hat, tildeL=til, sigma_star=sig, D=D)
    return bd.step_size_smooth_rr(inp), inp, x_star


def _proxy_value(summary: dict, proxy: str) -> float:
    """Pick the constant fed to step sizes from sampled per-permutation values:
    the sampled max (default, matching a deterministic constant step) or an
    upper decile."""
    if proxy == "max":
        return summary["max"]
    if proxy.startswith("q"):
        q = int(proxy[1:])
        if not 0 <= q <= 100:
            raise CliError("quantile proxy must be q0..q100")
        return summary["deciles"][q // 10]
    raise CliError(f"unknown proxy {proxy!r} (use max or q90-style deciles)")


def cmd_optimize(args) -> int:
    ds = _load_dataset(args)
    model = losses.LossModel.for_dataset(args.loss, ds)
    seeds = _int_list(args.seeds)
    if not seeds:
        raise CliError("provide at least one run seed")
    if args.b < 1 or ds.n % args.b != 0:
        raise CliError(f"batch size {args.b} must divide n={ds.n}")

    x_star = None
    f_star = None
    if args.step == "theoretical":
        if not model.smooth:
            raise CliError("theoretical step for nonsmooth losses needs verify-bound --planted")
        eta, inp, x_star = _theoretical_step(
            ds, model, args.scheme, args.b, args.epochs, args.perms, args.seed, args.tol,
            args.proxy,
        )
        f_star = losses.objective(model, ds, x_star)
    else:
        try:
            eta = float(args.step)
        except ValueError:
            raise CliError("--step expects a float or 'theoretical'")
        if model.smooth:
            ref = consts.reference_minimizer(ds, model, tol=1e-10)
            if ref.converged:
                x_star = ref.x
                f_star = losses.objective(model, ds, x_star)

    trace = not args.no_trace

    def run_one(s):
        plan = shuffle.ShufflePlan(args.scheme, ds.n, args.epochs, seed=s)
        cfg = engine.RunConfig(
            batch=args.b, epochs=args.epochs, step=eta, x0=np.zeros(ds.d), record_inner=trace
        )
        try:
            result = engine.run(ds, model, plan, cfg)
        except engine.DivergenceError as exc:
            return s, None, exc.epoch
        seed_rows = []
        avg = np.zeros(ds.d)
        hsum = 0.0
        for k in range(1, args.epochs + 1):
            hk = result.step_sizes[k - 1]
            avg += hk * result.iterates[k]
            hsum += hk
            f_avg = losses.objective(model, ds, avg / hsum)
            res = (
                engine.retraction_residual(result.traces[k - 1], args.b, ds.n)
                if trace
                else float("nan")
            )
            seed_rows.append(
                (s, k, repr(float(result.objectives[k - 1])), repr(f_avg), repr(res))
            )
        gap = float(result.objective_avg - f_star) if f_star is not None else None
        return s, (seed_rows, gap), None

    rows = [("seed", "epoch", "f_x", "f_avg", "retraction_residual")]
    final_gaps = {}
    diverged = {}
    for s, ok, bad_epoch in _fan_out(run_one, seeds):
        if ok is None:
            diverged[s] = bad_epoch
            continue
        seed_rows, gap = ok
        rows.extend(seed_rows)
        if gap is not None:
            final_gaps[s] = gap

    if len(diverged) == len(seeds):
        print("all seeds diverged", file=sys.stderr)
        return 1
    _write_csv(args.out + ".csv", rows)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": _config_echo(args),
        "step_size": eta,
        "diverged": {str(k): v for k, v in diverged.items()},
    }
    if final_gaps:
        payload["final_gaps"] = {str(k): v for k, v in final_gaps.items()}
        payload["mean_final_gap"] = float(np.mean(list(final_gaps.values())))
    _write_json(args.out + ".json", payload)
    if final_gaps:
        print(f"step={eta:.4g} mean_final_gap={payload['mean_final_gap']:.6g}")
    else:
        print(f"step={eta:.4g}")
    return 0


def _planted_hinge(n, d, seed, margin=2.0):
    """Hinge problem with a known optimum: targets are the signs of a planted
    direction's margins and the optimum is that direction scaled so every
    margin clears 1, making the minimum value exactly 0."""
    ds0 = gen_gaussian(n, d, seed)
    A = ds0.to_dense()
    rng = consts.prng.generator(consts.prng.substream(seed, consts.prng.DOMAIN_TRIAL, 999))
    direction = consts.prng.standard_normal(rng, d)
    direction /= np.linalg.norm(direction)
    z = A @ direction
    z[np.abs(z) < 1e-6] = 1e-6
    t = np.sign(z)
    scale = margin / np.min(np.abs(z))
    x_star = scale * direction
    ds = SparseDataset.from_dense(A, labels=t)
    return ds, x_star


def cmd_verify_bound(args) -> int:
    kind = args.bound.replace("-", "_")
    if kind not in bd.GUARANTEE_KINDS:
        raise CliError(f"--bound must be one of {bd.GUARANTEE_KINDS}")
    seeds = list(range(args.seeds))
    b, K = args.b, args.epochs

    if kind == "nonsmooth":
        if not args.planted:
            raise CliError("nonsmooth verification needs --planted (known optimum)")
        try:
            n, d = (int(t) for t in args.gaussian.split(","))
        except (AttributeError, ValueError):
            raise CliError("--gaussian N,D is required with --planted")
        ds, x_star = _planted_hinge(n, d, args.seed)
        model = losses.LossModel.for_dataset("hinge", ds)
        f_star = 0.0
        reg = losses.regularity(model)
        gbar = consts.gbar_estimate(ds, reg, b, args.perms, seed=args.seed, tol=args.tol)
        D = float(np.linalg.norm(x_star))
        inp = bd.BoundInputs(n=ds.n, b=b, K=K, D=D, Gbar=gbar)
        eta = bd.step_size_nonsmooth(inp)
        rhs = bd.bound_rhs_nonsmooth(inp, eta)
    else:
        ds = _load_dataset(args)
        model = losses.LossModel.for_dataset(args.loss, ds)
        if not model.smooth:
            raise CliError(f"--bound {args.bound} needs a smooth loss")
        scheme = "IG" if kind.endswith("ig") else "RR"
        try:
            eta, inp, x_star = _theoretical_step(
                ds, model, scheme, b, K, args.perms, args.seed, args.tol, args.proxy
            )
        except CliError as exc:
            if exc.code == 1:
                _write_json(args.out + ".json", {
                    "schema_version": SCHEMA_VERSION,
                    "config": _config_echo(args),
                    "verdict": "inconclusive",
                    "reason": str(exc),
                })
                print("verdict=inconclusive")
                return 1
            raise
        f_star = losses.objective(model, ds, x_star)
        if kind == "general_rr":
            Lvals = losses.regularity(model).values * row_sq_norms(ds)
            hats, tils = [], []
            for j in range(args.perms):
                perm = shuffle.random_permutation(ds.n, args.seed, j)
                hats.append(consts.general_hat_L(Lvals, perm, b, tol=args.tol))
                tils.append(consts.general_tilde_L(Lvals, perm, b))
            inp.hatL, inp.tildeL = max(hats), max(tils)
            eta = bd.step_size_general_rr(inp)
        elif kind == "general_ig":
            Lvals = losses.regularity(model).values * row_sq_norms(ds)
            perm0 = np.arange(ds.n)
            inp.hatL = consts.general_hat_L(Lvals, perm0, b, tol=args.tol)
            inp.tildeL = consts.general_tilde_L(Lvals, perm0, b)
            eta = bd.step_size_general_ig(inp)
        if kind in ("ig", "general_ig"):
            rhs = (bd.bound_rhs_ig if kind == "ig" else bd.bound_rhs_general_ig)(inp, eta)
        else:
            rhs = (bd.bound_rhs_smooth_rr if kind == "rr" else bd.bound_rhs_general_rr)(inp, eta)

    def glm_oracle(i, x):
        lo, hi = ds.indptr[i], ds.indptr[i + 1]
        g = np.zeros(ds.d)
        z = float(ds.values[lo:hi] @ x[ds.indices[lo:hi]])
        g[ds.indices[lo:hi]] = losses.loss_derivative(model, i, z) * ds.values[lo:hi]
        return g

    scheme = "IG" if kind.endswith("ig") else "RR"
    if kind.endswith("ig"):
        seeds = seeds[:1]  # deterministic: one run suffices

    def run_one(s):
        plan = shuffle.ShufflePlan(scheme, ds.n, K, seed=s)
        cfg = engine.RunConfig(batch=b, epochs=K, step=eta, x0=np.zeros(ds.d))
        if kind.startswith("general"):
            result = engine.run_general(
                glm_oracle, ds.n, ds.d, plan, cfg,
                objective_fn=lambda x: losses.objective(model, ds, x),
            )
        else:
            result = engine.run(ds, model, plan, cfg)
        return float(result.objective_avg - f_star)

    gaps = list(_fan_out(run_one, seeds))

    mean_gap = float(np.mean(gaps))
    sem = float(np.std(gaps) / math.sqrt(len(gaps))) if len(gaps) > 1 else 0.0
    holds = mean_gap <= rhs
    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": _config_echo(args),
        "bound": kind,
        "step_size": eta,
        "empirical_mean_gap": mean_gap,
        "standard_error": sem,
        "rhs": rhs,
        "margin": rhs - mean_gap,
        "num_runs": len(gaps),
        "verdict": "holds" if holds else "violated",
    }
    _write_json(args.out + ".json", payload)
    print(f"verdict={payload['verdict']} mean_gap={mean_gap:.6g} rhs={rhs:.6g}")
    return 0 if holds else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="shuffle-sgd",
        description="Shuffled SGD constants, sweeps, runs, and bound verification. "
        "Desk-scale studies (small LIBSVM sets, Gaussian sweeps up to ~500x500) "
        "finish in seconds to minutes; larger inputs need --force.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=1e-6, help="power-iteration tolerance")
        sp.add_argument("--out", required=True, help="output path prefix")

    sp = sub.add_parser("analyze", help="per-permutation hat/tilde constants for one dataset")
    sp.add_argument("--input", required=True)
    sp.add_argument("--features", type=int, default=None, help="feature count override")
    sp.add_argument("--b", type=int, default=1)
    sp.add_argument("--num-perms", type=int, default=1000)
    sp.add_argument("--no-tilde", action="store_true")
    sp.add_argument("--force", action="store_true")
    sp.add_argument("--max-cost", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("gaussian-sweep", help="ratio trend over Gaussian sizes")
    sp.add_argument("--fixed", choices=("n", "d"), required=True,
                    help="which dimension stays fixed while the grid varies the other")
    sp.add_argument("--fixed-value", type=int, required=True)
    sp.add_argument("--grid", required=True, help="comma-separated grid for the varying dimension")
    sp.add_argument("--perms", type=int, default=20)
    sp.add_argument("--b", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_gaussian_sweep)

    sp = sub.add_parser("batch-sweep", help="L / tilde ratio against batch size")
    sp.add_argument("--input")
    sp.add_argument("--features", type=int, default=None)
    sp.add_argument("--gaussian", help="N,D synthetic data instead of --input")
    sp.add_argument("--b-grid", required=True)
    sp.add_argument("--perms", type=int, default=20)
    sp.add_argument("--force", action="store_true")
    sp.add_argument("--max-cost", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_batch_sweep)

    sp = sub.add_parser("histogram", help="distribution of L / hat over permutations")
    sp.add_argument("--input")
    sp.add_argument("--features", type=int, default=None)
    sp.add_argument("--gaussian")
    sp.add_argument("--b", type=int, default=1)
    sp.add_argument("--num-perms", type=int, default=1000)
    sp.add_argument("--bins", type=int, default=30)
    sp.add_argument("--force", action="store_true")
    sp.add_argument("--max-cost", type=float, default=None)
    common(sp)
    sp.set_defaults(func=cmd_histogram)

    sp = sub.add_parser("optimize", help="run shuffled SGD and trace objectives")
    sp.add_argument("--input")
    sp.add_argument("--features", type=int, default=None)
    sp.add_argument("--gaussian")
    sp.add_argument("--loss", choices=losses.FAMILIES, default="squared")
    sp.add_argument("--scheme", choices=shuffle.SCHEMES, default="RR")
    sp.add_argument("--b", type=int, default=1)
    sp.add_argument("--epochs", type=int, default=10)
    sp.add_argument("--step", default="theoretical", help="'theoretical' or a float")
    sp.add_argument("--seeds", default="0", help="comma-separated run seeds")
    sp.add_argument("--perms", type=int, default=50,
                    help="permutations sampled for step-size constants")
    sp.add_argument("--proxy", default="max", help="constant proxy: max or q90-style decile")
    sp.add_argument("--no-trace", action="store_true", help="skip inner-iterate traces")
    common(sp)
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("verify-bound", help="check a convergence guarantee empirically")
    sp.add_argument("--bound", required=True,
                    help="rr | ig | nonsmooth | general-rr | general-ig")
    sp.add_argument("--input")
    sp.add_argument("--features", type=int, default=None)
    sp.add_argument("--gaussian")
    sp.add_argument("--loss", choices=losses.FAMILIES, default="squared")
    sp.add_argument("--planted", action="store_true",
                    help="construct a hinge problem with a known optimum")
    sp.add_argument("--b", type=int, default=1)
    sp.add_argument("--epochs", type=int, default=10)
    sp.add_argument("--seeds", type=int, default=100, help="number of independent runs")
    sp.add_argument("--perms", type=int, default=100,
                    help="permutations for constant estimation")
    sp.add_argument("--proxy", default="max")
    common(sp)
    sp.set_defaults(func=cmd_verify_bound)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (OSError, ParseError, shuffle.ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
