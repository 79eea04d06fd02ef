"""Shuffled SGD engine in the primal-dual formulation.

Each epoch visits the n components in a permuted order in m = n/b blocks.
For block i the dual block update evaluates the loss (sub)derivatives at
the current inner iterate, and the primal block step moves against their
data-weighted sum:

    y^(i) = ( l'_{pi_j}(a_{pi_j}^T x) )_{j in block i}
    x    <- x - (eta/b) sum_{j in block i} y^(i)_j a_{pi_j}

The composition is exactly vanilla mini-batch shuffled SGD. The returned
output is the step-size weighted average of the epoch iterates.

Traced epochs additionally record the quantities entering the retraction
identity: with inner iterates x_0..x_m (x_m the epoch end) and block
gradient aggregates g_i = (b/eta)(x_{i-1} - x_i),

    (eta/n) sum_i <g_i, x_m - x_i>
        = (b/2n) sum_i ||x_{i-1} - x_i||^2 - (b/2n) ||x_0 - x_m||^2,

which holds exactly for every epoch and is used as a self-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import PermutedView, SparseDataset
from .losses import LossModel, derivative_vec, objective
from .shuffle import ConfigError, ShufflePlan, permutation_for


class DivergenceError(RuntimeError):
    def __init__(self, epoch):
        self.epoch = epoch
        super().__init__(f"non-finite iterate produced in epoch {epoch}; reduce the step size")


@dataclass
class RunConfig:
    batch: int
    epochs: int
    step: float | np.ndarray
    x0: np.ndarray
    record_inner: bool = False

    def step_schedule(self) -> np.ndarray:
        steps = np.asarray(self.step, dtype=np.float64)
        if steps.ndim == 0:
            steps = np.full(self.epochs, float(steps))
        if steps.shape != (self.epochs,):
            raise ConfigError("step must be a scalar or one value per epoch")
        if np.any(steps <= 0):
            raise ConfigError("step sizes must be positive")
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        return steps


@dataclass
class EpochTrace:
    epoch: int
    step_size: float
    squared_steps: float
    displacement_sq: float
    retraction_term: float | None = None
    dual_blocks: list | None = None
    inner_iterates: list | None = None


@dataclass
class RunResult:
    iterates: list  # x_0 .. x_K
    averaged: np.ndarray
    traces: list
    objectives: np.ndarray  # f(x_k) for k = 1..K
    objective_avg: float
    step_sizes: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]


def dual_block_update(m: LossModel, view: PermutedView, block: int, x: np.ndarray,
                      b: int) -> np.ndarray:
    """Loss (sub)derivatives for the rows of one block at the current point.

    Returns the pre-chain-rule scalars l'_{pi_j}(a_{pi_j}^T x); the data
    rows enter in the primal step. Blocks are numbered 0..m-1.
    """
    lo, hi = block * b, (block + 1) * b
    A = view.to_csr()
    z = A[lo:hi] @ x
    return derivative_vec(m, view.perm[lo:hi], z)


def primal_block_step(x: np.ndarray, view: PermutedView, block: int,
                      y_block: np.ndarray, step: float, b: int) -> np.ndarray:
    """x - (step/b) sum_j y_j a_{pi_j} over the block's rows (sparse axpy)."""
    lo, hi = block * b, (block + 1) * b
    A = view.to_csr()
    return x - (step / b) * (A[lo:hi].T @ y_block)


def _finalize(iterates, steps, traces, objectives, m, ds):
    H = float(np.sum(steps))
    avg = np.zeros_like(iterates[0])
    for eta, xk in zip(steps, iterates[1:]):
        avg += eta * xk
    avg /= H
    return RunResult(
        iterates=iterates,
        averaged=avg,
        traces=traces,
        objectives=np.asarray(objectives),
        objective_avg=objective(m, ds, avg),
        step_sizes=steps,
    )


def run(ds: SparseDataset, model: LossModel, plan: ShufflePlan, cfg: RunConfig) -> RunResult:
    """Execute shuffled SGD for cfg.epochs epochs and record per-epoch traces."""
    n = ds.n
    b = cfg.batch
    if b < 1 or n % b != 0:
        raise ConfigError(f"batch size {b} must divide n = {n}")
    if plan.n != n:
        raise ConfigError("shuffle plan row count does not match the dataset")
    m_blocks = n // b
    steps = cfg.step_schedule()
    x = np.asarray(cfg.x0, dtype=np.float64).copy()
    if x.shape != (ds.d,):
        raise ConfigError(f"x0 must have dimension d = {ds.d}")

    iterates = [x.copy()]
    traces = []
    objectives = []
    # float overflow on a diverging run surfaces as DivergenceError, not warnings
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, cfg.epochs + 1):
            eta = float(steps[k - 1])
            perm = permutation_for(plan, k)
            view = PermutedView(ds, perm)
            x_start = x.copy()
            sq_steps = 0.0
            inner = [x.copy()] if cfg.record_inner else None
            duals = [] if cfg.record_inner else None
            for i in range(m_blocks):
                y_blk = dual_block_update(model, view, i, x, b)
                x_new = primal_block_step(x, view, i, y_blk, eta, b)
                delta = x_new - x
                sq_steps += float(delta @ delta)
                if cfg.record_inner:
                    inner.append(x_new.copy())
                    duals.append(y_blk)
                x = x_new
            if not np.all(np.isfinite(x)):
                raise DivergenceError(k)
            disp = x - x_start
            trace = EpochTrace(
                epoch=k,
                step_size=eta,
                squared_steps=sq_steps,
                displacement_sq=float(disp @ disp),
                dual_blocks=duals,
                inner_iterates=inner,
            )
            if cfg.record_inner:
                A = view.to_csr()
                t1 = 0.0
                for i in range(m_blocks):
                    g_i = A[i * b : (i + 1) * b].T @ duals[i]
                    t1 += float(g_i @ (x - inner[i + 1]))
                trace.retraction_term = eta / n * t1
            traces.append(trace)
            iterates.append(x.copy())
            objectives.append(objective(model, ds, x))
    return _finalize(iterates, steps, traces, objectives, model, ds)


def run_general(grad_oracle, n: int, d: int, plan: ShufflePlan, cfg: RunConfig,
                objective_fn=None) -> RunResult:
    """Shuffled SGD over arbitrary component gradients grad_oracle(i, x).

    The inner step averages the oracle outputs over each block, which
    coincides with run() when the oracle is i, x -> l_i'(a_i^T x) a_i.
    """
    b = cfg.batch
    if b < 1 or n % b != 0:
        raise ConfigError(f"batch size {b} must divide n = {n}")
    if plan.n != n:
        raise ConfigError("shuffle plan row count does not match the oracle size")
    m_blocks = n // b
    steps = cfg.step_schedule()
    x = np.asarray(cfg.x0, dtype=np.float64).copy()
    if x.shape != (d,):
        raise ConfigError(f"x0 must have dimension d = {d}")

    iterates = [x.copy()]
    traces = []
    objectives = []
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, cfg.epochs + 1):
            eta = float(steps[k - 1])
            perm = permutation_for(plan, k)
            x_start = x.copy()
            sq_steps = 0.0
            inner = [x.copy()] if cfg.record_inner else None
            blocks = [] if cfg.record_inner else None
            for i in range(m_blocks):
                g = np.zeros(d)
                for j in perm[i * b : (i + 1) * b]:
                    g += grad_oracle(int(j), x)
                x_new = x - (eta / b) * g
                delta = x_new - x
                sq_steps += float(delta @ delta)
                if cfg.record_inner:
                    inner.append(x_new.copy())
                    blocks.append(g)
                x = x_new
            if not np.all(np.isfinite(x)):
                raise DivergenceError(k)
            disp = x - x_start
            trace = EpochTrace(
                epoch=k,
                step_size=eta,
                squared_steps=sq_steps,
                displacement_sq=float(disp @ disp),
                dual_blocks=blocks,
                inner_iterates=inner,
            )
            if cfg.record_inner:
                t1 = 0.0
                for i in range(m_blocks):
                    t1 += float(blocks[i] @ (x - inner[i + 1]))
                trace.retraction_term = eta / n * t1
            traces.append(trace)
            iterates.append(x.copy())
            objectives.append(objective_fn(x) if objective_fn is not None else float("nan"))

    H = float(np.sum(steps))
    avg = np.zeros(d)
    for eta, xk in zip(steps, iterates[1:]):
        avg += eta * xk
    avg /= H
    return RunResult(
        iterates=iterates,
        averaged=avg,
        traces=traces,
        objectives=np.asarray(objectives),
        objective_avg=objective_fn(avg) if objective_fn is not None else float("nan"),
        step_sizes=steps,
    )


def retraction_residual(trace: EpochTrace, b: int, n: int) -> float:
    """Absolute gap between the recorded retraction term and its closed form
    (b/2n) [sum of squared inner steps - squared epoch displacement].

    Requires a trace recorded with record_inner=True.
    """
    if trace.retraction_term is None:
        raise ValueError("retraction residual needs a trace recorded with record_inner=True")
    closed = (b / (2.0 * n)) * (trace.squared_steps - trace.displacement_sq)
    return abs(trace.retraction_term - closed)
