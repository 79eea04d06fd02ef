"""Data-dependent smoothness/Lipschitz constants via matrix-free spectral norms.

Let B be the permuted, regularity-weighted data matrix with rows
b_i = sqrt(w_{perm_i}) a_{perm_i} (w holds L_i for smooth losses, G_i^2 for
Lipschitz ones) and split the n rows into m = n/b consecutive blocks. Two
n x n PSD operators drive everything here:

  prefix mode     M = sum_j P_j B B^T P_j, where P_j zeroes the rows before
                  block j. Entrywise, M = (B B^T) o C with
                  C[k, l] = min(block(k), block(l)) + 1, which is what the
                  dense oracle in the tests builds.
  blockdiag mode  M = sum_j E_j B B^T E_j, keeping only the diagonal blocks.

The constants:

  classical_constant   max_i w_i ||a_i||^2
  full_gradient_L      (1/n) ||B B^T||
  hat_constant         (1/(m n)) ||prefix-mode M||
  tilde_constant       (1/b) max over blocks of ||B_j B_j^T||

and the general finite-sum variants reduce to the same masked structure on
the 1-column matrix with rows sqrt(w_{perm_i}).

Spectral norms use power iteration only (matrix-free); the matvec for the
prefix operator runs in O(nnz(B) + m d) per step via two cumulative passes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
import scipy.sparse as sp

from . import prng
from .data import SparseDataset, row_sq_norms
from .losses import LossModel, RegularityDiag, conjugate_pair, full_gradient, objective
from .shuffle import random_permutation

SCHEMA_VERSION = 1


class StationarityError(ValueError):
    """Supplied point failed the gradient-norm check for a minimizer."""

    def __init__(self, grad_norm, tol):
        self.grad_norm = grad_norm
        super().__init__(
            f"point is not stationary: ||grad f|| = {grad_norm:.3e} > tol = {tol:.3e}"
        )


def _check_batch(n: int, b: int) -> int:
    if b < 1 or n % b != 0:
        divisors = [k for k in range(1, n + 1) if n % k == 0]
        raise ValueError(f"batch size {b} must divide n = {n}; valid: {divisors}")
    return n // b


def _weighted_csr(ds: SparseDataset, weights, perm=None) -> sp.csr_matrix:
    """CSR matrix with rows sqrt(w_{perm_i}) * a_{perm_i}."""
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (ds.n,):
        raise ValueError("weights must have one entry per row")
    A = ds.to_csr()
    if perm is not None:
        perm = np.asarray(perm, dtype=np.int64)
        A = A[perm]
        w = w[perm]
    return sp.diags(np.sqrt(w)).dot(A).tocsr()


class MaskedGramOperator:
    """Matrix-free n x n operator for the prefix / blockdiag masked Gram sums."""

    def __init__(self, B: sp.csr_matrix, batch: int, mode: str):
        if mode not in ("prefix", "blockdiag"):
            raise ValueError("mode must be 'prefix' or 'blockdiag'")
        n, d = B.shape
        self.m = _check_batch(n, batch)
        self.B = B.tocsr()
        self.batch = batch
        self.mode = mode
        self.n, self.d = n, d
        counts = np.diff(self.B.indptr)
        rows_nz = np.repeat(np.arange(n), counts)
        self._blk_nz = rows_nz // batch
        self._rows_nz = rows_nz
        self._flat_nz = self._blk_nz * d + self.B.indices

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.n,):
            raise ValueError(f"expected vector of length {self.n}")
        B = self.B
        # per-block contributions t[j] = B_j^T v_j, shape (m, d)
        weights = B.data * v[self._rows_nz]
        t = np.bincount(self._flat_nz, weights=weights, minlength=self.m * self.d)
        t = t.reshape(self.m, self.d)
        if self.mode == "prefix":
            # suffix sums S[j] = sum_{q >= j} t[q], then W[p] = sum_{j <= p} S[j]
            s = np.cumsum(t[::-1], axis=0)[::-1]
            w = np.cumsum(s, axis=0)
        else:
            w = t
        contrib = B.data * w[self._blk_nz, B.indices]
        csum = np.concatenate([[0.0], np.cumsum(contrib)])
        return csum[B.indptr[1:]] - csum[B.indptr[:-1]]

    @classmethod
    def from_dataset(cls, ds, weights, perm, batch, mode="prefix"):
        return cls(_weighted_csr(ds, weights, perm), batch, mode)


def masked_gram_matvec(op: MaskedGramOperator, v: np.ndarray) -> np.ndarray:
    return op.matvec(v)


class OperatorNormResult(NamedTuple):
    value: float
    converged: bool
    iterations: int


def operator_norm(
    matvec: Callable[[np.ndarray], np.ndarray],
    dim: int,
    tol: float = 1e-6,
    max_iter: int = 10_000,
    seed: int = 0,
) -> OperatorNormResult:
    """Largest eigenvalue of a symmetric PSD operator by power iteration.

    Starts from a seeded random unit vector and stops once successive
    Rayleigh quotients satisfy |lam_{t+1} - lam_t| <= tol * lam_{t+1}.
    The returned value never exceeds the true norm (Rayleigh quotient of a
    PSD operator), so chain-inequality checks cannot fail spuriously.
    """
    rng = prng.generator(prng.substream(seed, prng.DOMAIN_POWER))
    v = prng.random_unit_vector(rng, dim)
    lam_prev = None
    lam = 0.0
    for it in range(1, max_iter + 1):
        w = matvec(v)
        nrm = float(np.linalg.norm(w))
        if nrm == 0.0:
            # v lies in the kernel; for a PSD operator met from a random
            # start this means the operator is (numerically) zero.
            return OperatorNormResult(0.0, True, it)
        lam = float(v @ w)
        v = w / nrm
        if lam_prev is not None and abs(lam - lam_prev) <= tol * max(abs(lam), 1e-300):
            return OperatorNormResult(max(lam, 0.0), True, it)
        lam_prev = lam
    return OperatorNormResult(max(lam, 0.0), False, max_iter)


def classical_constant(ds: SparseDataset, reg: RegularityDiag) -> float:
    """max_i w_i ||a_i||^2 (the worst-row constant; permutation invariant)."""
    return float(np.max(reg.values * row_sq_norms(ds)))


def classical_L(ds: SparseDataset, reg: RegularityDiag) -> float:
    return classical_constant(ds, reg)


def full_gradient_L(
    ds: SparseDataset, reg: RegularityDiag, tol: float = 1e-6, max_iter: int = 10_000
) -> float:
    """(1/n) || B B^T || for the weighted matrix B (permutation invariant)."""
    B = _weighted_csr(ds, reg.values)
    Bt = B.T.tocsr()

    def mv(v):
        return B @ (Bt @ v)

    res = operator_norm(mv, ds.n, tol=tol, max_iter=max_iter)
    return res.value / ds.n


def hat_constant(
    ds: SparseDataset,
    reg: RegularityDiag,
    perm,
    b: int,
    tol: float = 1e-6,
    max_iter: int = 10_000,
) -> float:
    """(1/(m n)) || prefix-masked Gram sum || for one permutation."""
    m = _check_batch(ds.n, b)
    op = MaskedGramOperator.from_dataset(ds, reg.values, perm, b, "prefix")
    res = operator_norm(op.matvec, ds.n, tol=tol, max_iter=max_iter)
    return res.value / (m * ds.n)


def tilde_constant(
    ds: SparseDataset,
    reg: RegularityDiag,
    perm,
    b: int,
    tol: float = 1e-6,
    max_iter: int = 10_000,
) -> float:
    """(1/b) max over blocks of the block Gram spectral norm.

    At b = 1 each block Gram is the scalar w_i ||a_i||^2, so the value is
    exactly the classical constant."""
    m = _check_batch(ds.n, b)
    if b == 1:
        p = np.asarray(perm, dtype=np.int64)
        return float(np.max((reg.values * row_sq_norms(ds))[p]))
    B = _weighted_csr(ds, reg.values, perm)
    best = 0.0
    for j in range(m):
        Bj = B[j * b : (j + 1) * b]
        G = (Bj @ Bj.T).toarray()
        res = operator_norm(lambda v, G=G: G @ v, b, tol=tol, max_iter=max_iter)
        best = max(best, res.value)
    return best / b


def general_hat_L(
    L_values, perm, b: int, tol: float = 1e-6, max_iter: int = 10_000
) -> float:
    """Finite-sum analogue of hat_constant: the weighted data matrix collapses
    to the single column sqrt(L_{perm_i}) (the Kronecker identity factor
    contributes eigenvalue 1)."""
    L = np.asarray(L_values, dtype=np.float64)
    n = len(L)
    m = _check_batch(n, b)
    ds = SparseDataset.from_dense(np.ones((n, 1)))
    op = MaskedGramOperator.from_dataset(ds, L, perm, b, "prefix")
    res = operator_norm(op.matvec, n, tol=tol, max_iter=max_iter)
    return res.value / (m * n)


def general_tilde_L(L_values, perm, b: int) -> float:
    """Exact closed form: max over blocks of the mean of L along the permutation."""
    L = np.asarray(L_values, dtype=np.float64)
    n = len(L)
    m = _check_batch(n, b)
    Lp = L[np.asarray(perm, dtype=np.int64)]
    return float(np.max(Lp.reshape(m, b).mean(axis=1)))


def _summary(values: np.ndarray) -> dict:
    qs = np.quantile(values, np.linspace(0.0, 1.0, 11))
    return {
        "mean": float(np.mean(values)),
        "std": float(np.std(values)),
        "min": float(np.min(values)),
        "max": float(np.max(values)),
        "deciles": [float(q) for q in qs],
    }


@dataclass
class ConstantsReport:
    L: float
    L_full: float
    b: int
    num_perms: int
    seed: int
    tolerance: float
    perm_seeds: list
    hatL: dict
    hatL_values: np.ndarray
    ratios: np.ndarray
    ratio_summary: dict
    tildeL: dict | None = None
    tildeL_values: np.ndarray | None = None
    sigma_star: float | None = None
    ystar_norm: float | None = None
    schema_version: int = SCHEMA_VERSION
    trace_bound: float = field(default=float("nan"))

    def __post_init__(self):
        # Relaxation chain: every sampled hat value sits below the trace
        # bound (1/n) sum w_i ||a_i||^2, which sits below the classical L.
        slack = 1e-9 * max(self.L, 1.0)
        if np.any(self.hatL_values > self.trace_bound + slack):
            raise AssertionError("hat constant exceeded its trace bound")
        if self.tildeL_values is not None and np.any(self.tildeL_values > self.L + slack):
            raise AssertionError("tilde constant exceeded the classical constant")

    def to_json_dict(self) -> dict:
        out = {
            "schema_version": self.schema_version,
            "L": self.L,
            "L_full": self.L_full,
            "b": self.b,
            "num_perms": self.num_perms,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "hatL": self.hatL,
            "hatL_values": [float(v) for v in self.hatL_values],
            "ratios_L_over_hatL": self.ratio_summary,
            "ratios": [float(v) for v in self.ratios],
            "trace_bound": self.trace_bound,
        }
        if self.tildeL is not None:
            out["tildeL"] = self.tildeL
            out["tildeL_values"] = [float(v) for v in self.tildeL_values]
        if self.sigma_star is not None:
            out["sigma_star"] = self.sigma_star
        if self.ystar_norm is not None:
            out["ystar_norm"] = self.ystar_norm
        return out

    def to_csv_rows(self) -> list:
        rows = [("perm_seed", "hatL", "tildeL", "ratio")]
        for i in range(self.num_perms):
            tl = "" if self.tildeL_values is None else repr(float(self.tildeL_values[i]))
            rows.append(
                (
                    str(self.perm_seeds[i]),
                    repr(float(self.hatL_values[i])),
                    tl,
                    repr(float(self.ratios[i])),
                )
            )
        return rows


def ratio_stats(
    ds: SparseDataset,
    reg: RegularityDiag,
    b: int,
    num_perms: int,
    seed: int = 0,
    tol: float = 1e-6,
    max_iter: int = 10_000,
    compute_tilde: bool = True,
    max_workers: int | None = None,
) -> ConstantsReport:
    """Sample uniform permutations and aggregate hat/tilde constants.

    Permutation j comes from the stream keyed by (seed, j), so results do
    not depend on worker scheduling. Ratios are L / hat_pi per permutation
    (mean of ratios, not ratio of means).
    """
    if num_perms < 1:
        raise ValueError("num_perms must be >= 1")
    _check_batch(ds.n, b)
    L = classical_constant(ds, reg)
    L_full = full_gradient_L(ds, reg, tol=tol, max_iter=max_iter)
    trace_bound = float(np.sum(reg.values * row_sq_norms(ds)) / ds.n)

    def one(j):
        perm = random_permutation(ds.n, seed, j)
        hat = hat_constant(ds, reg, perm, b, tol=tol, max_iter=max_iter)
        til = tilde_constant(ds, reg, perm, b, tol=tol, max_iter=max_iter) if compute_tilde else None
        return hat, til

    if max_workers is not None and max_workers > 1 and num_perms > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(one, range(num_perms)))
    else:
        results = [one(j) for j in range(num_perms)]

    hat_vals = np.array([r[0] for r in results])
    tilde_vals = np.array([r[1] for r in results]) if compute_tilde else None
    ratios = L / hat_vals
    return ConstantsReport(
        L=L,
        L_full=L_full,
        b=b,
        num_perms=num_perms,
        seed=seed,
        tolerance=tol,
        perm_seeds=[prng.substream(seed, prng.DOMAIN_TRIAL, j) for j in range(num_perms)],
        hatL=_summary(hat_vals),
        hatL_values=hat_vals,
        ratios=ratios,
        ratio_summary=_summary(ratios),
        tildeL=_summary(tilde_vals) if compute_tilde else None,
        tildeL_values=tilde_vals,
        trace_bound=trace_bound,
    )


def gbar_estimate(
    ds: SparseDataset,
    reg: RegularityDiag,
    b: int,
    num_perms: int,
    seed: int = 0,
    tol: float = 1e-6,
    max_iter: int = 10_000,
) -> float:
    """Sample mean of sqrt(hat_pi * tilde_pi) over uniform permutations
    (the permutation expectation entering the nonsmooth guarantee)."""
    vals = []
    for j in range(num_perms):
        perm = random_permutation(ds.n, seed, j)
        hat = hat_constant(ds, reg, perm, b, tol=tol, max_iter=max_iter)
        til = tilde_constant(ds, reg, perm, b, tol=tol, max_iter=max_iter)
        vals.append(math.sqrt(hat * til))
    return float(np.mean(vals))


def sigma_star(
    ds: SparseDataset, m: LossModel, x_star: np.ndarray, grad_tol: float = 1e-8
) -> float:
    """Root-mean-square component gradient norm at the minimizer:
    sqrt((1/n) sum_i (l_i'(a_i^T x*))^2 ||a_i||^2). Verifies stationarity."""
    g = full_gradient(m, ds, x_star)
    gn = float(np.linalg.norm(g))
    if gn > grad_tol:
        raise StationarityError(gn, grad_tol)
    y = conjugate_pair(m, ds, x_star)
    return float(np.sqrt(np.mean(y * y * row_sq_norms(ds))))


def ystar_weighted_norm(ds: SparseDataset, m: LossModel, x_star: np.ndarray,
                        grad_tol: float = 1e-8) -> float:
    """Inverse-smoothness weighted norm of the optimal dual vector:
    sqrt(sum_i y*_i^2 / L_i)."""
    if not m.smooth:
        raise ValueError("weighted dual norm requires a smooth loss family")
    g = full_gradient(m, ds, x_star)
    gn = float(np.linalg.norm(g))
    if gn > grad_tol:
        raise StationarityError(gn, grad_tol)
    from .losses import regularity

    y = conjugate_pair(m, ds, x_star)
    L = regularity(m).values
    return float(np.sqrt(np.sum(y * y / L)))


class MinimizerResult(NamedTuple):
    x: np.ndarray
    grad_norm: float
    iterations: int
    converged: bool


def reference_minimizer(
    ds: SparseDataset,
    m: LossModel,
    tol: float = 1e-10,
    max_iter: int = 200_000,
    x0: np.ndarray | None = None,
) -> MinimizerResult:
    """Full gradient descent with step 1/L_full and Armijo halving, run until
    ||grad f|| <= tol. Supplies the optimum for variance/dual-norm constants."""
    if not m.smooth:
        raise ValueError("reference minimizer requires a smooth loss family")
    from .losses import regularity

    reg = regularity(m)
    Lf = full_gradient_L(ds, reg, tol=1e-10, max_iter=50_000)
    x = np.zeros(ds.d) if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    if Lf == 0.0:
        g = full_gradient(m, ds, x)
        return MinimizerResult(x, float(np.linalg.norm(g)), 0, True)
    base_step = 1.0 / Lf
    fx = objective(m, ds, x)
    it = 0
    for it in range(1, max_iter + 1):
        g = full_gradient(m, ds, x)
        gn = float(np.linalg.norm(g))
        if gn <= tol:
            return MinimizerResult(x, gn, it - 1, True)
        eta = base_step
        gsq = gn * gn
        for _ in range(60):
            x_new = x - eta * g
            f_new = objective(m, ds, x_new)
            # Armijo sufficient decrease with roundoff slack: near the float
            # resolution of f the decrease is unmeasurable, but the constant
            # 1/L step still contracts the iterate, so accept non-increase.
            slack = 8.0 * np.finfo(float).eps * max(abs(fx), abs(f_new))
            if f_new <= fx - 1e-4 * eta * gsq + slack:
                break
            eta *= 0.5
        x, fx = x_new, f_new
    g = full_gradient(m, ds, x)
    gn = float(np.linalg.norm(g))
    return MinimizerResult(x, gn, it, gn <= tol)
