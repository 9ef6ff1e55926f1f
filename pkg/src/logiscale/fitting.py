"""Robust estimation of law constants from observed runs.

The objective is a Huber loss on log-space residuals
``log L_pred - log L_obs``. Positivity is built into the search
coordinates: the floor ``E`` and the exponents go through a softplus, the
coefficients through ``exp``. A coarse grid over the natural parameters is
scored in one vectorised pass, the best grid points seed simplex
refinements, and the refinement results are reduced in grid order.

During refinement the log inputs are centred on their mean, so that the
amplitude and exponent coordinates are close to uncorrelated. The grid
and the reported parameters use the uncentred form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._simplex import polish
from .errors import ConditioningError, InputError
from .lawcore import ComputeLawParams, RunRecord, SeparableLawParams

__all__ = [
    "GridSpec",
    "FitConfig",
    "FitResult",
    "huber",
    "separable_objective",
    "compute_law_objective",
    "fit_separable",
    "fit_compute_law",
]

# restarts whose objectives differ by less than this count as tied
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Initialisation grid.

    Exponents are spaced geometrically over ``exponent_range``; natural-log
    coefficients linearly over ``log_coef_range``. The floor ``E`` is
    seeded at ``floor_fractions`` of the smallest observed loss.
    """

    exponent_range: tuple[float, float] = (0.05, 1.5)
    exponent_count: int = 6
    log_coef_range: tuple[float, float] = (-5.0, 25.0)
    log_coef_count: int = 7
    floor_fractions: tuple[float, ...] = (0.0, 0.3, 0.6, 0.9)

    def __post_init__(self):
        lo, hi = self.exponent_range
        if not (0.0 < lo <= 0.05 and hi >= 1.5):
            raise InputError(f"exponent grid must cover [0.05, 1.5], got {self.exponent_range}")
        lo, hi = self.log_coef_range
        if not (lo <= -5.0 and hi >= 25.0):
            raise InputError(f"log-coefficient grid must cover [-5, 25], got {self.log_coef_range}")
        if self.exponent_count < 2 or self.log_coef_count < 2:
            raise InputError("grid counts must be at least 2")
        if not self.floor_fractions or any(not 0.0 <= f < 1.0 for f in self.floor_fractions):
            raise InputError("floor_fractions must be non-empty and lie in [0, 1)")

    def exponents(self) -> np.ndarray:
        lo, hi = self.exponent_range
        return np.geomspace(lo, hi, self.exponent_count)

    def log_coefs(self) -> np.ndarray:
        lo, hi = self.log_coef_range
        return np.linspace(lo, hi, self.log_coef_count)


@dataclass(frozen=True)
class FitConfig:
    """Fitting options.

    ``n_refine`` grid points with the lowest objective are refined.
    ``fixed_E`` pins the floor instead of fitting it. ``seed`` is carried
    into results for provenance; the procedure itself draws no random
    numbers.
    """

    huber_delta: float = 1e-3
    grid_spec: GridSpec = field(default_factory=GridSpec)
    max_refine_iters: int = 500
    seed: int = 0
    n_refine: int = 6
    fixed_E: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.huber_delta) and self.huber_delta > 0):
            raise InputError(f"huber_delta must be > 0, got {self.huber_delta!r}")
        if int(self.max_refine_iters) < 1:
            raise InputError("max_refine_iters must be a positive integer")
        if int(self.n_refine) < 1:
            raise InputError("n_refine must be a positive integer")
        if self.fixed_E is not None and not (math.isfinite(self.fixed_E) and self.fixed_E >= 0):
            raise InputError(f"fixed_E must be finite and >= 0, got {self.fixed_E!r}")


@dataclass(frozen=True)
class FitResult:
    params: SeparableLawParams | ComputeLawParams
    objective: float
    residuals: tuple[float, ...]
    converged: bool
    n_restarts_used: int


def huber(residuals: np.ndarray, delta: float) -> np.ndarray:
    """Elementwise Huber loss: quadratic inside ``delta``, linear outside."""
    abs_r = np.abs(residuals)
    m = np.minimum(abs_r, delta)
    return m * (abs_r - 0.5 * m)


def _softplus(x):
    return np.logaddexp(0.0, x)


def _softplus_inv(y: float) -> float:
    # log(expm1(y)) without overflow for large y; zero maps to a tiny floor
    y = max(float(y), 1e-9)
    return y + math.log(-math.expm1(-y))


# -- separable law ---------------------------------------------------------


def _separable_log_pred(E, log_a, alpha, log_b, beta, log_n, log_d):
    return np.log(E + np.exp(log_a - alpha * log_n) + np.exp(log_b - beta * log_d))


def _separable_arrays(runs: Sequence[RunRecord]):
    log_n = np.log(np.array([r.n_params for r in runs], dtype=float))
    log_d = np.log(np.array([r.d_tokens for r in runs], dtype=float))
    log_l = np.log(np.array([r.loss for r in runs], dtype=float))
    return log_n, log_d, log_l


def separable_residuals(params: SeparableLawParams, runs: Sequence[RunRecord]) -> np.ndarray:
    log_n, log_d, log_l = _separable_arrays(runs)
    pred = _separable_log_pred(
        params.E, math.log(params.A), params.alpha, math.log(params.B), params.beta_data,
        log_n, log_d,
    )
    return pred - log_l


def separable_objective(params: SeparableLawParams, runs: Sequence[RunRecord], delta: float) -> float:
    """Robust objective of ``params`` against ``runs``."""
    return float(np.sum(huber(separable_residuals(params, runs), delta)))


def _check_separable_design(runs: Sequence[RunRecord]) -> None:
    if len(runs) < 6:
        raise InputError(f"fit_separable needs at least 6 records, got {len(runs)}")
    log_n, log_d, log_l = _separable_arrays(runs)
    if np.ptp(log_l) == 0.0:
        raise ConditioningError(
            "loss is identical on every record; only the floor E is identifiable", axis="loss"
        )
    if np.ptp(log_n) == 0.0:
        raise ConditioningError("all records share the same n_params", axis="n_params")
    if np.ptp(log_d) == 0.0:
        raise ConditioningError("all records share the same d_tokens", axis="d_tokens")
    design = np.column_stack([np.ones_like(log_n), log_n - log_n.mean(), log_d - log_d.mean()])
    sv = np.linalg.svd(design, compute_uv=False)
    if sv[-1] <= 1e-9 * sv[0]:
        raise ConditioningError(
            "log n_params and log d_tokens are collinear across records; "
            "the two power terms cannot be separated",
            axis="n_params/d_tokens",
        )


def fit_separable(runs: Sequence[RunRecord], config: FitConfig = FitConfig()) -> FitResult:
    """Fit ``E, A, alpha, B, beta_data`` to observed runs.

    Raises:
        InputError: fewer than 6 records.
        ConditioningError: constant loss, or a design that cannot separate
            the two terms (``axis`` names the degenerate input).
    """
    runs = list(runs)
    _check_separable_design(runs)
    log_n, log_d, log_l = _separable_arrays(runs)
    delta = config.huber_delta
    grid = config.grid_spec
    fixed_e = config.fixed_E
    mu_n, mu_d = float(log_n.mean()), float(log_d.mean())
    cn, cd = log_n - mu_n, log_d - mu_d

    if fixed_e is None:
        floors = float(np.min(np.exp(log_l))) * np.asarray(grid.floor_fractions)
    else:
        floors = np.array([fixed_e])
    exps, coefs = grid.exponents(), grid.log_coefs()
    cand = np.array(list(itertools.product(floors, coefs, exps, coefs, exps)))
    pred = _separable_log_pred(
        cand[:, :1], cand[:, 1:2], cand[:, 2:3], cand[:, 3:4], cand[:, 4:5], log_n, log_d
    )
    scores = np.sum(huber(pred - log_l, delta), axis=1)
    scores = np.where(np.isfinite(scores), scores, np.inf)
    seeds = np.argsort(scores, kind="stable")[: config.n_refine]

    def unpack(z):
        # search coordinates -> (E, centred log A, alpha, centred log B, beta)
        if fixed_e is None:
            e, z = float(_softplus(z[0])), z[1:]
        else:
            e = fixed_e
        return e, z[0], float(_softplus(z[1])), z[2], float(_softplus(z[3]))

    def objective(z):
        e, a_c, alpha, b_c, beta = unpack(z)
        val = float(np.sum(huber(_separable_log_pred(e, a_c, alpha, b_c, beta, cn, cd) - log_l, delta)))
        return val if math.isfinite(val) else math.inf

    candidates = []
    for idx in sorted(int(i) for i in seeds):
        e, log_a, alpha, log_b, beta = cand[idx]
        z0 = [log_a - alpha * mu_n, _softplus_inv(alpha), log_b - beta * mu_d, _softplus_inv(beta)]
        if fixed_e is None:
            z0.insert(0, _softplus_inv(e))
        res = polish(objective, np.array(z0), max_iter=int(config.max_refine_iters))
        e, a_c, alpha, b_c, beta = unpack(res.x)
        try:
            params = SeparableLawParams(
                E=e,
                A=math.exp(a_c + alpha * mu_n),
                alpha=alpha,
                B=math.exp(b_c + beta * mu_d),
                beta_data=beta,
            )
        except (InputError, OverflowError):
            continue
        candidates.append((separable_objective(params, runs, delta), params, res.converged))
    return _reduce(candidates, len(seeds), lambda p: separable_residuals(p, runs))


# -- compute-only law ------------------------------------------------------


def _compute_log_pred(E, log_k, kappa, log_c):
    return np.log(E + np.exp(log_k - kappa * log_c))


def _compute_arrays(runs: Sequence[RunRecord]):
    missing = [i for i, r in enumerate(runs) if r.c_logical is None]
    if missing:
        raise InputError(
            f"record {missing[0]} has no c_logical; fit_compute_law needs it on every record"
        )
    log_c = np.log(np.array([r.c_logical for r in runs], dtype=float))
    log_l = np.log(np.array([r.loss for r in runs], dtype=float))
    return log_c, log_l


def compute_law_residuals(params: ComputeLawParams, runs: Sequence[RunRecord]) -> np.ndarray:
    log_c, log_l = _compute_arrays(runs)
    return _compute_log_pred(params.E, math.log(params.K), params.kappa, log_c) - log_l


def compute_law_objective(params: ComputeLawParams, runs: Sequence[RunRecord], delta: float) -> float:
    return float(np.sum(huber(compute_law_residuals(params, runs), delta)))


def fit_compute_law(runs: Sequence[RunRecord], config: FitConfig = FitConfig()) -> FitResult:
    """Fit ``E, K, kappa`` of the compute-only law to runs carrying ``c_logical``.

    Needs at least 4 records, at least 3 distinct compute values, and a
    compute span of at least two decades.

    Raises:
        InputError: too few records, a record without ``c_logical`` (the
            message names its index), or insufficient compute span.
    """
    runs = list(runs)
    if len(runs) < 4:
        raise InputError(f"fit_compute_law needs at least 4 records, got {len(runs)}")
    log_c, log_l = _compute_arrays(runs)
    if np.ptp(log_l) == 0.0:
        raise ConditioningError(
            "loss is identical on every record; only the floor E is identifiable", axis="loss"
        )
    if np.unique(log_c).size < 3:
        raise InputError("span rule: need at least 3 distinct c_logical values")
    span = float(np.ptp(log_c)) / math.log(10.0)
    if span < 2.0:
        raise InputError(f"span rule: c_logical must span >= 2 decades, got {span:.3g}")

    delta = config.huber_delta
    grid = config.grid_spec
    fixed_e = config.fixed_E
    mu = float(log_c.mean())
    cc = log_c - mu

    if fixed_e is None:
        floors = float(np.min(np.exp(log_l))) * np.asarray(grid.floor_fractions)
    else:
        floors = np.array([fixed_e])
    cand = np.array(list(itertools.product(floors, grid.log_coefs(), grid.exponents())))
    pred = _compute_log_pred(cand[:, :1], cand[:, 1:2], cand[:, 2:3], log_c)
    scores = np.sum(huber(pred - log_l, delta), axis=1)
    scores = np.where(np.isfinite(scores), scores, np.inf)
    seeds = np.argsort(scores, kind="stable")[: config.n_refine]

    def unpack(z):
        if fixed_e is None:
            e, z = float(_softplus(z[0])), z[1:]
        else:
            e = fixed_e
        return e, z[0], float(_softplus(z[1]))

    def objective(z):
        e, k_c, kappa = unpack(z)
        val = float(np.sum(huber(_compute_log_pred(e, k_c, kappa, cc) - log_l, delta)))
        return val if math.isfinite(val) else math.inf

    candidates = []
    for idx in sorted(int(i) for i in seeds):
        e, log_k, kappa = cand[idx]
        z0 = [log_k - kappa * mu, _softplus_inv(kappa)]
        if fixed_e is None:
            z0.insert(0, _softplus_inv(e))
        res = polish(objective, np.array(z0), max_iter=int(config.max_refine_iters))
        e, k_c, kappa = unpack(res.x)
        try:
            params = ComputeLawParams(E=e, K=math.exp(k_c + kappa * mu), kappa=kappa)
        except (InputError, OverflowError):
            continue
        candidates.append((compute_law_objective(params, runs, delta), params, res.converged))
    return _reduce(candidates, len(seeds), lambda p: compute_law_residuals(p, runs))


def _reduce(candidates, n_seeds, residual_fn) -> FitResult:
    """Pick the lowest objective; near-ties go to the smallest parameter tuple."""
    candidates = [c for c in candidates if math.isfinite(c[0])]
    if not candidates:
        raise ConditioningError("no refinement produced a finite objective")
    best = min(c[0] for c in candidates)
    tied = [c for c in candidates if c[0] - best <= _TIE_TOL]
    objective, params, converged = min(tied, key=lambda c: tuple(vars(c[1]).values()))
    return FitResult(
        params=params,
        objective=objective,
        residuals=tuple(float(r) for r in residual_fn(params)),
        converged=converged,
        n_restarts_used=n_seeds,
    )
