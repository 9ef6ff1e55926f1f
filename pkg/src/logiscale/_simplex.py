"""Deterministic Nelder-Mead simplex descent."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

# standard reflection / expansion / contraction / shrink coefficients
_RHO, _CHI, _PSI, _SIGMA = 1.0, 2.0, 0.5, 0.5


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    n_iter: int
    n_eval: int
    converged: bool
    # best objective after every iteration; non-increasing by construction
    trace: list[float] = field(default_factory=list)


def _initial_simplex(x0: np.ndarray, step: float) -> np.ndarray:
    dim = x0.size
    sim = np.empty((dim + 1, dim))
    sim[0] = x0
    for k in range(dim):
        y = x0.copy()
        y[k] = y[k] + step * abs(y[k]) if y[k] != 0 else step * 0.005
        sim[k + 1] = y
    return sim


def nelder_mead(
    func: Callable[[np.ndarray], float],
    x0,
    *,
    max_iter: int = 500,
    xatol: float = 1e-10,
    fatol: float = 1e-18,
    step: float = 0.05,
) -> SimplexResult:
    """Minimise ``func`` from ``x0``.

    Stops when every vertex lies within ``xatol`` of the best vertex in each
    coordinate and their objectives within ``fatol``, or after ``max_iter``
    iterations. Vertex order is resolved with a stable sort so that runs
    are reproducible bit for bit.
    """
    x0 = np.asarray(x0, dtype=float).ravel()
    sim = _initial_simplex(x0, step)
    fvals = [float(func(v)) for v in sim]
    n_eval = len(fvals)
    order = sorted(range(len(fvals)), key=fvals.__getitem__)
    sim = sim[order]
    fsim = [fvals[i] for i in order]
    npts = len(fsim)
    trace = [fsim[0]]
    converged = False
    it = 0
    # running sum of all vertices; centroid excludes the worst
    total = sim.sum(axis=0)
    while it < max_iter:
        if fsim[-1] - fsim[0] <= fatol and np.max(np.abs(sim[1:] - sim[0])) <= xatol:
            converged = True
            break
        it += 1
        worst = sim[-1]
        centroid = (total - worst) / (npts - 1)
        xr = centroid + _RHO * (centroid - worst)
        fr = func(xr)
        n_eval += 1
        new_x = new_f = None
        if fr < fsim[0]:
            xe = centroid + _CHI * (xr - centroid)
            fe = func(xe)
            n_eval += 1
            new_x, new_f = (xe, fe) if fe < fr else (xr, fr)
        elif fr < fsim[-2]:
            new_x, new_f = xr, fr
        elif fr < fsim[-1]:
            xc = centroid + _PSI * (xr - centroid)
            fc = func(xc)
            n_eval += 1
            if fc <= fr:
                new_x, new_f = xc, fc
        else:
            xcc = centroid - _PSI * (centroid - worst)
            fcc = func(xcc)
            n_eval += 1
            if fcc < fsim[-1]:
                new_x, new_f = xcc, fcc
        if new_x is None:
            # shrink towards the best vertex
            sim[1:] = sim[0] + _SIGMA * (sim[1:] - sim[0])
            fvals = [fsim[0]] + [float(func(v)) for v in sim[1:]]
            n_eval += npts - 1
            order = sorted(range(npts), key=fvals.__getitem__)
            sim = sim[order]
            fsim = [fvals[i] for i in order]
            total = sim.sum(axis=0)
        else:
            new_f = float(new_f)
            # insert after any vertex with an equal value (stable)
            pos = bisect.bisect_right(fsim, new_f, 0, npts - 1)
            total = total - worst + new_x
            sim[pos + 1:] = sim[pos:-1].copy()
            sim[pos] = new_x
            fsim.pop()
            fsim.insert(pos, new_f)
        trace.append(fsim[0])
    return SimplexResult(
        x=sim[0].copy(),
        fun=fsim[0],
        n_iter=it,
        n_eval=n_eval,
        converged=converged,
        trace=trace,
    )


def polish(
    func: Callable[[np.ndarray], float],
    x0,
    *,
    max_iter: int = 500,
    max_rounds: int = 12,
    xatol: float = 1e-10,
    fatol: float = 1e-18,
    rtol: float = 1e-10,
) -> SimplexResult:
    """Repeated Nelder-Mead, each round restarted from the previous best.

    A fresh simplex escapes the collapsed shapes plain Nelder-Mead can
    stall in. Stops, and reports convergence, once a round improves the
    best value by no more than ``rtol`` relative; the returned trace
    concatenates all rounds.
    """
    res = nelder_mead(func, x0, max_iter=max_iter, xatol=xatol, fatol=fatol)
    trace = list(res.trace)
    n_iter, n_eval = res.n_iter, res.n_eval
    converged = False
    for _ in range(max_rounds - 1):
        nxt = nelder_mead(func, res.x, max_iter=max_iter, xatol=xatol, fatol=fatol)
        trace.extend(nxt.trace)
        n_iter += nxt.n_iter
        n_eval += nxt.n_eval
        stalled = nxt.fun >= res.fun - rtol * abs(res.fun)
        if nxt.fun < res.fun:
            res = nxt
        if stalled:
            converged = True
            break
    return SimplexResult(res.x.copy(), res.fun, n_iter, n_eval, converged, trace)
