"""Scalar root location and small-dimensional derivative-free minimization."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .orthopoly import bracketed_root

__all__ = ["largest_root_of", "increasing_root", "box_minimize", "SearchResult", "sorted_grid"]


def largest_root_of(func: Callable[[float], float], lo: float, hi: float = 1.0,
                    cells: int = 2_000, xtol: float = 1e-12) -> float | None:
    """Largest sign-change root of ``func`` in (lo, hi], or None.

    Scans cells from ``hi`` downward and bisects the first sign change found.
    Tangential (even-multiplicity) roots are not detected.
    """
    grid = np.linspace(lo, hi, cells + 1)
    vals = np.array([func(x) for x in grid])
    if vals[-1] == 0.0:
        return float(hi)
    for i in range(cells - 1, -1, -1):
        if vals[i] == 0.0:
            if i == 0:
                return None
            return float(grid[i])
        if np.sign(vals[i]) != np.sign(vals[i + 1]):
            return bracketed_root(func, grid[i], grid[i + 1], xtol=xtol)
    return None


def increasing_root(func: Callable[[float], float], lo: float, hi: float,
                    xtol: float = 1e-15) -> float:
    """Root of a function known to increase through zero on [lo, hi]."""
    while func(hi) < 0:
        hi = lo + 2 * (hi - lo)
    return bracketed_root(func, lo, hi, xtol=xtol)


def sorted_grid(lo: Sequence[float], hi: Sequence[float], target: int) -> np.ndarray:
    """Nondecreasing points of the box, about ``target`` of them.

    Free zeros of a polynomial are unordered, so only sorted tuples are needed.
    """
    d = len(lo)
    if d == 0:
        return np.zeros((1, 0))
    g = 2
    while comb(g + 1 + d - 1, d) <= target:
        g += 1
    axes = [np.linspace(lo[i], hi[i], g) for i in range(d)]
    pts = [tuple(axes[i][c] for i, c in enumerate(idx))
           for idx in itertools.combinations_with_replacement(range(g), d)]
    return np.array(pts)


@dataclass
class SearchResult:
    x: np.ndarray
    fun: float
    evals: int


def box_minimize(func: Callable[[np.ndarray], float], lo: Sequence[float], hi: Sequence[float],
                 starts: Sequence[np.ndarray] = (), grid_points: int = 1_000,
                 budget: int = 10_000, tol: float = 1e-13,
                 batch: Callable[[np.ndarray], np.ndarray] | None = None,
                 use_grid: bool = True) -> SearchResult:
    """Minimize over a box: grid seed, coordinate-wise bounded Brent sweeps, simplex polish.

    ``batch`` evaluates many points at once for the seeding grid. Deterministic.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    d = len(lo)
    evals = 0

    def f(x):
        nonlocal evals
        evals += 1
        return func(np.clip(x, lo, hi))

    if d == 0:
        x = np.zeros(0)
        return SearchResult(x, f(x), evals)

    cands = [np.clip(np.asarray(s, dtype=float), lo, hi) for s in starts]
    best_x, best_f = None, np.inf
    if use_grid or not cands:
        pts = sorted_grid(lo, hi, grid_points)
        vals = batch(pts) if batch is not None else np.array([func(p) for p in pts])
        evals += len(pts)
        i = int(np.nanargmin(vals))
        best_x, best_f = pts[i].copy(), float(vals[i])
    for c in cands:
        v = f(c)
        if v < best_f:
            best_x, best_f = c, v

    x, fx = best_x.copy(), best_f
    while evals < budget:
        before = fx
        for i in range(d):
            def line(u, i=i):
                y = x.copy()
                y[i] = u
                return f(y)
            r = minimize_scalar(line, bounds=(lo[i], hi[i]), method="bounded",
                                options={"xatol": 1e-13, "maxiter": 200})
            if r.fun < fx:
                x[i], fx = r.x, float(r.fun)
        if before - fx <= tol or d == 1:
            break
    if d > 1 and evals < budget:
        r = minimize(f, x, method="Nelder-Mead",
                     options={"xatol": 1e-12, "fatol": 1e-15,
                              "maxfev": max(min(budget - evals, 200 * d), 1)})
        if r.fun < fx:
            x, fx = np.clip(r.x, lo, hi), float(r.fun)
    return SearchResult(x, fx, evals)
