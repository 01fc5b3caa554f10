"""Explicit spherical designs and direct measurement of their covering radius.

Used as independent ground truth: strength is checked by brute-force averaging
and rho(C) = min_y max_x <x, y> by enumerating facet circumcentres, backed up by
a seeded random-restart descent.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .orthopoly import measure_moment

__all__ = [
    "PointSet",
    "StrengthVerdict",
    "builtin_design",
    "verify_strength",
    "deep_hole",
    "measure_covering",
    "attaining_points",
    "load_pointset",
    "save_pointset",
]


@dataclass(frozen=True)
class PointSet:
    dimension: int
    points: np.ndarray
    antipodal: bool = False
    name: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dimension:
            raise ValueError(f"expected an (m, {self.dimension}) array, got {pts.shape}")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError(f"points must have unit norm (worst {np.max(np.abs(norms - 1)):.3g})")
        if self.antipodal and not _is_antipodal(pts):
            raise ValueError("antipodal flag set but -x is missing for some x")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, points, name: str = "") -> "PointSet":
        pts = np.asarray(points, dtype=float)
        return cls(pts.shape[1], pts, _is_antipodal(pts), name)

    def __len__(self) -> int:
        return len(self.points)


def _is_antipodal(pts: np.ndarray) -> bool:
    d = np.linalg.norm(pts[:, None, :] + pts[None, :, :], axis=2)
    return bool(np.all(d.min(axis=1) <= 1e-12))


def _cross_polytope(n):
    eye = np.eye(n)
    return np.vstack([eye, -eye])


def _simplex(n):
    # centred standard basis of R^{n+1}, expressed in an orthonormal basis of the hyperplane
    v = np.eye(n + 1) - 1.0 / (n + 1)
    q, _ = np.linalg.qr(v[:, :n])
    pts = v @ q
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _icosahedron():
    phi = (1 + math.sqrt(5)) / 2
    pts = []
    for s1 in (1, -1):
        for s2 in (phi, -phi):
            base = (0.0, s1, s2)
            for shift in range(3):
                pts.append(base[-shift:] + base[:-shift] if shift else base)
    pts = np.array(pts)
    return pts / math.sqrt(1 + phi * phi)


def _cube(n):
    return np.array(list(itertools.product((1.0, -1.0), repeat=n))) / math.sqrt(n)


_BUILDERS = {
    "cross-polytope": _cross_polytope,
    "simplex": _simplex,
    "cube": _cube,
}


def builtin_design(name: str, n: int | None = None) -> PointSet:
    """cross-polytope(n), simplex(n), cube(n) or icosahedron.

    ``name`` may carry the dimension inline, as in ``"cube(3)"``.
    """
    m = re.fullmatch(r"\s*([a-z-]+)\s*(?:\(\s*(\d+)\s*\))?\s*", name)
    if not m:
        raise ValueError(f"unknown design {name!r}")
    key, inline = m.group(1), m.group(2)
    if inline is not None:
        n = int(inline)
    if key == "icosahedron":
        if n not in (None, 3):
            raise ValueError("the icosahedron lives in dimension 3")
        return PointSet.from_points(_icosahedron(), "icosahedron")
    if key not in _BUILDERS:
        raise ValueError(f"unknown design {name!r}")
    if n is None or n < 2:
        raise ValueError(f"{key} needs a dimension n >= 2")
    return PointSet.from_points(_BUILDERS[key](n), f"{key}({n})")


@dataclass
class StrengthVerdict:
    passed: bool
    tau: int
    worst_residual: float
    worst_degree: int


def verify_strength(ps: PointSet, tau: int, samples: int = 200, seed: int = 0,
                    tol: float = 1e-9) -> StrengthVerdict:
    """Check that the average of <x, y>^d over C equals the sphere average, d <= tau."""
    rng = np.random.default_rng(seed)
    y = rng.standard_normal((samples, ps.dimension))
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    ip = ps.points @ y.T
    worst, worst_d = 0.0, 0
    for d in range(1, tau + 1):
        res = float(np.max(np.abs(np.mean(ip ** d, axis=0) - measure_moment(ps.dimension, d))))
        if res > worst:
            worst, worst_d = res, d
    return StrengthVerdict(worst <= tol, tau, worst, worst_d)


def _facet_candidates(pts: np.ndarray, limit: int) -> np.ndarray:
    m, n = pts.shape
    if math.comb(m, n) > limit:
        return np.zeros((0, n))
    out = []
    ones = np.ones(n)
    for idx in itertools.combinations(range(m), n):
        A = pts[list(idx)]
        try:
            y = np.linalg.solve(A, ones)
        except np.linalg.LinAlgError:
            continue
        nrm = np.linalg.norm(y)
        if np.isfinite(nrm) and nrm > 0:
            out.append(y / nrm)
            out.append(-y / nrm)
    return np.array(out) if out else np.zeros((0, n))


def _polish(pts: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Snap each direction to the circumcentre of its n nearest points."""
    n = pts.shape[1]
    ip = y @ pts.T
    top = np.argsort(-ip, axis=1)[:, :n]
    out = y.copy()
    for i, idx in enumerate(top):
        A = pts[idx]
        try:
            z = np.linalg.solve(A, np.ones(n))
        except np.linalg.LinAlgError:
            continue
        z /= np.linalg.norm(z)
        if np.max(pts @ z) <= np.max(pts @ y[i]) + 1e-15:
            out[i] = z
    return out


def deep_hole(ps: PointSet, restarts: int = 5_000, seed: int = 0,
              tol: float = 1e-10, facet_limit: int = 200_000) -> tuple[float, np.ndarray]:
    """Return (rho, y) with y a direction minimizing max_x <x, y>."""
    pts = ps.points
    n = ps.dimension
    cands = [_facet_candidates(pts, facet_limit)]

    rng = np.random.default_rng(seed)
    y = rng.standard_normal((restarts, n))
    y /= np.linalg.norm(y, axis=1, keepdims=True)
    # descent on a softmax smoothing of max_x <x, y>, sharpened as it goes
    step = 0.1
    prev = np.inf
    for beta in (10.0, 30.0, 100.0, 300.0, 1000.0, 3000.0):
        for _ in range(60):
            ip = y @ pts.T
            w = np.exp(beta * (ip - ip.max(axis=1, keepdims=True)))
            w /= w.sum(axis=1, keepdims=True)
            grad = w @ pts
            grad -= np.sum(grad * y, axis=1, keepdims=True) * y
            y = y - step * grad
            y /= np.linalg.norm(y, axis=1, keepdims=True)
        step *= 0.5
        cur = float(np.min(np.max(y @ pts.T, axis=1)))
        if abs(prev - cur) < tol:
            break
        prev = cur
    cands.append(_polish(pts, y))
    allc = np.vstack(cands)
    vals = np.max(allc @ pts.T, axis=1)
    i = int(np.argmin(vals))
    return float(vals[i]), allc[i]


def measure_covering(ps: PointSet, restarts: int = 5_000, seed: int = 0) -> float:
    """rho(C) = min over unit y of max over x in C of <x, y> (an upper estimate)."""
    return deep_hole(ps, restarts=restarts, seed=seed)[0]


def attaining_points(ps: PointSet, y: np.ndarray, tol: float = 1e-6) -> int:
    """Number of points of C whose inner product with y is within tol of the maximum."""
    ip = ps.points @ y
    return int(np.sum(ip >= ip.max() - tol))


def load_pointset(path: str | Path) -> PointSet:
    """Read the text format: a header line "n m" followed by m lines of n coordinates."""
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise ValueError("first line must be 'n m'")
    n, m = int(lines[0][0]), int(lines[0][1])
    rows = lines[1:]
    if len(rows) != m or any(len(r) != n for r in rows):
        raise ValueError(f"expected {m} rows of {n} coordinates")
    return PointSet.from_points(np.array(rows, dtype=float), Path(path).stem)


def save_pointset(ps: PointSet, path: str | Path) -> None:
    lines = [f"{ps.dimension} {len(ps)}"]
    lines += [" ".join(repr(float(c)) for c in p) for p in ps.points]
    Path(path).write_text("\n".join(lines) + "\n")
