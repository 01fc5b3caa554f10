"""Adjacent polynomials P_i^{0,l} for the signed measure (-1/l)(t - l) dmu,
their zeros, and the positive quadrature rule built on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial

from .orthopoly import (
    GegenbauerBasis,
    bracketed_root,
    from_roots,
    gegenbauer_f0,
)

__all__ = [
    "SignedMeasureParams",
    "EllVerdict",
    "AdjacentSystem",
    "QuadratureRule",
    "RecurrenceReport",
    "ValidityError",
    "validate_ell",
    "adjacent_system",
    "quadrature_rule",
    "recurrence_check",
]

SCAN_CELLS = 10_000


class ValidityError(ValueError):
    """Raised when l cannot support the adjacent system or its quadrature."""


@dataclass(frozen=True)
class SignedMeasureParams:
    dimension: int
    ell: float

    def __post_init__(self):
        if not -1.0 < self.ell < 0.0:
            raise ValidityError(f"ell must lie in (-1, 0), got {self.ell}")

    @property
    def scale(self) -> float:
        return -1.0 / self.ell

    def integrate(self, f: Polynomial) -> float:
        """Integral of f against the signed measure."""
        return self.scale * gegenbauer_f0(self.dimension, Polynomial([-self.ell, 1.0]) * f)


@dataclass(frozen=True)
class EllVerdict:
    ok: bool
    strict: bool
    reason: str | None = None
    ratio: float | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_ell(n: int, k: int, ell: float) -> EllVerdict:
    """Check l against the hypotheses t_{k+1,1} < l < t_{k,1}, P_{k+1}(l)/P_k(l) < 1.

    Values below t_{k+1,1} are accepted with ``strict=False``; the system built
    on them is certified a posteriori.
    """
    if not -1.0 < ell < 0.0:
        return EllVerdict(False, False, f"ell={ell} outside (-1, 0)")
    basis = GegenbauerBasis(n, k + 1)
    tk1 = basis.zeros(k)[0]
    tk11 = basis.zeros(k + 1)[0]
    if ell >= tk1:
        return EllVerdict(False, False, f"ell={ell} >= t_(k,1)={tk1:.12g}")
    ratio = basis.eval(k + 1, ell) / basis.eval(k, ell)
    if ratio >= 1.0:
        return EllVerdict(False, False, f"P_(k+1)(ell)/P_k(ell)={ratio:.12g} >= 1", ratio)
    if ell <= tk11:
        return EllVerdict(True, False, f"ell={ell} <= t_(k+1,1)={tk11:.12g}; relaxed", ratio)
    return EllVerdict(True, True, None, ratio)


@dataclass(frozen=True)
class QuadratureRule:
    n: int
    k: int
    ell: float
    nodes: np.ndarray
    weights: np.ndarray
    valid_strict: bool

    @property
    def degree(self) -> int:
        return 2 * self.k

    def apply(self, f) -> float:
        vals = f(self.nodes) if callable(f) else np.asarray(f)
        return float(np.dot(self.weights, vals))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "ell": self.ell,
            "nodes": [float(x) for x in self.nodes],
            "weights": [float(w) for w in self.weights],
            "valid_strict": self.valid_strict,
        }


@dataclass(frozen=True)
class AdjacentSystem:
    """P_i^{0,l}, i = 0..k, normalized by P_i^{0,l}(1) = 1."""

    params: SignedMeasureParams
    order: int
    verdict: EllVerdict = field(compare=False)

    @property
    def n(self) -> int:
        return self.params.dimension

    @property
    def ell(self) -> float:
        return self.params.ell

    @cached_property
    def basis(self) -> GegenbauerBasis:
        return GegenbauerBasis(self.n, self.order + 1)

    def _check(self, i: int) -> None:
        if not 0 <= i <= self.order:
            raise IndexError(f"degree {i} outside 0..{self.order}")

    def kernel(self, i: int, u, v: float):
        """Christoffel-Darboux kernel T_i(u, v)."""
        rows = self.basis.eval_all(u, i)
        w = np.asarray(self.basis.norms[: i + 1]) * self.basis.eval_all(v, i)
        out = np.tensordot(w, rows, axes=1)
        return out if out.ndim else float(out)

    def eval(self, i: int, t):
        """Kernel form T_i(t, l) / T_i(1, l); valid everywhere including t = l."""
        self._check(i)
        return self.kernel(i, t, self.ell) / self.kernel(i, 1.0, self.ell)

    def eval_ratio(self, i: int, t):
        """Quotient form; singular at t = l."""
        self._check(i)
        b, ell = self.basis, self.ell
        r = self.ratio(i)
        t = np.asarray(t, dtype=float)
        num = (1 - ell) * (b.eval(i + 1, t) - b.eval(i, t) * r)
        return num / ((t - ell) * (1 - r))

    def ratio(self, i: int) -> float:
        return self.basis.eval(i + 1, self.ell) / self.basis.eval(i, self.ell)

    def leading_coefficient(self, i: int) -> float:
        """m_i^{0,l}."""
        self._check(i)
        return (1 - self.ell) * self.basis.leading_coefficient(i + 1) / (1 - self.ratio(i))

    def poly(self, i: int) -> Polynomial:
        """Monomial form of P_i^{0,l} (used for moment integration)."""
        self._check(i)
        b = self.basis
        acc = Polynomial([0.0])
        for j in range(i + 1):
            acc = acc + b.norms[j] * b.eval(j, self.ell) * b.poly(j)
        return acc / self.kernel(i, 1.0, self.ell)

    def brackets(self, i: int) -> list[tuple[float, float]]:
        """Interlacing intervals holding the zeros of P_i^{0,l}."""
        self._check(i)
        lo = self.basis.zeros(i)
        hi = self.basis.zeros(i + 1)
        if i < self.order:
            return [(lo[j], hi[j + 1]) for j in range(i)]
        out = [(hi[j + 1], lo[j + 1]) for j in range(i - 1)]
        out.append((hi[i], 1.0))
        return out

    def zeros(self, i: int) -> np.ndarray:
        """Sorted zeros t_{i,1}^{0,l} < ... < t_{i,i}^{0,l}."""
        self._check(i)
        if i == 0:
            return np.array([])
        f = lambda x: float(self.eval(i, x))
        if i < self.order or self.verdict.strict:
            try:
                return np.array([bracketed_root(f, a, b) for a, b in self.brackets(i)])
            except ArithmeticError as exc:
                raise ValidityError(f"interlacing bracket failed for degree {i}: {exc}") from exc
        grid = np.linspace(self.ell, 1.0, SCAN_CELLS + 1)
        vals = self.eval(i, grid)
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]
        roots = []
        for j in idx:
            if vals[j] == 0.0 and roots and abs(roots[-1] - grid[j]) < 1e-15:
                continue
            roots.append(bracketed_root(f, grid[j], grid[j + 1]))
        roots = np.unique(np.round(roots, 15))
        if len(roots) != i:
            raise ValidityError(
                f"found {len(roots)} zeros of P_{i}^(0,l) in [l, 1], expected {i}")
        return roots

    @cached_property
    def top_zeros(self) -> np.ndarray:
        return self.zeros(self.order)

    @property
    def largest_zero(self) -> float:
        return float(self.top_zeros[-1])


def adjacent_system(n: int, k: int, ell: float) -> AdjacentSystem:
    """Build and certify the adjacent system of order k.

    Raises :class:`ValidityError` if l is rejected or the relaxed a posteriori
    checks (positive leading coefficients, zeros inside [l, 1)) fail.
    """
    verdict = validate_ell(n, k, ell)
    if not verdict.ok:
        raise ValidityError(verdict.reason)
    system = AdjacentSystem(SignedMeasureParams(n, ell), k, verdict)
    for i in range(k + 1):
        if system.leading_coefficient(i) <= 0:
            raise ValidityError(f"m_{i}^(0,l) <= 0")
    z = system.top_zeros
    if not (z[0] >= ell and z[-1] < 1.0):
        raise ValidityError("zeros of P_k^(0,l) leave [l, 1)")
    return system


def _lagrange_basis(nodes: np.ndarray) -> list[Polynomial]:
    out = []
    for i, x in enumerate(nodes):
        others = np.delete(nodes, i)
        p = from_roots(others)
        out.append(p / p(x))
    return out


def quadrature_rule(n: int, k: int, ell: float) -> QuadratureRule:
    """Nodes {l, t_{k,1}^{0,l}, ..., t_{k,k}^{0,l}} with Lagrange-moment weights."""
    system = adjacent_system(n, k, ell)
    nodes = np.concatenate(([ell], system.top_zeros))
    weights = np.array([gegenbauer_f0(n, L) for L in _lagrange_basis(nodes)])
    if np.any(weights <= 0):
        raise ValidityError(f"nonpositive quadrature weight: {weights.min():.3e}")
    return QuadratureRule(n, k, ell, nodes, weights, system.verdict.strict)


@dataclass
class RecurrenceReport:
    ok: bool
    a: list[float]
    b: list[float]
    c: list[float]
    r: list[float]
    max_residual: float
    failures: list[str]


def recurrence_check(system: AdjacentSystem, tol: float = 1e-9,
                     samples: np.ndarray | None = None) -> RecurrenceReport:
    """Verify (t - a_i) P_i = b_i P_{i+1} + c_i P_{i-1} for i = 1..k-1."""
    k = system.order
    ts = np.linspace(-1.0, 1.0, 41) if samples is None else np.asarray(samples)
    m = [system.leading_coefficient(i) for i in range(k + 1)]
    r = [1.0 / system.params.integrate(system.poly(i) ** 2) for i in range(k)]
    b = [m[i] / m[i + 1] for i in range(k)]
    c = [0.0] + [r[i - 1] * b[i - 1] / r[i] for i in range(1, k)]
    a = [1.0 - b[i] - c[i] for i in range(k)]
    failures = []
    for name, seq, lo in (("r", r, 0), ("b", b, 0), ("c", c, 1)):
        for i in range(lo, len(seq)):
            if seq[i] <= 0:
                failures.append(f"{name}_{i} = {seq[i]:.3e} <= 0")
    worst = 0.0
    for i in range(1, k):
        lhs = (ts - a[i]) * system.eval(i, ts)
        rhs = b[i] * system.eval(i + 1, ts) + c[i] * system.eval(i - 1, ts)
        res = float(np.max(np.abs(lhs - rhs)))
        worst = max(worst, res)
        if res > tol:
            failures.append(f"recurrence residual {res:.3e} at degree {i}")
    return RecurrenceReport(not failures, a, b, c, r, worst, failures)
