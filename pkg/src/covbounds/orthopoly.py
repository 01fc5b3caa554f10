"""Gegenbauer and Jacobi polynomials together with the moments of the Gegenbauer measure.

Gegenbauer polynomials are normalized by ``P_i(1) = 1`` and are orthogonal with
respect to the probability measure ``c_n (1 - t^2)^((n-3)/2) dt`` on [-1, 1].
Bases are only ever evaluated through their three-term recurrence; the
monomial form built by :meth:`GegenbauerBasis.poly` is used for integration.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

__all__ = [
    "UnivariatePolynomial",
    "GegenbauerBasis",
    "from_roots",
    "shift_scale",
    "bracketed_root",
    "gegenbauer_eval",
    "gegenbauer_zeros",
    "jacobi_eval",
    "jacobi_zeros",
    "jacobi_largest_zero",
    "measure_moment",
    "measure_moments",
    "gegenbauer_f0",
    "norm_constant",
]

# numpy's Polynomial already stores coefficients lowest degree first and
# supports eval/add/multiply/roots/composition exactly as needed here.
UnivariatePolynomial = Polynomial

ROOT_XTOL = 1e-14


def from_roots(roots: Sequence[float]) -> Polynomial:
    """Monic polynomial with the given roots (multiplicities repeated)."""
    if len(roots) == 0:
        return Polynomial([1.0])
    return Polynomial.fromroots(list(roots))


def shift_scale(p: Polynomial, shift: float, scale: float) -> Polynomial:
    """Return q(t) = p(scale * t + shift)."""
    return p(Polynomial([shift, scale]))


def bracketed_root(func: Callable[[float], float], a: float, b: float,
                   xtol: float = ROOT_XTOL) -> float:
    """Root of ``func`` inside a sign-changing bracket [a, b]."""
    fa, fb = func(a), func(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if np.sign(fa) == np.sign(fb):
        raise ArithmeticError(f"bracket [{a!r}, {b!r}] does not change sign")
    return brentq(func, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)


# --------------------------------------------------------------------------
# moments of the normalized measure


@lru_cache(maxsize=None)
def _even_moments(n: int, jmax: int) -> tuple[float, ...]:
    mu = [1.0]
    for j in range(1, jmax + 1):
        mu.append(mu[-1] * (2 * j - 1) / (n + 2 * j - 2))
    return tuple(mu)


def measure_moment(n: int, m: int) -> float:
    """Integral of t**m against the normalized Gegenbauer measure."""
    if m < 0:
        raise ValueError("moment order must be nonnegative")
    if m % 2:
        return 0.0
    return _even_moments(n, m // 2)[-1]


def measure_moments(n: int, deg: int) -> np.ndarray:
    """Vector of moments of orders 0..deg."""
    even = _even_moments(n, deg // 2)
    mu = np.zeros(deg + 1)
    mu[0::2] = even[: len(mu[0::2])]
    return mu


def gegenbauer_f0(n: int, f: Polynomial | Sequence[float]) -> float:
    """Zeroth Gegenbauer coefficient of f, i.e. its mean against the measure."""
    coef = np.asarray(f.coef if isinstance(f, Polynomial) else f, dtype=float)
    return float(np.dot(coef, measure_moments(n, len(coef) - 1)))


# --------------------------------------------------------------------------
# Gegenbauer basis


@dataclass(frozen=True)
class GegenbauerBasis:
    """Normalized Gegenbauer system for dimension ``n`` up to ``max_degree``.

    The recurrence is stored as ``t P_i = b_i P_{i+1} + c_i P_{i-1}``.
    """

    dimension: int
    max_degree: int
    b: tuple[float, ...] = field(init=False, repr=False)
    c: tuple[float, ...] = field(init=False, repr=False)
    norms: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self):
        n = self.dimension
        if n < 2:
            raise ValueError("dimension must be at least 2")
        if self.max_degree < 0:
            raise ValueError("max_degree must be nonnegative")
        b, c = [1.0], [0.0]
        for i in range(1, self.max_degree + 1):
            b.append((i + n - 2) / (2 * i + n - 2))
            c.append(i / (2 * i + n - 2))
        object.__setattr__(self, "b", tuple(b))
        object.__setattr__(self, "c", tuple(c))
        polys = [Polynomial([1.0])]
        if self.max_degree >= 1:
            polys.append(Polynomial([0.0, 1.0]))
        t = Polynomial([0.0, 1.0])
        for i in range(1, self.max_degree):
            polys.append((t * polys[i] - c[i] * polys[i - 1]) / b[i])
        object.__setattr__(self, "_polys", tuple(polys))
        norms = tuple(1.0 / gegenbauer_f0(n, p * p) for p in polys)
        object.__setattr__(self, "norms", norms)

    def _check(self, i: int) -> None:
        if not 0 <= i <= self.max_degree:
            raise IndexError(f"degree {i} outside cached range 0..{self.max_degree}")

    def eval(self, i: int, t):
        """P_i(t) by the three-term recurrence; t may be an array."""
        self._check(i)
        t = np.asarray(t, dtype=float)
        p_prev, p = np.ones_like(t), t.copy()
        if i == 0:
            return p_prev if p_prev.ndim else float(p_prev)
        for d in range(1, i):
            p_prev, p = p, (t * p - self.c[d] * p_prev) / self.b[d]
        return p if p.ndim else float(p)

    def eval_all(self, t, upto: int | None = None) -> np.ndarray:
        """Rows P_0(t) .. P_upto(t)."""
        upto = self.max_degree if upto is None else upto
        self._check(upto)
        t = np.asarray(t, dtype=float)
        out = np.empty((upto + 1,) + t.shape)
        out[0] = 1.0
        if upto >= 1:
            out[1] = t
        for d in range(1, upto):
            out[d + 1] = (t * out[d] - self.c[d] * out[d - 1]) / self.b[d]
        return out

    def poly(self, i: int) -> Polynomial:
        """Monomial form of P_i (for moment integration only)."""
        self._check(i)
        return self._polys[i]

    def leading_coefficient(self, i: int) -> float:
        self._check(i)
        return float(self._polys[i].coef[-1])

    def zeros(self, i: int) -> np.ndarray:
        return gegenbauer_zeros(self, i)


def gegenbauer_eval(basis: GegenbauerBasis, i: int, t: float) -> float:
    return basis.eval(i, t)


def _interlaced_zeros(evaluate: Callable[[int, float], float], degree: int,
                      first: np.ndarray | None = None) -> list[np.ndarray]:
    """Zeros of degrees 1..degree, each bracketed by the previous degree's zeros."""
    out = []
    prev = np.array([]) if first is None else first
    for d in range(1, degree + 1):
        edges = np.concatenate(([-1.0], prev, [1.0]))
        f = lambda x, d=d: evaluate(d, x)
        prev = np.array([bracketed_root(f, edges[j], edges[j + 1]) for j in range(d)])
        out.append(prev)
    return out


def gegenbauer_zeros(basis: GegenbauerBasis, i: int) -> np.ndarray:
    """Sorted zeros t_{i,1} < ... < t_{i,i} of P_i."""
    if i < 1:
        raise ValueError("degree must be at least 1")
    basis._check(i)
    return _interlaced_zeros(basis.eval, i)[-1]


def norm_constant(basis: GegenbauerBasis, j: int) -> float:
    """r_j = 1 / integral of P_j^2."""
    basis._check(j)
    return basis.norms[j]


# --------------------------------------------------------------------------
# Jacobi polynomials (standard normalization)


def jacobi_eval(k: int, alpha: float, beta: float, t):
    t = np.asarray(t, dtype=float)
    p_prev = np.ones_like(t)
    if k == 0:
        return p_prev if t.ndim else float(p_prev)
    p = (alpha + 1) + (alpha + beta + 2) * (t - 1) / 2
    ab = alpha + beta
    for d in range(1, k):
        s = 2 * d + ab
        a1 = 2 * (d + 1) * (d + ab + 1) * s
        a2 = (s + 1) * (alpha * alpha - beta * beta)
        a3 = s * (s + 1) * (s + 2)
        a4 = 2 * (d + alpha) * (d + beta) * (s + 2)
        p_prev, p = p, ((a2 + a3 * t) * p - a4 * p_prev) / a1
    return p if t.ndim else float(p)


def jacobi_zeros(alpha: float, beta: float, k: int) -> np.ndarray:
    if alpha <= -1 or beta <= -1:
        raise ValueError("Jacobi parameters must exceed -1")
    if k < 1:
        raise ValueError("degree must be at least 1")
    return _interlaced_zeros(lambda d, x: jacobi_eval(d, alpha, beta, x), k)[-1]


def jacobi_largest_zero(alpha: float, beta: float, k: int) -> float:
    return float(jacobi_zeros(alpha, beta, k)[-1])
