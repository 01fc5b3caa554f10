"""Linear programming upper bounds on rho(C) for spherical designs."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .config import DEFAULT, Settings
from .lowerbound import DesignSpec, InvalidSpec, fl_bound
from .orthopoly import bracketed_root, from_roots, gegenbauer_f0
from .search import box_minimize

__all__ = [
    "UpperBoundResult",
    "rho_to_r",
    "r_to_rho",
    "lp_upper_bound",
    "u_function",
    "optimal_parameters_4design",
    "optimal_upper_4design",
    "antipodal_3_upper",
    "antipodal_5_upper",
    "search_upper_bound",
]


def rho_to_r(rho):
    """Covering radius from the inner-product form: r = sqrt(2 (1 - rho))."""
    return np.sqrt(2.0 * (1.0 - np.asarray(rho, dtype=float)))


def r_to_rho(r):
    return 1.0 - np.asarray(r, dtype=float) ** 2 / 2.0


@dataclass
class UpperBoundResult:
    bound: float
    method: str
    coefficients: list[float]          # lowest degree first
    params: dict = field(default_factory=dict)
    t_fl: float | None = None
    clamped: bool = False

    @property
    def radius(self) -> float:
        return float(rho_to_r(self.bound))

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial(self.coefficients)

    def to_dict(self) -> dict:
        return {"bound": self.bound, "radius": self.radius, "method": self.method,
                "coefficients": list(self.coefficients), "params": dict(self.params),
                "t_fl": self.t_fl, "clamped": self.clamped}


def _certify(f: Polynomial, t_fl: float, points: int) -> dict:
    """Sampled check that f >= 0 on [-1, t_FL] and f is increasing on [t_FL, 1]."""
    scale = max(1.0, float(np.max(np.abs(f.coef))))
    tol = 1e-12 * scale
    lo = np.linspace(-1.0, t_fl, points)
    bad = lo[f(lo) < -tol]
    if bad.size:
        raise ValueError(f"f is negative on [-1, t_FL], e.g. at t={bad[0]:.6g}")
    hi = np.linspace(t_fl, 1.0, points)
    bad = hi[f.deriv()(hi) < -tol]
    if bad.size:
        raise ValueError(f"f is not increasing on [t_FL, 1], e.g. at t={bad[0]:.6g}")
    return {"nonnegative_above_t_fl": bool(np.all(f(hi) >= -tol))}


def _lp_root(n: int, M: int, f: Polynomial, t_fl: float, mult: int) -> tuple[float, bool]:
    """Root of mult * f(t) = f0 * M on [t_FL, 1], f increasing there."""
    level = gegenbauer_f0(n, f) * M / mult
    h = lambda t: float(f(t)) - level
    if h(t_fl) >= 0:
        return t_fl, False
    if h(1.0) < 0:
        return 1.0, True
    return bracketed_root(h, t_fl, 1.0, xtol=1e-15), False


def lp_upper_bound(spec: DesignSpec, f: Polynomial, antipodal: bool = False,
                   points: int = 2_000) -> UpperBoundResult:
    """rho(C) <= largest root of n f(t) = f0 |C| (2n f(t) for antipodal designs)."""
    f = f if isinstance(f, Polynomial) else Polynomial(f)
    if f.degree() > spec.tau:
        raise ValueError(f"deg f = {f.degree()} exceeds the strength {spec.tau}")
    t_fl = spec.t_fl
    info = _certify(f, t_fl, points)
    mult = 2 * spec.n if antipodal else spec.n
    rho, clamped = _lp_root(spec.n, spec.cardinality, f, t_fl, mult)
    info["antipodal"] = antipodal
    return UpperBoundResult(rho, "lp", [float(c) for c in f.coef], info, t_fl, clamped)


# --------------------------------------------------------------------------
# strength 4, f = (t^2 + a t + b)^2


def u_function(n: int, M: int, a: float, b: float) -> float:
    f0 = b * b + (a * a + 2 * b) / n + 3 / (n * (n + 2))
    return -a / 2 + 0.5 * math.sqrt(a * a - 4 * b + 4 * math.sqrt(M / n * f0))


def optimal_parameters_4design(n: int, M: int) -> tuple[float, float]:
    """The stationary point (a_0, b_0) of u."""
    if M < 2 * n + 1:
        raise InvalidSpec("need |C| >= 2n + 1")
    rad = 2 * (n + 2) * M - 3 * n * (n + 3)
    if rad <= 0:
        raise InvalidSpec("radicand 2(n+2)|C| - 3n(n+3) must be positive")
    b0 = (3 * n * (n + 1) - (n + 2) * M + math.sqrt(n * (n - 1) * rad)) / (n * (n + 2) * (M - 2 * n))
    a0 = (n * b0 + 1) / n * math.sqrt((M * (n * b0 + 1) - n * n * b0) / (n * b0 + 2))
    return a0, b0


def optimal_upper_4design(n: int, M: int, check: bool = True) -> UpperBoundResult:
    a0, b0 = optimal_parameters_4design(n, M)
    u = u_function(n, M, a0, b0)
    f = Polynomial([b0, a0, 1.0]) ** 2
    t_fl = fl_bound(n, 4)
    params = {"a": a0, "b": b0, "raw": u}
    if check:
        h = 1e-6
        grad = [(u_function(n, M, a0 + h, b0) - u_function(n, M, a0 - h, b0)) / (2 * h),
                (u_function(n, M, a0, b0 + h) - u_function(n, M, a0, b0 - h)) / (2 * h)]
        if max(map(abs, grad)) > 1e-6:
            raise ArithmeticError(f"(a0, b0) is not stationary: gradient {grad}")
        rho, clamped = _lp_root(n, M, f, t_fl, n)
        if (clamped and u < 1.0) or (not clamped and abs(rho - u) > 1e-10):
            raise ArithmeticError(f"closed form {u} disagrees with the LP root {rho}")
        params["gradient"] = grad
        params["lp_root"] = rho
    return UpperBoundResult(min(u, 1.0), "optimal-4design", [float(c) for c in f.coef], params,
                            t_fl, clamped=u > 1)


# --------------------------------------------------------------------------
# antipodal designs


def _check_antipodal(n: int, M: int) -> None:
    if M % 2:
        raise InvalidSpec("an antipodal design has even cardinality")


def antipodal_3_upper(n: int, M: int) -> UpperBoundResult:
    """f(t) = t^2 gives rho <= sqrt(|C|/2)/n; t_FL = 1/sqrt(n)."""
    _check_antipodal(n, M)
    if M < 2 * n:
        raise InvalidSpec("need |C| >= 2n")
    rho = math.sqrt(M / 2) / n
    return UpperBoundResult(min(rho, 1.0), "antipodal-3", [0.0, 0.0, 1.0],
                            {"raw": rho}, 1 / math.sqrt(n), clamped=rho > 1)


def antipodal_5_upper(n: int, M: int) -> UpperBoundResult:
    """f(t) = (t^2 - a)^2 with the optimal a; t_FL = sqrt(3/(n+2))."""
    _check_antipodal(n, M)
    if M <= 2 * n:
        raise InvalidSpec("need |C| > 2n")
    t_fl = math.sqrt(3 / (n + 2))
    a = 1 / n - 2 * math.sqrt((n - 1) / (n * (n + 2) * (M - 2 * n)))
    rho2 = 1 / n + math.sqrt((n - 1) * (M - 2 * n) / (n * (n + 2))) / n
    via_a = a + math.sqrt(M * (a * a - 2 * a / n + 3 / (n * (n + 2))) / (2 * n))
    if abs(via_a - rho2) > 1e-12:
        raise ArithmeticError(f"inconsistent closed form: {via_a} vs {rho2}")
    rho = math.sqrt(rho2)
    return UpperBoundResult(min(rho, 1.0), "antipodal-5", [a * a, 0.0, -2 * a, 0.0, 1.0],
                            {"a": a, "a_in_window": -t_fl <= a <= t_fl, "raw": rho},
                            t_fl, clamped=rho > 1)


# --------------------------------------------------------------------------
# search over the extremal form


def _extremal(tau: int, zeros, antipodal: bool) -> Polynomial:
    if antipodal:
        half = tau // 2
        p = half % 2
        f = Polynomial([0.0, 1.0]) ** (2 * p)
        for a in zeros:
            f = f * Polynomial([-a, 0.0, 1.0]) ** 2
        return f
    e = tau % 2
    return Polynomial([1.0, 1.0]) ** e * from_roots(np.repeat(np.asarray(zeros, float), 2))


def search_upper_bound(spec: DesignSpec, antipodal: bool = False,
                       settings: Settings = DEFAULT) -> UpperBoundResult:
    """Minimize the LP bound over f = (t+1)^e A^2 with the zeros of A in [-1, t_FL].

    In antipodal mode f is even, t^{2p} prod (t^2 - a_i)^2, with a_i in [-t_FL, t_FL].
    """
    n, M, tau, t_fl = spec.n, spec.cardinality, spec.tau, spec.t_fl
    mult = 2 * n if antipodal else n
    if antipodal:
        half = tau // 2
        d = (half - half % 2) // 2
        lo, hi = [-t_fl] * d, [t_fl] * d
    else:
        d = tau // 2
        lo, hi = [-1.0] * d, [t_fl] * d

    def objective(z):
        f = _extremal(tau, z, antipodal)
        return _lp_root(n, M, f, t_fl, mult)[0]

    res = box_minimize(objective, lo, hi, grid_points=min(settings.grid_points, 400),
                       budget=settings.budget)
    f = _extremal(tau, res.x, antipodal)
    out = lp_upper_bound(spec, f, antipodal=antipodal)
    out.method = "search"
    out.params["zeros"] = [float(z) for z in res.x]
    return out
