"""Lower bounds on rho(C) = min_y max_x <x, y> for spherical designs.

The classical floors (the Delsarte-Goethals-Seidel cardinality bound and the
Fazekas-Levenshtein bound) come first. On top of them sits the adjacent-polynomial
bound valid when t_1(y) >= l, and an iterative refinement that splits on the
position of t_1(y) relative to l and on the index j locating t_FL among the
largest inner products.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .adjacent import adjacent_system
from .config import DEFAULT, Settings
from .orthopoly import from_roots, jacobi_largest_zero, measure_moments
from .search import box_minimize

__all__ = [
    "InvalidSpec",
    "DesignSpec",
    "BranchResult",
    "LowerBoundReport",
    "MCResult",
    "BELOW",
    "ABOVE",
    "dgs_bound",
    "fl_bound",
    "lower_bound_given_ell",
    "make_A_polynomial",
    "make_B_polynomial",
    "compute_mC",
    "refine_branch",
    "combined_lower_bound",
]

BELOW = "t1<=ell"
ABOVE = "t1>=ell"


class InvalidSpec(ValueError):
    pass


def split_strength(tau: int) -> tuple[int, int]:
    """Return (k, e) with tau = 2k - 1 + e."""
    if tau < 1:
        raise InvalidSpec("strength must be positive")
    e = 1 - tau % 2
    return (tau + 1 - e) // 2, e


def dgs_bound(n: int, tau: int) -> int:
    k, e = split_strength(tau)
    return math.comb(n + k - 2 + e, n - 1) + math.comb(n + k - 2, n - 1)


def fl_bound(n: int, tau: int) -> float:
    """Largest zero of the Jacobi polynomial with alpha=(n-3)/2, beta=alpha+e."""
    k, e = split_strength(tau)
    if tau < 2:
        raise InvalidSpec("the bound needs strength at least 2")
    a = (n - 3) / 2
    return jacobi_largest_zero(a, a + e, k)


@dataclass(frozen=True)
class DesignSpec:
    n: int
    tau: int
    cardinality: int

    def __post_init__(self):
        if self.n < 2:
            raise InvalidSpec("dimension must be at least 2")
        split_strength(self.tau)
        floor = dgs_bound(self.n, self.tau)
        if self.cardinality < floor:
            raise InvalidSpec(
                f"|C|={self.cardinality} is below the DGS bound D({self.n},{self.tau})={floor}")

    @property
    def k(self) -> int:
        return split_strength(self.tau)[0]

    @property
    def e(self) -> int:
        return split_strength(self.tau)[1]

    @property
    def t_fl(self) -> float:
        return fl_bound(self.n, self.tau)

    def require_even(self) -> None:
        if self.e != 1:
            raise InvalidSpec("the refinement needs even strength")


def lower_bound_given_ell(spec: DesignSpec, ell: float) -> float:
    """t_{k,k}^{0,l}: valid lower bound under the hypothesis l <= t_1(y)."""
    spec.require_even()
    return adjacent_system(spec.n, spec.k, ell).largest_zero


# --------------------------------------------------------------------------
# polynomial classes


def _certify_shape(p: Polynomial, pieces: Sequence[tuple[float, float, str]], points: int) -> None:
    dp = p.deriv()
    for a, b, kind in pieces:
        if b <= a:
            continue
        x = np.linspace(a, b, points)
        scale = max(1.0, float(np.max(np.abs(p(x)))))
        tol = 1e-12 * scale
        if kind == "decreasing" and np.any(dp(x[:-1]) > tol):
            raise ValueError(f"not decreasing on [{a:.6g}, {b:.6g}]")
        if kind == "increasing" and np.any(dp(x[1:]) < -tol):
            raise ValueError(f"not increasing on [{a:.6g}, {b:.6g}]")
        if kind == "nonnegative" and np.any(p(x) < -tol):
            raise ValueError(f"negative on [{a:.6g}, {b:.6g}]")
        if kind == "nonpositive" and np.any(p(x) > tol):
            raise ValueError(f"positive on [{a:.6g}, {b:.6g}]")


def make_A_polynomial(spec: DesignSpec, ell: float, zeros: Sequence[float],
                      t_ref: float | None = None, points: int = 1_000) -> Polynomial:
    """f = prod (t - a_i)^2 with k zeros in [l, t_FL]."""
    t_ref = spec.t_fl if t_ref is None else t_ref
    zeros = np.asarray(zeros, dtype=float)
    if len(zeros) != spec.k:
        raise ValueError(f"need {spec.k} zeros, got {len(zeros)}")
    if np.any(zeros < ell - 1e-15) or np.any(zeros > t_ref + 1e-15):
        raise ValueError(f"zeros must lie in [{ell}, {t_ref}]")
    f = from_roots(np.repeat(zeros, 2))
    _certify_shape(f, [(-1.0, ell, "decreasing"), (ell, t_ref, "nonnegative"),
                       (t_ref, 1.0, "increasing")], points)
    return f


def make_B_polynomial(spec: DesignSpec, s: float, zeros: Sequence[float],
                      left: float = -1.0, points: int = 1_000) -> Polynomial:
    """g = (t - left) B(t)^2 (t - s) with k-1 zeros of B in [left, s]."""
    zeros = np.asarray(zeros, dtype=float)
    if len(zeros) != spec.k - 1:
        raise ValueError(f"need {spec.k - 1} zeros, got {len(zeros)}")
    if not s < spec.t_fl:
        raise ValueError("s must be below t_FL")
    if np.any(zeros < left - 1e-15) or np.any(zeros > s + 1e-15):
        raise ValueError(f"zeros must lie in [{left}, {s}]")
    g = from_roots(np.concatenate(([left, s], np.repeat(zeros, 2))))
    _certify_shape(g, [(left, s, "nonpositive"), (s, 1.0, "increasing")], points)
    return g


class _Family:
    """Fast evaluation of f = A^2 (A monic with given zeros) and of
    g = (t - left)(t - s) B^2 for batches of zero vectors."""

    def __init__(self, n: int, deg: int):
        self.n = n
        mu = measure_moments(n, 2 * deg + 2)
        idx = np.add.outer(np.arange(deg + 1), np.arange(deg + 1))
        self.mu = mu
        self.idx = idx

    @staticmethod
    def monic(Z: np.ndarray) -> np.ndarray:
        """Lowest-first coefficients of prod (t - z) for each row of Z."""
        Z = np.atleast_2d(Z)
        N, d = Z.shape
        c = np.zeros((N, d + 1))
        c[:, 0] = 1.0
        for i in range(d):
            shifted = np.zeros_like(c)
            shifted[:, 1:] = c[:, :-1]
            c = shifted - Z[:, [i]] * c
        return c

    def hankel(self, shift_weights: Sequence[float], d: int) -> np.ndarray:
        """Matrix H with a^T H a = integral of (sum_r w_r t^r) A(t)^2."""
        H = np.zeros((d + 1, d + 1))
        ix = self.idx[: d + 1, : d + 1]
        for r, w in enumerate(shift_weights):
            if w:
                H += w * self.mu[ix + r]
        return H

    def square_mean(self, Z: np.ndarray, weights: Sequence[float]) -> np.ndarray:
        a = self.monic(Z)
        H = self.hankel(weights, a.shape[1] - 1)
        return np.einsum("np,pq,nq->n", a, H, a)

    @staticmethod
    def prod(Z: np.ndarray, x) -> np.ndarray:
        Z = np.atleast_2d(Z)
        return np.prod(np.asarray(x)[..., None] - Z, axis=-1)


def _monic(zs: Sequence[float]) -> list[float]:
    """Lowest-first coefficients of prod (t - z)."""
    c = [1.0]
    for z in zs:
        c = [-z * c[0]] + [c[i - 1] - z * c[i] for i in range(1, len(c))] + [c[-1]]
    return c


def _quad_form(a: Sequence[float], mu: Sequence[float], shift: int) -> float:
    """Integral of t^shift A(t)^2 from the coefficients of A."""
    return sum(a[p] * a[q] * mu[p + q + shift] for p in range(len(a)) for q in range(len(a)))


def _newton_from_right(factors: Sequence[tuple[float, int]], level: float,
                       lo: float, hi: float) -> float:
    """Root of prod (t - r)^m = level with all r <= lo, starting from hi.

    The product is increasing and convex on [lo, inf), so Newton iterates
    decrease monotonically onto the root.
    """
    t = hi
    for _ in range(200):
        P = math.prod((t - r) ** m for r, m in factors)
        if P <= level:
            return t
        dlog = sum(m / (t - r) for r, m in factors)
        step = (P - level) / (P * dlog)
        t_new = max(t - step, lo)
        if t - t_new <= 1e-16 * max(1.0, abs(t)):
            return t_new
        t = t_new
    return t


def _batch_increasing_root(h, lo: np.ndarray, hi: np.ndarray, iters: int = 80) -> np.ndarray:
    """Vectorized bisection for functions increasing through zero on [lo, hi]."""
    lo, hi = lo.copy(), hi.copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        pos = h(mid) > 0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    return 0.5 * (lo + hi)


# --------------------------------------------------------------------------
# m(C)


@dataclass
class MCResult:
    m: int
    ratio: float           # min over A of (f0|C| - f(l)) / f(t_FL)
    zeros: list[float]     # witness polynomial f = prod (t - z)^2
    clamped: bool
    use_ell: bool

    @property
    def witness(self) -> Polynomial:
        return from_roots(np.repeat(self.zeros, 2))


def compute_mC(spec: DesignSpec, ell: float, settings: Settings = DEFAULT,
               use_ell: bool = True) -> MCResult:
    """Smallest m such that some f in A(n,k,l) has f0|C| < f(l) + (m+1) f(t_FL).

    With ``use_ell=False`` the f(l) term is dropped (the t_1(y) >= l case).
    """
    spec.require_even()
    n, M, k, t = spec.n, spec.cardinality, spec.k, spec.t_fl
    fam = _Family(n, k)
    hi = t - 1e-9 * max(1.0, t - ell)

    def q_batch(Z):
        fl = _Family.prod(Z, ell) ** 2 if use_ell else 0.0
        return (M * fam.square_mean(Z, [1.0]) - fl) / _Family.prod(Z, t) ** 2

    res = box_minimize(lambda z: float(q_batch(z[None, :])[0]), [ell] * k, [hi] * k,
                       grid_points=settings.grid_points, budget=settings.budget,
                       batch=q_batch)
    ratio = res.fun
    m = math.floor(ratio)
    clamped = m < n
    m = max(m, n)
    if m > M - n:
        raise InvalidSpec(f"procedure inapplicable: m(C)={m} exceeds |C|-n={M - n}")
    return MCResult(m, ratio, sorted(float(z) for z in res.x), clamped, use_ell)


# --------------------------------------------------------------------------
# one branch of the iterative refinement


@dataclass
class BranchResult:
    case: str
    j: int
    s: float
    bound: float
    iterations: int
    status: str   # converged | max-iterations | infeasible | inconclusive
    f_zeros: list[float] = field(default_factory=list)
    g_zeros: list[float] = field(default_factory=list)
    trace: list[tuple[float, float]] = field(default_factory=list)
    note: str | None = None

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["trace"] = [list(map(float, p)) for p in self.trace]
        return d


class _Branch:
    def __init__(self, spec: DesignSpec, ell: float, j: int, case: str, m: int,
                 start: float, settings: Settings):
        self.spec, self.ell, self.j, self.case, self.m = spec, ell, j, case, m
        self.settings = settings
        self.k = spec.k
        self.t = spec.t_fl
        self.use_ell = case == BELOW
        self.left = -1.0 if case == BELOW else ell
        self.start = start
        self.fam = _Family(spec.n, self.k)
        self._mu = [float(v) for v in self.fam.mu]

    # f-step: upper bound s on t_{|C|-m(C)}(y)
    def _s_batch(self, Z: np.ndarray, terms: list[tuple[float, float]], mult: float) -> np.ndarray:
        """Largest root of mult*f(t) = f0|C| - sum w f(x) - [f(l)] over rows of Z."""
        M = self.spec.cardinality
        c = M * self.fam.square_mean(Z, [1.0])
        if self.use_ell:
            c = c - _Family.prod(Z, self.ell) ** 2
        for w, x in terms:
            if w:
                c = c - w * _Family.prod(Z, x) ** 2
        out = np.full(len(Z), -np.inf)
        ok = c >= 0
        if np.any(ok):
            Zk = Z[ok]
            level = np.sqrt(c[ok] / mult)
            lo = Zk.max(axis=1)
            hi = lo + level ** (1.0 / self.k) + 1e-12
            h = lambda x: np.prod(x[:, None] - Zk, axis=1) - level
            out[ok] = _batch_increasing_root(h, lo, hi)
        return out

    def _s_scalar(self, z: np.ndarray, terms, mult: float) -> float:
        zs = [float(v) for v in z]
        A = lambda x: math.prod(x - v for v in zs)
        c = self.spec.cardinality * _quad_form(_monic(zs), self._mu, 0)
        if self.use_ell:
            c -= A(self.ell) ** 2
        for w, x in terms:
            if w:
                c -= w * A(x) ** 2
        if c < 0:
            return -np.inf
        level = math.sqrt(c / mult)
        lo = max(zs)
        return _newton_from_right([(v, 1) for v in zs], level, lo,
                                  lo + level ** (1.0 / self.k) + 1e-12)

    def s_step(self, terms, mult, starts=(), use_grid=True):
        k = self.k
        res = box_minimize(lambda z: self._s_scalar(z, terms, mult), [self.ell] * k, [self.t] * k,
                           starts=starts, grid_points=self.settings.grid_points,
                           budget=self.settings.budget,
                           batch=lambda Z: self._s_batch(Z, terms, mult), use_grid=use_grid)
        return res.fun, np.sort(res.x)

    # g-step: lower bound on rho(C)
    def _g_parts(self, s: float):
        # g0 = a^T H a with weight (t - left)(t - s) = t^2 - (left+s) t + left*s
        H = self.fam.hankel([self.left * s, -(self.left + s), 1.0], self.k - 1)
        return H

    def _bound_scalar(self, z: np.ndarray, s: float, H: np.ndarray) -> float:
        M, j, m, t = self.spec.cardinality, self.j, self.m, self.t
        zs = [float(v) for v in z]
        a = _monic(zs)
        gt = (t - self.left) * (t - s) * math.prod(t - v for v in zs) ** 2
        g0 = (_quad_form(a, self._mu, 2) - (self.left + s) * _quad_form(a, self._mu, 1)
              + self.left * s * _quad_form(a, self._mu, 0))
        c = M * g0 - j * gt
        if c <= 0:
            return s
        level = c / (m - j)
        factors = [(self.left, 1), (s, 1)] + [(v, 2) for v in zs]
        return _newton_from_right(factors, level, s, s + level ** (1.0 / (2 * self.k)) + 1e-12)

    def _bound_batch(self, Z: np.ndarray, s: float, H: np.ndarray) -> np.ndarray:
        M, j, m, t = self.spec.cardinality, self.j, self.m, self.t
        a = _Family.monic(Z)
        gt = (t - self.left) * (t - s) * np.prod(t - Z, axis=1) ** 2
        c = M * np.einsum("np,pq,nq->n", a, H, a) - j * gt
        out = np.full(len(Z), s)
        ok = c > 0
        if np.any(ok):
            Zk = Z[ok]
            level = c[ok] / (m - j)
            h = lambda x: (x - self.left) * (x - s) * np.prod(x[:, None] - Zk, axis=1) ** 2 - level
            lo = np.full(len(Zk), s)
            out[ok] = _batch_increasing_root(h, lo, lo + level ** (1.0 / (2 * self.k)) + 1e-12)
        return out

    def g_step(self, s: float, starts=(), use_grid=True):
        H = self._g_parts(s)
        d = self.k - 1
        starts = [np.minimum(np.asarray(x), s) for x in starts]
        res = box_minimize(lambda z: -self._bound_scalar(z, s, H), [self.left] * d, [s] * d,
                           starts=starts, grid_points=self.settings.grid_points,
                           budget=self.settings.budget,
                           batch=lambda Z: -self._bound_batch(Z, s, H), use_grid=use_grid)
        return -res.fun, np.sort(res.x)

    def run(self) -> BranchResult:
        st, n, m, j, t = self.settings, self.spec.n, self.m, self.j, self.t
        out = BranchResult(self.case, j, math.nan, self.start, 0, "inconclusive")
        # entry: the j-independent estimate of s
        s, fz = self.s_step([], m + 1)
        L = self.start
        if s == -np.inf:
            out.status, out.note = "infeasible", "no t_{|C|-m} is compatible with this case"
            out.bound, out.f_zeros = math.inf, list(fz)
            return out
        if s >= t:
            out.s, out.note = s, "s >= t_FL; no refinement"
            return out
        b, gz = self.g_step(s)
        if b > 1.0:
            out.s, out.bound, out.status = s, math.inf, "infeasible"
            out.note = "bound exceeds 1"
            return out
        L = max(L, b)
        out.trace.append((s, L))
        for it in range(1, st.max_iterations + 1):
            terms = [(m - j - n, t), (n, L)]
            s_new, fz_new = self.s_step(terms, j + 1, starts=[fz], use_grid=(it == 1))
            if s_new == -np.inf:
                out.s, out.bound, out.status, out.iterations = s, math.inf, "infeasible", it
                out.note = "contradiction in the s-update"
                out.f_zeros = list(fz_new)
                return out
            if s_new < s:
                s, fz = s_new, fz_new
            b, gz_new = self.g_step(s, starts=[gz], use_grid=(it == 1))
            if b > 1.0:
                out.s, out.bound, out.status, out.iterations = s, math.inf, "infeasible", it
                out.note = "bound exceeds 1"
                return out
            dL = max(b, L) - L
            if b > L:
                L, gz = b, gz_new
            ds = out.trace[-1][0] - s
            out.trace.append((s, L))
            out.iterations = it
            if ds < st.tol and dL < st.tol:
                out.status = "converged"
                break
        else:
            out.status = "max-iterations"
        out.s, out.bound = s, L
        out.f_zeros, out.g_zeros = [float(z) for z in fz], [float(z) for z in gz]
        return out


def refine_branch(spec: DesignSpec, ell: float, j: int, case: str = BELOW,
                  settings: Settings = DEFAULT, m: int | None = None,
                  start: float | None = None) -> BranchResult:
    """Iterate the s-update and the bound-update for one (case, j) branch.

    Case ``t1<=ell`` keeps the f(l) term and uses g = (t+1) B^2 (t-s); case
    ``t1>=ell`` drops f(l), uses g = (t-l) B^2 (t-s) and starts from t_{k,k}^{0,l}.
    """
    spec.require_even()
    if case not in (BELOW, ABOVE):
        raise ValueError(f"unknown case {case!r}")
    if m is None:
        m = compute_mC(spec, ell, settings, use_ell=(case == BELOW)).m
    if not 0 <= j <= m - spec.n:
        raise ValueError(f"j must lie in 0..{m - spec.n}")
    if start is None:
        start = spec.t_fl if case == BELOW else max(spec.t_fl, lower_bound_given_ell(spec, ell))
    return _Branch(spec, ell, j, case, m, start, settings).run()


@dataclass
class LowerBoundReport:
    n: int
    tau: int
    cardinality: int
    ell: float
    t_fl: float
    t_kk_adjacent: float | None
    ell_strict: bool | None
    mC: int | None
    mC_clamped: bool = False
    branches: list[BranchResult] = field(default_factory=list)
    worst_case_bound: float = math.nan
    note: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["branches"] = [b.to_dict() for b in self.branches]
        return d


def combined_lower_bound(spec: DesignSpec, ell: float = -0.97,
                         settings: Settings = DEFAULT) -> LowerBoundReport:
    """Worst case over both cases for t_1(y) and all positions j."""
    t = spec.t_fl
    rep = LowerBoundReport(spec.n, spec.tau, spec.cardinality, ell, t, None, None, None)
    if spec.e != 1:
        rep.worst_case_bound = t
        rep.note = "odd strength: Fazekas-Levenshtein bound only"
        return rep
    system = adjacent_system(spec.n, spec.k, ell)
    tkk = system.largest_zero
    rep.t_kk_adjacent, rep.ell_strict = tkk, system.verdict.strict
    case_min = {}
    for case in (BELOW, ABOVE):
        mc = compute_mC(spec, ell, settings, use_ell=(case == BELOW))
        if case == BELOW:
            rep.mC, rep.mC_clamped = mc.m, mc.clamped
        start = t if case == BELOW else max(t, tkk)
        best = math.inf
        for j in range(mc.m - spec.n + 1):
            br = refine_branch(spec, ell, j, case, settings, m=mc.m, start=start)
            if case == ABOVE and br.bound < tkk:
                br.bound = tkk
            rep.branches.append(br)
            best = min(best, br.bound)
        case_min[case] = best
    worst = min(case_min.values())
    if math.isinf(worst):
        rep.note = "every branch is infeasible: no design with these parameters"
    rep.worst_case_bound = max(worst, t)
    return rep
