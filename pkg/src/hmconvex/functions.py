"""Function representations, the (h, m)-convexity checker and the
local fractional derivative.

All functions are R^alpha-valued and are evaluated on bases: ``f.base(x)``
returns the base of ``f(x)`` and accepts scalars or numpy arrays.  Calling
``f(x)`` on a scalar wraps the result in a :class:`FractalNumber`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.special import comb

from .errors import (
    ConfigurationError,
    DomainError,
    UnsupportedRepresentationError,
)
from .fractal_algebra import Alpha, AlphaLike, FractalNumber, as_alpha, gamma

__all__ = [
    "BaseMapped",
    "CheckResult",
    "CheckVerdict",
    "ConvexityParams",
    "GeneralizedFunction",
    "HFunction",
    "HKind",
    "MonomialSeries",
    "SamplerConfig",
    "Tabulated",
    "WeightFunction",
    "check_symmetry",
    "eval_at",
    "is_hm_convex",
    "lf_derivative",
    "sup_norm",
]

_DOMAIN_SLACK = 1e-12


def _coerce_base(c) -> float:
    return c.base if isinstance(c, FractalNumber) else float(c)


class GeneralizedFunction:
    """Base class.  Subclasses implement :meth:`_base` on numpy arrays."""

    domain: Optional[tuple[float, float]] = None

    def _base(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def in_domain(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.domain is None:
            return np.ones(x.shape, dtype=bool)
        lo, hi = self.domain
        tol = _DOMAIN_SLACK * max(1.0, abs(lo), abs(hi))
        return (x >= lo - tol) & (x <= hi + tol)

    def base(self, x):
        """Base values at ``x``; raises DomainError outside the domain."""
        arr = np.asarray(x, dtype=float)
        ok = self.in_domain(arr)
        if not np.all(ok):
            bad = arr[~ok].ravel()[0] if arr.ndim else float(arr)
            raise DomainError(f"x = {bad!r} lies outside the domain {self.domain}")
        out = self._base(arr)
        return float(out) if np.ndim(x) == 0 else out

    def base_masked(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Base values with NaN where ``x`` is outside the domain, plus the mask."""
        x = np.asarray(x, dtype=float)
        ok = self.in_domain(x)
        out = np.full(x.shape, np.nan)
        if np.any(ok):
            out[ok] = self._base(x[ok])
        return out, ok

    def __call__(self, x: float) -> FractalNumber:
        return FractalNumber(self.base(float(x)))

    # -- combinators -----------------------------------------------------
    def __add__(self, other):
        other = _as_function(other)
        return _Pointwise(np.add, self, other)

    def __radd__(self, other):
        return _as_function(other) + self

    def __sub__(self, other):
        return self + (-1.0) * _as_function(other)

    def __mul__(self, other):
        other = _as_function(other)
        return _Pointwise(np.multiply, self, other)

    def __rmul__(self, other):
        return _as_function(other) * self

    def __neg__(self):
        return (-1.0) * self

    def compose_affine(self, p: float, q: float) -> "GeneralizedFunction":
        """x -> f(p + q x)."""
        return _Affine(self, p, q)

    def rescaled(self, m: float) -> "GeneralizedFunction":
        """x -> f(x / m)."""
        return self.compose_affine(0.0, 1.0 / m)

    def abs_power(self, q: float) -> "GeneralizedFunction":
        """x -> |f(x)|^q with the power taken on bases."""
        return BaseMapped(lambda x, f=self, q=q: np.abs(f._base(x)) ** q, domain=self.domain)


def _as_function(obj) -> GeneralizedFunction:
    if isinstance(obj, GeneralizedFunction):
        return obj
    if isinstance(obj, (FractalNumber, int, float, np.floating)):
        return MonomialSeries(0.0, [(0, _coerce_base(obj))])
    raise TypeError(f"cannot treat {type(obj).__name__} as a function")


def _intersect(d1, d2):
    if d1 is None:
        return d2
    if d2 is None:
        return d1
    lo, hi = max(d1[0], d2[0]), min(d1[1], d2[1])
    if lo > hi:
        raise DomainError(f"domains {d1} and {d2} do not overlap")
    return (lo, hi)


class _Pointwise(GeneralizedFunction):
    def __init__(self, op, f: GeneralizedFunction, g: GeneralizedFunction):
        self.op, self.f, self.g = op, f, g
        self.domain = _intersect(f.domain, g.domain)

    def _base(self, x):
        return self.op(self.f._base(x), self.g._base(x))


class _Affine(GeneralizedFunction):
    def __init__(self, f: GeneralizedFunction, p: float, q: float):
        if q == 0.0:
            raise ConfigurationError("affine composition needs a nonzero slope")
        self.f, self.p, self.q = f, float(p), float(q)
        if f.domain is None:
            self.domain = None
        else:
            ends = sorted(((f.domain[0] - p) / q, (f.domain[1] - p) / q))
            self.domain = (ends[0], ends[1])

    def _base(self, x):
        return self.f._base(self.p + self.q * x)


# ---------------------------------------------------------------------------
# Generalized monomial series
# ---------------------------------------------------------------------------

class MonomialSeries(GeneralizedFunction):
    """sum_k c_k (x - origin)^{k alpha}, stored as base coefficients c_k."""

    def __init__(self, origin: float, terms: Iterable[tuple[int, object]], domain=None):
        self.origin = float(origin)
        acc: dict[int, float] = {}
        for k, c in terms:
            if int(k) != k or k < 0:
                raise ConfigurationError(f"monomial exponent must be a nonnegative integer, got {k!r}")
            acc[int(k)] = acc.get(int(k), 0.0) + _coerce_base(c)
        self.coeffs: tuple[tuple[int, float], ...] = tuple(sorted((k, c) for k, c in acc.items() if c != 0.0))
        self.domain = None if domain is None else (float(domain[0]), float(domain[1]))

    @classmethod
    def power(cls, origin: float, k: int, coeff: float = 1.0) -> "MonomialSeries":
        return cls(origin, [(k, coeff)])

    @classmethod
    def from_dense(cls, origin: float, dense: Sequence[float], domain=None) -> "MonomialSeries":
        return cls(origin, list(enumerate(dense)), domain=domain)

    @property
    def degree(self) -> int:
        return self.coeffs[-1][0] if self.coeffs else 0

    def dense(self) -> np.ndarray:
        out = np.zeros(self.degree + 1)
        for k, c in self.coeffs:
            out[k] = c
        return out

    def _base(self, x):
        d = self.dense()
        # Horner on ascending coefficients
        y = np.zeros_like(np.asarray(x, dtype=float)) + d[-1]
        u = np.asarray(x, dtype=float) - self.origin
        for c in d[-2::-1]:
            y = y * u + c
        return y

    def with_domain(self, domain) -> "MonomialSeries":
        return MonomialSeries(self.origin, self.coeffs, domain=domain)

    def shift_origin(self, new_origin: float) -> "MonomialSeries":
        """Re-expand about ``new_origin`` (Taylor shift on bases)."""
        d = self.dense()
        s = float(new_origin) - self.origin
        n = len(d)
        out = np.zeros(n)
        for k in range(n):
            if d[k] == 0.0:
                continue
            for j in range(k + 1):
                out[j] += d[k] * comb(k, j, exact=True) * s ** (k - j)
        return MonomialSeries.from_dense(new_origin, out, domain=self.domain)

    def compose_affine(self, p: float, q: float) -> "MonomialSeries":
        if q == 0.0:
            raise ConfigurationError("affine composition needs a nonzero slope")
        # c_k (p + q x - o)^k = c_k q^k (x - (o - p)/q)^k
        new_origin = (self.origin - p) / q
        terms = [(k, c * q ** k) for k, c in self.coeffs]
        dom = None
        if self.domain is not None:
            ends = sorted(((self.domain[0] - p) / q, (self.domain[1] - p) / q))
            dom = (ends[0], ends[1])
        return MonomialSeries(new_origin, terms, domain=dom)

    def __add__(self, other):
        if isinstance(other, (FractalNumber, int, float, np.floating)):
            other = MonomialSeries(self.origin, [(0, _coerce_base(other))])
        if isinstance(other, MonomialSeries):
            o = other.shift_origin(self.origin) if other.origin != self.origin else other
            return MonomialSeries(self.origin, list(self.coeffs) + list(o.coeffs),
                                  domain=_intersect(self.domain, other.domain))
        return super().__add__(other)

    def __mul__(self, other):
        if isinstance(other, (FractalNumber, int, float, np.floating)):
            c = _coerce_base(other)
            return MonomialSeries(self.origin, [(k, c * v) for k, v in self.coeffs], domain=self.domain)
        if isinstance(other, MonomialSeries):
            o = other.shift_origin(self.origin) if other.origin != self.origin else other
            prod = np.convolve(self.dense(), o.dense())
            return MonomialSeries.from_dense(self.origin, prod, domain=_intersect(self.domain, other.domain))
        return super().__mul__(other)

    def __pow__(self, n: int) -> "MonomialSeries":
        if int(n) != n or n < 0:
            raise ConfigurationError("series powers must be nonnegative integers")
        out = MonomialSeries(self.origin, [(0, 1.0)], domain=self.domain)
        for _ in range(int(n)):
            out = out * self
        return out

    def __repr__(self):
        return f"MonomialSeries(origin={self.origin!r}, terms={list(self.coeffs)!r})"


class BaseMapped(GeneralizedFunction):
    """x -> (f(x))^alpha, i.e. the base at x is ``f(x)``.

    ``f`` should accept numpy arrays; scalar-only callables are vectorized
    automatically.
    """

    def __init__(self, f: Callable, domain=None):
        self.f = f
        self.domain = None if domain is None else (float(domain[0]), float(domain[1]))
        self._vectorized: Optional[bool] = None

    def _base(self, x):
        x = np.asarray(x, dtype=float)
        if self._vectorized is not False:
            try:
                y = np.asarray(self.f(x), dtype=float)
                if y.shape == x.shape:
                    self._vectorized = True
                    return y
                if y.ndim == 0:
                    return np.full(x.shape, float(y))
            except (TypeError, ValueError):
                pass
            self._vectorized = False
        return np.vectorize(lambda t: float(self.f(float(t))), otypes=[float])(x)


class Tabulated(GeneralizedFunction):
    """Piecewise-linear interpolation of base values on a grid."""

    def __init__(self, grid: Sequence[float], values: Sequence[object]):
        g = np.asarray(grid, dtype=float)
        v = np.asarray([_coerce_base(c) for c in values], dtype=float)
        if g.ndim != 1 or g.size < 2 or g.shape != v.shape:
            raise ConfigurationError("Tabulated needs matching 1-D grid and values of length >= 2")
        if np.any(np.diff(g) <= 0):
            raise ConfigurationError("Tabulated grid must be strictly increasing")
        self.grid, self.values = g, v
        self.domain = (float(g[0]), float(g[-1]))

    def _base(self, x):
        return np.interp(x, self.grid, self.values)


def eval_at(f: GeneralizedFunction, x: float) -> FractalNumber:
    return f(x)


def lf_derivative(f: GeneralizedFunction, alpha: AlphaLike) -> MonomialSeries:
    """Local fractional derivative of a generalized monomial series.

    (x - o)^{k alpha} maps to Gamma(1+k alpha)/Gamma(1+(k-1) alpha) times
    (x - o)^{(k-1) alpha}; the Gamma ratio multiplies the real reading, so on
    bases it enters raised to 1/alpha.
    """
    if not isinstance(f, MonomialSeries):
        raise UnsupportedRepresentationError(
            f"lf_derivative needs a MonomialSeries, got {type(f).__name__}"
        )
    a = as_alpha(alpha).value
    terms = []
    for k, c in f.coeffs:
        if k == 0:
            continue
        ratio = gamma(1.0 + k * a) / gamma(1.0 + (k - 1) * a)
        terms.append((k - 1, c * ratio ** (1.0 / a)))
    return MonomialSeries(f.origin, terms, domain=f.domain)


# ---------------------------------------------------------------------------
# h functions
# ---------------------------------------------------------------------------

class HKind(str, Enum):
    POWER_ALPHA = "power_alpha"
    POWER_S_ALPHA = "power_s_alpha"
    CONSTANT = "constant"
    CUSTOM = "custom"


class HFunction(GeneralizedFunction):
    """The weight h on [0, 1] in the (h, m)-convexity inequality."""

    def __init__(self, kind: HKind | str = HKind.POWER_ALPHA, s: float = 1.0,
                 fn: Optional[Callable] = None):
        self.kind = HKind(kind)
        self.s = float(s)
        self.fn = fn
        self.domain = (0.0, 1.0)
        if self.kind is HKind.POWER_S_ALPHA and not (0.0 < self.s <= 1.0):
            raise ConfigurationError(f"h = gamma^(s alpha) needs s in (0, 1], got {s!r}")
        if self.kind is HKind.CUSTOM:
            if fn is None:
                raise ConfigurationError("custom h needs a callable")
            probe = self._base(np.linspace(0.0, 1.0, 257)[1:-1])
            if np.any(probe < 0.0) or not np.any(probe > 0.0):
                raise ConfigurationError("h must be nonnegative on (0,1) and not identically zero")

    @classmethod
    def power_alpha(cls):
        return cls(HKind.POWER_ALPHA)

    @classmethod
    def power_s_alpha(cls, s: float):
        return cls(HKind.POWER_S_ALPHA, s=s)

    @classmethod
    def constant(cls):
        return cls(HKind.CONSTANT)

    @classmethod
    def custom(cls, fn: Callable):
        return cls(HKind.CUSTOM, fn=fn)

    def _base(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind is HKind.POWER_ALPHA:
            return x.copy()
        if self.kind is HKind.POWER_S_ALPHA:
            return np.abs(x) ** self.s
        if self.kind is HKind.CONSTANT:
            return np.ones_like(x)
        out = np.vectorize(lambda t: _coerce_base(self.fn(float(t))), otypes=[float])(x)
        return out

    def series(self) -> Optional[MonomialSeries]:
        """h as a monomial series about 0 when it is one."""
        if self.kind is HKind.POWER_ALPHA or (self.kind is HKind.POWER_S_ALPHA and self.s == 1.0):
            return MonomialSeries(0.0, [(1, 1.0)], domain=self.domain)
        if self.kind is HKind.CONSTANT:
            return MonomialSeries(0.0, [(0, 1.0)], domain=self.domain)
        return None

    def reflected_series(self) -> Optional[MonomialSeries]:
        """gamma -> h(1 - gamma) as a monomial series about 0."""
        s = self.series()
        return None if s is None else s.compose_affine(1.0, -1.0).shift_origin(0.0)

    def compose(self, p: float, q: float) -> GeneralizedFunction:
        """x -> h(p + q x), as a series when possible."""
        s = self.series()
        return s.compose_affine(p, q) if s is not None else self.compose_affine(p, q)

    def describe(self) -> dict:
        d = {"kind": self.kind.value}
        if self.kind is HKind.POWER_S_ALPHA:
            d["s"] = self.s
        return d

    def __repr__(self):
        return f"HFunction({self.describe()})"


# ---------------------------------------------------------------------------
# Weights and parameters
# ---------------------------------------------------------------------------

def check_symmetry(W, nu: float, mu: float, tol: float = 1e-9, n: int = 257) -> bool:
    """True iff |W(x) - W(nu + mu - x)| <= tol on an ``n``-point grid."""
    if not nu < mu:
        raise DomainError("check_symmetry needs nu < mu")
    f = W.func if isinstance(W, WeightFunction) else W
    x = np.linspace(nu, mu, n)
    return bool(np.all(np.abs(f.base(x) - f.base(nu + mu - x)) <= tol))


def _golden_max(fun: Callable[[float], float], lo: float, hi: float, iters: int = 80) -> tuple[float, float]:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = fun(d)
    return (c, fc) if fc >= fd else (d, fd)


def sup_norm(W, nu: float, mu: float, n: int = 1025) -> FractalNumber:
    """sup of W over [nu, mu]: grid maximum tightened by golden-section ascent."""
    if not nu < mu:
        raise DomainError("sup_norm needs nu < mu")
    f = W.func if isinstance(W, WeightFunction) else W
    x = np.linspace(nu, mu, n)
    y = f.base(x)
    i = int(np.argmax(y))
    best = float(y[i])
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, n - 1)]
    if hi > lo:
        _, fx = _golden_max(lambda t: float(f.base(t)), lo, hi)
        best = max(best, fx)
    return FractalNumber(best)


@dataclass(frozen=True)
class WeightFunction:
    """A nonnegative weight on [nu, mu], symmetric about the midpoint."""

    func: GeneralizedFunction
    nu: float
    mu: float
    tol: float = 1e-9
    require_symmetric: bool = True

    def __post_init__(self):
        if not self.nu < self.mu:
            raise DomainError("weight interval needs nu < mu")
        x = np.linspace(self.nu, self.mu, 513)
        if np.any(self.func.base(x) < -self.tol):
            raise ConfigurationError("weight must be nonnegative on its interval")
        if self.require_symmetric and not check_symmetry(self.func, self.nu, self.mu, self.tol):
            raise ConfigurationError("weight is not symmetric about the midpoint")

    def base(self, x):
        return self.func.base(x)

    def __call__(self, x):
        return self.func(x)


@dataclass(frozen=True)
class ConvexityParams:
    h: HFunction
    m: float
    alpha: Alpha
    b: float
    allow_m_zero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        lo_ok = self.m >= 0.0 if self.allow_m_zero else self.m > 0.0
        if not (lo_ok and self.m <= 1.0):
            raise ConfigurationError(f"m must lie in (0, 1], got {self.m!r}")
        if not self.b > 0.0:
            raise ConfigurationError(f"domain bound b must be positive, got {self.b!r}")


# ---------------------------------------------------------------------------
# Convexity checker
# ---------------------------------------------------------------------------

class CheckVerdict(str, Enum):
    NO_COUNTEREXAMPLE = "NoCounterexampleFound"
    COUNTEREXAMPLE = "Counterexample"


@dataclass(frozen=True)
class SamplerConfig:
    grid: int = 64
    samples: int = 100_000
    seed: int = 0
    tol: float = 1e-9
    refine_iters: int = 60
    chunk: int = 1 << 20


@dataclass(frozen=True)
class CheckResult:
    verdict: CheckVerdict
    witness: Optional[tuple[float, float, float]]
    margin: FractalNumber
    samples: int
    inconclusive: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict is CheckVerdict.NO_COUNTEREXAMPLE


def convexity_margin(f: GeneralizedFunction, p: ConvexityParams, nu, mu, g):
    """h(g) f(nu) + m h(1-g) f(mu) - f(g nu + m (1-g) mu) on bases.

    Returns (margin, ok) where ``ok`` flags probes inside every domain.
    """
    nu, mu, g = (np.asarray(a, dtype=float) for a in (nu, mu, g))
    pt = g * nu + p.m * (1.0 - g) * mu
    fn, ok1 = f.base_masked(nu)
    fm, ok2 = f.base_masked(mu)
    fp, ok3 = f.base_masked(pt)
    hg = p.h._base(g)
    h1 = p.h._base(1.0 - g)
    margin = hg * fn + p.m * h1 * fm - fp
    return margin, ok1 & ok2 & ok3


def probe_set(p: ConvexityParams, sampler: SamplerConfig):
    """Deterministic grid plus seeded uniform samples over [0,b]^2 x [0,1]."""
    n = sampler.grid
    ax = np.linspace(0.0, p.b, n)
    gx = np.linspace(0.0, 1.0, n)
    rng = np.random.default_rng(sampler.seed)
    rs = rng.random((sampler.samples, 3))
    rs[:, 0] *= p.b
    rs[:, 1] *= p.b
    return ax, gx, rs


def _refine(f, p, start, best_margin, iters):
    """Coordinate pattern search that lowers the margin near ``start``."""
    pt = np.array(start, dtype=float)
    lo = np.array([0.0, 0.0, 0.0])
    hi = np.array([p.b, p.b, 1.0])
    step = (hi - lo) / 64.0
    cur = best_margin
    for _ in range(iters):
        improved = False
        for d in range(3):
            for sgn in (1.0, -1.0):
                cand = pt.copy()
                cand[d] = min(max(cand[d] + sgn * step[d], lo[d]), hi[d])
                mg, ok = convexity_margin(f, p, cand[0], cand[1], cand[2])
                if bool(ok) and float(mg) < cur:
                    pt, cur, improved = cand, float(mg), True
        if not improved:
            step = step / 2.0
            if np.all(step < 1e-12 * np.maximum(hi, 1.0)):
                break
    return tuple(float(v) for v in pt), cur


def is_hm_convex(f: GeneralizedFunction, p: ConvexityParams,
                 sampler: SamplerConfig = SamplerConfig()) -> CheckResult:
    """Search for a violation of the generalized (h, m)-convexity inequality.

    Probes a ``grid^3`` lattice and ``samples`` seeded random points of
    (nu, mu, gamma) in [0,b]^2 x [0,1], then refines around the worst
    margin.  A Counterexample is only declared when the refined margin is
    below ``-tol``.
    """
    ax, gx, rs = probe_set(p, sampler)
    worst, witness, count, bad = np.inf, None, 0, 0

    def absorb(nu, mu, g):
        nonlocal worst, witness, count, bad
        mg, ok = convexity_margin(f, p, nu, mu, g)
        count += int(mg.size)
        bad += int(np.count_nonzero(~ok))
        if not np.any(ok):
            return
        mg = np.where(ok, mg, np.inf)
        i = int(np.argmin(mg))
        if mg.flat[i] < worst:
            worst = float(mg.flat[i])
            witness = (float(np.broadcast_to(nu, mg.shape).flat[i]),
                       float(np.broadcast_to(mu, mg.shape).flat[i]),
                       float(np.broadcast_to(g, mg.shape).flat[i]))

    n = ax.size
    per_slice = n * gx.size
    rows = max(1, sampler.chunk // max(per_slice, 1))
    MU, G = np.meshgrid(ax, gx, indexing="ij")
    for start in range(0, n, rows):
        nu = ax[start:start + rows][:, None, None]
        absorb(nu, MU[None, :, :], G[None, :, :])
    for start in range(0, rs.shape[0], sampler.chunk):
        blk = rs[start:start + sampler.chunk]
        absorb(blk[:, 0], blk[:, 1], blk[:, 2])

    if witness is None:
        return CheckResult(CheckVerdict.NO_COUNTEREXAMPLE, None, FractalNumber(0.0), count, bad)
    witness, worst = _refine(f, p, witness, worst, sampler.refine_iters)
    verdict = CheckVerdict.COUNTEREXAMPLE if worst < -sampler.tol else CheckVerdict.NO_COUNTEREXAMPLE
    return CheckResult(verdict, witness, FractalNumber(worst), count, bad)
