"""Generalized moments with their bound, and certified weighted trapezoidal
quadrature with an adaptive driver."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, ConvergenceError, DomainError, PreconditionError
from .fractal_algebra import Alpha, AlphaLike, FractalNumber, as_alpha, gamma, gamma_ratio
from .functions import (
    BaseMapped,
    GeneralizedFunction,
    MonomialSeries,
    WeightFunction,
    check_symmetry,
    lf_derivative,
    sup_norm,
)
from .inequalities import InequalityReport, Verdict, _verdict
from .lfi import IntegralScheme, SchemeKind, lfi

__all__ = [
    "Partition",
    "ProbabilityDensity",
    "QuadratureResult",
    "adaptive_quadrature",
    "cell_bound",
    "expectation_alpha",
    "r_moment",
    "verify_moment_bound",
    "weighted_trapezoid",
]


def _func(W) -> GeneralizedFunction:
    return W.func if isinstance(W, WeightFunction) else W


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbabilityDensity:
    p: GeneralizedFunction
    nu: float
    mu: float
    psi: FractalNumber = FractalNumber(0.0)
    omega: FractalNumber = FractalNumber(1.0)
    symmetric: bool = True
    grid: int = 513

    def __post_init__(self):
        if not self.nu < self.mu:
            raise DomainError("density interval needs nu < mu")
        if not (0.0 <= self.psi.base <= self.omega.base <= 1.0):
            raise ConfigurationError("density bounds need 0 <= psi <= omega <= 1")
        vals = self.p.base(np.linspace(self.nu, self.mu, self.grid))
        tol = 1e-12
        if np.any(vals < self.psi.base - tol) or np.any(vals > self.omega.base + tol):
            raise ConfigurationError("density leaves [psi, omega] on the verification grid")
        if self.symmetric and not check_symmetry(self.p, self.nu, self.mu):
            raise PreconditionError("density declared symmetric but is not")


def r_moment(p: ProbabilityDensity, r: float, alpha: AlphaLike,
             scheme: IntegralScheme = IntegralScheme()) -> FractalNumber:
    """Prefactored integral of gamma^{r alpha} p(gamma) over [nu, mu]."""
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r!r}")
    A = as_alpha(alpha)
    if float(r).is_integer() and isinstance(p.p, MonomialSeries):
        f = MonomialSeries.power(0.0, int(r)) * p.p
    else:
        f = BaseMapped(lambda x: x ** r * p.p._base(x), domain=p.p.domain)
    if scheme.kind is SchemeKind.EXACT_MONOMIAL:
        if not isinstance(f, MonomialSeries):
            raise ConfigurationError("exact moments need a monomial density and integer r")
        f = f.shift_origin(p.nu)
    return lfi(f, p.nu, p.mu, A, scheme).value


def expectation_alpha(p: ProbabilityDensity, alpha: AlphaLike,
                      scheme: IntegralScheme = IntegralScheme()) -> FractalNumber:
    return r_moment(p, 1, alpha, scheme)


def moment_bound_rhs(alpha: Alpha, r: float, m: float, nu: float, mu: float,
                     w_sup: FractalNumber) -> FractalNumber:
    """Closed-form right side of the moment bound."""
    A = alpha
    a = A.value
    inv_g = 1.0 / gamma(1.0 + a)
    c_r = gamma(r * a + 1.0) / gamma((r - 1.0) * a + 1.0)
    rho1, rho2 = gamma_ratio(1, A), gamma_ratio(2, A)
    ends = FractalNumber(nu ** (r - 1.0)) + FractalNumber(mu ** (r - 1.0))
    mid = FractalNumber(((nu + mu) / (2.0 * m)) ** (r - 1.0))
    brace = A.scale(ends, rho2) + FractalNumber(2.0 * m) * A.scale(mid, rho1 - rho2)
    return FractalNumber((mu - nu) ** 2 / 4.0) * A.scale(w_sup, inv_g * c_r) * brace


def verify_moment_bound(p: ProbabilityDensity, r: float, m: float, alpha: AlphaLike,
                        scheme: IntegralScheme = IntegralScheme()) -> InequalityReport:
    """|(nu^{r a} + mu^{r a})/2^a I[p] - E_r| against its closed-form bound."""
    A = as_alpha(alpha)
    nu, mu = p.nu, p.mu
    if not 0.0 < nu < mu:
        raise DomainError("the moment bound needs 0 < nu < mu")
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r!r}")
    if not (0.0 < m <= 1.0):
        raise ConfigurationError(f"m must lie in (0, 1], got {m!r}")
    if not check_symmetry(p.p, nu, mu):
        raise PreconditionError("the moment bound needs a symmetric density")
    i_p = lfi(p.p, nu, mu, A, scheme)
    e_r = r_moment(p, r, A, scheme)
    w_sup = sup_norm(p.p, nu, mu)
    ends = FractalNumber(nu ** r) + FractalNumber(mu ** r)
    lhs = abs(ends / FractalNumber(2.0) * i_p.value - e_r)
    rhs = moment_bound_rhs(A, r, m, nu, mu, w_sup)
    err = A.base_error(i_p.real, i_p.error) * ends.base / 2.0 + A.base_error(A.real_power(e_r), scheme.tol)
    budget = float(err + 80.0 * np.spacing(max(abs(lhs.base), abs(rhs.base), 1e-300)))
    margin = rhs.base - lhs.base
    return InequalityReport(
        theorem="moment_bound", sides=(("LHS", lhs), ("RHS", rhs)), margins=(margin,),
        verdict=_verdict([margin], budget, 1e-9), error_budget=budget, alpha=A.value, m=m,
        h={"kind": "power_alpha"}, interval=(nu, mu), scheme=scheme.kind.value,
        anchors={"I_p": scheme.kind.value, "E_r": scheme.kind.value}, metadata={"r": r})


# ---------------------------------------------------------------------------
# Certified quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    points: tuple[float, ...]
    tags: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        pts = tuple(float(x) for x in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2 or any(b <= a for a, b in zip(pts, pts[1:])):
            raise ConfigurationError("partition points must be strictly increasing with at least one cell")
        tags = self.tags
        if tags is None:
            tags = tuple(0.5 * (a + b) for a, b in zip(pts, pts[1:]))
        tags = tuple(float(t) for t in tags)
        if len(tags) != len(pts) - 1 or any(not (a <= t <= b) for t, a, b in zip(tags, pts, pts[1:])):
            raise ConfigurationError("each tag must lie inside its cell")
        object.__setattr__(self, "tags", tags)

    @classmethod
    def uniform(cls, nu: float, mu: float, cells: int) -> "Partition":
        return cls(tuple(np.linspace(nu, mu, cells + 1)))

    @property
    def cells(self) -> list[tuple[float, float]]:
        return list(zip(self.points, self.points[1:]))


@dataclass(frozen=True)
class QuadratureResult:
    value: FractalNumber
    certified_bound: FractalNumber
    reference: FractalNumber
    actual_error: FractalNumber
    reference_error: float
    partition: Partition
    cell_bounds: tuple[FractalNumber, ...]
    alpha: float
    converged: bool = True

    @property
    def certified(self) -> bool:
        """Actual error within the bound, allowing for the reference's own error
        and a few ulps of summation rounding."""
        scale = max(abs(self.value.base), abs(self.reference.base), 1e-300)
        slack = self.reference_error + 64.0 * len(self.cell_bounds) * float(np.spacing(scale))
        return self.actual_error.base <= self.certified_bound.base + slack

    def to_json(self) -> dict:
        A = Alpha(self.alpha)
        rp = A.real_power
        return {
            "value": rp(self.value),
            "certified_bound": rp(self.certified_bound),
            "reference": rp(self.reference),
            "actual_error": rp(self.actual_error),
            "cells": [{"a": a, "b": b, "tag": t, "bound": rp(cb)}
                      for (a, b), t, cb in zip(self.partition.cells, self.partition.tags, self.cell_bounds)],
            "converged": self.converged,
        }


def cell_bound(dG: MonomialSeries, W, a: float, b: float, alpha: Alpha, m: float = 1.0) -> FractalNumber:
    """Per-cell certified contribution using the cell's own sup of W."""
    c = (a + b) / (2.0 * m)
    if not bool(dG.in_domain(c)):
        raise DomainError(f"(x_j + x_(j+1))/(2m) = {c!r} lies outside G's domain {dG.domain}")
    A = alpha
    w_sup = sup_norm(_func(W), a, b, n=129)
    rho1, rho2 = gamma_ratio(1, A), gamma_ratio(2, A)
    brace = A.scale(abs(dG(a)) + abs(dG(b)), rho2) + FractalNumber(2.0 * m) * A.scale(abs(dG(c)), rho1 - rho2)
    return FractalNumber((b - a) ** 2 / 4.0) * A.scale(w_sup, 1.0 / gamma(1.0 + A.value)) * brace


def _cell_value(G, W, a, b, A, scheme):
    iw = lfi(_func(W), a, b, A, scheme).value
    return (G(a) + G(b)) / FractalNumber(2.0) * iw


def _cell_reference(G, W, a, b, A, scheme):
    prod = G * _func(W)
    ref_scheme = scheme.doubled()
    if ref_scheme.kind is SchemeKind.EXACT_MONOMIAL and isinstance(prod, MonomialSeries):
        prod = prod.shift_origin(a)
    res = lfi(prod, a, b, A, ref_scheme)
    return res.value, A.base_error(res.real, res.error)


def weighted_trapezoid(G: GeneralizedFunction, W, part: Partition, alpha: AlphaLike,
                       scheme: IntegralScheme = IntegralScheme(), m: float = 1.0) -> QuadratureResult:
    """Weighted trapezoid sum, its certified bound and a reference value.

    Per-cell values, references and bounds are combined with fractal sums.
    """
    A = as_alpha(alpha)
    if not (0.0 < m <= 1.0):
        raise ConfigurationError(f"m must lie in (0, 1], got {m!r}")
    dG = lf_derivative(G, A)
    f = _func(W)
    nu, mu = part.points[0], part.points[-1]
    if np.any(f.base(np.linspace(nu, mu, 257)) < 0.0):
        raise PreconditionError("W must be nonnegative")
    total = ref = bound = FractalNumber(0.0)
    ref_err = 0.0
    bounds = []
    for a, b in part.cells:
        total = total + _cell_value(G, W, a, b, A, scheme)
        r, e = _cell_reference(G, W, a, b, A, scheme)
        ref, ref_err = ref + r, ref_err + e
        cb = cell_bound(dG, W, a, b, A, m)
        bounds.append(cb)
        bound = bound + cb
    return QuadratureResult(total, bound, ref, abs(total - ref), ref_err, part, tuple(bounds), A.value)


def adaptive_quadrature(G: GeneralizedFunction, W, alpha: AlphaLike, m: float, target: float,
                        max_cells: int, nu: float = 0.0, mu: float = 1.0,
                        scheme: IntegralScheme = IntegralScheme()) -> QuadratureResult:
    """Bisect the worst cell until the summed bound (real reading) is <= target.

    Ties go to the lowest index.  Raises ConvergenceError carrying the best
    result if ``max_cells`` is reached first.
    """
    if not target > 0.0:
        raise ConfigurationError("target must be positive")
    if max_cells < 1:
        raise ConfigurationError("max_cells must be >= 1")
    A = as_alpha(alpha)
    dG = lf_derivative(G, A)
    pts = [float(nu), float(mu)]
    cbs = [cell_bound(dG, W, nu, mu, A, m)]

    def total():
        acc = FractalNumber(0.0)
        for cb in cbs:
            acc = acc + cb
        return acc

    while A.real_power(total()) > target:
        if len(cbs) >= max_cells:
            best = weighted_trapezoid(G, W, Partition(tuple(pts)), A, scheme, m)
            best = QuadratureResult(best.value, best.certified_bound, best.reference, best.actual_error,
                                    best.reference_error, best.partition, best.cell_bounds, best.alpha,
                                    converged=False)
            raise ConvergenceError(
                f"certified bound {A.real_power(total()):.3e} above target {target:.3e} with {len(cbs)} cells",
                best=best)
        j = int(np.argmax([cb.base for cb in cbs]))
        a, b = pts[j], pts[j + 1]
        c = 0.5 * (a + b)
        pts.insert(j + 1, c)
        cbs[j:j + 1] = [cell_bound(dG, W, a, c, A, m), cell_bound(dG, W, c, b, A, m)]
    return weighted_trapezoid(G, W, Partition(tuple(pts)), A, scheme, m)
