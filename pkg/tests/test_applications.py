import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate
from scipy.special import gamma as sp_gamma

from hmconvex.applications import (
    Partition,
    ProbabilityDensity,
    adaptive_quadrature,
    expectation_alpha,
    r_moment,
    verify_moment_bound,
    weighted_trapezoid,
)
from hmconvex.errors import ConfigurationError, ConvergenceError, DomainError, PreconditionError
from hmconvex.fractal_algebra import Alpha, FractalNumber
from hmconvex.functions import MonomialSeries
from hmconvex.inequalities import Verdict
from hmconvex.lfi import IntegralScheme, SchemeKind

ONE = MonomialSeries(0.0, [(0, 1.0)])
X2 = MonomialSeries.power(0.0, 2)
EXACT = IntegralScheme(SchemeKind.EXACT_MONOMIAL)


def uniform(nu=0.0, mu=1.0, level=1.0):
    return ProbabilityDensity(MonomialSeries(0.0, [(0, level)]), nu, mu)


def symmetric_quadratic(nu, mu, peak=1.0):
    # peak * 4 (x - nu)(mu - x) / (mu - nu)^2, symmetric on [nu, mu] and bounded by peak
    s = 4.0 * peak / (mu - nu) ** 2
    p = MonomialSeries(0.0, [(0, -s * nu * mu), (1, s * (nu + mu)), (2, -s)])
    return ProbabilityDensity(p, nu, mu)


# -- moments -----------------------------------------------------------------

def test_expectation_examples():
    assert expectation_alpha(uniform(), 1.0).base == pytest.approx(0.5, abs=1e-12)
    lin = ProbabilityDensity(MonomialSeries.power(0.0, 1), 0.0, 1.0, symmetric=False)
    assert expectation_alpha(lin, 1.0).base == pytest.approx(1 / 3, abs=1e-12)
    assert expectation_alpha(uniform(), 0.5, EXACT).base == pytest.approx(
        (sp_gamma(1.5) / sp_gamma(2.0)) ** 2, rel=1e-12)
    assert Alpha(0.5).real_power(expectation_alpha(uniform(), 0.5, EXACT)) == pytest.approx(0.8862269255, rel=1e-9)


def test_expectation_of_linear_density_p_equals_2x():
    # 2x leaves [0, 1] so the bounds check rejects it; half of it passes and scales linearly
    half = ProbabilityDensity(MonomialSeries.power(0.0, 1), 0.0, 1.0, symmetric=False)
    assert 2 * expectation_alpha(half, 1.0).base == pytest.approx(2 / 3, abs=1e-12)
    with pytest.raises(ConfigurationError):
        ProbabilityDensity(MonomialSeries.power(0.0, 1, 2.0), 0.0, 1.0, symmetric=False)


@pytest.mark.parametrize("a", [0.4, 0.7, 1.0])
def test_r_moment_zero_is_total_mass(a):
    got = Alpha(a).real_power(r_moment(uniform(), 0, a))
    assert got == pytest.approx(1.0 / sp_gamma(1 + a), rel=1e-10)


def test_r_moment_examples():
    assert r_moment(uniform(), 2, 1.0).base == pytest.approx(1 / 3, abs=1e-12)
    for a in (0.5, 1.0):
        for s in (IntegralScheme(), EXACT):
            assert r_moment(uniform(), 1, a, s) == expectation_alpha(uniform(), a, s)


def test_r_moment_non_integer_matches_quad():
    p = symmetric_quadratic(0.0, 1.0)
    ref = integrate.quad(lambda x: x ** 1.5 * 4 * x * (1 - x), 0, 1)[0]
    assert r_moment(p, 1.5, 1.0).base == pytest.approx(ref, rel=1e-9)
    with pytest.raises(ConfigurationError):
        r_moment(p, 1.5, 1.0, EXACT)
    with pytest.raises(DomainError):
        r_moment(p, -1, 1.0)


@settings(max_examples=20)
@given(st.floats(0.0, 4.0), st.floats(0.01, 2.0), st.sampled_from([0.5, 0.8, 1.0]))
def test_r_moment_monotone_in_r(r, dr, a):
    p = symmetric_quadratic(0.0, 1.0)
    assert r_moment(p, r + dr, a) <= r_moment(p, r, a)


def test_density_validation():
    with pytest.raises(PreconditionError):
        ProbabilityDensity(MonomialSeries.power(0.0, 1), 0.0, 1.0)
    with pytest.raises(ConfigurationError):
        ProbabilityDensity(ONE, 0.0, 1.0, psi=FractalNumber(0.5), omega=FractalNumber(0.4))
    with pytest.raises(DomainError):
        ProbabilityDensity(ONE, 1.0, 1.0)


# -- moment bound ------------------------------------------------------------

@pytest.mark.parametrize("a", [0.5, 1.0])
@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("make", [lambda: uniform(0.5, 2.0, 0.5), lambda: symmetric_quadratic(0.5, 2.0, 0.8)])
def test_moment_bound_family(a, r, make):
    rep = verify_moment_bound(make(), r, 1.0, a)
    assert rep.verdict is Verdict.HOLDS, (rep.sides, rep.margins)


def test_moment_bound_classical_hand_values():
    # alpha = 1, r = 2, uniform on [1, 2]: G = x^2 so G' = 2x
    # LHS = |5/2 - 7/3| = 1/6; RHS = (1/4)(2)[(1/3)(1+2) + 2(1/6)(3/2)] = 3/4
    rep = verify_moment_bound(uniform(1.0, 2.0), 2, 1.0, 1.0)
    assert rep.side("LHS").base == pytest.approx(1 / 6, abs=1e-12)
    assert rep.side("RHS").base == pytest.approx(0.75, abs=1e-12)


@pytest.mark.parametrize("a", [0.5, 1.0])
def test_moment_bound_homogeneous_in_density(a):
    # doubling the real reading of p means scaling its base by 2^(1/alpha)
    A = Alpha(a)
    one = verify_moment_bound(uniform(0.5, 2.0, 0.2), 2, 1.0, a)
    two = verify_moment_bound(uniform(0.5, 2.0, 0.2 * 2 ** (1 / a)), 2, 1.0, a)
    assert one.verdict is two.verdict
    for s1, s2 in zip(one.sides, two.sides):
        assert A.real_power(s2[1]) == pytest.approx(2 * A.real_power(s1[1]), rel=1e-9)


def test_moment_bound_preconditions():
    with pytest.raises(DomainError):
        verify_moment_bound(uniform(0.0, 1.0), 2, 1.0, 1.0)
    with pytest.raises(DomainError):
        verify_moment_bound(uniform(0.5, 1.0), 0.5, 1.0, 1.0)
    with pytest.raises(ConfigurationError):
        verify_moment_bound(uniform(0.5, 1.0), 2, 0.0, 1.0)
    skew = ProbabilityDensity(MonomialSeries.power(0.0, 1, 0.5), 0.5, 2.0, symmetric=False)
    with pytest.raises(PreconditionError):
        verify_moment_bound(skew, 2, 1.0, 1.0)


# -- weighted trapezoid ------------------------------------------------------

def test_single_cell_example():
    q = weighted_trapezoid(X2, ONE, Partition((0.0, 1.0)), 1.0)
    assert q.value.base == pytest.approx(0.5)
    assert q.reference.base == pytest.approx(1 / 3, abs=1e-12)
    assert q.actual_error.base == pytest.approx(1 / 6, abs=1e-12)
    assert q.certified_bound.base == pytest.approx(0.25, abs=1e-12)
    assert q.certified


def test_two_cell_example():
    # T = 0.0625 + 0.3125; cell bounds (1/16)(1/2) and (1/16)(3/2)
    q = weighted_trapezoid(X2, ONE, Partition.uniform(0.0, 1.0, 2), 1.0)
    assert q.value.base == pytest.approx(0.375, abs=1e-14)
    assert q.actual_error.base == pytest.approx(1 / 24, abs=1e-12)
    assert [c.base for c in q.cell_bounds] == pytest.approx([1 / 32, 3 / 32], abs=1e-14)
    assert q.certified_bound.base == pytest.approx(0.125, abs=1e-14)


@settings(max_examples=20)
@given(st.lists(st.floats(0.01, 1.0), min_size=1, max_size=6), st.floats(-2, 2), st.floats(-2, 2))
def test_linear_integrand_is_exact(widths, c0, c1):
    pts = np.concatenate([[0.0], np.cumsum(widths)])
    G = MonomialSeries(0.0, [(0, c0), (1, c1)])
    q = weighted_trapezoid(G, ONE, Partition(tuple(pts)), 1.0)
    assert q.actual_error.base <= 1e-12 * max(1.0, abs(q.reference.base))
    assert q.certified


@pytest.mark.parametrize("k", [2, 3, 4])
def test_uniform_refinement_halves_bound(k):
    G = MonomialSeries.power(0.0, k)
    prev = None
    for n in (2, 4, 8, 16):
        b = weighted_trapezoid(G, ONE, Partition.uniform(0.0, 1.0, n), 1.0).certified_bound.base
        if prev is not None:
            assert prev / b >= 1.9
        prev = b


@settings(max_examples=15)
@given(st.sampled_from([0.5, 0.8, 1.0]), st.integers(1, 6), st.floats(0.5, 1.0))
def test_certified_bound_contains_actual_error(a, n, m):
    G = MonomialSeries.from_dense(0.0, [0.0, 0.5, 1.0, 0.2])
    W = MonomialSeries(0.0, [(0, 0.2), (1, 1.0), (2, -1.0)])
    q = weighted_trapezoid(G, W, Partition.uniform(0.0, 1.0, n), a, m=m)
    assert q.certified_bound.base >= 0.0
    assert q.certified


def test_weighted_trapezoid_validation():
    with pytest.raises(ConfigurationError):
        Partition((0.0, 0.0))
    with pytest.raises(ConfigurationError):
        Partition((0.0, 1.0), tags=(2.0,))
    with pytest.raises(ConfigurationError):
        weighted_trapezoid(X2, ONE, Partition((0.0, 1.0)), 1.0, m=1.5)
    with pytest.raises(PreconditionError):
        weighted_trapezoid(X2, MonomialSeries(0.0, [(1, -1.0)]), Partition((0.0, 1.0)), 1.0)
    with pytest.raises(DomainError):
        weighted_trapezoid(X2.with_domain((0.0, 1.0)), ONE, Partition((0.0, 1.0)), 1.0, m=0.25)


def test_quadrature_json():
    js = weighted_trapezoid(X2, ONE, Partition.uniform(0.0, 1.0, 2), 0.5).to_json()
    assert set(js) == {"value", "certified_bound", "reference", "actual_error", "cells", "converged"}
    assert [set(c) for c in js["cells"]] == [{"a", "b", "tag", "bound"}] * 2
    json.dumps(js)


# -- adaptive driver ---------------------------------------------------------

def test_adaptive_reaches_target_classical():
    q = adaptive_quadrature(X2, ONE, 1.0, 1.0, 1e-3, max_cells=512)
    assert q.converged and q.certified_bound.base <= 1e-3
    assert abs(q.value.base - 1 / 3) <= q.certified_bound.base


def test_adaptive_flat_derivative_one_cell():
    q = adaptive_quadrature(MonomialSeries(0.0, [(0, 2.0)]), ONE, 1.0, 1.0, 1e-12, max_cells=4)
    assert len(q.partition.cells) == 1 and q.certified_bound.base == 0.0


def test_adaptive_linear_bound_does_not_vanish():
    # G = x has G' = 1, so the single-cell bound is (1/4)[(1/3)2 + 2(1/6)] = 1/4 even though T is exact
    G = MonomialSeries.power(0.0, 1)
    q = adaptive_quadrature(G, ONE, 1.0, 1.0, 0.25, max_cells=4)
    assert len(q.partition.cells) == 1 and q.actual_error.base <= 1e-15
    assert len(adaptive_quadrature(G, ONE, 1.0, 1.0, 0.1, max_cells=16).partition.cells) > 1


def test_adaptive_unreachable_carries_best():
    with pytest.raises(ConvergenceError) as info:
        adaptive_quadrature(X2, ONE, 1.0, 1.0, 1e-9, max_cells=8)
    best = info.value.best
    assert best is not None and not best.converged and len(best.partition.cells) == 8


def test_adaptive_tie_break_lowest_index():
    # G = x^2 centred on the interval gives equal bounds on both halves; the left one splits first
    G = MonomialSeries(0.0, [(0, 1.0), (1, -2.0), (2, 1.0)])  # (x - 1)^2 on [0, 2]
    with pytest.raises(ConvergenceError) as info:
        adaptive_quadrature(G, ONE, 1.0, 1.0, 1e-12, max_cells=3, nu=0.0, mu=2.0)
    assert info.value.best.partition.points == (0.0, 0.5, 1.0, 2.0)


def test_adaptive_validation():
    with pytest.raises(ConfigurationError):
        adaptive_quadrature(X2, ONE, 1.0, 1.0, 0.0, max_cells=4)
    with pytest.raises(ConfigurationError):
        adaptive_quadrature(X2, ONE, 1.0, 1.0, 1e-3, max_cells=0)
