import math

import numpy as np
import pytest
from hypothesis import given
from scipy import integrate

from morcamp.core import (DivergenceError, DomainError, InvalidInput,
                          PowerPiece, StepFunction, double_star,
                          integrate_power_against, log_edges, power_integral,
                          power_step, rearrange, tail_power,
                          tail_power_double_star)

from conftest import random_step, sample_sets, step_functions


@pytest.mark.parametrize("samples, edges, values", [
    ([(3, 0.5), (1, 0.5)], [0, 0.5, 1], [3, 1]),
    ([(2.5, 1.0)], [0, 1], [2.5]),
    ([(1, 0.2), (5, 0.3), (2, 0.5)], [0, 0.3, 0.8, 1], [5, 2, 1]),
])
def test_rearrange_examples(samples, edges, values):
    f = rearrange(samples)
    assert np.all(np.diff(f.values) <= 0.0)
    np.testing.assert_allclose(f.edges, edges, atol=1e-15)
    np.testing.assert_array_equal(f.values, values)


@pytest.mark.parametrize("samples", [
    [(-1, 0.5), (1, 0.5)],
    [(1, 0.0), (1, 1.0)],
    [(1, 0.5), (1, 0.4)],
    [],
])
def test_rearrange_rejects(samples):
    with pytest.raises(InvalidInput):
        rearrange(samples)


@given(sample_sets())
def test_equimeasurable(samples):
    f = rearrange(samples)
    # total measure at each value is preserved
    for v in {s[0] for s in samples}:
        want = math.fsum(w for x, w in samples if x == v)
        got = float(np.sum(f.widths[f.values == v]))
        assert got == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("f, t, want", [
    (StepFunction.constant(1.0), 0.5, 1.0),
    (StepFunction.indicator(0.25), 0.5, 0.5),
    (StepFunction.indicator(0.5, 2.0), 0.75, 4.0 / 3.0),
])
def test_double_star_examples(f, t, want):
    assert double_star(f, t) == pytest.approx(want, rel=1e-15)


@pytest.mark.parametrize("t", [0.0, 1.0, -0.1, 2.0])
def test_double_star_domain(t):
    with pytest.raises(DomainError):
        double_star(StepFunction.constant(), t)


@given(step_functions())
def test_double_star_dominates_and_decreases(f):
    t = np.linspace(1e-3, 0.999, 200)
    ds = double_star(f, t)
    star = f.values[np.clip(np.searchsorted(f.edges, t, side="right") - 1,
                            0, f.values.size - 1)]
    assert np.all(ds >= star * (1 - 1e-12) - 1e-12)
    assert np.all(np.diff(ds) <= 1e-9 * np.maximum(1.0, ds[:-1]))


def test_subadditivity_of_double_star(rng):
    edges = np.linspace(0, 1, 9)
    for _ in range(20):
        u = np.sort(rng.lognormal(size=8))[::-1]
        v = np.sort(rng.lognormal(size=8))[::-1]
        U = StepFunction(edges, u, True)
        V = StepFunction(edges, v, True)
        t = edges[1:-1]
        bound = double_star(U, t) + double_star(V, t)
        for _ in range(10):
            # adversarial placement: arbitrary equimeasurable permutations
            s = u[rng.permutation(8)] + v[rng.permutation(8)]
            W = rearrange(list(zip(s, np.diff(edges))))
            assert np.all(double_star(W, t) <= bound + 1e-12)
        # co-monotone placement attains the bound
        W = rearrange(list(zip(u + v, np.diff(edges))))
        np.testing.assert_allclose(double_star(W, t), bound, rtol=1e-12)


@pytest.mark.parametrize("f, piece, want", [
    (StepFunction.constant(), PowerPiece(1.0, -0.5), 2.0),
    (StepFunction.indicator(0.25), PowerPiece(1.0, 0.0), 0.25),
    (StepFunction.constant(), PowerPiece(1.0, -1.0, (math.exp(-2), 1.0)),
     2.0),
])
def test_integrate_power_examples(f, piece, want):
    assert integrate_power_against(f, piece) == pytest.approx(want,
                                                               rel=1e-14)


def test_integrate_power_divergence():
    with pytest.raises(DivergenceError):
        integrate_power_against(StepFunction.constant(), PowerPiece(1.0, -1.0))
    with pytest.raises(DivergenceError):
        power_integral(0.0, 1.0, -1.5)


@pytest.mark.parametrize("beta", [-0.9, -0.5, 0.0, 0.3, 2.0])
def test_integrate_power_matches_quad(rng, beta):
    for _ in range(5):
        f = random_step(rng)
        lo = float(rng.uniform(0, 0.3))
        hi = float(rng.uniform(0.5, 1.0))
        got = integrate_power_against(f, PowerPiece(1.7, beta, (lo, hi)))
        pts = [e for e in f.edges if lo < e < hi]

        def fn(s):
            i = min(np.searchsorted(f.edges, s, side="right") - 1,
                    f.values.size - 1)
            return 1.7 * s ** beta * f.values[i]

        ref, _ = integrate.quad(fn, lo, hi, points=pts or None, limit=200,
                                epsabs=0, epsrel=1e-12)
        assert got == pytest.approx(ref, rel=1e-9)


def test_power_integral_near_minus_one():
    a, b = 1e-3, 0.7
    for beta in (-1.0 - 1e-12, -1.0, -1.0 + 1e-12):
        assert power_integral(a, b, beta) == pytest.approx(math.log(b / a),
                                                           rel=1e-9)


def test_tail_power_against_integrate(rng):
    f = random_step(rng, 10, log_edges=True)
    r = np.array([1e-9, 1e-4, 0.01, 0.3, 0.9])
    for beta in (-1.5, -0.5, 0.25):
        want = [integrate_power_against(f, PowerPiece(1.0, beta, (x, 1.0)))
                for x in r]
        np.testing.assert_allclose(tail_power(f, beta, r), want, rtol=1e-12)


def test_tail_power_double_star_quad(rng):
    f = random_step(rng, 6)
    for r in (0.01, 0.2, 0.6):
        ref, _ = integrate.quad(lambda s: s ** -0.5 * double_star(f, s), r,
                                1 - 1e-15, points=[e for e in f.edges
                                                   if r < e < 1], limit=200)
        assert tail_power_double_star(f, -0.5, r) == pytest.approx(ref,
                                                                   rel=1e-8)


def test_log_edges_ratio():
    e = log_edges(1e-14, 1.0, 64)
    q = e[1:] / e[:-1]
    assert np.all(np.abs(q / q[0] - 1) < 1e-12)
    assert e[0] == 1e-14 and e[-1] == 1.0


def test_power_step_approximates_integral():
    f = power_step(-0.5, 0.0, 1.0)
    assert f.integral() == pytest.approx(2.0, rel=1e-9)
    assert np.all(np.diff(f.values) <= 0.0)


@pytest.mark.parametrize("edges, values", [
    ([0, 0.5], [1]),
    ([0, 0.6, 0.5, 1], [1, 1, 1]),
    ([0, 1], [-1]),
    ([0, 1], [np.inf]),
])
def test_step_function_invariants(edges, values):
    with pytest.raises(InvalidInput):
        StepFunction(np.array(edges, float), np.array(values, float))


def test_rearranged_flag_checked():
    with pytest.raises(InvalidInput):
        StepFunction(np.array([0, 0.5, 1.0]), np.array([1.0, 2.0]), True)
