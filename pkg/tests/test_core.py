"""Fields, polynomials, linear solves and weight systems."""
import json
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mopcd import linalg
from mopcd.errors import NonPerfectIndex, NotAnAtom, OrderOverflow
from mopcd.fields import EXACT, FLOAT, Field, parse_rational
from mopcd.poly import Poly, max_coeff_diff
from mopcd.weights import (DiscreteAtoms, GaussianDrift, JacobiInterval, WeightSystem,
                           gauss_legendre_grid, integrate, load_weight_system, moment,
                           moment_by_quadrature, weight_system_from_json, weight_value)

from oracles import gauss_moments

small_ints = st.integers(min_value=-6, max_value=6)


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(2) == 2
    with pytest.raises(TypeError):
        parse_rational(True)


def test_extended_field_precision():
    F = Field("extended", dps=40)
    third = F("1/3")
    assert abs(third * 3 - 1) < 1e-39
    assert F.is_negligible(F("1e-45"), 1, 1)
    assert not FLOAT.is_negligible(1e-10, 1, 1)
    assert EXACT.is_negligible(Fraction(0), 1, 1)


@given(st.lists(small_ints, min_size=1, max_size=6), st.lists(small_ints, min_size=1, max_size=6),
       small_ints)
def test_poly_ring_operations(a, b, x):
    p, q = Poly(tuple(map(Fraction, a))), Poly(tuple(map(Fraction, b)))
    x = Fraction(x)
    assert (p + q)(x) == p(x) + q(x)
    assert (p * q)(x) == p(x) * q(x)
    assert (p - q)(x) == p(x) - q(x)
    assert p.mulx()(x) == x * p(x)


@given(st.lists(small_ints, min_size=2, max_size=6), small_ints)
def test_quotient_at_divides(a, z):
    p = Poly(tuple(map(Fraction, a)))
    z = Fraction(z)
    q, pz = p.quotient_at(z)
    lin = Poly((-z, Fraction(1)))
    assert pz == p(z)
    assert max_coeff_diff(Poly(tuple(q)) * lin + Poly.constant(pz), p) == 0


def test_poly_trims_and_degree():
    assert Poly((1, 2, 0, 0)).degree == 1
    assert Poly.zero().degree == -1
    assert Poly((0, 0, 1)).is_monic()


@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10 ** 6))
def test_exact_solve_recovers_solution(n, seed):
    rng = np.random.default_rng(seed)
    mat = [[Fraction(int(v)) for v in row] for row in rng.integers(-5, 6, (n, n))]
    x = [Fraction(int(v), 3) for v in rng.integers(-9, 10, n)]
    rhs = [sum(r * v for r, v in zip(row, x)) for row in mat]
    try:
        sol = linalg.solve(EXACT, mat, rhs)
    except NonPerfectIndex:
        assert np.linalg.matrix_rank(np.array(mat, float)) < n
        return
    assert sol == x


def test_singular_float_solve_raises():
    with pytest.raises(NonPerfectIndex):
        linalg.solve(FLOAT, [[1.0, 2.0], [2.0, 4.0]], [1.0, 2.0])


# --- weights ---------------------------------------------------------------------

@pytest.mark.parametrize("a", [1, -1, 0, "1/2"])
def test_gaussian_moments_match_recurrence(a):
    ws = WeightSystem([GaussianDrift(a)], precision="extended", dps=50)
    ref = gauss_moments(Fraction(a), 25, dps=60)
    for j in range(25):
        assert abs(moment(ws, 1, j) - ref[j]) <= 1e-40 * abs(ref[j]) + 1e-40


def test_gaussian_moment_frozen_values(hermite2):
    # sqrt(2 pi) e^{1/2} and its multiples from the recurrence oracle
    mu0 = 4.1327313541224929
    assert moment(hermite2, 1, 0) == pytest.approx(mu0, rel=1e-15)
    assert moment(hermite2, 1, 4) == pytest.approx(10 * mu0, rel=1e-15)
    assert moment(hermite2, 2, 3) == pytest.approx(-4 * mu0, rel=1e-15)


def test_scaled_gaussian_against_quadrature():
    ws = WeightSystem([GaussianDrift("1/3", scale="3/2")])
    for j in (0, 3, 8):
        assert moment_by_quadrature(ws, 1, j) == pytest.approx(moment(ws, 1, j), rel=1e-11)


def test_jacobi_moments_against_quadrature():
    ws = WeightSystem([JacobiInterval(-1, 2, "1/2", "-1/3")])
    for j in (0, 1, 5):
        assert moment_by_quadrature(ws, 1, j) == pytest.approx(moment(ws, 1, j), rel=1e-10)


def test_atom_moments_are_exact_sums(atoms3):
    assert moment(atoms3, 2, 2) == Fraction(0 + 2 + 16)
    assert weight_value(atoms3, 2, 2) == 4
    with pytest.raises(NotAnAtom):
        weight_value(atoms3, 1, Fraction(1, 2))


def test_order_overflow():
    ws = WeightSystem([GaussianDrift(0, max_order=10)])
    with pytest.raises(OrderOverflow):
        moment(ws, 1, 11)


def test_discrete_hankel_rank_condition(atoms3):
    # three atoms: the 4x4 Hankel matrix of moments is singular, the 3x3 one is not
    mu = [moment(atoms3, 1, j) for j in range(8)]
    h3 = [[float(mu[i + j]) for j in range(3)] for i in range(3)]
    h4 = [[mu[i + j] for j in range(4)] for i in range(4)]
    assert abs(np.linalg.det(h3)) > 0.1
    with pytest.raises(NonPerfectIndex):
        linalg.solve(EXACT, h4, [1, 0, 0, 0])


def test_mixed_systems_rejected():
    with pytest.raises(ValueError):
        WeightSystem([GaussianDrift(0), DiscreteAtoms([(0, 1)])])
    with pytest.raises(ValueError):
        WeightSystem([GaussianDrift(0)], scalar_mode="exact")
    with pytest.raises(ValueError):
        GaussianDrift(0, scale=-1)


def test_integrate_polynomial_and_callable(hermite2):
    p = Poly((0.0, 0.0, 1.0))
    exact = integrate(hermite2, 1, p)
    numeric = integrate(hermite2, 1, lambda x: x * x)
    assert numeric == pytest.approx(exact, rel=1e-12)


def test_json_roundtrip(configs):
    ws = load_weight_system(configs / "atoms3.json")
    assert ws.field.exact and ws.m == 2
    again = weight_system_from_json(json.dumps(ws.to_json()))
    assert moment(again, 2, 3) == moment(ws, 2, 3)
    jp = load_weight_system(configs / "jacobi_pineiro.json")
    assert jp.measure(2).beta == Fraction(7, 10)


def test_gauss_legendre_grid_integrates_mass(hermite2):
    xs, w = gauss_legendre_grid(hermite2)
    total = float(np.dot(w, np.exp(-xs * xs / 2 + xs)))
    assert total == pytest.approx(math.sqrt(2 * math.pi) * math.exp(0.5), rel=1e-13)


@settings(max_examples=25)
@given(st.integers(min_value=0, max_value=12))
def test_extended_moment_matches_mpmath_quad(j):
    ws = WeightSystem([GaussianDrift(-1)], precision="extended", dps=30)
    with mpmath.workdps(30):
        ref = mpmath.quad(lambda x: x ** j * mpmath.exp(-x * x / 2 - x), [-mpmath.inf, -1, mpmath.inf])
    assert abs(moment(ws, 1, j) - ref) <= 1e-25 * max(1, abs(ref))
