"""Type II / type I solvers, h-coefficients, multi-indices and paths."""
import json
import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from mopcd.errors import (DegenerateIndex, IllConditionedWarning, NonPerfectIndex, NotAnAtom,
                          ZeroNormalization)
from mopcd.mop import (MOPSolver, MultiIndex, Path, canonical_path, export_solution, h_coeff,
                       path_from_increments, type1, type2)
from mopcd.weights import DiscreteAtoms, GaussianDrift, WeightSystem, integrate
from mopcd.poly import Poly

from conftest import atoms_system
from oracles import atoms_type1, atoms_type2, gauss_moments, mixed_type1, mixed_type2

MU0 = math.sqrt(2 * math.pi) * math.exp(0.5)

# multiple Hermite (drifts +1, -1): integer coefficients from the mpmath oracle
HERMITE_P = {
    (1, 1): [-2, 0, 1],
    (2, 1): [2, -4, -1, 1],
    (2, 2): [6, 0, -8, 0, 1],
    (3, 2): [-6, 22, 8, -12, -1, 1],
}


@pytest.mark.parametrize("n", sorted(HERMITE_P))
def test_multiple_hermite_frozen(hermite2, n):
    p = type2(hermite2, n)
    assert p.is_monic() and p.degree == sum(n)
    for got, want in zip(p.to_array(len(HERMITE_P[n])), HERMITE_P[n]):
        assert got == pytest.approx(want, abs=1e-11)


def test_multiple_hermite_against_oracle_extended():
    ws = WeightSystem([GaussianDrift(1), GaussianDrift(-1)], precision="extended", dps=50)
    mom = [gauss_moments(1, 30), gauss_moments(-1, 30)]
    for n in [(3, 3), (4, 2), (5, 4)]:
        ref = mixed_type2(mom, n)
        got = type2(ws, n).coeffs
        assert max(abs(g - r) for g, r in zip(got, ref)) < 1e-35
        refA = mixed_type1(mom, n)
        gotA = type1(ws, n).a_polys
        for a, ra in zip(gotA, refA):
            assert max(abs(g - r) for g, r in zip(a.coeffs, ra)) < 1e-35 * max(1, abs(ra[-1]))


def test_type1_frozen(hermite2):
    t = type1(hermite2, (1, 0))
    assert float(t.a_polys[0][0]) == pytest.approx(1 / MU0, rel=1e-14)
    assert t.a_polys[1].is_zero()
    t = type1(hermite2, (2, 2))
    # 1 / (2 mu0) and 1 / (4 mu0) from the oracle
    assert [float(c) for c in t.a_polys[0].coeffs] == pytest.approx(
        [-0.12098536225957167, 0.060492681129785837], rel=1e-12)
    assert [float(c) for c in t.a_polys[1].coeffs] == pytest.approx(
        [0.12098536225957167, 0.060492681129785837], rel=1e-12)


def test_h_frozen(hermite2):
    assert h_coeff(hermite2, (1, 0), 1) == pytest.approx(MU0, rel=1e-14)
    assert h_coeff(hermite2, (2, 2), 1) == pytest.approx(8 * MU0, rel=1e-12)
    assert h_coeff(hermite2, (0, 0), 2) == pytest.approx(MU0, rel=1e-15)


def test_discrete_examples(atoms3):
    assert type2(atoms3, (1, 0)).coeffs == (Fraction(-1), Fraction(1))
    assert type2(atoms3, (1, 1)).coeffs == (Fraction(4, 9), Fraction(-19, 9), Fraction(1))
    assert type1(atoms3, (1, 0)).a_polys[0].coeffs == (Fraction(1, 3),)
    with pytest.raises(ZeroNormalization):
        h_coeff(atoms3, (2, 1), 1)


def test_type1_at_zero_index_is_input_error(hermite2):
    with pytest.raises(ValueError):
        type1(hermite2, (0, 0))


def test_non_perfect_index_detected(atoms3):
    with pytest.raises(NonPerfectIndex):
        type2(atoms3, (3, 1))


def test_q_on_discrete_requires_atom(atoms3):
    t = type1(atoms3, (1, 1))
    assert t(1) == t.a_polys[0](1) * 1 + t.a_polys[1](1) * 2
    with pytest.raises(NotAnAtom):
        t(Fraction(1, 2))


def test_ill_conditioned_warning(hermite2):
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        try:
            type2(hermite2, (6, 7))
        except NonPerfectIndex:
            pass
    assert any(issubclass(r.category, IllConditionedWarning) for r in rec)


def test_degenerate_minus(hermite2):
    with pytest.raises(DegenerateIndex):
        MOPSolver(hermite2).minus((2, 0), 2)


atom_specs = st.lists(
    st.tuples(st.integers(-3, 3), st.integers(1, 5)), min_size=5, max_size=7,
    unique_by=lambda t: t[0])


@settings(max_examples=30, deadline=None)
@given(atom_specs, st.integers(1, 4), st.integers(0, 2), st.integers(0, 2))
def test_exact_type2_orthogonality_property(atoms, r, n1, n2):
    """P_n from the package is orthogonal and agrees with a separate rational solve."""
    assume(n1 + n2 >= 1)
    second = [(x, w * (r + x + 4)) for x, w in atoms]  # a different positive weighting
    spec = [atoms, second]
    ws = atoms_system(spec)
    n = (n1, n2)
    try:
        p = type2(ws, n)
    except NonPerfectIndex:
        return
    assert list(p.coeffs) == atoms_type2(spec, n)
    for k, nk in enumerate(n, start=1):
        for j in range(nk):
            assert integrate(ws, k, p * Poly.monomial(j, Fraction(1))) == 0


@settings(max_examples=30, deadline=None)
@given(atom_specs, st.integers(0, 2), st.integers(0, 2))
def test_exact_type1_normalization_property(atoms, n1, n2):
    assume(n1 + n2 >= 1)
    second = [(x, w * (x + 5)) for x, w in atoms]
    spec = [atoms, second]
    ws = atoms_system(spec)
    n = MultiIndex((n1, n2))
    try:
        t = type1(ws, n)
    except (NonPerfectIndex, ZeroNormalization):
        return
    ref = atoms_type1(spec, n)
    for a, ra in zip(t.a_polys, ref):
        assert list(a.coeffs) == ra or (not ra and a.is_zero())
    moms = [t.moment(j) for j in range(n.total)]
    assert moms == [0] * (n.total - 1) + [1]


def test_multiindex_and_path():
    n = MultiIndex.parse("2, 1")
    assert n.total == 3 and n.step(2) == (2, 2)
    with pytest.raises(ValueError):
        MultiIndex((1, -1))
    p = canonical_path(n, "roundrobin")
    assert p.increments() == [1, 2, 1]
    assert canonical_path(n, "block").increments() == [1, 1, 2]
    assert path_from_increments(2, [2, 1, 1]).end == n
    with pytest.raises(ValueError):
        Path([(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        Path([(1, 0)])


def test_export_json(atoms3):
    doc = export_solution(MOPSolver(atoms3), (1, 1))
    assert doc["P"] == ["4/9", "-19/9", "1"]
    assert doc["A"] == [["-7/9"], ["1/3"]]
    assert doc["h"]["1,1:1"] is not None
    assert doc["h_errors"]["2,1:1"] == "ZeroNormalization"
    json.dumps(doc)


def test_discrete_system_from_floats_rejected_in_exact_mode():
    with pytest.raises(ValueError):
        WeightSystem([GaussianDrift(0)], scalar_mode="exact")
    ws = WeightSystem([DiscreteAtoms([(0, 1), (1, 1)])])
    assert not ws.field.exact
