import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from aflkit.errors import PrecisionExhausted, SingularInput
from aflkit.localfield import (
    FElem,
    LocalFieldSpec,
    additive_character,
    det,
    eta,
    lattice_canonicalize,
    mat_inv,
    mat_mul,
    val_and_eta,
)

SPECS = [LocalFieldSpec(3), LocalFieldSpec(5), LocalFieldSpec(3, 2), LocalFieldSpec(3, 3)]


def elems(spec, vlo=-2, vhi=3):
    coord = st.builds(lambda a, v: Fraction(a) * Fraction(spec.p) ** v, st.integers(-20, 20), st.integers(vlo, vhi))
    return st.lists(coord, min_size=spec.f, max_size=spec.f).map(spec.elem)


def nonzero(spec, **kw):
    return elems(spec, **kw).filter(lambda x: not x.is_zero())


def test_val_and_eta_examples():
    s = LocalFieldSpec(3)
    assert val_and_eta(s.elem(9)) == (2, 1)
    assert val_and_eta(s.elem(Fraction(1, 3))) == (-1, -1)
    v, e = val_and_eta(s.zero())
    assert v == float("inf") and e is None


def test_truncated_zero_raises():
    s = LocalFieldSpec(3)
    x = s.elem(27).truncate(3)
    with pytest.raises(PrecisionExhausted):
        val_and_eta(x)
    assert val_and_eta(s.elem(9).truncate(3)) == (2, 1)


def test_additive_character_examples():
    s = LocalFieldSpec(3)
    assert additive_character(s.elem(5), 0) == 0
    assert additive_character(s.elem(Fraction(1, 3)), 0) == Fraction(1, 3)
    assert additive_character(s.elem(Fraction(1, 3)), 1) == 0
    assert additive_character(s.elem(Fraction(1, 9)), 1) == Fraction(1, 3)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"q{s.q}")
def test_character_level(spec):
    d = 1
    inner = spec.window_reps(-d, 0)
    assert all(additive_character(x, d) == 0 for x in inner)
    outer = spec.window_reps(-d - 1, 0)
    kernel = [x for x in outer if additive_character(x, d) == 0]
    # kernel of a nontrivial character on a group of order q*|inner| has index p
    assert len(kernel) * spec.p == len(outer)


def test_eps_is_nonsquare():
    for spec in SPECS:
        eps = spec.eps
        assert eps.valuation() == 0
        squares = {(x * x).reduce_mod(1).coords for x in spec.residues()}
        assert eps.reduce_mod(1).coords not in squares


def test_eps_odd_degree_is_smallest_integer_nonresidue():
    assert LocalFieldSpec(3).eps == LocalFieldSpec(3).elem(2)
    assert LocalFieldSpec(7).eps == LocalFieldSpec(7).elem(3)
    assert LocalFieldSpec(3, 3).eps == LocalFieldSpec(3, 3).elem(2)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"q{s.q}")
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_field_axioms_and_eta(spec, data):
    x = data.draw(nonzero(spec))
    y = data.draw(nonzero(spec))
    assert x * x.inverse() == spec.one()
    assert eta(x * y) == eta(x) * eta(y)
    assert (x * y).valuation() == x.valuation() + y.valuation()
    assert additive_character(x + y, 0) == (additive_character(x, 0) + additive_character(y, 0)) % 1


@pytest.mark.parametrize("spec", SPECS[:3], ids=lambda s: f"q{s.q}")
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_norms_have_even_valuation(spec, data):
    a = data.draw(elems(spec))
    b = data.draw(elems(spec))
    z = FElem(a, b)
    if z.is_zero():
        return
    assert z.norm().valuation() % 2 == 0
    assert eta(z.norm()) == 1
    assert z.norm().valuation() == 2 * z.valuation()


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_precision_monotonicity(data):
    spec = LocalFieldSpec(3)
    x = data.draw(nonzero(spec))
    y = data.draw(nonzero(spec))
    N = 6
    try:
        v = (x.truncate(N) * y.truncate(N)).valuation()
    except PrecisionExhausted:
        return
    assert (x.truncate(N + 5) * y.truncate(N + 5)).valuation() == v


def test_lattice_examples():
    s = LocalFieldSpec(3)
    o, z, p = s.one(), s.zero(), s.elem(3)
    L = lattice_canonicalize([[o, z], [z, o]])
    assert L.index_exp == 0 and L.basis == ((o, z), (z, o))
    L = lattice_canonicalize([[p, z], [o, o]])
    assert L.diag_exps == (1, 0) and L.index_exp == 1
    L = lattice_canonicalize([[p, z], [z, p]])
    assert L.index_exp == 2
    with pytest.raises(SingularInput):
        lattice_canonicalize([[o, o], [o, o]])


@pytest.mark.parametrize("spec", SPECS[:3], ids=lambda s: f"q{s.q}")
def test_canonical_form_is_basis_invariant(spec):
    rng = random.Random(7)
    for _ in range(15):
        cols = [[spec.elem([Fraction(rng.randint(-9, 9), 3 ** rng.randint(0, 1)) for _ in range(spec.f)]) for _ in range(3)] for _ in range(3)]
        if det(cols)._vlow == float("inf"):
            continue
        L = lattice_canonicalize(cols)
        # change of basis by a unimodular integer matrix plus an extra redundant column
        U = [[spec.one(), spec.elem(rng.randint(-4, 4)), spec.zero()], [spec.zero(), spec.one(), spec.zero()], [spec.elem(rng.randint(-4, 4)), spec.elem(2), spec.one()]]
        B = [[cols[j][i] for j in range(3)] for i in range(3)]
        BU = mat_mul(B, U)
        new_cols = [[BU[i][j] for i in range(3)] for j in range(3)] + [[c * spec.elem(5) for c in cols[0]]]
        assert lattice_canonicalize(new_cols).key() == L.key()
        assert lattice_canonicalize(L.columns()).key() == L.key()
        assert L.index_exp == det(B).valuation()


def test_matrix_inverse():
    s = LocalFieldSpec(5)
    m = [[s.elem(1), s.elem(2)], [s.elem(Fraction(1, 5)), s.elem(7)]]
    prod = mat_mul(m, mat_inv(m))
    assert prod == [[s.one(), s.zero()], [s.zero(), s.one()]]
