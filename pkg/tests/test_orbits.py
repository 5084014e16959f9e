import random

import pytest

from aflkit.errors import NotRegularSemisimple, SingularInput
from aflkit.localfield import FElem, LocalFieldSpec, det, eta
from aflkit.orbits import (
    HermOrbitDatum,
    OrbitDatum,
    equal_invariants,
    group_action,
    hermitian_space_sign,
    identity_matrix,
    invariants_and_rs,
    match_rank1,
    random_gl,
    random_orbit,
    rank1_orbit,
    transfer_factor_and_side,
)
from aflkit.localfield import mat_mul

S3 = LocalFieldSpec(3)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("n", [1, 2])
def test_invariants_constant_on_orbits(seed, n):
    rng = random.Random(seed)
    x = random_orbit(S3, n, rng)
    h = random_gl(S3, n, rng)
    y = group_action(h, x)
    assert equal_invariants(x, y)
    assert y.is_symmetric()


@pytest.mark.parametrize("seed", range(5))
def test_action_is_a_right_action(seed):
    rng = random.Random(100 + seed)
    x = random_orbit(S3, 2, rng)
    h1, h2 = random_gl(S3, 2, rng), random_gl(S3, 2, rng)
    a = group_action(h2, group_action(h1, x))
    b = group_action(mat_mul(h1, h2), x)
    assert a.gamma_matrix() == b.gamma_matrix()
    assert list(a.u1) == list(b.u1) and list(a.u2) == list(b.u2)
    e = group_action(identity_matrix(S3, 2), x)
    assert list(e.u1) == list(x.u1)


@pytest.mark.parametrize("seed", range(8))
def test_transfer_factor_equivariance(seed):
    rng = random.Random(200 + seed)
    x = random_orbit(S3, 2, rng)
    h = random_gl(S3, 2, rng)
    w0, s0 = transfer_factor_and_side(x)
    w1, s1 = transfer_factor_and_side(group_action(h, x))
    assert w1 == eta(det(h)) * w0
    assert s1 == s0


@pytest.mark.parametrize("seed", range(4))
def test_alpha_self_reciprocal(seed):
    # gamma conj(gamma) = 1 forces alpha_n conj(alpha_i) = alpha_{n-i}
    x = random_orbit(S3, 2, random.Random(300 + seed))
    a = [c if isinstance(c, FElem) else FElem.from_base(c) for c in reversed(x.alpha)]
    n = len(a) - 1
    for i in range(n + 1):
        assert a[n] * a[i].conj() == a[n - i]


def test_rank1_invariants():
    x = rank1_orbit(S3, 1, 2)
    alpha, pairings, disc, rs = invariants_and_rs(x)
    assert rs
    assert disc.valuation() == 3
    assert transfer_factor_and_side(x) == (-1, -1)


def test_not_rs_raises():
    x = OrbitDatum(((FElem.from_base(S3.one()),),), (S3.one(),), (S3.zero(),))
    assert not x.is_rs()
    with pytest.raises(NotRegularSemisimple):
        transfer_factor_and_side(x)


def test_singular_h_raises():
    x = rank1_orbit(S3, 0, 0)
    with pytest.raises(SingularInput):
        group_action([[S3.zero()]], x)


def test_nonsymmetric_gamma_rejected():
    with pytest.raises(ValueError):
        OrbitDatum(((FElem.from_base(S3.elem(2)),),), (S3.one(),), (S3.one(),))


@pytest.mark.parametrize("v", range(-2, 5))
def test_rank1_side_is_parity_of_valuation(v):
    x = rank1_orbit(S3, 0, v)
    assert transfer_factor_and_side(x)[1] == (-1) ** (v % 2)


@pytest.mark.parametrize("vj", [0, 1])
def test_rank1_matching(vj):
    J = ((FElem.from_base(S3.elem(3**vj)),),)
    g = ((FElem.from_base(S3.one()),),)
    y = HermOrbitDatum(g, (FElem.from_base(S3.elem(3)),), J)
    x = match_rank1(y)
    assert list(x.pairings) == list(y.pairings)
    assert hermitian_space_sign(y) == (-1) ** vj
    # the space represents <u,u> only with matching sign
    assert transfer_factor_and_side(x)[1] == eta(y.pairings[0].re)
