import pytest

from whakit.core import StructureError, verify_axioms
from whakit.dynamical import (small_uqsl2, babelon_J, verify_abrr, abrr_solve, shifted_twist,
                              verify_dynamical_cocycle, twist_inverse, end_wha, build_dynamical_wha,
                              xu_theta)
from whakit.qtriang import verify_qt
from whakit.twisting import verify_twist


@pytest.fixture(scope="module")
def G():
    return small_uqsl2(3)


@pytest.fixture(scope="module")
def flagship():
    return build_dynamical_wha(3, 2)


def test_small_quantum_group(G):
    assert G.U.dim == 27
    assert verify_axioms(G.U).passed
    assert verify_qt(G.U, G.qt).passed


@pytest.mark.parametrize("ell", [1, 2, 4])
def test_ell_must_be_odd(ell):
    with pytest.raises(StructureError):
        small_uqsl2(ell)


@pytest.mark.parametrize("Lam", [2, 3, 5])
def test_babelon_twist_properties(G, Lam):
    T = babelon_J(G, Lam)
    assert all(c.passed for c in T.checks)
    assert verify_abrr(G, T).passed
    for lam in range(G.ell):
        assert abrr_solve(G, lam, Lam) == T(lam)
        Ji = twist_inverse(G, T(lam))
        assert G.mul2(T(lam), Ji) == G.one2()


def test_nongeneric_lambda(G):
    with pytest.raises(StructureError, match="not generic"):
        babelon_J(G, 1)


def test_shifted_cocycle(G):
    Js = shifted_twist(G, babelon_J(G, 2))
    assert all(c.passed for c in Js.checks)
    assert all(c.passed for c in verify_dynamical_cocycle(G, Js))


def test_end_wha_is_wha():
    for ell in (2, 3):
        assert verify_axioms(end_wha(ell)).passed


def test_canonical_theta_is_twist(flagship):
    D = flagship
    th = xu_theta(D.G, D.EndA, D.H)
    assert verify_twist(D.H, th).passed


@pytest.mark.slow
def test_flagship_wha_and_r(flagship):
    D = flagship
    assert D.HJ.dim == 243
    assert all(c.passed for c in D.checks)
    assert verify_axioms(D.HJ).passed
    assert verify_qt(D.HJ, D.qt).passed
