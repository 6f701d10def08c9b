import pytest
from hypothesis import given, strategies as st

from whakit.constructors import (kG2, kZ, sweedler, pair_groupoid, cyclic_group, groupoid_from_dict,
                                 groupoid_algebra, FiniteGroupoid, split_commutative, matrix_algebra,
                                 separable_data, elementary_wha, elementary_twist_data, diag_q,
                                 normalize_q, transformation_wha, swap_action_k2, trivial_action,
                                 cyclic_r_matrix)
from whakit.core import verify_axioms, StructureError
from whakit.exactmath import SparseTensor, Scalar, einsum
from whakit.qtriang import verify_qt


@pytest.mark.parametrize("B", [split_commutative(2), split_commutative(3), matrix_algebra(2)],
                         ids=["k2", "k3", "M2"])
def test_elementary_untwisted(B):
    H = elementary_wha(B)
    assert H.dim == B.dim ** 2
    assert verify_axioms(H).passed


@given(st.integers(2, 6))
def test_elementary_with_diagonal_q(t):
    H = elementary_wha(matrix_algebra(2), diag_q(t))
    assert verify_axioms(H).passed


def test_q_must_be_normalized():
    B = matrix_algebra(2)
    q = SparseTensor.from_dict({(0,): 2, (3,): 1}, (4,))
    with pytest.raises(StructureError):
        elementary_wha(B, q)
    assert verify_axioms(elementary_wha(B, normalize_q(B, q))).passed


def test_separable_data():
    for B in (split_commutative(2), matrix_algebra(2), matrix_algebra(3)):
        assert all(B.check().values())
    B = matrix_algebra(2)
    again = separable_data(B.mult, B.unit)
    assert all(again.check().values())


def test_separable_data_rejects_degenerate():
    # k[x]/x^2 is not separable
    mult = SparseTensor.from_dict({(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1}, (2, 2, 2))
    with pytest.raises((ZeroDivisionError, StructureError)):
        separable_data(mult, SparseTensor.vector([1, 0]))


def test_transformation_groupoid():
    H = transformation_wha(swap_action_k2())
    assert H.dim == 8
    assert verify_axioms(H).passed
    assert verify_axioms(transformation_wha(trivial_action(matrix_algebra(2)))).passed


def test_groupoid_from_dict():
    G = groupoid_from_dict({"family": "pair", "n": 2})
    assert len(G.morphisms) == 4
    d = {"objects": ["a"], "morphisms": [["e", "a", "a"], ["s", "a", "a"]],
         "compose": [["e", "e", "e"], ["e", "s", "s"], ["s", "e", "s"], ["s", "s", "e"]]}
    H = groupoid_algebra(groupoid_from_dict(d))
    assert H.dim == 2 and verify_axioms(H).passed


def test_groupoid_validation():
    with pytest.raises(StructureError):
        FiniteGroupoid([0], ["e", "s"], {"e": 0, "s": 0}, {"e": 0, "s": 0},
                       {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "s"},
                       {"e": "e", "s": "s"})
    bad = {"objects": ["a"], "morphisms": [["e", "a", "a"], ["s", "a", "a"]],
           "compose": [["e", "e", "e"], ["e", "s", "s"], ["s", "e", "s"], ["s", "s", "s"]]}
    with pytest.raises(StructureError):
        groupoid_from_dict(bad)


def test_hopf_examples_have_trivial_delta1():
    for H in (kZ(3), sweedler()):
        assert H.delta1() == einsum("a,b->ab", H.unit, H.unit)
    assert kG2().delta1() != einsum("a,b->ab", kG2().unit, kG2().unit)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cyclic_r_matrices(n):
    H, qt = cyclic_r_matrix(n)
    assert verify_qt(H, qt).passed


def test_elementary_twist_data_shapes():
    B = matrix_algebra(2)
    th, tb, u, w = elementary_twist_data(B, diag_q(2))
    assert th.dims == (16, 16) and u.dims == (16,)


@pytest.mark.parametrize("t", [2, 3, 5, -2])
def test_hq_counit_of_one(t):
    from whakit.constructors import elementary_wha, matrix_algebra, diag_q
    q = diag_q(t)
    a, d = q[(0,)], q[(3,)]
    H = elementary_wha(matrix_algebra(2), q)
    assert H.eps(H.unit) == (a + d) * (a.inv() + d.inv())


@pytest.fixture(scope="module")
def tl2():
    from whakit.constructors import temperley_lieb_wha
    return temperley_lieb_wha(2)


def test_tl_algebra_quotient():
    from whakit.constructors import temperley_lieb_algebra
    A = temperley_lieb_algebra(2)
    # 14 diagrams on 4 strands, the trace form has a one-dimensional radical at delta = golden ratio
    assert A.dim == 13 and A.order == 5
    e = A.gens
    for i, j in ((0, 1), (1, 0), (1, 2), (2, 1)):
        assert A.mul(A.mul(e[i], e[j]), e[i]) == e[i].scale(A.delta.inv() ** 2)
    assert A.mul(e[0], e[2]) == A.mul(e[2], e[0])


def test_tl_wha(tl2):
    assert tl2.dim == 13 and tl2.order == 5
    assert verify_axioms(tl2).passed


def test_tl_counital_subalgebras(tl2):
    from whakit.constructors import temperley_lieb_algebra
    from whakit.exactmath import span, rank, vstack
    A = temperley_lieb_algebra(2)
    for M, g in ((tl2.eps_t_matrix, 0), (tl2.eps_s_matrix, 2)):
        E = span(M)
        ref = vstack([A.unit.reshape((1, 13)), A.gens[g].reshape((1, 13))])
        assert E.dims[0] == 2 and rank(vstack([E, ref])) == 2


def test_tl_antipode_order(tl2):
    I = SparseTensor.identity(tl2.dim, tl2.order)
    P = tl2.antipode
    for _ in range(24):
        assert P != I
        P = einsum("ab,bc->ac", P, tl2.antipode)


def test_tl_bad_n():
    from whakit.constructors import temperley_lieb_wha
    with pytest.raises(StructureError):
        temperley_lieb_wha(1)
    with pytest.raises(StructureError, match="budget"):
        temperley_lieb_wha(3)
