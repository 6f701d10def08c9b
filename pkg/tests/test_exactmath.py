from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from whakit.exactmath import (Scalar, SparseTensor, einsum, zeta, format_scalar, parse_scalar, rank,
                              nullspace, solve_affine, inverse, span, in_span, intersect, vstack,
                              minpoly, factor_minpoly)
from whakit.exactmath.poly import pmul, pdivmod, pxgcd, padd, trim, monic, peval
from whakit.exactmath.field import phi

from oracles import cyclo_value, close, dense_einsum

ORDERS = [1, 3, 4, 5, 8, 12]
small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def cyclo(draw, n=None):
    n = n or draw(st.sampled_from(ORDERS))
    cs = draw(st.lists(small, min_size=1, max_size=n))
    x = Scalar(0)
    for k, c in enumerate(cs):
        x = x + zeta(n, k) * Scalar(c)
    return x, cyclo_value(cs, n), n


@given(cyclo(), cyclo())
def test_field_ops_match_complex(a, b):
    (x, xv, _), (y, yv, _) = a, b
    assert close((x + y).to_complex(), xv + yv)
    assert close((x * y).to_complex(), xv * yv)
    assert close((x - y).to_complex(), xv - yv)
    if y:
        assert close((x / y).to_complex(), xv / yv)


@given(cyclo(), cyclo(), cyclo())
def test_field_axioms(a, b, c):
    x, y, z = a[0], b[0], c[0]
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    if x:
        assert x * x.inv() == Scalar(1)


@given(cyclo())
def test_scalar_text_round_trip(a):
    x, _, n = a
    assert parse_scalar(format_scalar(x), max(n, x.order)) == x


@given(cyclo(12), cyclo(12), st.sampled_from([1, 5, 7, 11]))
def test_galois_is_a_field_automorphism(a, b, k):
    x, y = a[0], b[0]
    assert (x * y).galois(k) == x.galois(k) * y.galois(k)
    assert (x + y).galois(k) == x.galois(k) + y.galois(k)


def test_zeta_powers():
    z = zeta(5)
    assert z ** 5 == Scalar(1)
    assert sum((z ** k for k in range(5)), Scalar(0)) == Scalar(0)
    assert zeta(4) ** 2 == Scalar(-1)
    assert phi(12) == 4


def test_rational_values_collapse_to_order_one():
    z = zeta(3)
    assert (z + z ** 2).is_rational() and (z + z ** 2) == Scalar(-1)


# -- sparse tensors

@st.composite
def int_tensor(draw, dims):
    vals = draw(st.lists(st.integers(-3, 3), min_size=int(np.prod(dims)), max_size=int(np.prod(dims))))
    arr = np.array([Fraction(v) for v in vals], dtype=object).reshape(dims)
    T = SparseTensor.from_dict({ix: int(arr[ix]) for ix in np.ndindex(*dims) if arr[ix]}, dims)
    return T, arr


def _as_array(T):
    return np.array([[Fraction(str(x)) for x in row] for row in T.dense()], dtype=object) \
        if T.arity == 2 else None


@given(int_tensor((3, 4)), int_tensor((4, 2)), int_tensor((2, 3)))
def test_einsum_matches_dense(A, B, C):
    (a, aa), (b, bb), (c, cc) = A, B, C
    got = einsum("ij,jk,kl->il", a, b, c)
    want = dense_einsum("ij,jk,kl->il", aa, bb, cc)
    assert _as_array(got).tolist() == want.tolist()


@given(int_tensor((2, 3, 2)), int_tensor((3, 2)))
def test_einsum_three_way(A, B):
    (a, aa), (b, bb) = A, B
    got = einsum("ijk,jl->kil", a, b)
    want = dense_einsum("ijk,jl->kil", aa, bb)
    for ix in np.ndindex(*want.shape):
        assert Fraction(str(got[ix])) == want[ix]


@given(int_tensor((3, 3)))
def test_transpose_reshape(A):
    a, aa = A
    assert _as_array(a.transpose((1, 0))).tolist() == aa.T.tolist()
    assert a.reshape((9,)).reshape((3, 3)) == a


# -- linear algebra

@given(int_tensor((4, 5)))
def test_rank_nullity(A):
    a, _ = A
    K = nullspace(a)
    assert rank(a) + K.dims[0] == 5
    for i in range(K.dims[0]):
        assert einsum("ij,j->i", a, K.select(0, i)).is_zero()


@given(int_tensor((4, 4)), int_tensor((4,)))
def test_solve_affine(A, b):
    a, _ = A
    v, _ = b
    sol = solve_affine(a, v)
    if sol.consistent:
        assert einsum("ij,j->i", a, sol.particular) == v
    else:
        assert rank(vstack([a.transpose((1, 0)), v.reshape((1, 4))])) > rank(a)


@given(int_tensor((3, 3)))
def test_inverse(A):
    a, _ = A
    if rank(a) == 3:
        assert einsum("ij,jk->ik", a, inverse(a)) == SparseTensor.identity(3)
    else:
        with pytest.raises(ZeroDivisionError):
            inverse(a)


@given(int_tensor((2, 4)), int_tensor((2, 4)))
def test_intersection_inside_both(U, V):
    u, v = span(U[0]), span(V[0])
    I = intersect(u, v)
    for i in range(I.dims[0]):
        w = I.select(0, i)
        assert in_span(u, w) and in_span(v, w)


# -- polynomials

polys = st.lists(st.integers(-4, 4), min_size=1, max_size=5).map(lambda cs: trim([Scalar(c) for c in cs]))


@given(polys, polys.filter(bool))
def test_division_identity(a, b):
    q, r = pdivmod(a, b)
    assert padd(pmul(q, b), r) == trim(a)
    assert len(r) < len(b)


@given(polys.filter(bool), polys.filter(bool))
def test_bezout(a, b):
    g, s, t = pxgcd(a, b)
    assert padd(pmul(s, a), pmul(t, b)) == g
    assert not pdivmod(a, g)[1] and not pdivmod(b, g)[1]


@given(int_tensor((3, 3)))
def test_minpoly_annihilates(A):
    a, _ = A
    m = minpoly(a)
    acc = SparseTensor.zeros((3, 3))
    P = SparseTensor.identity(3)
    for c in m:
        acc = acc + P.scale(c)
        P = einsum("ij,jk->ik", P, a)
    assert acc.is_zero()
    prod = [Scalar(1)]
    for f, k in factor_minpoly(a):
        for _ in range(k):
            prod = pmul(prod, list(f))
    assert prod == m


def test_factor_over_cyclotomic_field():
    # x^2 + x + 1 splits over Q(zeta_3), not over Q
    C = SparseTensor.from_dict({(0, 1): 1, (1, 0): -1, (1, 1): -1}, (2, 2))
    assert len(factor_minpoly(C)) == 1
    assert [len(f) for f, _ in factor_minpoly(C.as_order(3))] == [2, 2]


def test_peval():
    assert peval([Scalar(1), Scalar(0), Scalar(1)], Scalar(2)) == Scalar(5)
