from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings

from whakit.constructors import (kG2, kZ, split_commutative, matrix_algebra, elementary_wha, diag_q,
                                 sweedler)
from whakit.core import StructureError, dual
from whakit.exactmath import SparseTensor, einsum, span, rank
from whakit.qtriang import QTStructure, drinfeld_double, ribbon, verify_qt
from whakit.repcat import (ModuleRep, regular_module, trivial_module, dual_module, tensor_module,
                           module_ops, unit_checks, zigzag, braiding_checks, is_linear, wedderburn,
                           quantum_dim, s_matrix, inclusion_matrix, principal_graph_depth2,
                           normalize_grouplike)
from whakit.smash import Algebra, algebra_of

from oracles import double_cyclic_s, equal_up_to_relabel, star_inclusion, bipartite_isomorphic, root
from strategies import groupoid_wha


def dense(T):
    out = np.zeros(T.dims, dtype=complex)
    for ix, v in T.items():
        out[ix] = v.to_complex()
    return out


def components(G):
    """(number of objects, order of the vertex group) per connected component."""
    seen, out = set(), []
    for o in G.objects:
        if o in seen:
            continue
        comp = {G.source[g] for g in G.morphisms if G.target[g] == o}
        seen |= comp
        loops = sum(1 for g in G.morphisms if G.source[g] == G.target[g] == o)
        out.append((len(comp), loops))
    return out


def phi(d):
    return sum(1 for k in range(1, d + 1) if gcd(k, d) == 1)


@settings(max_examples=15)
@given(groupoid_wha())
def test_wedderburn_matches_groupoid_structure(data):
    G, H = data
    W = wedderburn(H, irreps=False)
    assert sum(W.block_dims) == H.dim
    assert all(b == d * n * n for b, d, n in zip(W.block_dims, W.degrees, W.dims))
    one = SparseTensor.zeros((H.dim,), H.order)
    for i, e in enumerate(W.idempotents):
        one = one + e
        assert H.mul(e, e) == e
        for j, f in enumerate(W.idempotents):
            if i != j:
                assert H.mul(e, f).is_zero()
        assert all(H.mul(e, H.e(k)) == H.mul(H.e(k), e) for k in range(H.dim))
    assert one == H.unit


@settings(max_examples=15)
@given(groupoid_wha(dual=False))
def test_groupoid_algebra_blocks(data):
    G, H = data
    W = wedderburn(H, irreps=False)
    want = sorted((k, phi(d)) for k, m in components(G) for d in range(1, m + 1) if m % d == 0)
    assert sorted(zip(W.dims, W.degrees)) == want


@settings(max_examples=10)
@given(groupoid_wha(dual=True))
def test_function_algebra_blocks(data):
    _, H = data
    W = wedderburn(H, irreps=False)
    assert W.dims == [1] * H.dim and all(W.split)


@pytest.mark.parametrize("make,dims", [(kG2, [2]), (lambda: dual(kG2()), [1, 1, 1, 1]),
                                       (lambda: drinfeld_double(kZ(2)).H, [1, 1, 1, 1])],
                         ids=["kG2", "kG2*", "D(kZ2)"])
def test_wedderburn_examples(make, dims):
    W = wedderburn(make())
    assert sorted(W.dims) == dims
    for a, V in enumerate(W.irreps):
        assert all(c.passed for c in V.check())
        assert V.dim == W.module_dim(a)


def test_kz3_splits_only_over_cyclotomic_field():
    W = wedderburn(kZ(3))
    assert W.unsplit and sorted(W.degrees) == [1, 2]
    W3 = wedderburn(kZ(3).over(3))
    assert not W3.unsplit and W3.dims == [1, 1, 1]


def test_non_semisimple_rejected():
    with pytest.raises(StructureError):
        wedderburn(sweedler())


def _delta1_rank(H, V, W):
    # projector of Delta(1) on V (x) W, numerically
    c, rv, rw = dense(H.comult), dense(V.rho), dense(W.rho)
    u = dense(H.unit)
    P = np.einsum("h,hab,avx,bwy->vwxy", u, c, rv, rw).reshape(V.dim * W.dim, V.dim * W.dim)
    return np.linalg.matrix_rank(P)


@settings(max_examples=10)
@given(groupoid_wha())
def test_tensor_dimension_is_delta1_rank(data):
    _, H = data
    if H.dim > 9:
        return
    V = regular_module(H)
    T = trivial_module(H)
    for X, Y in ((V, T), (T, V), (T, T), (V, V)):
        assert tensor_module(X, Y).dim == _delta1_rank(H, X, Y)


def test_tensor_dims_on_examples():
    H = kZ(2)
    V = regular_module(H)
    assert tensor_module(V, V).dim == 4
    H = kG2()
    T = trivial_module(H)
    assert T.dim == 2 and tensor_module(T, T).dim == 2


@settings(max_examples=10)
@given(groupoid_wha())
def test_rigidity_and_units(data):
    _, H = data
    if H.dim > 9:
        return
    T = trivial_module(H)
    for V in (regular_module(H), T, dual_module(T)):
        assert all(c.passed for c in zigzag(V))
        assert all(c.passed for c in unit_checks(V))


@settings(max_examples=8)
@given(groupoid_wha(dual=False))
def test_braiding_for_cocommutative(data):
    # Delta(1) is an R-matrix for a cocommutative algebra
    _, H = data
    if H.dim > 6:
        return
    qt = QTStructure(H.delta1(), H.delta1())
    assert verify_qt(H, qt).passed
    V, T = regular_module(H), trivial_module(H)
    assert all(c.passed for c in braiding_checks(H, qt, V, T))
    assert all(c.passed for c in braiding_checks(H, qt, V, V))


def test_braiding_on_double():
    D = drinfeld_double(kG2())
    V = regular_module(D.H)
    assert all(c.passed for c in braiding_checks(D.H, D.qt, V, dual_module(V)))


def test_module_ops_dispatch():
    H = kG2()
    V = regular_module(H)
    assert module_ops(H, "trivial").dim == 2
    assert module_ops(H, "dual", V).dim == 4
    with pytest.raises(ValueError):
        module_ops(H, "bogus")


@pytest.mark.parametrize("n", [2, 3])
def test_s_matrix_of_cyclic_double(n):
    H = kZ(n).over(n) if n > 2 else kZ(n)
    D = drinfeld_double(H)
    rep = s_matrix(D.H, D.qt)
    assert rep.is_modular and rep.split and rep.consistent
    S = [[x.to_complex() for x in row] for row in rep.table]
    assert equal_up_to_relabel(S, double_cyclic_s(n))
    Sm = np.array(S)
    assert np.allclose(Sm @ Sm.conj().T, n * n * np.eye(n * n))


def test_s_matrix_triangular_is_degenerate():
    H = kZ(2)
    qt = QTStructure(H.delta1(), H.delta1())
    rep = s_matrix(H, qt)
    assert not rep.is_modular and not rep.factorizable


def test_s_matrix_needs_semisimple():
    from whakit.constructors import sweedler
    H = sweedler()
    qt = QTStructure(H.delta1(), H.delta1())
    with pytest.raises(StructureError):
        s_matrix(H, qt)


def test_quantum_dims_of_double():
    D = drinfeld_double(kZ(2))
    nu = ribbon(D.H, D.qt).nu
    W = wedderburn(D.H)
    assert [quantum_dim(D.H, D.qt, nu, V) for V in W.irreps] == [1] * 4


def _scalar_algebra():
    return split_commutative(1)


def test_inclusion_matrices():
    k = _scalar_algebra()
    M2 = matrix_algebra(2)
    emb = einsum("a,b->ab", k.unit, M2.unit)
    assert inclusion_matrix(k, M2, emb).matrix == [[2]]
    k2 = split_commutative(2)
    emb = einsum("a,b->ab", k.unit, k2.unit)
    assert inclusion_matrix(k, k2, emb).matrix == star_inclusion(2)
    with pytest.raises(StructureError, match="unital"):
        inclusion_matrix(k, k2, SparseTensor.from_dict({(0, 0): 1}, (1, 2)))


@pytest.mark.parametrize("n", [2, 3])
def test_principal_graph_of_cyclic(n):
    g = principal_graph_depth2(kZ(n).over(n) if n > 2 else kZ(n))
    assert bipartite_isomorphic(g.matrix, star_inclusion(n))


def test_principal_graph_formats():
    g = principal_graph_depth2(kZ(2))
    assert "--" in g.to_dot()
    assert g.to_json()["matrix"] == g.matrix


def test_normalize_grouplike_on_hq():
    H = elementary_wha(matrix_algebra(2), diag_q(2))
    r = normalize_grouplike(H)
    assert r.ok and r.ratios == [1]
