"""End-to-end acceptance checks; each test records one line in the terminal summary."""
import json
import os
import time

import pytest

from whakit import io as wio
from whakit import constructors as C
from whakit.constructors import (kG2, kZ, sweedler, elementary_wha, matrix_algebra, split_commutative, diag_q,
                                 pair_groupoid, cyclic_group, discrete_groupoid, disjoint_union, groupoid_algebra)
from whakit.core import dual, derive, tensor, verify_axioms
from whakit.exactmath import SparseTensor, einsum, vstack, solve_affine
from whakit.integrals import (integral_space, haar_integral, is_semisimple, check_separability,
                              canonical_chi, verify_hopf_module_theorem)
from whakit.qtriang import QTStructure, drinfeld_double, verify_qt, factorizability, drinfeld_u
from whakit.repcat import s_matrix, principal_graph_depth2
from whakit.smash import trivial_action, verify_duality

from conftest import record, FIXTURES
from oracles import double_cyclic_s, equal_up_to_relabel, star_inclusion, bipartite_isomorphic


def _examples():
    out = {
        "kG2": kG2(), "kG2*": dual(kG2()), "kZ2": kZ(2), "kZ3": kZ(3),
        "kZ2(x)kZ2": tensor(kZ(2), kZ(2)), "sweedler": sweedler(),
        "Hq(k2)": elementary_wha(split_commutative(2)), "Hq(M2)": elementary_wha(matrix_algebra(2)),
        "Hq(M2,q=2)": elementary_wha(matrix_algebra(2), diag_q(2)),
        "D(kZ2)": drinfeld_double(kZ(2)).H, "D(kG2)": drinfeld_double(kG2()).H,
    }
    for v in ("op", "cop", "opcop"):
        out[f"kG2^{v}"] = derive(kG2(), v)
    return out


EXAMPLES = _examples()


def test_criterion_01_axioms():
    names = ["kG2", "kG2*", "kZ2", "kZ2(x)kZ2", "kG2^op", "kG2^cop", "kG2^opcop", "Hq(k2)", "Hq(M2)",
             "D(kZ2)", "D(kG2)"]
    t0 = time.perf_counter()
    bad = [n for n in names if not verify_axioms(EXAMPLES[n]).passed]
    dt = time.perf_counter() - t0
    ok = not bad and dt < 5.0
    record(1, ok, f"{len(names) - len(bad)}/{len(names)} pass in {dt:.2f}s (limit 5s)")
    assert ok, bad


def test_criterion_02_counital_bookkeeping():
    groupoids = [pair_groupoid(3), disjoint_union(cyclic_group(2), pair_groupoid(2)), discrete_groupoid(2)]
    objs = [groupoid_algebra(G).counital_subalgebra("target").dims[0] == len(G.objects) for G in groupoids]
    # the examples of criterion 1 plus kZ3 and Sweedler; for H_q with q not scalar eps(1) = tr(q) tr(q^-1)
    eps1 = []
    for name, H in EXAMPLES.items():
        if name == "Hq(M2,q=2)":
            continue
        dt = H.counital_subalgebra("target").dims[0]
        eps1.append(H.eps(H.unit) == dt)
    ok = all(objs) and all(eps1)
    record(2, ok, f"dim H_t = #objects on {sum(objs)}/3, eps(1) = dim H_t on {sum(eps1)}/{len(eps1)} (q = 1 examples)")
    assert ok


def test_criterion_03_integrals():
    from fractions import Fraction
    H = kG2()
    l = integral_space(H, "left", normalized=True)
    want = SparseTensor.vector([Fraction(1, 2)] * 4)     # l_e / |e| summed over both objects, |e| = 2
    sw = sweedler()
    sweed = integral_space(sw, "left").dims[0] == 1 and integral_space(sw, "left", normalized=True) is None
    agree = {n: canonical_chi(H)[1] == (haar_integral(H) is not None) for n, H in EXAMPLES.items()}
    ok = l == want and sweed and all(agree.values())
    record(3, ok, f"kG2 integral {'ok' if l == want else 'WRONG'}, Sweedler {'ok' if sweed else 'WRONG'}, "
                  f"chi/Haar agree on {sum(agree.values())}/{len(agree)}")
    assert ok


def _separability_exists(H):
    # solve for E in H (x) H with m(E) = 1 and x E = E x, independently of integrals
    n = H.dim
    I = SparseTensor.identity(n, H.order)
    mrow = H.mult.reshape((n * n, n))
    lhs = einsum("xak,bc->abxkc", H.mult, I) - einsum("ak,bxc->abxkc", I, H.mult)
    A = vstack([mrow.transpose((1, 0)), lhs.reshape((n * n, n * n * n)).transpose((1, 0))])
    rhs = SparseTensor.from_dict({ix: v for ix, v in H.unit.items()}, (n + n * n * n,), H.order)
    return solve_affine(A, rhs).consistent


def test_criterion_04_maschke():
    rows = []
    for name, H in EXAMPLES.items():
        ss, E = is_semisimple(H, return_element=True)
        norm = integral_space(H, "left", normalized=True) is not None
        sep = E is not None and check_separability(H, E)
        free = _separability_exists(H)
        rows.append((name, ss == norm == sep == free))
    ok = all(r for _, r in rows)
    record(4, ok, f"semisimple <=> normalized integral <=> separability on {sum(r for _, r in rows)}/{len(rows)}")
    assert ok, [n for n, r in rows if not r]


def test_criterion_05_fundamental_theorem():
    t0 = time.perf_counter()
    names = ["kG2", "kZ2", "Hq(M2,q=2)"]
    res = [verify_hopf_module_theorem(EXAMPLES[n]).passed for n in names]
    dt = time.perf_counter() - t0
    ok = all(res) and dt < 2.0
    record(5, ok, f"alpha/beta inverse on {sum(res)}/3 in {dt:.2f}s (limit 2s)")
    assert ok


def test_criterion_06_duality():
    reps = {n: verify_duality(trivial_action(EXAMPLES[n])) for n in ("kZ2", "kG2")}
    dims = {n: (r.dim_double_smash, r.dim_endomorphisms) for n, r in reps.items()}
    ok = all(r.passed for r in reps.values()) and dims == {"kZ2": (4, 4), "kG2": (8, 8)}
    record(6, ok, f"dims {dims}, alpha/beta inverse: {all(r.passed for r in reps.values())}")
    assert ok


def test_criterion_07_double():
    t0 = time.perf_counter()
    D = drinfeld_double(kZ(2))
    ax = verify_axioms(D.H).passed
    qt = verify_qt(D.H, D.qt)
    f = factorizability(D.H, D.qt)
    u = drinfeld_u(D.H, D.qt)
    dt = time.perf_counter() - t0
    ok = ax and qt.passed and qt["QYBE"].passed and f.rank == f.centralizer_dim and u.passed and dt < 10
    record(7, ok, f"axioms {ax}, qt {qt.passed}, rank {f.rank} = {f.centralizer_dim}, u {u.passed}, {dt:.2f}s")
    assert ok


# brute-force tr_q(c o c) on the simple modules of D(kZ2), computed once from the braiding
# on tensor products of 1-dimensional modules
S_DKZ2 = [[1, 1, -1, -1], [1, 1, 1, 1], [-1, 1, 1, -1], [-1, 1, -1, 1]]


def test_criterion_08_modular_data():
    D = drinfeld_double(kZ(2))
    rep = s_matrix(D.H, D.qt)
    S = [[int(x.rational()) for x in row] for row in rep.table]
    H = kZ(2)
    tri = s_matrix(H, QTStructure(H.delta1(), H.delta1()))
    relabel = equal_up_to_relabel(S, [[z.real for z in r] for r in double_cyclic_s(2)])
    ok = rep.is_modular and S == S_DKZ2 and relabel and not tri.is_modular
    record(8, ok, f"D(kZ2) modular {rep.is_modular}, S = {S}, triangular kZ2 modular {tri.is_modular}")
    assert ok


def test_criterion_09_flagship():
    from whakit.dynamical import build_dynamical_wha, verify_abrr, verify_dynamical_cocycle, babelon_J
    t0 = time.perf_counter()
    D = build_dynamical_wha(3, 2)
    G = D.G
    uq = verify_qt(G.U, G.qt).passed
    abrr = verify_abrr(G, babelon_J(G, 2)).passed
    coc = all(c.passed for c in verify_dynamical_cocycle(G, D.J))
    ax = verify_axioms(D.HJ)
    dt = time.perf_counter() - t0
    ok = uq and abrr and coc and ax.passed and D.HJ.dim == 243 and dt <= 600
    record(9, ok, f"R {uq}, ABRR {abrr}, cocycle {coc}, H_J dim {D.HJ.dim} axioms {ax.passed} "
                  f"({ax.strategy}) in {dt:.1f}s single process (limit 600s)")
    assert ok


def test_criterion_10_principal_graph():
    g2 = principal_graph_depth2(kZ(2))
    g3 = principal_graph_depth2(kZ(3).over(3))
    a = bipartite_isomorphic(g2.matrix, star_inclusion(2))
    b = bipartite_isomorphic(g3.matrix, star_inclusion(3))
    record(10, a and b, f"kZ2 {g2.matrix}, kZ3 {g3.matrix}")
    assert a and b


def test_criterion_11_serialization(tmp_path):
    import glob
    paths = sorted(glob.glob(os.path.join(FIXTURES, "*.wha.json")))
    same = 0
    for p in paths:
        L = wio.load(p)
        prov = L.doc.get("provenance") or {}
        out = tmp_path / os.path.basename(p)
        wio.save(str(out), L.H, L.qt, L.twist, prov.get("recipe"), prov.get("parent"))
        same += out.read_bytes() == open(p, "rb").read()
    src = wio.load(os.path.join(FIXTURES, "kG2.wha.json"))
    D = drinfeld_double(src.H)
    parent = wio.content_hash(src.doc)
    h = wio.save(str(tmp_path / "d.wha.json"), D.H, D.qt.with_bar(D.H), recipe="double", parent=parent)
    back = wio.load(str(tmp_path / "d.wha.json"))
    prov_ok = wio.content_hash(back.doc) == h and back.doc["provenance"]["parent"] == parent
    ok = paths and same == len(paths) and prov_ok
    record(11, ok, f"byte-identical {same}/{len(paths)}, provenance hash {'ok' if prov_ok else 'WRONG'}")
    assert ok


def test_criterion_12_temperley_lieb():
    if not hasattr(C, "temperley_lieb_wha"):
        record(12, False, "non-gating: temperley_lieb_wha not implemented")
        pytest.xfail("stretch criterion, not implemented")
    H = C.temperley_lieb_wha(2)
    ok = H.dim == 13 and H.order == 5 and verify_axioms(H).passed
    record(12, ok, f"non-gating: dim {H.dim} over order {H.order}, axioms {ok}")
    if not ok:
        pytest.xfail("stretch criterion failed")
