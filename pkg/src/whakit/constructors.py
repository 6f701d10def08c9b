"""Concrete quantum groupoids: groupoid algebras and their duals, transformation
groupoids of Hopf actions, elementary H_q, Sweedler's algebra, Temperley-Lieb."""
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from flint import fmpq

from .core import QuantumGroupoid, StructureError, dual
from .exactmath import (Scalar, SparseTensor, einsum, inverse, nullspace, rank, span, vstack, rows,
                        coord_matrix, quotient, solve_affine, zeta)


# ------------------------------------------------------------------ groupoids

@dataclass
class FiniteGroupoid:
    """Morphism g has target(g) and source(g); g*h is defined when source(g) == target(h)."""
    objects: list
    morphisms: list              # names
    source: dict
    target: dict
    compose: dict                # (g, h) -> g*h
    inverse: dict
    name: str = "G"

    def __post_init__(self):
        self.validate()

    def identity(self, obj):
        for g in self.morphisms:
            if self.source[g] == obj and self.target[g] == obj and self.compose.get((g, g)) == g:
                return g
        raise StructureError(f"no identity at {obj}")

    def is_identity(self, g):
        return self.source[g] == self.target[g] and self.compose.get((g, g)) == g

    def validate(self):
        M = self.morphisms
        for g in M:
            if self.source.get(g) not in self.objects or self.target.get(g) not in self.objects:
                raise StructureError(f"morphism {g} has unknown endpoints")
        for g, h in product(M, M):
            c = self.compose.get((g, h))
            if (self.source[g] == self.target[h]) != (c is not None):
                raise StructureError(f"composition of {g},{h} defined inconsistently")
            if c is not None and (self.source[c] != self.source[h] or self.target[c] != self.target[g]):
                raise StructureError(f"composite {g}*{h} has wrong endpoints")
        for g, h, k in product(M, M, M):
            gh = self.compose.get((g, h))
            hk = self.compose.get((h, k))
            if gh is not None and hk is not None:
                if self.compose[(gh, k)] != self.compose[(g, hk)]:
                    raise StructureError(f"composition not associative at {g},{h},{k}")
        ids = {o: self.identity(o) for o in self.objects}
        for g in M:
            gi = self.inverse[g]
            if self.compose.get((g, gi)) != ids[self.target[g]] or self.compose.get((gi, g)) != ids[self.source[g]]:
                raise StructureError(f"bad inverse for {g}")
            if self.compose[(ids[self.target[g]], g)] != g or self.compose[(g, ids[self.source[g]])] != g:
                raise StructureError(f"identities do not act trivially on {g}")


def pair_groupoid(n):
    """Objects 1..n, one morphism g_ij : j -> i for each pair."""
    objs = list(range(1, n + 1))
    mor = [f"g{i}{j}" for i in objs for j in objs]
    src = {f"g{i}{j}": j for i in objs for j in objs}
    tgt = {f"g{i}{j}": i for i in objs for j in objs}
    comp = {(f"g{i}{j}", f"g{j}{k}"): f"g{i}{k}" for i in objs for j in objs for k in objs}
    inv = {f"g{i}{j}": f"g{j}{i}" for i in objs for j in objs}
    return FiniteGroupoid(objs, mor, src, tgt, comp, inv, f"G{n}")


def cyclic_group(n):
    mor = ["1" if k == 0 else f"g^{k}" if k > 1 else "g" for k in range(n)]
    comp = {(mor[a], mor[b]): mor[(a + b) % n] for a in range(n) for b in range(n)}
    inv = {mor[a]: mor[(-a) % n] for a in range(n)}
    return FiniteGroupoid([0], mor, {m: 0 for m in mor}, {m: 0 for m in mor}, comp, inv, f"Z{n}")


def discrete_groupoid(n):
    objs = list(range(1, n + 1))
    mor = [f"1_{i}" for i in objs]
    comp = {(m, m): m for m in mor}
    return FiniteGroupoid(objs, mor, dict(zip(mor, objs)), dict(zip(mor, objs)), comp,
                          {m: m for m in mor}, f"D{n}")


def disjoint_union(G, K):
    def tag(s, t):
        return f"{t}:{s}"
    objs = [("L", o) for o in G.objects] + [("R", o) for o in K.objects]
    mor, src, tgt, comp, inv = [], {}, {}, {}, {}
    for side, X in (("L", G), ("R", K)):
        for g in X.morphisms:
            m = tag(g, side)
            mor.append(m)
            src[m], tgt[m] = (side, X.source[g]), (side, X.target[g])
            inv[m] = tag(X.inverse[g], side)
        for (g, h), c in X.compose.items():
            comp[(tag(g, side), tag(h, side))] = tag(c, side)
    return FiniteGroupoid(objs, mor, src, tgt, comp, inv, f"{G.name}+{K.name}")


def groupoid_from_dict(d):
    """Interchange sub-format: {"objects": [...], "morphisms": [[name, src, tgt], ...],
    "compose": [[g, h, gh], ...]} or {"family": "pair"|"cyclic"|"discrete", "n": k}."""
    if "family" in d:
        fam = {"pair": pair_groupoid, "cyclic": cyclic_group, "discrete": discrete_groupoid}[d["family"]]
        return fam(int(d["n"]))
    mor = [m[0] for m in d["morphisms"]]
    src = {m[0]: m[1] for m in d["morphisms"]}
    tgt = {m[0]: m[2] for m in d["morphisms"]}
    comp = {(c[0], c[1]): c[2] for c in d["compose"]}
    ids = {}
    for g in mor:
        if src[g] == tgt[g] and comp.get((g, g)) == g:
            ids[src[g]] = g
    inv = {}
    for g in mor:
        for h in mor:
            if comp.get((g, h)) == ids.get(tgt[g]) and comp.get((h, g)) == ids.get(src[g]):
                inv[g] = h
    if len(inv) != len(mor):
        raise StructureError("some morphism has no inverse")
    return FiniteGroupoid(list(d["objects"]), mor, src, tgt, comp, inv, d.get("name", "G"))


def groupoid_algebra(G):
    n = len(G.morphisms)
    ix = {g: i for i, g in enumerate(G.morphisms)}
    mult = {(ix[g], ix[h], ix[c]): 1 for (g, h), c in G.compose.items()}
    unit = {(ix[g],): 1 for g in G.morphisms if G.is_identity(g)}
    comult = {(i, i, i): 1 for i in range(n)}
    counit = {(i,): 1 for i in range(n)}
    S = {(ix[g], ix[G.inverse[g]]): 1 for g in G.morphisms}
    return QuantumGroupoid(
        SparseTensor.from_dict(mult, (n, n, n)), SparseTensor.from_dict(unit, (n,)),
        SparseTensor.from_dict(comult, (n, n, n)), SparseTensor.from_dict(counit, (n,)),
        SparseTensor.from_dict(S, (n, n)), star=SparseTensor.from_dict(S, (n, n)),
        labels=list(G.morphisms), name=f"k{G.name}")


def groupoid_function_algebra(G):
    n = len(G.morphisms)
    ix = {g: i for i, g in enumerate(G.morphisms)}
    mult = {(i, i, i): 1 for i in range(n)}
    unit = {(i,): 1 for i in range(n)}
    comult = {(ix[c], ix[g], ix[h]): 1 for (g, h), c in G.compose.items()}
    counit = {(ix[g],): 1 for g in G.morphisms if G.is_identity(g)}
    S = {(ix[g], ix[G.inverse[g]]): 1 for g in G.morphisms}
    return QuantumGroupoid(
        SparseTensor.from_dict(mult, (n, n, n)), SparseTensor.from_dict(unit, (n,)),
        SparseTensor.from_dict(comult, (n, n, n)), SparseTensor.from_dict(counit, (n,)),
        SparseTensor.from_dict(S, (n, n)), star=SparseTensor.identity(n),
        labels=[f"p[{g}]" for g in G.morphisms], name=f"k{G.name}^")


def kG2():
    return groupoid_algebra(pair_groupoid(2))


def kZ(n):
    return groupoid_algebra(cyclic_group(n))


def cyclic_r_matrix(n, k=1):
    """kZ_n over Q(zeta_n) with R = (1/n) sum_{a,b} zeta^(k a b) g^a (x) g^b."""
    from .exactmath import zeta
    from .qtriang import QTStructure
    H = kZ(n).over(n) if n > 2 else kZ(n)
    c = Scalar(fmpq(1, n))
    R = SparseTensor.from_dict({(a, b): zeta(n, k * a * b) * c for a in range(n) for b in range(n)},
                               (n, n), H.order)
    return H, QTStructure(R)


def sweedler():
    """Sweedler's 4-dim Hopf algebra on 1, g, x, gx."""
    # products of basis words g^a x^b with xg = -gx
    def word(a, b):
        return 2 * b + a  # index: 1->0, g->1, x->2, gx->3
    mult = {}
    for a1, b1, a2, b2 in product(range(2), repeat=4):
        if b1 and b2:
            continue
        sign = -1 if (b1 and a2) else 1
        mult[(word(a1, b1), word(a2, b2), word((a1 + a2) % 2, b1 + b2))] = sign
    # Delta(g^a x^b) = Delta(g)^a Delta(x)^b
    comult = {(0, 0, 0): 1, (1, 1, 1): 1, (2, 2, 0): 1, (2, 1, 2): 1,
              (3, 3, 1): 1, (3, 0, 3): 1}
    # Delta(gx) = (g (x) g)(x (x) 1 + g (x) x) = gx (x) g + 1 (x) gx
    S = {(0, 0): 1, (1, 1): 1, (2, 3): -1, (3, 2): 1}
    return QuantumGroupoid(
        SparseTensor.from_dict(mult, (4, 4, 4)), SparseTensor.basis(4, 0),
        SparseTensor.from_dict(comult, (4, 4, 4)), SparseTensor.from_dict({(0,): 1, (1,): 1}, (4,)),
        SparseTensor.from_dict(S, (4, 4)), labels=["1", "g", "x", "gx"], name="H4")


# ------------------------------------------------------------------ separable algebras

@dataclass
class SeparableAlgebraData:
    mult: SparseTensor           # (n, n, n)
    unit: SparseTensor
    e: SparseTensor              # element of B (x) B
    omega: SparseTensor          # functional
    star: Optional[SparseTensor] = None
    labels: list = field(default_factory=list)

    @property
    def dim(self):
        return self.unit.dims[0]

    @property
    def order(self):
        return max(self.mult.order, self.e.order, self.omega.order)

    def mul(self, x, y):
        return einsum("i,ijk,j->k", x, self.mult, y)

    def check(self):
        """(m(e) = 1, (b (x) 1)e = e(1 (x) b), omega normalization)."""
        m, e, n = self.mult, self.e, self.dim
        me = einsum("ab,abk->k", e, m)
        lhs = einsum("ac,bak->bkc", e, m)        # (e_b e1) (x) e2
        rhs = einsum("ac,cbk->bak", e, m)        # e1 (x) (e2 e_b)
        om1 = einsum("a,ab->b", self.omega, e)
        om2 = einsum("ab,b->a", e, self.omega)
        return {"m(e)=1": me == self.unit, "be=eb": lhs == rhs,
                "omega": om1 == self.unit and om2 == self.unit}

    def inverse_of(self, x):
        L = einsum("i,ijk->jk", x, self.mult)
        sol = einsum("j,jk->k", self.unit, inverse(L))
        return sol


def split_commutative(n):
    """B = k^n with minimal idempotents p_i."""
    mult = SparseTensor.from_dict({(i, i, i): 1 for i in range(n)}, (n, n, n))
    e = SparseTensor.from_dict({(i, i): 1 for i in range(n)}, (n, n))
    return SeparableAlgebraData(mult, SparseTensor.vector([1] * n), e, SparseTensor.vector([1] * n),
                                star=SparseTensor.identity(n), labels=[f"p{i + 1}" for i in range(n)])


def matrix_algebra(n):
    """B = M_n with matrix units e_ij at index i*n + j."""
    N = n * n
    mult = {(i * n + j, j * n + k, i * n + k): 1 for i in range(n) for j in range(n) for k in range(n)}
    e = {(i * n + j, j * n + i): fmpq(1, n) for i in range(n) for j in range(n)}
    omega = {(i * n + i,): n for i in range(n)}
    star = {(i * n + j, j * n + i): 1 for i in range(n) for j in range(n)}
    return SeparableAlgebraData(SparseTensor.from_dict(mult, (N, N, N)),
                                SparseTensor.from_dict({(i * n + i,): 1 for i in range(n)}, (N,)),
                                SparseTensor.from_dict(e, (N, N)), SparseTensor.from_dict(omega, (N,)),
                                star=SparseTensor.from_dict(star, (N, N)),
                                labels=[f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)])


def separable_data(mult, unit, labels=None):
    """omega = trace of the left regular representation; e = its dual-basis element."""
    n = unit.dims[0]
    # Tr(L_{e_j}) = sum_i mult[j, i, i]
    diag = {}
    for (j, i, k), v in mult.items():
        if i == k:
            diag[(j,)] = diag.get((j,), Scalar(0)) + v
    omega = SparseTensor.from_dict({k: v for k, v in diag.items() if v}, (n,), mult.order)
    G = einsum("xyk,k->xy", mult, omega)
    Ginv = inverse(G)      # raises if the regular trace is degenerate (B not separable)
    # e = sum_i e_i (x) e^i with e^i = sum_j Ginv[j, i] e_j
    e = Ginv.transpose((1, 0))
    data = SeparableAlgebraData(mult, unit, e, omega, labels=labels or [f"b{i}" for i in range(n)])
    bad = [k for k, v in data.check().items() if not v]
    if bad:
        raise StructureError(f"separability conditions fail: {bad}")
    return data


# ------------------------------------------------------------------ Hopf actions

@dataclass
class HopfActionData:
    hopf: QuantumGroupoid
    algebra: SeparableAlgebraData
    action: SparseTensor         # act[b, h, c]: e_b . e_h = sum_c act[b,h,c] e_c  (right action)

    def check(self):
        H, B, act = self.hopf, self.algebra, self.action
        out = {}
        out["Delta(1)=1(x)1"] = H.delta1() == einsum("a,b->ab", H.unit, H.unit)
        # (b b') . h = (b . h1)(b' . h2)
        lhs = einsum("xyz,zhc->xyhc", B.mult, act)
        rhs = einsum("hpq,xpa,yqb,abc->xyhc", H.comult, act, act, B.mult)
        out["(bb').h"] = lhs == rhs
        out["1.h"] = einsum("b,bhc->hc", B.unit, act) == einsum("h,c->hc", H.counit, B.unit)
        out["b.1"] = einsum("h,bhc->bc", H.unit, act) == SparseTensor.identity(B.dim, act.order)
        out["(b.h).h'"] = einsum("bha,aHc->bhHc", act, act) == einsum("hHk,bkc->bhHc", H.mult, act)
        # omega((h.a) b) = omega(a (b.h)) with h.a = a.S(h)
        lhs = einsum("hs,asx,xbk,k->hab", H.antipode, act, B.mult, B.omega)
        rhs = einsum("bhy,ayk,k->hab", act, B.mult, B.omega)
        out["omega invariance"] = lhs == rhs
        return out


def swap_action_k2():
    """kZ2 acting on k^2 by exchanging the idempotents."""
    H = kZ(2)
    B = split_commutative(2)
    act = SparseTensor.from_dict({(0, 0, 0): 1, (1, 0, 1): 1, (0, 1, 1): 1, (1, 1, 0): 1}, (2, 2, 2))
    return HopfActionData(H, B, act)


def trivial_hopf():
    one = SparseTensor.vector([1])
    return QuantumGroupoid(SparseTensor.from_dict({(0, 0, 0): 1}, (1, 1, 1)), one,
                           SparseTensor.from_dict({(0, 0, 0): 1}, (1, 1, 1)), one,
                           SparseTensor.identity(1), star=SparseTensor.identity(1), labels=["1"], name="k")


def trivial_action(B):
    H = trivial_hopf()
    act = einsum("bc,h->bhc", SparseTensor.identity(B.dim, B.mult.order), H.unit)
    return HopfActionData(H, B, act)


def transformation_wha(data, check=True):
    """Quantum groupoid on B^op (x) H (x) B (basis index (a*nH + h)*nB + b)."""
    if check:
        bad = [k for k, v in data.check().items() if not v]
        if bad:
            raise StructureError(f"action fails module-algebra law: {bad}")
    H, B, act = data.hopf, data.algebra, data.action
    nB, nH = B.dim, H.dim
    n = nB * nH * nB
    mB, dH, mH, S = B.mult, H.comult, H.mult, H.antipode
    # h . a = a . S(h) as tensor L[h, a, x]
    L = einsum("hs,asx->hax", S, act)
    # (a(x)h(x)b)(A(x)K(x)C) = (h1.A) a (x) h2 K1 (x) (b.K2) C
    mult = einsum("hpq,pAx,xay,qrz,KrR,bRw,wCv->ahbAKCyzv", dH, L, mB, mH, dH, act, mB)
    mult = mult.reshape((n, n, n))
    # Delta(a(x)h(x)b) = (a (x) h1 (x) e1) (x) ((h2.e2) (x) h3 (x) b)
    dB = SparseTensor.identity(nB, mB.order)
    D2 = einsum("hut,upq->hpqt", dH, dH)
    comult = einsum("aA,hpqt,EF,qFx,bB->ahbApExtB", dB, D2, B.e, L, dB)
    comult = comult.reshape((n, n, n))
    # eps(a(x)h(x)b) = omega(a (h.b))
    counit = einsum("hbx,axy,y->ahb", L, mB, B.omega).reshape((n,))
    # S(a(x)h(x)b) = b (x) S(h) (x) a
    antipode = einsum("aA,hH,bB->ahbBHA", dB, S, dB).reshape((n, n))
    unit = einsum("a,h,b->ahb", B.unit, H.unit, B.unit).reshape((n,))
    labels = [f"{B.labels[a]}|{H.labels[h]}|{B.labels[b]}" for a in range(nB) for h in range(nH) for b in range(nB)]
    return QuantumGroupoid(mult, unit, comult, counit, antipode, labels=labels,
                           name=f"B^op#{H.name}#B")


# ------------------------------------------------------------------ elementary H_q

def _bop_b_mult(B):
    """Algebra B^op (x) B: (b (x) c)(b' (x) c') = b'b (x) cc'."""
    n = B.dim
    return einsum("Bbx,cCy->bcBCxy", B.mult, B.mult).reshape((n * n,) * 3)


def normalize_q(B, q):
    """Rescale q so that e1 q^-1 e2 = 1 (needs e1 q^-1 e2 to be a scalar)."""
    val = _e1qe2(B, B.inverse_of(q))
    i = int(B.unit.indices()[0][0])
    c = val[(i,)] / B.unit[(i,)]
    if not c or val != B.unit.scale(c):
        raise StructureError("e1 q^-1 e2 is not a nonzero scalar")
    return q.scale(c)


def _e1qe2(B, q):
    return einsum("ab,q,aqx,xby->y", B.e, q, B.mult, B.mult)


def elementary_wha(B, q=None):
    """H_q on B^op (x) B (index b*n + c); q=None means q = 1."""
    n = B.dim
    N = n * n
    q = B.unit if q is None else q
    try:
        qi = B.inverse_of(q)
    except ZeroDivisionError:
        raise StructureError("q is not invertible") from None
    if _e1qe2(B, qi) != B.unit:
        raise StructureError("q normalization fails: e1 q^-1 e2 != 1")
    mult = _bop_b_mult(B)
    # Delta(b(x)c) = (b (x) e1 q^-1) (x) (e2 (x) c)
    e1q = einsum("ab,q,aqx->xb", B.e, qi, B.mult)          # e1 q^-1 (x) e2
    dB = SparseTensor.identity(n, B.order)
    comult = einsum("bB,xy,cC->bcBxyC", dB, e1q, dB).reshape((N, N, N))
    # eps(b(x)c) = omega(q b c)
    counit = einsum("q,qbx,xcy,y->bc", q, B.mult, B.mult, B.omega).reshape((N,))
    # S(b(x)c) = q^-1 c q (x) b
    conj_q = einsum("p,pcx,xqy,q->cy", qi, B.mult, B.mult, q)   # c -> q^-1 c q
    antipode = einsum("cy,bB->bcyB", conj_q, dB).reshape((N, N))
    unit = einsum("a,b->ab", B.unit, B.unit).reshape((N,))
    star = None
    if B.star is not None and q == B.unit:
        star = einsum("bB,cC->bcBC", B.star, B.star).reshape((N, N))
    labels = [f"{B.labels[b]}|{B.labels[c]}" for b in range(n) for c in range(n)]
    return QuantumGroupoid(mult, unit, comult, counit, antipode, star=star,
                           labels=labels, name="H_q")


def elementary_twist_data(B, q):
    """(Theta, Theta_bar, u, w) on H_1 with u = 1, w = 1 (x) q."""
    n = B.dim
    N = n * n
    qi = B.inverse_of(q)
    e1q = einsum("ab,q,aqx->xb", B.e, qi, B.mult)
    # Theta = (1 (x) e1 q^-1) (x) (e2 (x) 1)
    theta = einsum("a,xy,c->axyc", B.unit, e1q, B.unit).reshape((N, N))
    theta_bar = einsum("a,xy,c->axyc", B.unit, B.e, B.unit).reshape((N, N))
    u = einsum("a,b->ab", B.unit, B.unit).reshape((N,))
    w = einsum("a,b->ab", B.unit, q).reshape((N,))
    return theta, theta_bar, u, w


def diag_q(t):
    """q = c * diag(t, 1/t) in M_2 with c fixed by e1 q^-1 e2 = 1 (i.e. tr q^-1 = 2)."""
    t = Scalar(t)
    c = (t + t.inv()) / 2
    return SparseTensor.from_dict({(0,): c * t, (3,): c * t.inv()}, (4,))


# ------------------------------------------------------------------ Temperley-Lieb

def _tl_generator(N, i):
    """Diagram of E_i (1 <= i < N) as a matching of top 0..N-1 and bottom N..2N-1."""
    m = [N + t if t < N else t - N for t in range(2 * N)]
    for a, b in ((i - 1, i), (N + i - 1, N + i)):
        m[a], m[b] = b, a
    return tuple(m)


def _tl_find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _tl_compose(x, y, N):
    """x stacked on y: (diagram, number of closed loops)."""
    res = [None] * (2 * N)
    seen = set()

    def walk(side, p):
        while True:
            q = (x, y)[side][p]
            if side == 0 and q < N or side == 1 and q >= N:
                return q
            j = q - N if side == 0 else q
            seen.add(j)
            side, p = (1, j) if side == 0 else (0, N + j)

    for s, pts in ((0, range(N)), (1, range(N, 2 * N))):
        for p in pts:
            if res[p] is None:
                q = walk(s, p)
                res[p], res[q] = q, p
    parent = list(range(N))
    for a in range(N):
        b = y[a]
        if b < N:
            parent[_tl_find(parent, a)] = _tl_find(parent, b)
        b = x[N + a]
        if b >= N:
            parent[_tl_find(parent, a)] = _tl_find(parent, b - N)
    roots = {_tl_find(parent, j) for j in range(N)}
    touched = {_tl_find(parent, j) for j in seen}
    return tuple(res), len(roots - touched)


def _tl_closure_loops(d, N):
    parent = list(range(2 * N))
    for p in range(2 * N):
        parent[_tl_find(parent, p)] = _tl_find(parent, d[p])
    for j in range(N):
        parent[_tl_find(parent, j)] = _tl_find(parent, N + j)
    return len({_tl_find(parent, p) for p in range(2 * N)})


def _tl_relabel(d, f):
    out = [None] * len(d)
    for p, q in enumerate(d):
        out[f(p)] = f(q)
    return tuple(out)


def _tl_diagrams(N):
    """All TL diagrams on N strands with a shortest word in the generators."""
    ident = tuple(N + t if t < N else t - N for t in range(2 * N))
    gens = [_tl_generator(N, i) for i in range(1, N)]
    words = {ident: ()}
    frontier = [ident]
    while frontier:
        nxt = []
        for d in frontier:
            for i, g in enumerate(gens, 1):
                c, loops = _tl_compose(d, g, N)
                if c not in words:
                    words[c] = words[d] + (i,)
                    nxt.append(c)
        frontier = nxt
    return list(words), words


@dataclass
class TLData:
    """A_{1,2n-1} at lambda^-1 = 4 cos^2(pi/(n+3)) as a quotient of the diagram algebra."""
    n: int
    order: int
    delta: Scalar
    mult: SparseTensor
    unit: SparseTensor
    trace: SparseTensor          # Markov trace on the quotient basis
    sigma: SparseTensor          # e_i -> e_{2n-i}, anti-automorphism, (input, output)
    flip: SparseTensor           # diagram reflection, antilinear star
    gens: list                   # e_1 .. e_{2n-1}
    words: list                  # quotient basis vector -> (scalar, word) expressions

    @property
    def dim(self):
        return self.unit.dims[0]

    def mul(self, x, y):
        return einsum("i,ijk,j->k", x, self.mult, y)

    def word(self, idx):
        out = self.unit
        for i in idx:
            out = self.mul(out, self.gens[i - 1])
        return out


def temperley_lieb_algebra(n):
    N, h = 2 * n, n + 3
    if h % 2:
        # 2 cos(pi/h) = -(zeta_h^((h-1)/2) + zeta_h^((h+1)/2)) already lives in Q(zeta_h)
        order = h
        delta = -(zeta(h, (h - 1) // 2) + zeta(h, (h + 1) // 2))
    else:
        order = 2 * h
        delta = zeta(order) + zeta(order).inv()
    diags, words = _tl_diagrams(N)
    ix = {d: k for k, d in enumerate(diags)}
    m = len(diags)
    mult = {}
    for a, x in enumerate(diags):
        for b, y in enumerate(diags):
            c, loops = _tl_compose(x, y, N)
            mult[(a, b, ix[c])] = delta ** loops
    M = SparseTensor.from_dict(mult, (m, m, m), order)
    tr = SparseTensor.from_dict({(k,): delta ** (_tl_closure_loops(d, N) - N) for k, d in enumerate(diags)},
                                (m,), order)
    G = einsum("xyk,k->xy", M, tr)
    lift, proj = quotient(nullspace(G), m, order)
    rot = lambda p: N + (N - 1 - p) if p < N else N - 1 - (p - N)
    flp = lambda p: p + N if p < N else p - N
    perm = lambda f: SparseTensor.from_dict({(k, ix[_tl_relabel(d, f)]): 1 for k, d in enumerate(diags)},
                                            (m, m), order)
    down = lambda T: einsum("ix,xy,yj->ij", lift, T, proj)
    mult_q = einsum("ix,jy,xyk,kz->ijz", lift, lift, M, proj)
    ident = next(d for d in diags if not words[d])
    unit_q = einsum("k,kz->z", SparseTensor.from_dict({(ix[ident],): 1}, (m,), order), proj)
    tr_q = einsum("ix,x->i", lift, tr)
    gens = [einsum("k,kz->z", SparseTensor.from_dict({(ix[_tl_generator(N, i)],): delta.inv()}, (m,), order),
                   proj) for i in range(1, N)]
    star = einsum("ix,xy,yj->ij", lift.conj(), perm(flp), proj)
    # quotient basis vectors as combinations of diagram words, e-normalized: D_w = delta^|w| e_w
    exprs = []
    for j in range(lift.dims[0]):
        exprs.append([(v * delta ** len(words[diags[x]]), words[diags[x]]) for (x,), v in lift.select(0, j).items()])
    return TLData(n, order, delta, mult_q, unit_q, tr_q, down(perm(rot)), star, gens, exprs)


def _tl_sub(A, elems):
    """Echelon basis of the subalgebra of A generated by elems."""
    basis = span(vstack([A.unit.reshape((1, A.dim))] + [e.reshape((1, A.dim)) for e in elems]))
    while True:
        prods = [A.mul(x, y) for x in rows(basis) for y in rows(basis)]
        new = span(vstack([basis] + [p.reshape((1, A.dim)) for p in prods]))
        if new.dims[0] == basis.dims[0]:
            return basis
        basis = new


def _tl_separability(A, B):
    """Symmetric separability idempotent of the subalgebra with basis rows B, in A (x) A, and
    the regular trace of the subalgebra as coordinates against B."""
    P = coord_matrix(B)
    mult = einsum("ia,jb,abk,kz->ijz", B, B, A.mult, P)
    unit = einsum("k,kz->z", A.unit, P)
    data = separable_data(mult, unit)
    return einsum("ab,ax,by->xy", data.e, B, B), data.omega


def _tl_index(A, B):
    """Central w in the span of B with tau(w x) = regular trace of that subalgebra at x."""
    _, omega = _tl_separability(A, B)
    G = einsum("ia,jb,abk,k->ji", B, B, A.mult, A.trace)
    sol = solve_affine(G, omega)
    if not sol.consistent:
        raise StructureError("no index element for the restricted trace")
    return einsum("i,ia->a", sol.particular, B)


def _tl_quasi_basis(A, B, phi):
    """sum b_i (x) b^i with phi(b^i b_j) = delta_ij, scaled so that m = 1."""
    G = einsum("ia,jb,abk,k->ij", B, B, A.mult, phi)
    E = einsum("ia,ij,jb->ab", B, inverse(G), B)
    c = einsum("ab,abk->k", E, A.mult)
    ratio = c[(next(iter(A.unit.items()))[0])] / next(iter(A.unit.items()))[1]
    if c != A.unit.scale(ratio):
        raise StructureError("quasi-basis does not multiply to a scalar")
    return E.scale(ratio.inv())


def temperley_lieb_wha(n=2):
    """Quantum groupoid on A_{1,2n-1} from the depth-2 Temperley-Lieb inclusion (n = 2 only)."""
    from . import config
    if n < 2:
        raise StructureError("temperley_lieb_wha needs n >= 2")
    if n > config.DEFAULT.tl_max_n:
        raise StructureError(f"n = {n} exceeds the Temperley-Lieb budget (tl_max_n = {config.DEFAULT.tl_max_n})")
    if n != 2:
        raise StructureError("temperley_lieb_wha is only implemented for n = 2")
    A = temperley_lieb_algebra(n)
    e = A.gens
    d = A.dim
    lam = (A.delta * A.delta).inv()
    m = A.mult
    mul2 = lambda X, Y: einsum("ab,cd,ace,bdf->ef", X, Y, m, m)
    sub = lambda lo, hi: _tl_sub(A, e[lo - 1:hi])
    Sig = A.sigma

    # Delta(1) comes from the (unique) separability idempotent of the commutative A_{1,n-1};
    # for A_{1,n} the idempotent is the quasi-basis of tau(. w_t), w_t the index of tau on
    # A_{1,n-1}, which is the choice compatible with the Jones relations under Delta
    Ht = sub(1, n - 1)
    wt = _tl_index(A, Ht)
    phi = einsum("x,ixk,k->i", wt, m, A.trace)
    P1 = einsum("ab,ax->xb", _tl_separability(A, Ht)[0], Sig)
    Pn = einsum("ab,ax->xb", _tl_quasi_basis(A, sub(1, n), phi), Sig)
    w = _tl_index(A, sub(n + 1, 2 * n - 1))
    wi = einsum("j,jk->k", A.unit, inverse(einsum("i,ijk->jk", w, m)))
    one = A.unit
    oo = lambda x, y: einsum("a,b->ab", x, y)
    delta_e = {}
    for i in range(1, 2 * n):
        if i < n:
            delta_e[i] = mul2(oo(e[i - 1], one), P1)
        elif i > n:
            delta_e[i] = mul2(oo(one, e[i - 1]), P1)
        else:
            delta_e[i] = mul2(mul2(oo(w, one), Pn), oo(wi, one))
    C = SparseTensor.zeros((d, d, d), A.order)
    for j, expr in enumerate(A.words):
        tot = SparseTensor.zeros((d, d), A.order)
        for c, word in expr:
            X = P1
            for i in word:
                X = mul2(X, delta_e[i])
            tot = tot + X.scale(c)
        C = C + einsum("j,ab->jab", SparseTensor.from_dict({(j,): 1}, (d,), A.order), tot)
    # f = lambda^{n(n-1)/2} (e_n ... e_1)(e_{n+1} ... e_2) ... (e_{2n-1} ... e_n)
    word = []
    for k in range(n):
        word += list(range(n + k, k, -1))
    f = A.word(word).scale(lam ** (n * (n - 1) // 2))
    counit = einsum("hxk,x,k->h", m, A.mul(w, f), A.trace).scale(lam.inv() ** (n * n))
    # S(h) = u sigma(h) u^-1 with u = sigma(w)
    u, ui = einsum("a,ab->b", w, Sig), einsum("a,ab->b", wi, Sig)
    S = einsum("p,hs,pso,q,oqk->hk", u, Sig, m, ui, m)
    # the diagram flip is not compatible with this Delta, so no star is attached
    return QuantumGroupoid(m, one, C, counit, S, order=A.order,
                           labels=[f"t{k}" for k in range(d)], name="TL(2)")
