"""Finite-dimensional modules, Wedderburn blocks, quantum traces, S-matrices and Bratteli diagrams.

Modules are stored input-first: e_i . f_v = sum_w rho[i, v, w] f_w, and every
linear map is an (input, output) matrix.
"""
import json
import random
from dataclasses import dataclass, field
from math import isqrt
from typing import Optional

from . import config
from .core import QuantumGroupoid, StructureError, Check, compare, connectivity, dual
from .exactmath import (Scalar, SparseTensor, einsum, nullspace, rank, span, rows, vstack,
                        coord_matrix, solve_affine, in_span, factor_minpoly)
from .exactmath.poly import pdivmod, pmul, pxgcd, poly_str
from .smash import Algebra, subalgebra


def _eye(n, order):
    return SparseTensor.identity(n, order)


def _mul(A, x, y):
    return einsum("i,ijk,j->k", x, A.mult, y)


def _peval(A, p, z, one):
    """p(z) inside the algebra whose unit is taken to be `one`."""
    acc = SparseTensor.zeros((A.dim,), A.order)
    for c in reversed(p):
        acc = _mul(A, acc, z) + one.scale(c)
    return acc


def _trace_vector(A):
    """Tr(L_{e_k}) for every basis element."""
    return einsum("kjl,jl->k", A.mult, _eye(A.dim, A.order))


def _center(A):
    if isinstance(A, QuantumGroupoid):
        return A.center
    n = A.dim
    C = (A.mult - A.mult.transpose((1, 0, 2))).transpose((1, 2, 0)).reshape((n * n, n))
    return nullspace(C)


def _square_root(x):
    if not x.is_rational():
        return None
    q = x.rational()
    if q.q != 1 or q.p < 0:
        return None
    r = isqrt(int(q.p))
    return r if r * r == int(q.p) else None


# ------------------------------------------------------------------ modules

@dataclass
class ModuleRep:
    parent: object
    rho: SparseTensor
    basis: Optional[SparseTensor] = None     # rows inside an ambient space, when built as a submodule
    name: str = "V"

    @property
    def dim(self):
        return self.rho.dims[1]

    @property
    def order(self):
        return self.rho.order

    def matrix(self, h):
        return einsum("i,ivw->vw", h, self.rho)

    def act(self, h, v):
        return einsum("i,ivw,v->w", h, self.rho, v)

    def check(self):
        A = self.parent
        out = [compare("rho(e_i e_j) = rho(e_i) rho(e_j)", einsum("ijk,kvw->ijvw", A.mult, self.rho),
                       einsum("jvu,iuw->ijvw", self.rho, self.rho)),
               compare("rho(1) = id", self.matrix(A.unit), _eye(self.dim, self.order))]
        return out


def is_linear(V, W, f):
    """f: V -> W commutes with the action."""
    return einsum("hxy,yz->hxz", V.rho, f) == einsum("xy,hyz->hxz", f, W.rho)


def regular_module(A):
    return ModuleRep(A, A.mult, name="A")


def submodule(V, B, name="U"):
    """Module on the rows of B, which must span an invariant subspace of V."""
    P = coord_matrix(B)
    rho = einsum("tv,hvw,wz->htz", B, V.rho, P)
    if einsum("htz,zw->htw", rho, B) != einsum("tv,hvw->htw", B, V.rho):
        raise StructureError("rows do not span a submodule")
    return ModuleRep(V.parent, rho, B, name)


def trivial_module(H):
    """H_t with h . z = eps_t(h z)."""
    B = H.counital_subalgebra("target")
    P = coord_matrix(B)
    rho = einsum("zb,hbk,kt,tw->hzw", B, H.mult, H.eps_t_matrix, P)
    return ModuleRep(H, rho, B, "H_t")


def dual_module(V):
    """(h . phi)(v) = phi(S(h) . v) on the dual basis."""
    H = V.parent
    return ModuleRep(H, einsum("ij,jvw->iwv", H.antipode, V.rho), name=f"{V.name}*")


def _ambient_action(H, V, W):
    n = V.dim * W.dim
    return einsum("hab,avx,bwy->hvwxy", H.comult, V.rho, W.rho).reshape((H.dim, n, n))


def tensor_module(V, W):
    """Image of Delta(1) on V (x)_k W with the induced action."""
    H = V.parent
    act = _ambient_action(H, V, W)
    P1 = einsum("h,hxy->xy", H.unit, act)
    if einsum("xy,yz->xz", P1, P1) != P1:
        raise StructureError("Delta(1) does not act idempotently")
    B = span(P1)
    M = submodule(ModuleRep(H, act), B, f"{V.name}(x){W.name}")
    return M


def module_ops(H, op, *mods):
    if op == "trivial":
        return trivial_module(H)
    if op == "dual":
        return dual_module(*mods)
    if op == "tensor":
        return tensor_module(*mods)
    raise ValueError(f"unknown module operation {op!r}")


def _invertible_restricted(M):
    r, c = M.dims
    return r == c and rank(M) == r


def unit_checks(V):
    """l_V and r_V restricted to H_t (x) V and V (x) H_t: linear and bijective."""
    H = V.parent
    T = trivial_module(H)
    out = []
    TV, VT = tensor_module(T, V), tensor_module(V, T)
    # l(z (x) v) = z.v, r(v (x) z) = S(z).v on ambient coordinates
    l_amb = einsum("zh,hvw->zvw", T.basis, V.rho).reshape((T.dim * V.dim, V.dim))
    r_amb = einsum("zh,hk,kvw->vzw", T.basis, H.antipode, V.rho).reshape((V.dim * T.dim, V.dim))
    for name, M, amb in (("l_V", TV, l_amb), ("r_V", VT, r_amb)):
        f = einsum("tx,xw->tw", M.basis, amb)
        out.append(Check(f"{name} bijective", _invertible_restricted(f)))
        out.append(Check(f"{name} H-linear", is_linear(M, V, f)))
    return out


def zigzag(V):
    """Both snake identities, with l_V^-1(v) = S(1_1) (x) 1_2 v and r_V(v (x) z) = S(z) v."""
    H = V.parent
    D1, S = H.delta1(), H.antipode
    rho, rhoD = V.rho, dual_module(V).rho
    I = _eye(V.dim, V.order)
    linv = einsum("ab,ah,bvw->vhw", D1, S, rho)                # v -> (z, v')
    coev = einsum("hab,aix,biy->hxy", H.comult, rho, rhoD)     # z -> g_x (x) gamma^y
    ev = einsum("ah,avy->yvh", D1, rho)                        # gamma^y (x) v -> z
    rmap = einsum("hc,cgo->gho", S, rho)                       # g (x) z -> S(z) g
    first = einsum("vhw,hxy,ywk,xko->vo", linv, coev, ev, rmap)
    rinv = einsum("ah,ayz->yzh", D1, rhoD)                     # phi -> phi' (x) z
    lmap = rhoD                                                # z (x) psi -> z . psi
    second = einsum("pqh,hxy,qxk,kyz->pz", rinv, coev, ev, lmap)
    return [compare("(id (x) d_V)(b_V (x) id) = id", first, I),
            compare("(d_V (x) id)(id (x) b_V) = id", second, I)]


def braiding(H, R, V, W):
    """c_{V,W}(x) = R2 x2 (x) R1 x1 as a map between the tensor images."""
    VW, WV = tensor_module(V, W), tensor_module(W, V)
    amb = einsum("ab,bwy,avx->vwyx", R, W.rho, V.rho).reshape((V.dim * W.dim, W.dim * V.dim))
    c = einsum("tx,xy,yz->tz", VW.basis, amb, coord_matrix(WV.basis))
    return c, VW, WV


def braiding_checks(H, qt, V, W):
    qt = qt.with_bar(H)
    c, VW, WV = braiding(H, qt.R, V, W)
    # inverse: w (x) v -> Rbar1 v (x) Rbar2 w
    amb = einsum("ab,avx,bwy->wvxy", qt.Rbar, V.rho, W.rho).reshape((W.dim * V.dim, V.dim * W.dim))
    ci = einsum("tx,xy,yz->tz", WV.basis, amb, coord_matrix(VW.basis))
    return [Check("c H-linear", is_linear(VW, WV, c)),
            compare("c c^-1 = id", einsum("xy,yz->xz", c, ci), _eye(VW.dim, VW.order)),
            compare("c^-1 c = id", einsum("xy,yz->xz", ci, c), _eye(WV.dim, WV.order))]


# ---------------------------------------------------------------- Wedderburn

@dataclass
class WedderburnData:
    idempotents: list
    dims: list                 # n_alpha, None when the block could not be measured
    degrees: list              # degree of the block center over the base field
    block_dims: list
    characters: list           # chi_alpha on the basis (k-character of the simple module)
    traces: list               # tau_alpha(x) = Tr(L_{x e_alpha})
    irreps: list
    split: list
    minpoly: list = field(default_factory=list)

    @property
    def unsplit(self):
        return not all(self.split)

    def __len__(self):
        return len(self.idempotents)

    def module_dim(self, a):
        """dimension over the base field of the simple module of block a."""
        return einsum("i,i->", self.characters[a], self.idempotents[a])[()]


def _is_semisimple(A):
    if isinstance(A, QuantumGroupoid):
        from .integrals import is_semisimple
        return is_semisimple(A)
    tr = _trace_vector(A)
    G = einsum("xyk,k->xy", A.mult, tr)
    return rank(G) == A.dim


def _generic_central(A, Z, tries, rng):
    r = Z.dims[0]
    P = coord_matrix(Z)
    for t in range(tries):
        if t == 0:
            cs = list(range(1, r + 1))
        else:
            cs = [rng.randint(-4, 4) for _ in range(r)]
        z = einsum("r,rk->k", SparseTensor.vector([Scalar(c) for c in cs], A.order), Z)
        Mz = einsum("ia,j,jak,kb->ib", Z, z, A.mult, P)
        facs = factor_minpoly(Mz)
        deg = sum(len(f) - 1 for f, _ in facs)
        if any(m > 1 for _, m in facs):
            raise StructureError("center is not reduced: algebra is not semisimple")
        if deg == r:
            return z, facs
    raise StructureError("no separating central element found")


def _block_irrep(A, e, n, tries, rng):
    """Minimal left ideal A y of dimension n inside the block A e, when one is found."""
    Bb = span(einsum("ijk,j->ik", A.mult, e))
    P = coord_matrix(Bb)
    m = Bb.dims[0]
    for t in range(tries):
        cs = [Scalar(rng.randint(-3, 3)) for _ in range(m)]
        w = einsum("r,rk->k", SparseTensor.vector(cs, A.order), Bb)
        Mw = einsum("j,ia,jak,kb->ib", w, Bb, A.mult, P)
        facs = factor_minpoly(Mw)
        full = [Scalar(1)]
        for f, k in facs:
            for _ in range(k):
                full = pmul(full, list(f))
        for f, k in facs:
            if len(f) != 2 or k != 1:
                continue
            q = pdivmod(full, list(f))[0]
            y = _peval(A, q, w, e)
            L = span(einsum("ijk,j->ik", A.mult, y))
            if L.dims[0] == n:
                return submodule(regular_module(A), L, "irrep")
    return None


def wedderburn(A, irreps=True, budget=None, seed=0):
    """Central primitive idempotents, characters and (when they split) irreps of a semisimple algebra."""
    budget = budget or config.DEFAULT
    if not _is_semisimple(A):
        raise StructureError("algebra is not semisimple")
    rng = random.Random(seed)
    Z = _center(A)
    r = Z.dims[0]
    one = A.unit
    if r == 1:
        idems, degs, polys = [one], [1], [[Scalar(-1), Scalar(1)]]
    else:
        z, facs = _generic_central(A, Z, 24, rng)
        m = [Scalar(1)]
        for f, _ in facs:
            m = pmul(m, list(f))
        if len(m) - 1 > budget.max_degree:
            raise StructureError("splitting exceeds the degree budget")
        idems, degs, polys = [], [], []
        for f, _ in facs:
            q = pdivmod(m, list(f))[0]
            g, s, _ = pxgcd(q, list(f))
            c = pdivmod(pmul(s, q), m)[1]
            idems.append(_peval(A, c, z, one))
            degs.append(len(f) - 1)
            polys.append(list(f))
    tr = _trace_vector(A)
    blocks = []
    for e, d, f in zip(idems, degs, polys):
        bd = rank(einsum("ijk,j->ik", A.mult, e))
        n = _square_root(Scalar(bd) / Scalar(d)) if bd % d == 0 else None
        tau = einsum("j,ijk,k->i", e, A.mult, tr)
        supp = tuple(sorted(int(i[0]) for i in e.indices()))
        blocks.append((n if n is not None else bd, supp, e, n, d, bd, tau, f))
    blocks.sort(key=lambda b: (b[0], b[1]))
    out = WedderburnData([], [], [], [], [], [], [], [], [])
    for _, _, e, n, d, bd, tau, f in blocks:
        rep = None
        if irreps and n is not None and d == 1:
            if n == 1:
                rep = ModuleRep(A, tau.reshape((A.dim, 1, 1)), name="irrep")
            else:
                rep = _block_irrep(A, e, n, 12, rng)
        ok = d == 1 and n is not None and (n == 1 or rep is not None or not irreps)
        chi = tau.scale(Scalar(1) / Scalar(n)) if n else tau
        out.idempotents.append(e)
        out.dims.append(n)
        out.degrees.append(d)
        out.block_dims.append(bd)
        out.characters.append(chi)
        out.traces.append(tau)
        out.irreps.append(rep)
        out.split.append(ok)
        out.minpoly.append(poly_str(f))
    return out


# ---------------------------------------------------------------- traces and S

def _trace(M, f):
    return einsum("vw,wv->", M, f)[()]


def _dim_ht(H):
    return H.counital_subalgebra("target").dims[0]


def _unu(H, qt, nu):
    from .qtriang import drinfeld_u
    return H.mul(drinfeld_u(H, qt).u, nu)


def quantum_trace(H, qt, nu, V, f, connected=None, check=False):
    """Scalar when H is connected, else the induced endomorphism of H_t (on its echelon basis)."""
    if not is_linear(V, V, f):
        raise StructureError("f is not H-linear")
    if check:
        from .qtriang import verify_qt, check_ribbon
        if not verify_qt(H, qt).passed:
            raise StructureError("R fails the quasitriangular axioms")
        if not check_ribbon(H, qt, nu).passed:
            raise StructureError("nu is not a ribbon element")
    x = _unu(H, qt, nu)
    if connected is None:
        connected = connectivity(H)["connected"]
    if connected:
        return _trace(V.matrix(x), f) / Scalar(_dim_ht(H))
    # z -> Tr(S(1_1) u nu f) z 1_2
    T = trivial_module(H)
    sx = einsum("ab,ah,hk->kb", H.delta1(), H.antipode, einsum("hxk,x->hk", H.mult, x))
    coef = einsum("kb,kvw,wv->b", sx, V.rho, f)
    P = coord_matrix(T.basis)
    return einsum("b,zh,hbk,kw->zw", coef, T.basis, H.mult, P)


def quantum_dim(H, qt, nu, V, connected=None):
    return quantum_trace(H, qt, nu, V, _eye(V.dim, V.order), connected)


@dataclass
class SMatrixReport:
    S: SparseTensor
    is_modular: bool
    dims: list
    preconditions: dict
    factorizable: bool
    normalized_integral: bool
    consistent: bool            # the factorizable + integral chain agrees with the computed verdict
    split: bool

    @property
    def table(self):
        k = self.S.dims[0]
        return [[self.S[i, j] for j in range(k)] for i in range(k)]

    def to_json(self):
        from .io import mat_json
        return {"S": mat_json(self.S), "is_modular": self.is_modular, "dims": self.dims,
                "preconditions": self.preconditions, "factorizable": self.factorizable,
                "normalized_two_sided_integral": self.normalized_integral,
                "consistent": self.consistent, "split": self.split}


def s_matrix(H, qt, nu=None, W=None):
    """S_ij = (dim H_t)^-1 (chi_j (x) chi_i)((u nu (x) u nu) R21 R) over the simple modules."""
    from .integrals import haar_integral, is_semisimple
    from .qtriang import factorizability, ribbon, check_ribbon
    qt = qt.with_bar(H)
    rib = ribbon(H, qt) if nu is None else check_ribbon(H, qt, nu)
    pre = {"connected": connectivity(H)["connected"], "semisimple": is_semisimple(H),
           "ribbon": rib.passed}
    missing = [k for k, v in pre.items() if not v]
    if missing:
        raise StructureError("s_matrix preconditions unmet: " + ", ".join(missing))
    nu = rib.nu
    W = W or wedderburn(H, irreps=False)
    x = _unu(H, qt, nu)
    R = qt.R
    X = H.mul_n(einsum("a,b->ab", x, x), H.mul_n(R.transpose((1, 0)), R))
    C = vstack(W.characters)
    S = einsum("ab,ja,ib->ij", X, C, C).scale(Scalar(1) / Scalar(_dim_ht(H)))
    k = S.dims[0]
    modular = rank(S) == k
    fac = factorizability(H, qt).is_factorizable
    integ = haar_integral(H) is not None
    return SMatrixReport(S, modular, list(W.dims), pre, fac, integ,
                         not (fac and integ) or modular, not W.unsplit)


# ---------------------------------------------------------------- Bratteli

@dataclass
class BratteliData:
    matrix: list               # matrix[i][j]: multiplicity of bottom vertex i in top vertex j
    bottom: list               # block dimensions of the smaller algebra
    top: list
    components: list = field(default_factory=list)   # [(bottom indices, top indices)]
    bottom_ids: list = field(default_factory=list)   # positions in the unrestricted diagram
    top_ids: list = field(default_factory=list)

    def __post_init__(self):
        if not self.bottom_ids:
            self.bottom_ids = list(range(len(self.bottom)))
        if not self.top_ids:
            self.top_ids = list(range(len(self.top)))
        if not self.components:
            self.components = _components(self.matrix, len(self.bottom), len(self.top))

    @property
    def edges(self):
        return [(i, j, m) for i, row in enumerate(self.matrix) for j, m in enumerate(row) if m]

    def restrict(self, comp):
        bs, ts = comp
        M = [[self.matrix[i][j] for j in ts] for i in bs]
        return BratteliData(M, [self.bottom[i] for i in bs], [self.top[j] for j in ts],
                            bottom_ids=[self.bottom_ids[i] for i in bs],
                            top_ids=[self.top_ids[j] for j in ts])

    def to_json(self):
        return {"bottom": self.bottom, "top": self.top, "matrix": self.matrix,
                "edges": [list(e) for e in self.edges],
                "components": [[list(b), list(t)] for b, t in self.components]}

    def to_dot(self, name="bratteli"):
        out = [f"graph {name} {{"]
        out += [f'  a{i} [label="{d}"];' for i, d in enumerate(self.bottom)]
        out += [f'  b{j} [label="{d}"];' for j, d in enumerate(self.top)]
        for i, j, m in self.edges:
            out.append(f"  a{i} -- b{j};" if m == 1 else f'  a{i} -- b{j} [label="{m}"];')
        out.append("}")
        return "\n".join(out) + "\n"

    def __str__(self):
        return json.dumps(self.to_json())


def _components(M, nb, nt):
    parent = list(range(nb + nt))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(nb):
        for j in range(nt):
            if M[i][j]:
                parent[find(i)] = find(nb + j)
    groups = {}
    for v in range(nb + nt):
        groups.setdefault(find(v), []).append(v)
    comps = [([v for v in g if v < nb], [v - nb for v in g if v >= nb]) for g in groups.values()]
    return sorted(comps, key=lambda c: (c[0][:1] or [nb], c[1][:1]))


def _as_count(x):
    if not x.is_rational():
        raise StructureError(f"multiplicity {x} is not rational")
    q = x.rational()
    if q.q != 1 or q.p < 0:
        raise StructureError(f"multiplicity {q} is not a nonnegative integer")
    return int(q.p)


def inclusion_matrix(A, B, embedding, WA=None, WB=None):
    """Bratteli data of a unital inclusion; embedding rows are images of A's basis in B."""
    if einsum("a,ab->b", A.unit, embedding) != B.unit:
        raise StructureError("embedding is not unital")
    WA = WA or wedderburn(A, irreps=False)
    WB = WB or wedderburn(B, irreps=False)
    M = []
    for i, e in enumerate(WA.idempotents):
        img = einsum("a,ab->b", e, embedding)
        d = WA.module_dim(i)
        M.append([_as_count(einsum("b,b->", chi, img)[()] / d) for chi in WB.characters])
    return BratteliData(M, _labels(WA), _labels(WB))


def _labels(W):
    return [n if s else f"{n}*{d}" for n, d, s in zip(W.dims, W.degrees, W.split)]


def principal_graph_depth2(H):
    """Bratteli diagram of dual(H)_t inside dual(H), on the component of the trivial module."""
    import warnings
    if not connectivity(H)["biconnected"]:
        warnings.warn("H is not biconnected; the principal graph may not be the expected one")
    Hd = dual(H)
    A, emb = subalgebra(Hd, Hd.counital_subalgebra("target"))
    try:
        WB = wedderburn(Hd, irreps=False)
    except StructureError as exc:
        raise StructureError(f"dual is not semisimple: {exc}") from None
    data = inclusion_matrix(A, Hd, emb, WB=WB)
    T = trivial_module(Hd)
    hit = [j for j, e in enumerate(WB.idempotents) if not T.matrix(e).is_zero()]
    comp = next(c for c in data.components if set(hit) & set(c[1]))
    return data.restrict(comp)


# ---------------------------------------------------------------- group-like normalization

@dataclass
class GNormalization:
    g: Optional[SparseTensor]
    ratios: list                 # chi_a(g^-1) / chi_a(g) per block before rescaling
    ok: bool
    note: str = ""


def _rational_sqrt(x):
    if not x.is_rational():
        return None
    q = x.rational()
    if q <= 0:
        return None
    a, b = isqrt(int(q.p)), isqrt(int(q.q))
    if a * a != q.p or b * b != q.q:
        return None
    return Scalar(a) / Scalar(b)


def normalize_grouplike(H, g=None, W=None):
    """Rescale g blockwise so that tr pi(g^-1) = tr pi(g) on every block, keeping S(g) = g^-1."""
    from .integrals import s2_implementer, _inverse_elem
    if g is None:
        rep = s2_implementer(H)
        g = rep.canonical if rep.canonical is not None else (rep.grouplike[0] if rep.grouplike else None)
    if g is None:
        return GNormalization(None, [], False, "no group-like S^2 implementer")
    W = W or wedderburn(H, irreps=False)
    gi = _inverse_elem(H, g)
    z = SparseTensor.zeros((H.dim,), H.order)
    ratios = []
    for chi, e in zip(W.characters, W.idempotents):
        a = einsum("i,i->", chi, g)[()]
        b = einsum("i,i->", chi, gi)[()]
        if not a or not b:
            return GNormalization(None, ratios, False, "a block trace of g vanishes")
        ratios.append(b / a)
        c = _rational_sqrt(b / a)
        if c is None:
            return GNormalization(None, ratios, False, "square root leaves the base field")
        z = z + e.scale(c)
    g2 = H.mul(g, z)
    g2i = _inverse_elem(H, g2)
    ok = g2i is not None and H.S(g2) == g2i
    return GNormalization(g2, ratios, ok, "" if not W.unsplit else "unsplit blocks: checked on Galois orbits")
