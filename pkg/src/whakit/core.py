"""Finite quantum groupoids (weak Hopf algebras) given by structure tensors.

Conventions (input indices first):
    mult[i, j, k]    e_i e_j = sum_k mult[i,j,k] e_k
    comult[i, j, k]  Delta(e_i) = sum mult... = sum_{j,k} comult[i,j,k] e_j (x) e_k
    antipode[i, j]   S(e_i) = sum_j antipode[i,j] e_j
    star[i, j]       e_i^* = sum_j star[i,j] e_j, extended antilinearly
Elements are SparseTensors of arity 1; elements of H^{(x)k} have arity k.
"""
import sys
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import config
from .exactmath import (Scalar, SparseTensor, einsum, nullspace, rank, span, inverse,
                        intersect, vstack, rows, solve_affine)


class StructureError(ValueError):
    pass


def _letters(k, start=0):
    return "abcdefghijklmnopqrstuvw"[start:start + k]


class QuantumGroupoid:
    def __init__(self, mult, unit, comult, counit, antipode, star=None, order=None,
                 labels=None, name="H", generators=None):
        n = unit.dims[0]
        for t, shape in ((mult, (n, n, n)), (comult, (n, n, n)), (counit, (n,)), (antipode, (n, n))):
            if t.dims != shape:
                raise StructureError(f"tensor shape {t.dims} != {shape}")
        if star is not None and star.dims != (n, n):
            raise StructureError("star shape mismatch")
        self.dim = n
        self.order = order or max(t.order for t in (mult, unit, comult, counit, antipode))
        self.mult, self.unit, self.comult = mult, unit, comult
        self.counit, self.antipode, self.star = counit, antipode, star
        self.labels = list(labels) if labels else [f"e{i}" for i in range(n)]
        self.name = name
        self.generators = list(generators) if generators is not None else None

    def __repr__(self):
        return f"QuantumGroupoid({self.name!r}, dim={self.dim}, N={self.order})"

    def replace(self, **kw):
        args = dict(mult=self.mult, unit=self.unit, comult=self.comult, counit=self.counit,
                    antipode=self.antipode, star=self.star, order=self.order, labels=self.labels,
                    name=self.name, generators=self.generators)
        args.update(kw)
        return QuantumGroupoid(**args)

    def over(self, n):
        """Same structure with coefficients read in Q(zeta_n)."""
        if n == self.order:
            return self
        ts = {k: getattr(self, k) for k in ("mult", "unit", "comult", "counit", "antipode", "star")}
        return self.replace(order=n, **{k: (t.as_order(n) if t is not None else None) for k, t in ts.items()})

    # -- elements
    def e(self, i):
        return SparseTensor.basis(self.dim, i, self.order)

    def elem(self, coeffs):
        """Element from {index or label: scalar}."""
        d = {}
        for k, v in coeffs.items():
            i = self.labels.index(k) if isinstance(k, str) else k
            d[(i,)] = v
        return SparseTensor.from_dict(d, (self.dim,), self.order)

    def one(self):
        return self.unit

    def mul(self, x, y):
        return einsum("i,ijk,j->k", x, self.mult, y)

    def mul_n(self, X, Y):
        """Product in H^{(x)k} for arity-k tensors."""
        k = X.arity
        a, b, c = _letters(k), _letters(k, 8), _letters(k, 16)
        expr = ",".join([a] + [f"{a[t]}{b[t]}{c[t]}" for t in range(k)] + [b]) + "->" + c
        return einsum(expr, X, *([self.mult] * k), Y)

    def power(self, x, k):
        out = self.unit
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def comul(self, x):
        return einsum("i,ijk->jk", x, self.comult)

    def comul2(self, x):
        """(Delta (x) id) Delta(x)."""
        return einsum("i,iab,ajk->jkb", x, self.comult, self.comult)

    def eps(self, x):
        return einsum("i,i->", x, self.counit)[()]

    def S(self, x):
        return einsum("i,ij->j", x, self.antipode)

    def Sinv(self, x):
        return einsum("i,ij->j", x, self.antipode_inv)

    def apply(self, M, x):
        return einsum("i,ij->j", x, M)

    def apply_n(self, maps, X):
        """(f_1 (x) ... (x) f_k)(X) with maps given as matrices (None = identity)."""
        lab, cur = _letters(X.arity), X
        for t, M in enumerate(maps):
            if M is not None:
                out = lab[:t] + "z" + lab[t + 1:]
                cur = einsum(f"{lab},{lab[t]}z->{out}", cur, M)
        return cur

    def star_elem(self, x):
        return einsum("i,ij->j", x.conj(), self.star)

    def delta1(self):
        return self.comul(self.unit)

    def tensor_unit(self, k):
        from .exactmath import outer
        return outer(*([self.unit] * k))

    def flip(self, X):
        return X.transpose((1, 0))

    # -- derived matrices
    @cached_property
    def antipode_inv(self):
        return inverse(self.antipode)

    @cached_property
    def eps_t_matrix(self):
        """eps_t(h) = (eps (x) id)(Delta(1)(h (x) 1))."""
        return einsum("ab,aik,k->ib", self.delta1(), self.mult, self.counit)

    @cached_property
    def eps_s_matrix(self):
        """eps_s(h) = (id (x) eps)((1 (x) h)Delta(1))."""
        return einsum("ab,ibk,k->ia", self.delta1(), self.mult, self.counit)

    @cached_property
    def bilinear_eps(self):
        """B[x, y] = eps(e_x e_y)."""
        return einsum("xyk,k->xy", self.mult, self.counit)

    def left_mult_matrix(self, x):
        """L_x as (input, output) matrix: y -> x y."""
        return einsum("i,ijk->jk", x, self.mult)

    def right_mult_matrix(self, x):
        return einsum("j,ijk->ik", x, self.mult)

    def counital(self, x, side="target"):
        M = self.eps_t_matrix if side == "target" else self.eps_s_matrix
        return self.apply(M, x)

    def eps_t(self, x):
        return self.apply(self.eps_t_matrix, x)

    def eps_s(self, x):
        return self.apply(self.eps_s_matrix, x)

    def counital_subalgebra(self, side="target"):
        """Echelon basis (rows) of H_t or H_s."""
        M = self.eps_t_matrix if side == "target" else self.eps_s_matrix
        return span(M)

    def tensorands(self, which=1):
        """Span of the left (which=0) or right (which=1) tensorands of Delta(1)."""
        D = self.delta1()
        return span(D if which == 0 else D.transpose((1, 0)))

    @cached_property
    def center(self):
        """Echelon basis of Z(H)."""
        # x commutes with all e_j: sum_i x_i (m[i,j,k] - m[j,i,k]) = 0
        C = self.mult - self.mult.transpose((1, 0, 2))
        n = self.dim
        A = C.reshape((n, n * n)).transpose((1, 0))
        return nullspace(A)

    def commutant(self, B):
        """Echelon basis of {x : x b = b x for all rows b of B}."""
        n = self.dim
        eqs = []
        for b in rows(B):
            L = self.right_mult_matrix(b)   # x -> x b
            R = self.left_mult_matrix(b)    # x -> b x
            eqs.append((L - R).transpose((1, 0)))
        if not eqs:
            return SparseTensor.identity(n, self.order)
        return nullspace(vstack(eqs))

    def __eq__(self, other):
        if not isinstance(other, QuantumGroupoid):
            return NotImplemented
        same = (self.dim == other.dim and self.mult == other.mult and self.unit == other.unit
                and self.comult == other.comult and self.counit == other.counit
                and self.antipode == other.antipode)
        if not same:
            return False
        if (self.star is None) != (other.star is None):
            return False
        return self.star is None or self.star == other.star

    __hash__ = object.__hash__


# ---------------------------------------------------------------- reports

@dataclass
class Check:
    name: str
    passed: bool
    witness: Optional[tuple] = None
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    note: str = ""

    def line(self):
        s = f"{'pass' if self.passed else 'FAIL'}  {self.name}"
        if not self.passed and self.witness is not None:
            s += f"  at {self.witness}: lhs={self.lhs} rhs={self.rhs}"
        if self.note:
            s += f"  ({self.note})"
        return s

    def to_json(self):
        d = {"name": self.name, "passed": self.passed}
        if not self.passed and self.witness is not None:
            d.update(witness=list(self.witness), lhs=self.lhs, rhs=self.rhs)
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class AxiomReport:
    checks: list = field(default_factory=list)
    strategy: str = "full"

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def failed(self):
        return [c for c in self.checks if not c.passed]

    def text(self):
        return "\n".join(c.line() for c in self.checks)

    def to_json(self):
        return {"passed": self.passed, "strategy": self.strategy,
                "checks": [c.to_json() for c in self.checks]}


def compare(name, lhs, rhs, note=""):
    """Check lhs == rhs; on failure report the lexicographically first differing index."""
    if lhs.dims != rhs.dims:
        return Check(name, False, (), f"shape {lhs.dims}", f"shape {rhs.dims}", note)
    if lhs == rhs:
        return Check(name, True, note=note)
    D = lhs - rhs
    idx = tuple(int(i) for i in D.indices()[0])
    return Check(name, False, idx, str(lhs[idx]), str(rhs[idx]), note)


def _progress(msg, quiet):
    if not quiet:
        print(msg, file=sys.stderr, flush=True)


def _restrict_first(T, idxs):
    """Sub-tensor with first axis restricted to idxs (new axis order = idxs order)."""
    pos = {int(i): p for p, i in enumerate(idxs)}
    I = T.indices()
    mask = np.isin(I[:, 0], list(pos))
    sub = I[mask].copy()
    sub[:, 0] = np.array([pos[int(v)] for v in sub[:, 0]], dtype=np.int64)
    dims = (len(idxs),) + T.dims[1:]
    st = np.array([int(np.prod(dims[a + 1:])) for a in range(len(dims))], dtype=np.int64)
    keys = (sub * st).sum(axis=1).astype(np.int64)
    return SparseTensor(T.order, dims, keys, T.num[mask], T.den)


def generated_subalgebra(H, gens, quiet=True):
    """Echelon basis of the subalgebra generated by basis elements gens."""
    n = H.dim
    Ls = [H.left_mult_matrix(H.e(g)) for g in gens]
    basis = span([H.unit])
    frontier = basis
    while frontier.dims[0]:
        new = vstack([einsum("ki,ij->kj", frontier, L) for L in Ls])
        old_rank = basis.dims[0]
        merged = span(vstack([basis, new]))
        if merged.dims[0] == old_rank:
            break
        frontier = merged
        basis = merged
        _progress(f"  closure: {basis.dims[0]}/{n}", quiet)
        if basis.dims[0] == n:
            break
    return basis


def find_generators(H, quiet=True):
    """Greedy set of basis indices generating H as an algebra."""
    n = H.dim
    gens = []
    cur = span([H.unit])
    for i in range(n):
        if cur.dims[0] == n:
            break
        if rank(vstack([cur, H.e(i)])) == cur.dims[0]:
            continue
        gens.append(i)
        cur = generated_subalgebra(H, gens, quiet)
    return gens


FULL_LIMIT = 64


def verify_axioms(H, strategy="auto", generators=None, quiet=True):
    """Check the weak Hopf algebra axioms on basis elements.

    strategy "full" checks associativity and multiplicativity of Delta on all
    basis pairs/triples.  "generators" checks them for a generating set of
    basis elements against all basis elements; the left nucleus and the set
    where Delta is multiplicative are subalgebras, so this is exhaustive once
    the set is shown to generate H.
    """
    n, m, d, eps, S = H.dim, H.mult, H.comult, H.counit, H.antipode
    if strategy == "auto":
        strategy = "full" if n <= FULL_LIMIT else "generators"
    rep = AxiomReport(strategy=strategy)
    add = rep.checks.append
    t0 = time.time()
    I = SparseTensor.identity(n, H.order)

    if strategy == "generators":
        gens = generators if generators is not None else H.generators
        if gens is None:
            _progress("searching for algebra generators", quiet)
            gens = find_generators(H, quiet)
        gens = list(gens)
        sub = generated_subalgebra(H, gens, quiet)
        add(Check("generators span H", sub.dims[0] == n, note=f"{len(gens)} generators"))
        mL = _restrict_first(m, gens)
        dL = _restrict_first(d, gens)
    else:
        gens = list(range(n))
        mL, dL = m, d

    _progress(f"[{time.time() - t0:.1f}s] algebra", quiet)
    add(compare("associativity", einsum("ijm,mkn->ijkn", mL, m),
                einsum("imn,jkm->ijkn", mL, m)))
    add(compare("left unit", einsum("i,ijk->jk", H.unit, m), I))
    add(compare("right unit", einsum("j,ijk->ik", H.unit, m), I))

    _progress(f"[{time.time() - t0:.1f}s] coalgebra", quiet)
    if strategy == "full":
        add(compare("coassociativity", einsum("iab,ajk->ijkb", d, d), einsum("ijb,bkl->ijkl", d, d)))
    else:
        # (Delta (x) id)Delta and (id (x) Delta)Delta are multiplicative once Delta is,
        # so generators plus the unit suffice
        gu = vstack([SparseTensor.basis(n, g, H.order) for g in gens] + [H.unit])
        lhs = einsum("gi,iab,ajk->gjkb", gu, d, d)
        rhs = einsum("gi,ijb,bkl->gjkl", gu, d, d)
        add(compare("coassociativity", lhs, rhs, note="generators and unit"))
    add(compare("left counit", einsum("ijk,j->ik", d, eps), I))
    add(compare("right counit", einsum("ijk,k->ij", d, eps), I))

    _progress(f"[{time.time() - t0:.1f}s] multiplicativity of Delta", quiet)
    lhs = einsum("ijm,mab->ijab", mL, d)
    rhs = einsum("ipq,pra,jrs,qsb->ijab", dL, m, d, m)
    add(compare("Delta multiplicative", lhs, rhs))
    if strategy == "generators":
        D1 = H.delta1()
        add(compare("Delta(1)Delta(h) = Delta(h)", einsum("pq,pra,jrs,qsb->jab", D1, m, d, m), d))

    _progress(f"[{time.time() - t0:.1f}s] weak unit and counit", quiet)
    D1 = H.delta1()
    D2 = H.comul2(H.unit)
    X = einsum("ab,c->abc", D1, H.unit)
    Y = einsum("a,bc->abc", H.unit, D1)
    add(compare("Eq1 (Delta(1)(x)1)(1(x)Delta(1))", D2, H.mul_n(X, Y)))
    add(compare("Eq1 (1(x)Delta(1))(Delta(1)(x)1)", D2, H.mul_n(Y, X)))
    B = H.bilinear_eps
    lhs = einsum("fgm,mh->fgh", m, B)
    add(compare("Eq2 eps(fg1)eps(g2h)", lhs, einsum("fa,gab,bh->fgh", B, d, B)))
    add(compare("Eq2 eps(fg2)eps(g1h)", lhs, einsum("fa,gba,bh->fgh", B, d, B)))

    _progress(f"[{time.time() - t0:.1f}s] antipode", quiet)
    add(compare("Eq3 m(id(x)S)Delta = eps_t", einsum("iab,bc,acx->ix", d, S, m), H.eps_t_matrix))
    add(compare("Eq4 m(S(x)id)Delta = eps_s", einsum("iab,ac,cbx->ix", d, S, m), H.eps_s_matrix))
    # S(h1)h2S(h3) = eps_s(h1)S(h2), valid given coassociativity and Eq4
    add(compare("Eq5 S(h1)h2S(h3) = S(h)", einsum("iab,ac,bd,cdx->ix", d, H.eps_s_matrix, S, m), S,
                note="via Eq4"))
    try:
        ok = rank(S) == n
    except Exception:
        ok = False
    add(Check("antipode invertible", ok))

    if H.star is not None:
        _progress(f"[{time.time() - t0:.1f}s] star", quiet)
        st = H.star
        add(compare("star involutive", einsum("ij,jk->ik", st.conj(), st), I))
        add(compare("star unit", H.star_elem(H.unit), H.unit))
        # (e_i e_j)^* = e_j^* e_i^*
        lhs = einsum("ijk,kl->ijl", m.conj(), st)
        rhs = einsum("ja,ib,abl->ijl", st, st, m)
        add(compare("star antimultiplicative", lhs, rhs))
        lhs = einsum("ijk,ja,kb->iab", d.conj(), st, st)
        rhs = einsum("ij,jab->iab", st, d)
        add(compare("Delta star-homomorphism", lhs, rhs))
    _progress(f"[{time.time() - t0:.1f}s] done", quiet)
    return rep


# ---------------------------------------------------------------- derived objects

def dual(H):
    """Dual quantum groupoid on the dual basis."""
    star = None
    if H.star is not None:
        # <phi^*, x> = conj <phi, S(x)^*> gives star[i, j] = sum_a S[j, a] conj(star[a, i])
        star = einsum("ja,ai->ij", H.antipode, H.star.conj())
    return QuantumGroupoid(
        mult=H.comult.transpose((1, 2, 0)),
        unit=H.counit,
        comult=H.mult.transpose((2, 0, 1)),
        counit=H.unit,
        antipode=H.antipode.transpose((1, 0)),
        star=star, order=H.order,
        labels=[f"{lab}^" for lab in H.labels], name=f"dual({H.name})")


def derive(H, which, other=None):
    if which == "op":
        return H.replace(mult=H.mult.transpose((1, 0, 2)), antipode=H.antipode_inv, name=f"{H.name}^op",
                         generators=None)
    if which == "cop":
        return H.replace(comult=H.comult.transpose((0, 2, 1)), antipode=H.antipode_inv,
                         name=f"{H.name}^cop", generators=None)
    if which == "opcop":
        return H.replace(mult=H.mult.transpose((1, 0, 2)), comult=H.comult.transpose((0, 2, 1)),
                         name=f"{H.name}^opcop", generators=None)
    if which == "tensor":
        return tensor(H, other)
    raise ValueError(f"unknown variant {which!r}")


def tensor(H, K):
    if H.order != K.order:
        raise StructureError(f"field order mismatch {H.order} vs {K.order}")
    n1, n2 = H.dim, K.dim
    N = n1 * n2
    mult = einsum("ikp,jlr->ijklpr", H.mult, K.mult).reshape((N, N, N))
    comult = einsum("iab,jcd->ijacbd", H.comult, K.comult).reshape((N, N, N))
    unit = einsum("a,b->ab", H.unit, K.unit).reshape((N,))
    counit = einsum("a,b->ab", H.counit, K.counit).reshape((N,))
    S = einsum("ia,jb->ijab", H.antipode, K.antipode).reshape((N, N))
    star = None
    if H.star is not None and K.star is not None:
        star = einsum("ia,jb->ijab", H.star, K.star).reshape((N, N))
    labels = [f"{a}*{b}" for a in H.labels for b in K.labels]
    return QuantumGroupoid(mult, unit, comult, counit, S, star, H.order, labels, f"{H.name}(x){K.name}")


@dataclass
class MorphismReport:
    is_morphism: bool
    checks: list
    dims_t: Optional[tuple] = None

    def __bool__(self):
        return self.is_morphism


def check_morphism(H, K, f):
    """f is a (dim H, dim K) input-first matrix."""
    checks = []
    checks.append(compare("multiplicative", einsum("ijk,kl->ijl", H.mult, f),
                          einsum("ia,jb,abl->ijl", f, f, K.mult)))
    checks.append(compare("unit", H.apply(f, H.unit), K.unit))
    checks.append(compare("comultiplicative", einsum("ia,abc->ibc", f, K.comult),
                          einsum("ijk,ja,kb->iab", H.comult, f, f)))
    checks.append(compare("counit", einsum("ia,a->i", f, K.counit), H.counit))
    checks.append(compare("antipode", einsum("ij,ja->ia", H.antipode, f), einsum("ia,ab->ib", f, K.antipode)))
    ok = all(c.passed for c in checks)
    dims = None
    if ok and not f.is_zero():
        dims = (H.counital_subalgebra().dims[0], K.counital_subalgebra().dims[0])
        checks.append(Check("dim H_t preserved", dims[0] == dims[1], note=f"{dims[0]} vs {dims[1]}"))
        ok = ok and dims[0] == dims[1]
    return MorphismReport(ok, checks, dims)


def connectivity(H):
    Ht = H.counital_subalgebra()
    c = intersect(Ht, H.center).dims[0]
    Hd = dual(H)
    cd = intersect(Hd.counital_subalgebra(), Hd.center).dims[0]
    return {"connected": c == 1, "biconnected": c == 1 and cd == 1,
            "dim_Ht_cap_Z": c, "dual_dim_Ht_cap_Z": cd}
