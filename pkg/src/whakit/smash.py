"""Module algebras, smash products over H_t and the duality theorem for actions."""
from dataclasses import dataclass, field

from .core import QuantumGroupoid, StructureError, compare, dual
from .exactmath import (SparseTensor, einsum, span, rows, vstack, rank, nullspace, coord_matrix,
                        quotient, solve_affine)


@dataclass
class Algebra:
    mult: SparseTensor
    unit: SparseTensor
    labels: list = field(default_factory=list)

    @property
    def dim(self):
        return self.unit.dims[0]

    @property
    def order(self):
        return self.mult.order

    def mul(self, x, y):
        return einsum("i,ijk,j->k", x, self.mult, y)

    def over(self, n):
        return Algebra(self.mult.as_order(n), self.unit.as_order(n), self.labels)

    def right_mult(self, a):
        """matrix of x -> x a (input, output)."""
        return einsum("j,ijk->ik", a, self.mult)


def algebra_of(H):
    return Algebra(H.mult, H.unit, list(H.labels))


def subalgebra(H, B):
    """Algebra on the rows of B (a basis of a subalgebra of H) and the inclusion matrix."""
    r, n = B.dims
    P = coord_matrix(B)
    mult = einsum("ia,jb,abk,kz->ijz", B, B, H.mult, P)
    back = einsum("ijz,zk->ijk", mult, B)
    if back != einsum("ia,jb,abk->ijk", B, B, H.mult):
        raise StructureError("rows do not span a subalgebra")
    unit = einsum("k,kz->z", H.unit, P)
    if einsum("z,zk->k", unit, B) != H.unit:
        raise StructureError("subalgebra does not contain 1")
    return Algebra(mult, unit, [f"b{i}" for i in range(r)]), B


@dataclass
class ModuleAlgebraAction:
    H: QuantumGroupoid
    A: Algebra
    action: SparseTensor         # act[h, a, b]: e_h . e_a = sum_b act e_b


def check_module_algebra(H, A, action):
    act = action
    I = SparseTensor.identity(A.dim, A.order)
    out = [
        compare("unit acts trivially", einsum("h,hab->ab", H.unit, act), I),
        compare("(hg).a = h.(g.a)", einsum("hgk,kab->hgab", H.mult, act),
                einsum("gax,hxb->hgab", act, act)),
        compare("h.(ab) = (h1.a)(h2.b)", einsum("abk,hkc->habc", A.mult, act),
                einsum("hpq,pax,qby,xyc->habc", H.comult, act, act, A.mult)),
        compare("h.1 = eps_t(h).1", einsum("a,hab->hb", A.unit, act),
                einsum("hz,a,zab->hb", H.eps_t_matrix, A.unit, act)),
    ]
    return all(c.passed for c in out), out


# -- standard actions

def trivial_action(H):
    """H on H_t via h . z = eps_t(h z)."""
    A, B = subalgebra(H, H.counital_subalgebra("target"))
    P = coord_matrix(B)
    act = einsum("zb,hbk,kt,tw->hzw", B, H.mult, H.eps_t_matrix, P)
    return ModuleAlgebraAction(H, A, act)


def dual_action(H):
    """dual(H) on H via phi -> h = h_(1) <phi, h_(2)>."""
    act = einsum("hkp->phk", H.comult)
    return ModuleAlgebraAction(dual(H), algebra_of(H), act)


def adjoint_action(H):
    """H on the centralizer of H_s via h . a = h_(1) a S(h_(2))."""
    C = H.commutant(H.counital_subalgebra("source"))
    C = span(C)
    A, B = subalgebra(H, C)
    P = coord_matrix(B)
    act = einsum("hpq,ab,pbx,qs,xsy,yz->haz", H.comult, B, H.mult, H.antipode, H.mult, P)
    return ModuleAlgebraAction(H, A, act)


# -- smash product

@dataclass
class SmashAlgebra:
    data: ModuleAlgebraAction
    mult: SparseTensor
    unit: SparseTensor
    lift: SparseTensor           # quotient basis -> A (x) H (flat a*nH + h)
    proj: SparseTensor           # A (x) H -> quotient basis
    relations: SparseTensor

    @property
    def dim(self):
        return self.unit.dims[0]

    @property
    def order(self):
        return self.mult.order

    def algebra(self):
        return Algebra(self.mult, self.unit, [f"s{i}" for i in range(self.dim)])

    def element(self, a, h):
        """class of a (x) h."""
        return einsum("a,h,ahj->j", a, h, self.proj.reshape((self.data.A.dim, self.data.H.dim, self.dim)))

    def embed_A(self):
        H = self.data.H
        return einsum("ab,h,bhj->aj", SparseTensor.identity(self.data.A.dim, self.order), H.unit,
                      self.proj.reshape((self.data.A.dim, H.dim, self.dim)))

    def embed_H(self):
        H, A = self.data.H, self.data.A
        return einsum("a,hg,agj->hj", A.unit, SparseTensor.identity(H.dim, self.order),
                      self.proj.reshape((A.dim, H.dim, self.dim)))


def _smash_rep_mult(H, A, act):
    """(a#h)(b#g) = a(h_(1).b) # h_(2) g on representatives."""
    nA, nH = A.dim, H.dim
    M = einsum("hpq,pbx,axc,qgk->ahbgck", H.comult, act, A.mult, H.mult)
    return M.reshape((nA * nH, nA * nH, nA * nH))


def smash_product(data, check=True):
    H, A, act = data.H, data.A, data.action
    if check:
        ok, rep = check_module_algebra(H, A, act)
        if not ok:
            raise StructureError("action invalid: " + ", ".join(c.name for c in rep if not c.passed))
    nA, nH = A.dim, H.dim
    N = nA * nH
    # a.z (x) h - a (x) z h,  a.z = a (z.1)
    z1 = einsum("zab,a->zb", act, A.unit)
    rels = []
    for z in rows(H.counital_subalgebra("target")):
        az = A.right_mult(einsum("z,zb->b", z, z1))             # [a, c]
        zh = H.left_mult_matrix(z)                              # [h, k]
        t = einsum("ac,hk->ahck", az, SparseTensor.identity(nH, H.order)) - \
            einsum("ac,hk->ahck", SparseTensor.identity(nA, H.order), zh)
        rels.append(t.reshape((N, N)))
    R = span(vstack(rels))
    lift, proj = quotient(R, N, H.order)
    M = _smash_rep_mult(H, A, act)
    # well-definedness: relations multiply into relations
    if check:
        for r in rows(R):
            if not einsum("x,xyk,kj->yj", r, M, proj).is_zero() or \
                    not einsum("y,xyk,kj->xj", r, M, proj).is_zero():
                raise StructureError("smash multiplication not well defined on the quotient")
    mult = einsum("ix,jy,xyk,kz->ijz", lift, lift, M, proj)
    one = einsum("a,h->ah", A.unit, H.unit).reshape((N,))
    unit = einsum("k,kz->z", one, proj)
    return SmashAlgebra(data, mult, unit, lift, proj, R)


def check_algebra(A):
    I = SparseTensor.identity(A.dim, A.order)
    return [compare("associativity", einsum("ijm,mkn->ijkn", A.mult, A.mult),
                    einsum("imn,jkm->ijkn", A.mult, A.mult)),
            compare("left unit", einsum("i,ijk->jk", A.unit, A.mult), I),
            compare("right unit", einsum("j,ijk->ik", A.unit, A.mult), I)]


def smash_dual_action(S):
    """dual(H) on A#H via phi . (a#h) = a # (phi -> h)."""
    H, A = S.data.H, S.data.A
    nA, nH = A.dim, H.dim
    # phi -> e_h = sum_k d[h, k, phi] e_k
    rep = einsum("ab,hkp->pahbk", SparseTensor.identity(nA, H.order), H.comult).reshape((nH, nA * nH, nA * nH))
    act = einsum("ix,pxy,yj->pij", S.lift, rep, S.proj)
    return ModuleAlgebraAction(dual(H), S.algebra(), act)


@dataclass
class DualityReport:
    dim_double_smash: int
    dim_endomorphisms: int
    homomorphism: bool
    alpha_beta: bool
    beta_alpha: bool
    lands_in_commutant: bool

    @property
    def passed(self):
        return (self.homomorphism and self.alpha_beta and self.beta_alpha and self.lands_in_commutant
                and self.dim_double_smash == self.dim_endomorphisms)


def verify_duality(data):
    """(A#H)#dual(H) is isomorphic to End(A#H)_A via alpha, with inverse beta."""
    H, A = data.H, data.A
    S1 = smash_product(data)
    Bd = S1.algebra()
    dact = smash_dual_action(S1)
    Hd = dact.H
    S2 = smash_product(dact)
    n1, nd = S1.dim, Hd.dim
    # End(A#H)_A: T with T(x (a#1)) = T(x)(a#1)
    EA = S1.embed_A()                                          # [a, j]
    eqs = []
    for a in rows(EA):
        R = Bd.right_mult(a)                                   # [x, y]
        eqs.append(_comm_eqs(R, n1, H.order))
    End = nullspace(vstack(eqs))                               # rows: flattened T[u, v]
    # alpha on representatives b (x) phi: T(v) = b * (phi . v)
    al = einsum("pvw,bwk->bpvk", dact.action, Bd.mult)
    al = al.reshape((n1 * nd, n1 * n1))
    alpha = einsum("ix,xT->iT", S2.lift, al)                   # quotient basis -> End
    # homomorphism: alpha(XY) = alpha(X) o alpha(Y)  (apply Y first)
    lhs = einsum("ijk,kT->ijT", S2.mult, alpha).reshape((S2.dim, S2.dim, n1, n1))
    A3 = alpha.reshape((S2.dim, n1, n1))
    rhs = einsum("juv,ivw->ijuw", A3, A3)
    hom = lhs == rhs
    # alpha lands in End_A
    in_comm = rank(vstack([End, alpha])) == End.dims[0] if End.dims[0] else alpha.is_zero()
    # beta(T) = sum_i T(1#f_i(2)) (1#S^-1(f_i(1))) # xi^i
    EH = S1.embed_H()                                          # [h, j]
    Sinv = H.antipode_inv
    T = End.reshape((End.dims[0], n1, n1))
    first = einsum("ipq,qu,tuv,pa,ab,vbw->tiw", H.comult, EH, T, Sinv, EH, Bd.mult)
    beta_rep = einsum("tiw->twi", first).reshape((End.dims[0], n1 * nd))
    beta = einsum("tx,xj->tj", beta_rep, S2.proj)              # End basis -> S2 quotient
    # alpha(beta(T)) = T
    ab = einsum("tj,jT->tT", beta, alpha) == End
    # beta(alpha(X)) = X : express alpha(X) in End coordinates
    P = coord_matrix(End)
    ba = einsum("iT,Tt,tj->ij", alpha, P, beta) == SparseTensor.identity(S2.dim, H.order)
    return DualityReport(S2.dim, End.dims[0], hom, ab, ba, in_comm)


def _comm_eqs(R, n, order):
    """Rows of the linear conditions R T = T R on T[u, v] (flattened u*n + v)."""
    I = SparseTensor.identity(n, order)
    # (T R)[u, w] = sum_v T[u, v] R[v, w];  (R T)[u, w] = sum_v R[u, v] T[v, w]
    TR = einsum("uU,vw->uwUv", I, R)       # coefficient of T[U, v] in (T R)[u, w]
    RT = einsum("uV,wW->uwVW", R, I)       # coefficient of T[V, W] in (R T)[u, w]
    return (TR - RT).reshape((n * n, n * n))
