"""Quasitriangular structures, the Drinfeld double, Drinfeld and ribbon elements."""
from dataclasses import dataclass, field
from typing import Optional

from .core import (QuantumGroupoid, StructureError, compare, Check, AxiomReport, verify_axioms,
                   FULL_LIMIT, _restrict_first)
from .exactmath import (SparseTensor, einsum, span, rows, vstack, rank, quotient, solve_affine,
                        in_span, intersect)


@dataclass
class QTStructure:
    R: SparseTensor
    Rbar: Optional[SparseTensor] = None

    def with_bar(self, H):
        if self.Rbar is not None:
            return self
        return QTStructure(self.R, einsum("ab,ax->xb", self.R, H.antipode))


def _leg(H, X, pos):
    """Embed an element of H (x) H into H^{(x)3} at legs pos (e.g. (0, 2))."""
    u = H.unit
    if pos == (0, 1):
        return einsum("ab,c->abc", X, u)
    if pos == (1, 2):
        return einsum("a,bc->abc", u, X)
    if pos == (0, 2):
        return einsum("ac,b->abc", X, u)
    raise ValueError(pos)


def verify_qt(H, qt):
    qt = qt.with_bar(H)
    R, Rb = qt.R, qt.Rbar
    D1 = H.delta1()
    D1op = D1.transpose((1, 0))
    m2 = H.mul_n
    rep = AxiomReport(strategy="qt")
    add = rep.checks.append
    add(compare("R in Delta^op(1)(H(x)H)Delta(1)", m2(m2(D1op, R), D1), R))
    add(compare("Rbar in Delta(1)(H(x)H)Delta^op(1)", m2(m2(D1, Rb), D1op), Rb))
    # Delta^op(h) R = R Delta(h); the h where this holds form a subalgebra
    n = H.dim
    d, m = H.comult, H.mult
    big = n > FULL_LIMIT and H.generators is not None
    dg = _restrict_first(d, H.generators) if big else d
    lhs = einsum("hqp,xy,pxa,qyb->hab", dg, R, m, m)
    rhs = einsum("xy,hpq,xpa,yqb->hab", R, dg, m, m)
    add(compare("Delta^op(h) R = R Delta(h)", lhs, rhs, note="generators" if big else ""))
    R12, R13, R23 = _leg(H, R, (0, 1)), _leg(H, R, (0, 2)), _leg(H, R, (1, 2))
    add(compare("(id(x)Delta)R = R13 R12", einsum("ab,bcd->acd", R, d), m2(R13, R12)))
    add(compare("(Delta(x)id)R = R13 R23", einsum("ab,acd->cdb", R, d), m2(R13, R23)))
    add(compare("R Rbar = Delta^op(1)", m2(R, Rb), D1op))
    add(compare("Rbar R = Delta(1)", m2(Rb, R), D1))
    if n > FULL_LIMIT:
        # R12 R13 R23 = R12 (Delta(x)id)R = (Delta^op(x)id)(R) R12 = R23 R13 R12
        prev = [c for c in rep.checks if c.name.startswith(("Delta^op", "(Delta(x)id)"))]
        add(Check("QYBE", all(c.passed for c in prev), note="implied by the two checks above"))
    else:
        add(compare("QYBE", m2(m2(R12, R13), R23), m2(m2(R23, R13), R12)))
    S, Et, Es = H.antipode, H.eps_t_matrix, H.eps_s_matrix
    add(compare("(eps_s(x)id)R = Delta(1)", einsum("ab,ax->xb", R, Es), D1))
    add(compare("(id(x)eps_s)R = (S(x)id)Delta^op(1)", einsum("ab,bx->ax", R, Es),
                einsum("ab,ax->xb", D1op, S)))
    add(compare("(eps_t(x)id)R = Delta^op(1)", einsum("ab,ax->xb", R, Et), D1op))
    add(compare("(id(x)eps_t)R = (S(x)id)Delta(1)", einsum("ab,bx->ax", R, Et),
                einsum("ab,ax->xb", D1, S)))
    add(compare("(S(x)id)R = Rbar", einsum("ab,ax->xb", R, S), Rb))
    add(compare("(id(x)S^-1)R = Rbar", einsum("ab,bx->ax", R, H.antipode_inv), Rb))
    add(compare("(S(x)S)R = R", einsum("ab,ax,by->xy", R, S, S), R))
    return rep


def _invert(H, x):
    sol = solve_affine(H.left_mult_matrix(x).transpose((1, 0)), H.unit)
    if not sol.consistent:
        return None
    y = sol.particular
    return y if H.mul(y, x) == H.unit else None


@dataclass
class DrinfeldElements:
    u: SparseTensor
    v: SparseTensor
    u_inv: SparseTensor
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def drinfeld_u(H, qt):
    qt = qt.with_bar(H)
    R, Rb = qt.R, qt.Rbar
    S = H.antipode
    u = einsum("ab,bx,xak->k", R, S, H.mult)            # S(R2) R1
    v = H.S(u)
    ui = _invert(H, u)
    if ui is None:
        raise StructureError("Drinfeld element is not invertible")
    checks = []
    S2 = einsum("ia,ab->ib", S, S)
    checks.append(compare("u x = S^2(x) u", einsum("u,uxo->xo", u, H.mult),
                          einsum("xa,auo,u->xo", S2, H.mult, u)))
    uu = einsum("a,b->ab", u, u)
    checks.append(compare("Delta(u) = Rbar Rbar21 (u(x)u)", H.comul(u),
                          H.mul_n(H.mul_n(Rb, Rb.transpose((1, 0))), uu)))
    closed = einsum("ab,ax,xy,byk->k", R, S, S, H.mult)   # R2 S^2(R1)
    checks.append(compare("u^-1 = R2 S^2(R1)", closed, ui))
    uv = H.mul(u, v)
    checks.append(Check("uv central", in_span(H.center, uv)))
    vi = _invert(H, v)
    g = H.mul(u, vi)
    checks.append(compare("uv^-1 group-like", H.comul(g), H.mul_n(einsum("a,b->ab", g, g), H.delta1())))
    return DrinfeldElements(u, v, ui, checks)


@dataclass
class FactorizabilityReport:
    map_matrix: SparseTensor
    rank: int
    centralizer_dim: int
    is_factorizable: bool
    is_triangular: bool
    range_in_centralizer: bool


def factorizability(H, qt):
    qt = qt.with_bar(H)
    R, Rb = qt.R, qt.Rbar
    R21 = R.transpose((1, 0))
    Q = H.mul_n(R21, R)                    # F(xi^a) = sum_b Q[a, b] e_b
    C = span(H.commutant(H.counital_subalgebra("source")))
    r = rank(Q)
    inside = rank(vstack([C, Q])) == C.dims[0]
    return FactorizabilityReport(Q, r, C.dims[0], inside and r == C.dims[0], R21 == Rb, inside)


@dataclass
class RibbonReport:
    nu: Optional[SparseTensor]
    checks: list

    @property
    def passed(self):
        return self.nu is not None and all(c.passed for c in self.checks)


def check_ribbon(H, qt, nu):
    R = qt.R
    checks = [Check("central", in_span(H.center, nu)),
              Check("invertible", _invert(H, nu) is not None),
              compare("Delta(nu) = R21 R (nu(x)nu)", H.comul(nu),
                      H.mul_n(H.mul_n(R.transpose((1, 0)), R), einsum("a,b->ab", nu, nu))),
              compare("S(nu) = nu", H.S(nu), nu)]
    return RibbonReport(nu, checks)


def ribbon(H, qt, nu=None, g=None):
    """Verify a given nu, or build nu = u^-1 g from the canonical group-like element."""
    if nu is not None:
        return check_ribbon(H, qt, nu)
    if g is None:
        from .integrals import s2_implementer
        g = s2_implementer(H).canonical
    if g is None:
        raise StructureError("no canonical group-like element available")
    u = drinfeld_u(H, qt)
    return check_ribbon(H, qt, H.mul(u.u_inv, g))


# ---------------------------------------------------------------- Drinfeld double

@dataclass
class DoubleAlgebra:
    parent: QuantumGroupoid
    J: SparseTensor
    lift: SparseTensor
    proj: SparseTensor
    H: QuantumGroupoid
    qt: QTStructure
    ideal_checked: bool

    def element(self, phi, h):
        n = self.parent.dim
        return einsum("a,b,abj->j", phi, h, self.proj.reshape((n, n, self.H.dim)))


def _double_rep(H):
    """Structure tensors of Ĥ^op (x) H on representatives (flat index a*n + b)."""
    n = H.dim
    d, m, S, Si = H.comult, H.mult, H.antipode, H.antipode_inv
    N = n * n
    D2h = einsum("bpt,puv->buvt", d, d)                   # Delta^2(e_b)[u, v, t]
    D2f = einsum("xyw,wtc->cxyt", m, m)                   # Delta^2(xi^c)[x, y, t]
    # (phi (x) h)(psi (x) g) = psi2 phi (x) h2 g <S(h1), psi1> <h3, psi3>
    mult = einsum("buvt,cxyt,ux,oya,vgk->abcgok", D2h, D2f, S, d, m).reshape((N, N, N))
    unit = einsum("a,b->ab", H.counit, H.unit).reshape((N,))
    comult = einsum("pqa,bst->abpsqt", m, d).reshape((N, N, N))
    counit = H.eps_t_matrix.transpose((1, 0)).reshape((N,))
    # S([phi (x) h]) = [S^-1(phi2) (x) S(h2)] <h1, phi1> <S(h3), phi3>
    D2a = einsum("xyw,wzc->cxyz", m, m)
    antipode = einsum("buvt,auyz,tz,oy,vk->abok", D2h, D2a, S, Si, S).reshape((N, N))
    return mult, unit, comult, counit, antipode


def _double_relations(H):
    n = H.dim
    N = n * n
    d, m = H.comult, H.mult
    I = SparseTensor.identity(n, H.order)
    rels = []
    # phi (x) z h - (eps <- z) phi (x) h,   (eps <- z)(x) = eps(z x)
    for z in rows(H.counital_subalgebra("target")):
        zh = H.left_mult_matrix(z)                                  # [h, k]
        ez = einsum("z,zxk,k->x", z, m, H.counit)                   # functional
        lmul = einsum("x,oxa->ao", ez, d)                           # phi -> ez phi, [a, o]
        rels.append((einsum("ac,hk->ahck", I, zh) - einsum("ac,hk->ahck", lmul, I)).reshape((N, N)))
    # phi (x) y h - (y -> eps) phi (x) h,   (y -> eps)(x) = eps(x y)
    for y in rows(H.counital_subalgebra("source")):
        yh = H.left_mult_matrix(y)
        ey = einsum("y,xyk,k->x", y, m, H.counit)
        lmul = einsum("x,oxa->ao", ey, d)
        rels.append((einsum("ac,hk->ahck", I, yh) - einsum("ac,hk->ahck", lmul, I)).reshape((N, N)))
    return span(vstack(rels))


def drinfeld_double(H, check=True):
    n = H.dim
    N = n * n
    mult, unit, comult, counit, antipode = _double_rep(H)
    J = _double_relations(H)
    ok = True
    if check:
        for r in rows(J):
            left = einsum("x,xyk->yk", r, mult)
            right = einsum("y,xyk->xk", r, mult)
            for blk in (left, right):
                if blk.nnz and rank(vstack([J, blk])) != J.dims[0]:
                    ok = False
                    break
        if not ok:
            raise StructureError("amalgamation relations do not span a two-sided ideal")
    lift, proj = quotient(J, N, H.order)
    q = lift.dims[0]
    M = einsum("ix,jy,xyk,kz->ijz", lift, lift, mult, proj)
    U = einsum("k,kz->z", unit, proj)
    C = einsum("ix,xab,aj,bk->ijk", lift, comult, proj, proj)
    E = einsum("ix,x->i", lift, counit)
    Sd = einsum("ix,xy,yj->ij", lift, antipode, proj)
    star = None
    if H.star is not None:
        star = _double_star(H, mult, lift, proj)
    labels = [f"[{i}]" for i in range(q)]
    D = QuantumGroupoid(M, U, C, E, Sd, star=star, order=H.order, labels=labels, name=f"D({H.name})")
    # R = sum_i [xi^i (x) 1] (x) [eps (x) f_i],  Rbar with S^-1(xi^j)
    P = proj.reshape((n, n, q))
    left = einsum("b,abj->aj", H.unit, P)                            # [i, j]: [xi^i (x) 1]
    right = einsum("a,abj->bj", H.counit, P)                          # [i, j]: [eps (x) f_i]
    R = einsum("ix,iy->xy", left, right)
    # S^-1 on the dual: xi^j -> sum_o Sinv[o, j] xi^o
    leftbar = einsum("oj,ox->jx", H.antipode_inv, left)
    Rbar = einsum("ix,iy->xy", leftbar, right)
    return DoubleAlgebra(H, J, lift, proj, D, QTStructure(R, Rbar), ok)


def _double_star(H, mult, lift, proj):
    """[phi (x) h]^* = [eps (x) h^*][phi^* (x) 1]."""
    from .core import dual
    n = H.dim
    N = n * n
    dstar = dual(H).star                                   # [a, a']
    hstar = H.star
    # Fm[a, b, o]: coefficient of o in (eps (x) h_b^*)(phi_a^* (x) 1), with mult indexed [c,k,p,q,o]
    Fm = einsum("c,bk,ap,q,ckpqo->abo", H.counit, hstar, dstar, H.unit, mult.reshape((n, n, n, n, N)))
    return einsum("ix,xo,oj->ij", lift, Fm.reshape((N, N)), proj)
