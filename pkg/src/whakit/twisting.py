"""Twists (Theta, Theta_bar), twisted quantum groupoids and gauge transformations."""
from dataclasses import dataclass
from typing import Optional

from .core import QuantumGroupoid, StructureError, compare, AxiomReport
from .exactmath import SparseTensor, einsum, solve_affine
from .qtriang import QTStructure


@dataclass
class Twist:
    theta: SparseTensor
    theta_bar: SparseTensor
    u: Optional[SparseTensor] = None
    w: Optional[SparseTensor] = None

    @property
    def generalized(self):
        return self.u is not None or self.w is not None

    def counit_data(self, H):
        u = H.unit if self.u is None else self.u
        w = H.unit if self.w is None else self.w
        return u, w


def trivial_twist(H):
    D1 = H.delta1()
    return Twist(D1, D1)


def _delta_leg(H, X, pos):
    """(Delta (x) id) X for pos=0, (id (x) Delta) X for pos=1."""
    if pos == 0:
        return einsum("ab,axy->xyb", X, H.comult)
    return einsum("ab,bxy->axy", X, H.comult)


def _pad(H, X, side):
    """X (x) 1 (side=0) or 1 (x) X (side=1)."""
    if side == 0:
        return einsum("ab,c->abc", X, H.unit)
    return einsum("a,bc->abc", H.unit, X)


def _eps_left(H, X, w):
    """eps(X^1 w) X^2."""
    return einsum("ab,w,awk,k->b", X, w, H.mult, H.counit)


def _eps_right(H, X, w):
    """X^1 eps(X^2 w)."""
    return einsum("ab,w,bwk,k->a", X, w, H.mult, H.counit)


def verify_twist(H, t):
    T, Tb = t.theta, t.theta_bar
    D1 = H.delta1()
    m2 = H.mul_n
    rep = AxiomReport(strategy="twist")
    add = rep.checks.append
    add(compare("Theta in Delta(1)(H(x)H)", m2(D1, T), T))
    add(compare("Theta_bar in (H(x)H)Delta(1)", m2(Tb, D1), Tb))
    add(compare("Theta Theta_bar = Delta(1)", m2(T, Tb), D1))
    dT0, dT1 = _delta_leg(H, T, 0), _delta_leg(H, T, 1)
    dB0, dB1 = _delta_leg(H, Tb, 0), _delta_leg(H, Tb, 1)
    T0, T1 = _pad(H, T, 0), _pad(H, T, 1)
    B0, B1 = _pad(H, Tb, 0), _pad(H, Tb, 1)
    add(compare("(Delta(x)id)(Theta)(Theta(x)1) = (id(x)Delta)(Theta)(1(x)Theta)",
                m2(dT0, T0), m2(dT1, T1)))
    add(compare("(Theta_bar(x)1)(Delta(x)id)(Theta_bar) = (1(x)Theta_bar)(id(x)Delta)(Theta_bar)",
                m2(B0, dB0), m2(B1, dB1)))
    add(compare("(Delta(x)id)(Theta_bar)(id(x)Delta)(Theta) = (Theta(x)1)(1(x)Theta_bar)",
                m2(dB0, dT1), m2(T0, B1)))
    add(compare("(id(x)Delta)(Theta_bar)(Delta(x)id)(Theta) = (1(x)Theta)(Theta_bar(x)1)",
                m2(dB1, dT0), m2(T1, B0)))
    one = H.unit
    if t.generalized:
        u, w = t.counit_data(H)
        add(compare("eps(Theta1 w) Theta2 = 1", _eps_left(H, T, w), one))
        add(compare("Theta1 eps(Theta2 w) = 1", _eps_right(H, T, w), one))
        add(compare("eps(u Theta_bar1) Theta_bar2 = 1",
                    einsum("u,ab,uak,k->b", u, Tb, H.mult, H.counit), one))
        add(compare("Theta_bar1 eps(u Theta_bar2) = 1",
                    einsum("u,ab,ubk,k->a", u, Tb, H.mult, H.counit), one))
    else:
        add(compare("(eps(x)id)Theta = 1", _eps_left(H, T, one), one))
        add(compare("(id(x)eps)Theta = 1", _eps_right(H, T, one), one))
        add(compare("(eps(x)id)Theta_bar = 1", _eps_left(H, Tb, one), one))
        add(compare("(id(x)eps)Theta_bar = 1", _eps_right(H, Tb, one), one))
    return rep


def _inverse(H, x):
    sol = solve_affine(H.right_mult_matrix(x).transpose((1, 0)), H.unit)
    if not sol.consistent:
        return None
    y = sol.particular
    if H.mul(y, x) != H.unit or H.mul(x, y) != H.unit:
        return None
    return y


def twist_v(H, t):
    """v = m(S (x) id) Theta."""
    return einsum("ab,ax,xbk->k", t.theta, H.antipode, H.mult)


def apply_twist(H, t, check=True):
    if check:
        rep = verify_twist(H, t)
        if not rep.passed:
            raise StructureError("invalid twist: " + ", ".join(c.name for c in rep.failed))
    m = H.mult
    v = twist_v(H, t)
    vi = _inverse(H, v)
    if vi is None:
        raise StructureError("v = m(S(x)id)Theta is not invertible")
    comult = einsum("pq,hxy,pxr,qys,ab,rao,sbt->hot", t.theta_bar, H.comult, m, m, t.theta, m, m)
    antipode = einsum("hs,p,psr,q,rqo->ho", H.antipode, vi, m, v, m)
    counit = H.counit
    if t.generalized:
        u, w = t.counit_data(H)
        counit = einsum("a,ahr,b,rbk,k->h", u, m, w, m, H.counit)
    same = comult == H.comult and antipode == H.antipode and counit == H.counit
    return H.replace(comult=comult, antipode=antipode, counit=counit,
                     star=H.star if same else None, name=f"{H.name}_Theta")


def counital_formulas(H, t):
    """eps(Theta1 h w) Theta2 and Theta_bar1 eps(u h Theta_bar2) as (input, output) matrices."""
    m, c = H.mult, H.counit
    u, w = t.counit_data(H)
    Et = einsum("ab,ahx,w,xwk,k->hb", t.theta, m, w, m, c)
    Es = einsum("ab,u,uhx,xbk,k->ha", t.theta_bar, u, m, m, c)
    return Et, Es


def check_counital_formulas(H, t, Ht=None):
    Ht = Ht if Ht is not None else apply_twist(H, t)
    Et, Es = counital_formulas(H, t)
    return [compare("twisted eps_t closed form", Ht.eps_t_matrix, Et),
            compare("twisted eps_s closed form", Ht.eps_s_matrix, Es)]


def gauge_twist(H, t, x):
    """(Theta^x, Theta_bar^x) with Delta(x)^-1 read as Delta(x^-1)."""
    xi = _inverse(H, x)
    if xi is None:
        raise StructureError("gauge element is not invertible")
    if H.eps_t(x) != H.unit or H.eps_s(x) != H.unit:
        raise StructureError("gauge element needs eps_t(x) = eps_s(x) = 1")
    m2 = H.mul_n
    xx = einsum("a,b->ab", x, x)
    xixi = einsum("a,b->ab", xi, xi)
    theta = m2(m2(H.comul(xi), t.theta), xx)
    theta_bar = m2(m2(xixi, t.theta_bar), H.comul(x))
    return Twist(theta, theta_bar, t.u, t.w), conjugation_matrix(H, x, xi)


def conjugation_matrix(H, x, xi=None):
    """h -> x^-1 h x as an (input, output) matrix."""
    xi = _inverse(H, x) if xi is None else xi
    return einsum("p,phr,q,rqo->ho", xi, H.mult, x, H.mult)


def twist_r_matrix(H, qt, t):
    """(Theta_bar_21 R Theta, Theta_bar Rbar Theta_21) on the twisted object."""
    qt = qt.with_bar(H)
    m2 = H.mul_n
    T21 = t.theta.transpose((1, 0))
    B21 = t.theta_bar.transpose((1, 0))
    return QTStructure(m2(m2(B21, qt.R), t.theta), m2(m2(t.theta_bar, qt.Rbar), T21))
