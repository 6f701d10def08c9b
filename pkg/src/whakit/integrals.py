"""Integrals, Haar integrals, semisimplicity and related canonical elements."""
from dataclasses import dataclass, field
from typing import Optional

from .core import QuantumGroupoid, StructureError, dual, compare, Check
from .exactmath import (SparseTensor, einsum, nullspace, solve_affine, vstack, hstack, inverse,
                        rank, span, in_span, intersect, rows, coord_matrix)


def _eye(H):
    return SparseTensor.identity(H.dim, H.order)


def _integral_conditions(H, side):
    """Matrix A (rows = conditions) with A l = 0 iff l is a left (right) integral."""
    n = H.dim
    if side == "left":
        # e_i l - eps_t(e_i) l
        T = H.mult - einsum("ik,kjo->ijo", H.eps_t_matrix, H.mult)
        # T[i, j, o]: coefficient of e_o in (e_i - eps_t e_i) e_j; unknown index j
        return T.transpose((0, 2, 1)).reshape((n * n, n))
    # r e_i - r eps_s(e_i)
    T = H.mult.transpose((1, 0, 2)) - einsum("ik,jko->ijo", H.eps_s_matrix, H.mult)
    return T.transpose((0, 2, 1)).reshape((n * n, n))


def _norm_conditions(H, side):
    M = H.eps_t_matrix if side == "left" else H.eps_s_matrix
    return M.transpose((1, 0))


def integral_space(H, side="left", normalized=False):
    """Echelon basis of left/right integrals, or one normalized integral (None if absent).

    Normalized integrals are not unique in general; the Haar integral is returned when it exists.
    """
    A = _integral_conditions(H, side)
    if not normalized:
        return nullspace(A)
    h = haar_integral(H)
    if h is not None:
        return h
    n = H.dim
    lhs = vstack([A, _norm_conditions(H, side)])
    rhs = _stack_vec([SparseTensor.zeros((n * n,), H.order), H.unit])
    return solve_affine(lhs, rhs).particular


def haar_integral(H):
    n = H.dim
    lhs = vstack([_integral_conditions(H, "left"), _integral_conditions(H, "right"),
                  _norm_conditions(H, "left"), _norm_conditions(H, "right")])
    rhs = _stack_vec([SparseTensor.zeros((2 * n * n,), H.order), H.unit, H.unit])
    sol = solve_affine(lhs, rhs)
    if not sol.consistent:
        return None
    h = sol.particular
    if H.S(h) != h or H.mul(h, h) != h:
        raise StructureError("Haar candidate is not S-invariant idempotent")
    return h


def _stack_vec(vs):
    return hstack([v.reshape((1, v.dims[0])) for v in vs]).reshape((sum(v.dims[0] for v in vs),))


def separability_element(H, l):
    """l_(1) (x) S(l_(2))."""
    return einsum("i,iab,bc->ac", l, H.comult, H.antipode)


def check_separability(H, E):
    m = einsum("ab,abk->k", E, H.mult)
    lhs = einsum("xak,ab->xkb", H.mult, E)      # x e1 (x) e2
    rhs = einsum("ab,bxk->xak", E, H.mult)      # e1 (x) e2 x
    return m == H.unit and lhs == rhs


def is_semisimple(H, return_element=False):
    l = integral_space(H, "left", normalized=True)
    ok = l is not None
    E = None
    if ok:
        E = separability_element(H, l)
        if not check_separability(H, E):
            raise StructureError("l1 (x) S(l2) is not a separability element")
    return (ok, E) if return_element else ok


def canonical_chi(H):
    """chi(y) = sum_i xi^i(S^-2(f_i) y); returns (chi, nondegenerate)."""
    Si = H.antipode_inv
    Si2 = einsum("ia,ab->ib", Si, Si)
    chi = einsum("ia,ayi->y", Si2, H.mult)
    G = einsum("xyk,k->xy", H.mult, chi)
    return chi, rank(G) == H.dim


def chi_twisted_trace(H, chi):
    """chi(xy) = chi(y S^2(x)) on all basis pairs."""
    S2 = einsum("ia,ab->ib", H.antipode, H.antipode)
    lhs = einsum("xyk,k->xy", H.mult, chi)
    rhs = einsum("xa,yak,k->xy", S2, H.mult, chi)
    return lhs == rhs


def dual_partner(H, l):
    """lambda in the dual with lambda -> l = l_(1) lambda(l_(2)) = 1, or None."""
    A = einsum("i,iab->ab", l, H.comult)       # A[a, b] lambda_b = unit_a
    sol = solve_affine(A, H.unit)
    return sol.particular


@dataclass
class QuasiBasisReport:
    functional: SparseTensor
    quasi_basis: SparseTensor       # element of H (x) H
    index: SparseTensor
    index_central: bool


def quasi_basis_and_index(H, f):
    n = H.dim
    G = einsum("xyk,k->xy", H.mult, f)
    try:
        Gi = inverse(G)
    except ZeroDivisionError:
        raise StructureError("functional is degenerate") from None
    Q = Gi                               # sum_i e_i (x) y_i, y_i = sum_k Gi[i, k] e_k
    idx = einsum("ab,abk->k", Q, H.mult)
    central = in_span(H.center, idx) if H.center.dims[0] else idx.is_zero()
    return QuasiBasisReport(f, Q, idx, central)


def algebra_quasi_basis(mult, f):
    """Quasi-basis and index of a functional on a bare algebra given by mult."""
    G = einsum("xyk,k->xy", mult, f)
    try:
        Q = inverse(G)
    except ZeroDivisionError:
        raise StructureError("functional is degenerate") from None
    return Q, einsum("ab,abk->k", Q, mult)


def check_quasi_basis(H, f, Q):
    n = H.dim
    I = _eye(H)
    a = einsum("mak,k,ab->mb", H.mult, f, Q)     # sum f(m x_i) y_i
    b = einsum("ab,bmk,k->ma", Q, H.mult, f)     # sum x_i f(y_i m)
    return a == I and b == I


@dataclass
class G2Report:
    space: SparseTensor
    invertible: list
    grouplike: list
    canonical: Optional[SparseTensor]


def _grouplike_scale(H, g):
    """c with c g group-like (Delta(cg) = (cg (x) cg)Delta(1)), or None."""
    lhs = H.comul(g)
    rhs = H.mul_n(einsum("a,b->ab", g, g), H.delta1())
    if rhs.is_zero():
        return None
    k = tuple(int(v) for v in rhs.indices()[0])
    c = lhs[k] / rhs[k]
    if not c or lhs != rhs.scale(c):
        return None
    rhs2 = H.mul_n(H.delta1(), einsum("a,b->ab", g, g))
    if lhs != rhs2.scale(c):
        return None
    return g.scale(c)


def s2_implementer(H):
    n = H.dim
    S2 = einsum("ia,ab->ib", H.antipode, H.antipode)
    # g e_x - S^2(e_x) g = 0 for all x; unknown g
    T = H.mult.transpose((1, 0, 2)) - einsum("xa,agk->xgk", S2, H.mult)   # [x, g, k]
    V = nullspace(T.transpose((0, 2, 1)).reshape((n * n, n)))
    inv, cands = [], []
    for v in rows(V):
        inv.append(_invertible(H, v))
    seen = []
    pool = [H.unit] + [H.e(i) for i in range(n)] if V.dims[0] else []
    if V.dims[0] == 1:
        pool.append(V.select(0, 0))
    pool = [v for v in pool if in_span(V, v)]
    for v in pool:
        if not _invertible(H, v):
            continue
        g = _grouplike_scale(H, v)
        if g is None or any(g == s for s in seen):
            continue
        seen.append(g)
        gi = _inverse_elem(H, g)
        if H.S(g) == gi:
            cands.append(g)
    canon = cands[0] if len(cands) == 1 else None
    if canon is None and cands and S2 == _eye(H):
        canon = H.unit
    return G2Report(V, inv, cands, canon)


def _invertible(H, x):
    return rank(H.left_mult_matrix(x)) == H.dim


def _inverse_elem(H, x):
    L = H.right_mult_matrix(x)   # y -> y x
    sol = solve_affine(L.transpose((1, 0)), H.unit)
    return sol.particular


def haar_expectations(H):
    Hd = dual(H)
    hh = haar_integral(Hd)
    if hh is None:
        raise StructureError("dual has no Haar integral")
    Et = einsum("ijk,k->ij", H.comult, hh)
    Es = einsum("ijk,j->ik", H.comult, hh)
    return Et, Es


@dataclass
class IntegralReport:
    left_basis: SparseTensor
    right_basis: SparseTensor
    normalized_left: Optional[SparseTensor]
    normalized_right: Optional[SparseTensor]
    haar: Optional[SparseTensor]
    chi: SparseTensor
    chi_nondegenerate: bool
    semisimple: bool
    g_space: SparseTensor
    canonical_g: Optional[SparseTensor] = None
    dual_pair: Optional[tuple] = None
    checks: list = field(default_factory=list)

    def to_json(self):
        from .io import vec_json, mat_json
        opt = lambda v: vec_json(v) if v is not None else None
        return {
            "left_integrals": mat_json(self.left_basis), "right_integrals": mat_json(self.right_basis),
            "normalized_left": opt(self.normalized_left), "normalized_right": opt(self.normalized_right),
            "haar": opt(self.haar), "chi": vec_json(self.chi), "chi_nondegenerate": self.chi_nondegenerate,
            "semisimple": self.semisimple, "g_space": mat_json(self.g_space),
            "canonical_g": opt(self.canonical_g),
            "checks": [c.to_json() for c in self.checks],
        }


def analyze(H):
    L = integral_space(H, "left")
    R = integral_space(H, "right")
    nl = integral_space(H, "left", True)
    nr = integral_space(H, "right", True)
    h = haar_integral(H)
    chi, nd = canonical_chi(H)
    g = s2_implementer(H)
    checks = [Check("chi nondegenerate iff Haar exists", nd == (h is not None)),
              Check("chi(xy) = chi(y S^2 x)", chi_twisted_trace(H, chi))]
    pair = None
    if h is not None:
        lam = dual_partner(H, h)
        pair = (h, lam)
        checks.append(Check("(h, chi) dual pair", lam is not None and lam == chi))
    return IntegralReport(L, R, nl, nr, h, chi, nd, nl is not None, g.space, g.canonical, pair, checks)


# ---------------------------------------------------------------- Hopf module theorem

@dataclass
class HopfModuleReport:
    coinvariants: SparseTensor
    alpha_beta: bool
    beta_alpha: bool
    alpha_well_defined: bool
    dims: tuple

    @property
    def passed(self):
        return self.alpha_beta and self.beta_alpha and self.alpha_well_defined


def _dual_module(H):
    """act[a, h, y]: xi^a . e_h = sum_y act xi^y, with phi . h = S(h) -> phi."""
    return einsum("hs,ysa->ahy", H.antipode, H.mult)


def verify_hopf_module_theorem(H):
    """Fundamental theorem for the Hopf module M = dual(H)."""
    n = H.dim
    act = _dual_module(H)
    d = H.comult
    # rho(xi^a) = sum_j (xi^j xi^a) (x) e_j; xi^j xi^a = sum_y d[y, j, a] xi^y
    rho = einsum("yja->ayj", d)
    # coinvariants: rho(m) = m . 1_(1) (x) 1_(2)
    D1 = H.delta1()
    triv = einsum("pq,apy->ayq", D1, act)
    C = (rho - triv).reshape((n, n * n)).transpose((1, 0))
    N = nullspace(C)
    r = N.dims[0]
    # relations in N (x) H: n.z (x) h - n (x) z h for z in H_t
    Ht = H.counital_subalgebra("target")
    NH = n * r
    # coordinates of n.z in N: solve N^T c = v
    rels = []
    for z in rows(Ht):
        Az = einsum("h,ahy->ay", z, act)
        for i, nv in enumerate(rows(N)):
            img = einsum("a,ay->y", nv, Az)
            c = _coords(N, img)
            # c (x) e_h - e_i (x) z e_h  for each h
            zh = H.left_mult_matrix(z)          # [h, k]
            left = einsum("c,hk->chk", c, _eye(H))
            right = einsum("c,hk->chk", SparseTensor.basis(r, i, H.order), zh)
            rels.append((left - right).transpose((1, 0, 2)).reshape((n, r * n)))
    Rel = span(vstack(rels)) if rels else SparseTensor.zeros((0, NH), H.order)
    # alpha(n_i (x) e_h) = n_i . e_h in M
    alpha = einsum("ia,ahy->ihy", N, act).reshape((NH, n))
    well = all((einsum("k,ky->y", v, alpha)).is_zero() for v in rows(Rel))
    # beta(m) = sum (xi^j xi^k m) . S(e_j) (x) e_k
    t = einsum("xjk,yxa->ajky", d, d)                  # xi^j xi^k xi^a coefficients [a, j, k, y]
    t = einsum("ajky,jb,ybz->akz", t, H.antipode, act)  # [a, k, z]: first component in M
    # express first component in N-coordinates
    Ninv = coord_matrix(N)                            # [z, i] (valid on the span of N)
    beta = einsum("akz,zi->aik", t, Ninv).reshape((n, NH))
    # beta image lies in N: check z-components reconstruct
    back = einsum("aik,iz->akz", beta.reshape((n, r, n)), N)
    in_N = back == t
    ab = einsum("ak,ky->ay", beta, alpha) == _eye(H) and in_N
    ba_diff = einsum("ka,ab->kb", alpha, beta) - SparseTensor.identity(NH, H.order)
    if Rel.dims[0]:
        ba = all(in_span(Rel, v) for v in rows(ba_diff) if not v.is_zero())
    else:
        ba = ba_diff.is_zero()
    quotient_dim = NH - Rel.dims[0]
    return HopfModuleReport(N, ab, ba, well, (r, quotient_dim, n))


def _coords(N, v):
    sol = solve_affine(N.transpose((1, 0)), v)
    if not sol.consistent:
        raise StructureError("vector outside subspace")
    return sol.particular
