"""Small quantum sl2 at a root of unity, Babelon-type dynamical twists and the twisted
quantum groupoid on End(A) (x) U.

Conventions (fixed by the exact checks below): PBW basis F^a K^b E^c with index
(a*l + b)*l + c, Delta(E) = E(x)1 + K(x)E, Delta(F) = F(x)K^-1 + 1(x)F, and
R = Theta0 * Omega with Omega = (1/l) sum q^(2ab) K^a (x) K^b.  The weight idempotent
P_mu satisfies K P_mu = q^(-2 mu) P_mu.
"""
from dataclasses import dataclass, field

from .core import QuantumGroupoid, StructureError, compare, Check, AxiomReport, verify_axioms, tensor
from .exactmath import SparseTensor, Scalar, einsum, zeta, solve_affine, vstack
from .qtriang import QTStructure, verify_qt
from .twisting import Twist, verify_twist, apply_twist, twist_r_matrix


def _o(x, y):
    return einsum("a,b->ab", x, y)


@dataclass
class SmallQuantumGroup:
    ell: int
    q: Scalar
    U: QuantumGroupoid
    qt: QTStructure
    Omega: SparseTensor
    Omega_inv: SparseTensor

    @property
    def order(self):
        return self.U.order

    def idx(self, a, b, c):
        l = self.ell
        return (a * l + b % l) * l + c

    def pbw(self, a, b, c):
        return self.U.e(self.idx(a, b, c))

    @property
    def E(self):
        return self.pbw(0, 0, 1)

    @property
    def F(self):
        return self.pbw(1, 0, 0)

    def K(self, k=1):
        return self.pbw(0, k, 0)

    def E_pow(self, n):
        return self.pbw(0, 0, n) if n < self.ell else SparseTensor.zeros((self.U.dim,), self.order)

    def F_pow(self, n):
        return self.pbw(n, 0, 0) if n < self.ell else SparseTensor.zeros((self.U.dim,), self.order)

    def P(self, mu):
        """Minimal idempotent of span{K^a} with K P_mu = q^(-2 mu) P_mu."""
        l, q = self.ell, self.q
        out = SparseTensor.zeros((self.U.dim,), self.order)
        for a in range(l):
            out = out + self.K(a).scale(q ** (2 * mu * a) / l)
        return out

    def weight(self, i):
        """K-weight exponent of basis element i: K x K^-1 = q^(2 w) x."""
        l = self.ell
        a, c = i // (l * l), i % l
        return c - a

    def mul2(self, X, Y):
        return self.U.mul_n(X, Y)

    def one2(self):
        return _o(self.U.unit, self.U.unit)


def qint(q, n):
    return (q ** n - q.inv() ** n) / (q - q.inv())


def qfactorial(q, n):
    r = Scalar(1, q.order)
    for i in range(1, n + 1):
        r = r * qint(q, i)
    return r


def _left_mult_generators(ell, q):
    """Matrices of left multiplication by E, F, K on the PBW basis (input, output)."""
    N = q.order
    n = ell ** 3
    idx = lambda a, b, c: (a * ell + b % ell) * ell + c
    qi = q.inv()
    LE, LF, LK = {}, {}, {}
    for a in range(ell):
        for b in range(ell):
            for c in range(ell):
                i = idx(a, b, c)
                LK[(i, idx(a, b + 1, c))] = qi ** (2 * a)
                if a + 1 < ell:
                    LF[(i, idx(a + 1, b, c))] = Scalar(1, N)
                # E F^a = F^a E + [a] F^(a-1) (q^(1-a) K - q^(a-1) K^-1) / (q - q^-1)
                if c + 1 < ell:
                    LE[(i, idx(a, b, c + 1))] = qi ** (2 * b)
                if a > 0:
                    f = qint(q, a) / (q - qi)
                    for key, v in (((i, idx(a - 1, b + 1, c)), f * qi ** (a - 1)),
                                   ((i, idx(a - 1, b - 1, c)), -(f * q ** (a - 1)))):
                        LE[key] = LE.get(key, Scalar(0, N)) + v
    mk = lambda d: SparseTensor.from_dict(d, (n, n), N)
    return mk(LE), mk(LF), mk(LK)


def small_uqsl2(ell=3, check=True):
    if ell < 3 or ell % 2 == 0:
        raise StructureError("ell must be odd and at least 3")
    q = zeta(ell)
    N = ell
    n = ell ** 3
    qi = q.inv()
    LE, LF, LK = _left_mult_generators(ell, q)
    I = SparseTensor.identity(n, N)
    powers = {}

    def pw(name, M, k):
        if (name, k) not in powers:
            powers[(name, k)] = I if k == 0 else einsum("ij,jk->ik", pw(name, M, k - 1), M)
        return powers[(name, k)]

    entries = {}
    for a in range(ell):
        for b in range(ell):
            for c in range(ell):
                # F^a K^b E^c y: apply E^c first
                L = einsum("ij,jk,kl->il", pw("E", LE, c), pw("K", LK, b), pw("F", LF, a))
                x = (a * ell + b) * ell + c
                for (y, k), v in L.items():
                    entries[(x, y, k)] = v
    mult = SparseTensor.from_dict(entries, (n, n, n), N)
    e = lambda a, b, c: SparseTensor.basis(n, (a * ell + b % ell) * ell + c, N)
    one, E, F, K, Ki = e(0, 0, 0), e(0, 0, 1), e(1, 0, 0), e(0, 1, 0), e(0, ell - 1, 0)
    m1 = lambda x, y: einsum("i,ijk,j->k", x, mult, y)

    def m2(X, Y):
        return einsum("ab,aik,bjl,ij->kl", X, mult, mult, Y)

    dE = _o(E, one) + _o(K, E)
    dF = _o(F, Ki) + _o(one, F)
    dK = _o(K, K)
    minus = Scalar(-1, N)
    sE, sF, sK = m1(Ki, E).scale(minus), m1(F, K).scale(minus), Ki
    com, ant = {}, {}
    for a in range(ell):
        for b in range(ell):
            for c in range(ell):
                X, s = _o(one, one), one
                for g, k in ((dF, a), (dK, b), (dE, c)):
                    for _ in range(k):
                        X = m2(X, g)
                for g, k in ((sE, c), (sK, b), (sF, a)):
                    for _ in range(k):
                        s = m1(s, g)
                i = (a * ell + b) * ell + c
                com.update({(i,) + key: v for key, v in X.items()})
                ant.update({(i,) + key: v for key, v in s.items()})
    comult = SparseTensor.from_dict(com, (n, n, n), N)
    antipode = SparseTensor.from_dict(ant, (n, n), N)
    counit = SparseTensor.from_dict({((b * ell),): Scalar(1, N) for b in range(ell)}, (n,), N)
    labels = [f"F{a}K{b}E{c}" for a in range(ell) for b in range(ell) for c in range(ell)]
    U = QuantumGroupoid(mult, one, comult, counit, antipode, order=N, labels=labels,
                        name=f"u_q(sl2)[{ell}]", generators=[(1 * ell) * ell, ell, 1])
    Omega = _cartan_sum(ell, q, N, e, 2)
    Omega_inv = _cartan_sum(ell, q, N, e, -2)
    theta0 = _o(one, one)
    for k in range(1, ell):
        c = minus ** k * qi ** (k * (k - 1) // 2) * (q - qi) ** k / qfactorial(q, k)
        theta0 = theta0 + _o(e(0, 0, k), e(k, 0, 0)).scale(c)
    R = m2(theta0, Omega)
    G = SmallQuantumGroup(ell, q, U, QTStructure(R), Omega, Omega_inv)
    if check:
        if not verify_axioms(U).passed:
            raise StructureError("u_q(sl2) failed the Hopf axioms")
        rep = verify_qt(U, G.qt)
        if not rep.passed:
            raise StructureError("R-matrix convention failed: " + rep.failed[0].name)
    return G


def _cartan_sum(ell, q, N, e, s):
    out = SparseTensor.zeros((ell ** 3, ell ** 3), N)
    for a in range(ell):
        for b in range(ell):
            out = out + _o(e(0, a, 0), e(0, b, 0)).scale(q ** (s * a * b) / ell)
    return out


# ------------------------------------------------------------------ Cartan part

def cartan_basis(G):
    return [_o(G.K(a), G.K(b)) for a in range(G.ell) for b in range(G.ell)]


def cartan_inverse(G, x):
    """Inverse of x inside span{K^a (x) K^b} by linear solve; None if singular."""
    n = G.U.dim
    basis = cartan_basis(G)
    B = vstack([b.reshape((n * n,)) for b in basis])
    L = vstack([G.mul2(x, b).reshape((n * n,)) for b in basis])
    sol = solve_affine(L.transpose((1, 0)), G.one2().reshape((n * n,)))
    if not sol.consistent:
        return None
    y = einsum("i,ix->x", sol.particular, B).reshape((n, n))
    return y if G.mul2(x, y) == G.one2() else None


# ------------------------------------------------------------------ dynamical twists

@dataclass
class DynamicalTwist:
    table: list                  # lambda -> element of U (x) U
    Lambda: Scalar
    shifted: bool = False
    checks: list = field(default_factory=list)

    def __call__(self, lam):
        return self.table[lam % len(self.table)]


def babelon_J(G, Lambda=2):
    """Truncated Babelon series J(lambda) for lambda in Z/l."""
    q, N, ell = G.q, G.order, G.ell
    Lam = Lambda if isinstance(Lambda, Scalar) else Scalar(Lambda, N)
    KK = _o(G.K(1), G.K(-1))
    table = []
    for lam in range(ell):
        J = G.one2()
        c = Lam * q ** (2 * lam)
        for k in range(1, ell):
            coef = q.inv() ** (k * (k + 1) // 2) * (1 - q ** 2) ** k / qfactorial(q, k)
            term = _o(G.E_pow(k), G.F_pow(k)).scale(coef)
            for nu in range(1, k + 1):
                den = G.one2() - KK.scale(c * q ** (2 * nu))
                inv = cartan_inverse(G, den)
                if inv is None:
                    raise StructureError(f"Lambda is not generic: singular denominator at lambda={lam}, nu={nu}")
                term = G.mul2(term, inv.scale(c))
            J = J + term
        table.append(J)
    T = DynamicalTwist(table, Lam)
    T.checks = check_dynamical_twist(G, T)
    return T


def _zero_weight(G, X):
    """X commutes with Delta(K)."""
    KK = _o(G.K(1), G.K(1))
    return G.mul2(KK, X) == G.mul2(X, KK)


def _in_one_plus_IpIm(G, X):
    rest = X - G.one2()
    l = G.ell
    for (i, j), _ in rest.items():
        a1, c1 = i // (l * l), i % l
        a2, c2 = j // (l * l), j % l
        if a1 != 0 or c1 == 0 or c2 != 0 or a2 == 0:
            return False
    return True


def twist_inverse(G, X):
    """Inverse of 1 + N with N nilpotent of first-factor degree >= 1."""
    Nn = G.one2() - X
    out, p = G.one2(), G.one2()
    for _ in range(1, G.ell):
        p = G.mul2(p, Nn)
        out = out + p
    if G.mul2(out, X) != G.one2() or G.mul2(X, out) != G.one2():
        return None
    return out


def check_dynamical_twist(G, T):
    U = G.U
    out = []
    for lam, J in enumerate(T.table):
        out.append(Check(f"zero weight at {lam}", _zero_weight(G, J)))
        out.append(compare(f"(eps(x)id)J = 1 at {lam}", einsum("ab,a->b", J, U.counit), U.unit))
        out.append(compare(f"(id(x)eps)J = 1 at {lam}", einsum("ab,b->a", J, U.counit), U.unit))
        out.append(Check(f"invertible at {lam}", twist_inverse(G, J) is not None))
        if not T.shifted:
            out.append(Check(f"J in 1 + I+ (x) I- at {lam}", _in_one_plus_IpIm(G, J)))
    return out


def _ad_lambda(G, lam, Lam):
    """Ad K^lam composed with the shift automorphism, diagonal on PBW."""
    n = G.U.dim
    d = {}
    for i in range(n):
        w = G.weight(i)
        d[(i, i)] = Lam ** w * G.q ** (2 * lam * w)
    return SparseTensor.from_dict(d, (n, n), G.order)


def abrr_map(G, lam, Lam):
    """X -> (Ad K_lam Lambda (x) id)(R X Omega^-1) as an (input, output) matrix on U (x) U."""
    n = G.U.dim
    m = G.U.mult
    M = einsum("xy,xpa,yqb->pqab", G.qt.R, m, m)
    M = einsum("pqab,auk,bvl,uv->pqkl", M, m, m, G.Omega_inv)
    M = einsum("pqkl,kr->pqrl", M, _ad_lambda(G, lam, Lam))
    return M.reshape((n * n, n * n))


def verify_abrr(G, T):
    n = G.U.dim
    rep = AxiomReport(strategy="abrr")
    rep.checks.append(compare("Omega Omega^-1 = 1", G.mul2(G.Omega, G.Omega_inv), G.one2()))
    for lam, J in enumerate(T.table):
        v = J.reshape((n * n,))
        res = einsum("x,xy->y", v, abrr_map(G, lam, T.Lambda))
        rep.checks.append(compare(f"ABRR at lambda={lam}", res.reshape((n, n)), J))
    return rep


def abrr_solve(G, lam, Lambda=2):
    """Unique solution of the ABRR relation in 1 + I+ (x) I-, by a linear solve."""
    n, N, l = G.U.dim, G.order, G.ell
    Lam = Lambda if isinstance(Lambda, Scalar) else Scalar(Lambda, N)
    M = abrr_map(G, lam, Lam) - SparseTensor.identity(n * n, N)
    cols = [_o(G.pbw(0, b, c), G.pbw(a, b2, 0)).reshape((n * n,))
            for b in range(l) for c in range(1, l) for a in range(1, l) for b2 in range(l)]
    B = vstack(cols)
    one = G.one2().reshape((n * n,))
    sol = solve_affine(einsum("ix,xy->iy", B, M).transpose((1, 0)), -einsum("x,xy->y", one, M))
    if not sol.consistent or sol.kernel_dim:
        raise StructureError("ABRR relation has no unique solution")
    return (einsum("i,ix->x", sol.particular, B) + one).reshape((n, n))


def shifted_twist(G, T):
    """J(2 lambda + h1 + h2) = sum_{mu, nu} J(2 lambda + mu + nu) (P_mu (x) P_nu)."""
    l = G.ell
    P = [G.P(mu) for mu in range(l)]
    table = []
    for lam in range(l):
        out = SparseTensor.zeros((G.U.dim, G.U.dim), G.order)
        for mu in range(l):
            for nu in range(l):
                out = out + G.mul2(T((2 * lam + mu + nu) % l), _o(P[mu], P[nu]))
        table.append(out)
    S = DynamicalTwist(table, T.Lambda, shifted=True)
    S.checks = check_dynamical_twist(G, S)
    return S


def verify_dynamical_cocycle(G, T):
    """(Delta(x)id)J(lam) (J(lam + h3)(x)1) = (id(x)Delta)J(lam) (1(x)J(lam))."""
    U, l = G.U, G.ell
    d, one = U.comult, U.unit
    P = [G.P(mu) for mu in range(l)]
    out = []
    for lam in range(l):
        J = T(lam)
        sh = SparseTensor.zeros((U.dim,) * 3, G.order)
        for mu in range(l):
            sh = sh + einsum("ab,c->abc", T(lam + mu), P[mu])
        lhs = U.mul_n(einsum("ab,axy->xyb", J, d), sh)
        rhs = U.mul_n(einsum("ab,bxy->axy", J, d), einsum("a,bc->abc", one, J))
        out.append(compare(f"dynamical cocycle at lambda={lam}", lhs, rhs))
    return out


# ------------------------------------------------------------------ End(A) and H_J

def end_wha(ell, order=1):
    """End_k(A) for A = functions on Z/l on matrix units E_{lm} (index l*ell + m),
    E_{lm} E_{mv} = E_{lv}, with Delta(E_{lm}) = E_{lm} (x) E_{lm}."""
    n = ell * ell
    one = Scalar(1, order)
    mult = SparseTensor.from_dict({(l * ell + m, m * ell + v, l * ell + v): one
                                   for l in range(ell) for m in range(ell) for v in range(ell)},
                                  (n, n, n), order)
    comult = SparseTensor.from_dict({(i, i, i): one for i in range(n)}, (n, n, n), order)
    counit = SparseTensor.from_dict({(i,): one for i in range(n)}, (n,), order)
    unit = SparseTensor.from_dict({(l * ell + l,): one for l in range(ell)}, (n,), order)
    antipode = SparseTensor.from_dict({(l * ell + m, m * ell + l): one
                                       for l in range(ell) for m in range(ell)}, (n, n), order)
    labels = [f"E{l}{m}" for l in range(ell) for m in range(ell)]
    return QuantumGroupoid(mult, unit, comult, counit, antipode, order=order, labels=labels,
                           name=f"End(A)[{ell}]")


@dataclass
class DynamicalGroupoid:
    G: SmallQuantumGroup
    EndA: QuantumGroupoid
    H: QuantumGroupoid                 # End(A) (x) U
    theta: Twist                       # canonical pair on H
    J: DynamicalTwist                  # shifted twist table
    twist: Twist                       # (J Theta, Theta_bar J^-1)
    HJ: QuantumGroupoid
    qt: QTStructure
    checks: list = field(default_factory=list)


def _embed(G, EndA, H, x_end, x_u):
    return einsum("a,b->ab", x_end, x_u).reshape((H.dim,))


def xu_theta(G, EndA, H):
    """Theta = sum E_{l,l+m} (x) E_{ll} P_m and Theta_bar = sum E_{l+m,l} (x) E_{ll} P_m."""
    l = G.ell
    E = lambda a, b: EndA.e((a % l) * l + b % l)
    one = G.U.unit
    theta = SparseTensor.zeros((H.dim, H.dim), H.order)
    theta_bar = SparseTensor.zeros((H.dim, H.dim), H.order)
    for lam in range(l):
        for mu in range(l):
            right = _embed(G, EndA, H, E(lam, lam), G.P(mu))
            theta = theta + _o(_embed(G, EndA, H, E(lam, lam + mu), one), right)
            theta_bar = theta_bar + _o(_embed(G, EndA, H, E(lam + mu, lam), one), right)
    return Twist(theta, theta_bar)


def embed_dynamical(G, EndA, H, T, inverse=False):
    """sum_lam E_{ll} J1(lam) (x) E_{ll} J2(lam) in H (x) H."""
    l, n = G.ell, G.U.dim
    out = SparseTensor.zeros((H.dim, H.dim), H.order)
    for lam in range(l):
        J = T(lam)
        if inverse:
            J = twist_inverse(G, J)
        Ell = EndA.e(lam * l + lam)
        out = out + einsum("a,b,xy->axby", Ell, Ell, J).reshape((H.dim, H.dim))
    return out


def build_dynamical_wha(ell=3, Lambda=2, check=True, quiet=True):
    G = small_uqsl2(ell, check=check)
    T = babelon_J(G, Lambda)
    checks = list(T.checks)
    if check:
        checks += verify_abrr(G, T).checks
    Js = shifted_twist(G, T)
    checks += Js.checks
    checks += verify_dynamical_cocycle(G, Js)
    bad = [c for c in checks if not c.passed]
    if bad:
        raise StructureError("dynamical twist checks failed: " + ", ".join(c.name for c in bad))
    EndA = end_wha(ell, G.order)
    H = tensor(EndA, G.U)
    H.generators = _generators(G, EndA, H)
    th = xu_theta(G, EndA, H)
    Jh = embed_dynamical(G, EndA, H, Js)
    Jhi = embed_dynamical(G, EndA, H, Js, inverse=True)
    tw = Twist(H.mul_n(Jh, th.theta), H.mul_n(th.theta_bar, Jhi))
    if check:
        rep = verify_twist(H, tw)
        checks += rep.checks
        if not rep.passed:
            raise StructureError("F = J Theta is not a twist: " + rep.failed[0].name)
    HJ = apply_twist(H, tw, check=False)
    HJ.name = f"H_J[{ell}]"
    HJ.generators = H.generators
    # R on H: Delta(1) of End(A) leg-wise with R of U
    RH = einsum("ab,xy->axby", EndA.delta1(), G.qt.R).reshape((H.dim, H.dim))
    qt = twist_r_matrix(H, QTStructure(RH), tw)
    return DynamicalGroupoid(G, EndA, H, th, Js, tw, HJ, qt, checks)


def _generators(G, EndA, H):
    l, n = G.ell, G.U.dim
    gens = [(a * l + b) * n for a in range(l) for b in range(l)]
    gens += [G.idx(0, 0, 1), G.idx(1, 0, 0), G.idx(0, 1, 0)]
    return gens
