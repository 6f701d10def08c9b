"""Univariate polynomials over Q(zeta_N) as coefficient lists (low degree first)."""
from math import gcd

from flint import fmpq, fmpq_poly

from .. import config
from .field import Scalar, zeta


def trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def padd(a, b):
    n = max(len(a), len(b))
    z = Scalar(0)
    return trim([(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)])


def pscale(a, c):
    return trim([x * c for x in a])


def pmul(a, b):
    if not a or not b:
        return []
    out = [Scalar(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return trim(out)


def pdivmod(a, b):
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = trim(a)
    inv = b[-1].inv()
    q = [Scalar(0)] * max(len(a) - len(b) + 1, 0)
    while a and len(a) >= len(b):
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = a[i + k] - c * y
        a = trim(a)
    return trim(q), a


def monic(a):
    a = trim(a)
    return pscale(a, a[-1].inv()) if a else a


def pgcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    return monic(a)


def pxgcd(a, b):
    """(g, s, t) with s a + t b = g = monic gcd."""
    r0, r1 = trim(a), trim(b)
    s0, s1, t0, t1 = [Scalar(1)], [], [], [Scalar(1)]
    while r1:
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, padd(s0, pscale(pmul(q, s1), Scalar(-1)))
        t0, t1 = t1, padd(t0, pscale(pmul(q, t1), Scalar(-1)))
    if not r0:
        return [], [], []
    c = r0[-1].inv()
    return pscale(r0, c), pscale(s0, c), pscale(t0, c)


def pderiv(a):
    return trim([a[i] * i for i in range(1, len(a))])


def pshift(a, c):
    """a(x + c)."""
    out = []
    for coef in reversed(a):
        out = padd(pmul(out, [c, Scalar(1)]), [coef])
    return out


def pgalois(a, k):
    return [x.galois(k) for x in a]


def peval(a, x):
    acc = Scalar(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _to_q(a):
    return fmpq_poly([c.rational() for c in a])


def _from_q(p):
    return trim([Scalar(c) for c in p.coeffs()])


def squarefree(a):
    """Yun's algorithm: list of (factor, multiplicity)."""
    a = monic(a)
    out = []
    b = pgcd(a, pderiv(a))
    c = pdivmod(a, b)[0]
    d = padd(pdivmod(pderiv(a), b)[0], [-x for x in pderiv(c)])
    i = 1
    while len(c) > 1:
        y = pgcd(c, d)
        if len(y) > 1:
            out.append((y, i))
        c = pdivmod(c, y)[0]
        d = padd(pdivmod(d, y)[0], [-x for x in pderiv(c)])
        i += 1
    return out


def _order_of(a):
    n = 1
    for c in a:
        n = n * c.order // gcd(n, c.order)
    return n


def factor_squarefree_poly(f, order=None):
    """Irreducible monic factors over Q(zeta_order) of a squarefree f (Trager)."""
    f = monic(f)
    n = order or _order_of(f)
    if len(f) <= 2:
        return [f]
    if n <= 2:
        _, facs = _to_q(f).factor()
        return [monic(_from_q(p)) for p, _ in facs]
    units = [k for k in range(1, n) if gcd(k, n) == 1]
    z = zeta(n)
    for s in range(0, 40):
        g = pshift(f, -z * s) if s else f
        norm = [Scalar(1)]
        for k in units:
            norm = pmul(norm, pgalois(g, k))
        Nq = _to_q(norm)
        if Nq.gcd(Nq.derivative()).degree() > 0:
            continue
        _, facs = Nq.factor()
        out = []
        for h, _ in facs:
            hk = _from_q(h)
            if s:
                hk = pshift(hk, z * s)
            d = pgcd(f, hk)
            if len(d) > 1:
                out.append(d)
        return sorted(out, key=lambda p: (len(p), [str(c) for c in p]))
    raise ArithmeticError("no squarefree norm found")


def minpoly(M):
    """Minimal polynomial (monic, low degree first) of a square SparseTensor matrix."""
    from .linalg import vstack, nullspace
    from .sparse import SparseTensor, einsum
    n = M.dims[0]
    powers = [SparseTensor.identity(n, M.order)]
    while True:
        P = powers[-1]
        nxt = einsum("ij,jk->ik", P, M)
        powers.append(nxt)
        k = len(powers)
        A = vstack([p.reshape((n * n,)) for p in powers])
        K = nullspace(A.transpose((1, 0)))
        if K.dims[0]:
            v = K.select(0, 0).tolist()
            return monic(v)
        if k > n + 1:
            raise ArithmeticError("minimal polynomial search overran")


def factor_minpoly(M, budget=None):
    """[(irreducible monic factor, multiplicity)] of the minimal polynomial of M."""
    budget = budget or config.DEFAULT
    mp = minpoly(M)
    if len(mp) - 1 > budget.max_degree:
        raise ArithmeticError(f"minimal polynomial degree {len(mp) - 1} exceeds budget {budget.max_degree}")
    out = []
    for sq, mult in squarefree(mp):
        for fac in factor_squarefree_poly(sq, M.order if M.order > 1 else None):
            out.append((tuple(fac), mult))
    return sorted(out, key=lambda t: (len(t[0]), [str(c) for c in t[0]], t[1]))


def poly_str(p, var="x"):
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        cs = str(c)
        if mono:
            body = mono if cs == "1" else (f"-{mono}" if cs == "-1" else f"({cs})*{mono}")
        else:
            body = f"({cs})" if any(ch in cs[1:] for ch in "+-") else cs
        terms.append(body)
    return " + ".join(terms) if terms else "0"
