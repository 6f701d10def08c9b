"""Exact linear algebra over Q(zeta_N).

Matrices are SparseTensors of arity 2.  A K-matrix is turned into an
integer matrix over Q by writing each row r as the phi(N) rows zeta^t r in
coordinates; the Q-row space of that matrix is the realified K-row space.
Its reduced echelon rows with pivots at coordinate 0 of a block are exactly
the K-echelon rows, so flint's integer rref does all the work.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from flint import fmpz_mat

from .field import phi
from .sparse import SparseTensor, cmul, einsum, _obj


def _zeta_rows(M):
    """Numerator blocks of zeta^t * M for t < phi."""
    d = phi(M.order)
    out = [M.num]
    for t in range(1, d):
        e = np.zeros((1, d), np.int64)
        e[0, t] = 1
        out.append(cmul(M.num, np.repeat(e, M.nnz, axis=0), M.order) if M.nnz else M.num)
    return out


def _realify(M):
    m, n = M.dims
    d = phi(M.order)
    R = np.zeros((m * d, n * d), dtype=object)
    idx = M.indices()
    for t, blk in enumerate(_zeta_rows(M)):
        blk = _obj(blk)
        for s in range(d):
            R[idx[:, 0] * d + t, idx[:, 1] * d + s] = blk[:, s]
    # drop zero rows early; the integer rref is cubic
    R = R[np.any(R != 0, axis=1)]
    return R


def rref(M):
    """(pivot columns, echelon matrix r x n) of the K-row space of M."""
    m, n = M.dims
    d = phi(M.order)
    if M.nnz == 0:
        return [], SparseTensor.zeros((0, n), M.order)
    R = _realify(M)
    rows, cols = R.shape
    E, den, rk = fmpz_mat(rows, cols, [int(x) for x in R.flat]).rref()
    ent = np.array([int(x) for x in E.entries()], dtype=object).reshape(rows, cols)
    piv_rows, pivots = [], []
    for i in range(int(rk)):
        nzc = np.flatnonzero(ent[i] != 0)
        p = int(nzc[0])
        if p % d == 0:
            piv_rows.append(i)
            pivots.append(p // d)
    k = len(piv_rows)
    sub = ent[piv_rows]
    num = sub.reshape(k, n, d).reshape(k * n, d)
    keys = np.arange(k * n, dtype=np.int64)
    out = SparseTensor(M.order, (k, n), keys, num, int(den))
    return pivots, out


def rank(M):
    return len(rref(M)[0])


def vstack(mats, n=None, order=None):
    mats = [m if m.arity == 2 else m.reshape((1,) + m.dims) for m in mats]
    if not mats:
        return SparseTensor.zeros((0, n or 0), order or 1)
    n = mats[0].dims[1]
    out, off = None, 0
    total = sum(m.dims[0] for m in mats)
    for m in mats:
        e = m.embed((total, n), (off, 0))
        out = e if out is None else out + e
        off += m.dims[0]
    return out


def hstack(mats):
    return vstack([m.transpose((1, 0)) for m in mats]).transpose((1, 0))


def nullspace(M):
    """Rows spanning {x : M x = 0}, in echelon-derived canonical form."""
    m, n = M.dims
    piv, E = rref(M)
    free = [j for j in range(n) if j not in set(piv)]
    if not free:
        return SparseTensor.zeros((0, n), M.order)
    ent = E.to_dict()
    out = {}
    for r, f in enumerate(free):
        out[(r, f)] = 1
        for i, p in enumerate(piv):
            v = ent.get((i, f))
            if v:
                out[(r, p)] = -v
    return SparseTensor.from_dict(out, (len(free), n), M.order)


@dataclass
class AffineSolutionSpace:
    particular: Optional[SparseTensor]
    basis: SparseTensor = field(repr=False)

    @property
    def consistent(self):
        return self.particular is not None

    @property
    def kernel_dim(self):
        return self.basis.dims[0]


def solve_affine(A, b):
    """All x with A x = b; particular is None when inconsistent."""
    m, n = A.dims
    aug = hstack([A, b.reshape((m, 1))])
    piv, E = rref(aug)
    kern = nullspace(A)
    if n in piv:
        return AffineSolutionSpace(None, kern)
    ent = E.to_dict()
    x = {}
    for i, p in enumerate(piv):
        v = ent.get((i, n))
        if v:
            x[(p,)] = v
    return AffineSolutionSpace(SparseTensor.from_dict(x, (n,), A.order), kern)


def inverse(M):
    n = M.dims[0]
    if M.dims != (n, n):
        raise ValueError("inverse of non-square matrix")
    aug = hstack([M, SparseTensor.identity(n, M.order)])
    piv, E = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    idx = E.indices()
    keep = idx[:, 1] >= n
    sub = SparseTensor(E.order, (n, n), idx[keep][:, 0] * n + idx[keep][:, 1] - n, E.num[keep], E.den, True)
    return sub


def span(vectors, n=None, order=1):
    """Echelon basis of the span of a list of vectors (or rows of a matrix)."""
    if isinstance(vectors, SparseTensor):
        M = vectors
    else:
        vectors = list(vectors)
        if not vectors:
            return SparseTensor.zeros((0, n), order)
        M = vstack(vectors)
    return rref(M)[1]


def in_span(B, v):
    return rank(vstack([B, v])) == B.dims[0] if B.dims[0] else v.is_zero()


def intersect(U, V):
    """Echelon basis of rowspace(U) ∩ rowspace(V)."""
    if U.dims[0] == 0 or V.dims[0] == 0:
        return SparseTensor.zeros((0, U.dims[1]), U.order)
    U, V = span(U), span(V)
    W = vstack([U, -V])
    K = nullspace(W.transpose((1, 0)))
    if K.dims[0] == 0:
        return SparseTensor.zeros((0, U.dims[1]), U.order)
    coeffs = SparseTensor(K.order, (K.dims[0], U.dims[0]), *_left_block(K, U.dims[0]))
    return span(einsum("ka,an->kn", coeffs, U))


def _left_block(K, k):
    idx = K.indices()
    m = idx[:, 1] < k
    return idx[m][:, 0] * k + idx[m][:, 1], K.num[m], K.den


def rows(M):
    """List of row vectors of a matrix."""
    return [M.select(0, i) for i in range(M.dims[0])]


def coord_matrix(N):
    """P[z, i] with sum_z v_z P[z, i] = coordinates of v in the rows of N (v in their span)."""
    r, n = N.dims
    piv, _ = rref(N)
    sub = hstack([N.select(1, p).reshape((r, 1)) for p in piv])
    inv = inverse(sub)                       # [slot, i]
    out = {}
    for (slot, i), v in inv.items():
        out[(piv[slot], i)] = v
    return SparseTensor.from_dict(out, (n, r), N.order)


def quotient(R, n, order=1):
    """(lift, proj) for V = k^n modulo the row space of R.

    lift[j, v] embeds quotient basis vector j as a standard vector; proj[v, j]
    maps k^n onto the quotient basis.
    """
    piv, E = rref(R) if R.dims[0] else ([], None)
    free = [j for j in range(n) if j not in set(piv)]
    q = len(free)
    col = {f: j for j, f in enumerate(free)}
    lift = SparseTensor.from_dict({(j, f): 1 for j, f in enumerate(free)}, (q, n), order)
    proj = {(f, j): 1 for j, f in enumerate(free)}
    if piv:
        for (i, c), v in E.items():
            if c in col:
                proj[(piv[i], col[c])] = -v
    return lift, SparseTensor.from_dict(proj, (n, q), order)
