"""Sparse tensors over Q(zeta_N) with numpy storage.

A tensor keeps sorted flat keys, an integer numerator block of shape
(nnz, phi(N)) holding power-basis coordinates, and one common positive
denominator.  Numerators live in int64 while a magnitude bound says they
fit and fall back to Python ints (object arrays) otherwise.
"""
from functools import reduce
from math import gcd, lcm, prod

import numpy as np
from flint import fmpq

from .. import config
from .field import Scalar, phi, power_table, _lift

LIMIT = 1 << 62


def _maxabs(a):
    if a.size == 0:
        return 0
    if a.dtype == object:
        return int(max(abs(int(x)) for x in a.flat))
    m = int(np.abs(a).max())
    return m


def _obj(a):
    return a if a.dtype == object else a.astype(object)


def _fit(a, bound_factor=1):
    """Return a as int64 if every entry times bound_factor fits, else object."""
    m = _maxabs(a)
    if m * bound_factor < LIMIT:
        return a if a.dtype == np.int64 else a.astype(np.int64)
    return _obj(a)


_RED = {}


def _reduction(n):
    """(table of zeta^k coords for k >= phi, growth factor)."""
    if n not in _RED:
        d = phi(n)
        tab = power_table(n)
        hi = [tab[k] for k in range(d, 2 * d - 1)]
        grow = 1 + max((sum(abs(r[t]) for r in hi) for t in range(d)), default=0)
        _RED[n] = (hi, grow)
    return _RED[n]


def cmul(X, Y, n):
    """Row-wise product of coordinate blocks X, Y of shape (m, phi(n))."""
    d = X.shape[1]
    if d == 1:
        if X.dtype != object and Y.dtype != object and _maxabs(X) * _maxabs(Y) < LIMIT:
            return X * Y
        return _obj(X) * _obj(Y)
    hi, grow = _reduction(n)
    if X.dtype == object or Y.dtype == object or _maxabs(X) * _maxabs(Y) * d * grow >= LIMIT:
        X, Y = _obj(X), _obj(Y)
    conv = [None] * (2 * d - 1)
    for i in range(d):
        xi = X[:, i]
        for j in range(d):
            t = xi * Y[:, j]
            conv[i + j] = t if conv[i + j] is None else conv[i + j] + t
    out = np.empty((X.shape[0], d), dtype=X.dtype)
    for t in range(d):
        acc = conv[t]
        for k, row in enumerate(hi):
            if row[t]:
                acc = acc + conv[d + k] * row[t]
        out[:, t] = acc
    return out


def scalar_coords(s, n):
    """(integer coordinate vector, denominator) of a Scalar inside Q(zeta_n)."""
    s = s if isinstance(s, Scalar) else Scalar(s)
    if s.order != n:
        if n % s.order:
            raise ValueError(f"scalar of order {s.order} outside field of order {n}")
        c = _lift(s.coeffs, s.order, n) if s.order > 1 else (s.coeffs[0],) + (fmpq(0),) * (phi(n) - 1)
    else:
        c = s.coeffs
    den = reduce(lcm, (int(x.q) for x in c), 1)
    return [int(x.p) * (den // int(x.q)) for x in c], den


def _aggregate(keys, num):
    if keys.size == 0:
        return keys, num
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    num = num[order]
    flag = np.empty(keys.size, dtype=bool)
    flag[0] = True
    np.not_equal(keys[1:], keys[:-1], out=flag[1:])
    starts = np.flatnonzero(flag)
    if starts.size != keys.size:
        group = int(np.diff(np.append(starts, keys.size)).max())
        if num.dtype != object and _maxabs(num) * group >= LIMIT:
            num = _obj(num)
        num = np.add.reduceat(num, starts, axis=0)
        keys = keys[starts]
    nz = np.any(num != 0, axis=1)
    if not nz.all():
        keys, num = keys[nz], num[nz]
    return keys, num


def _strides(dims):
    st = [1] * len(dims)
    for a in range(len(dims) - 2, -1, -1):
        st[a] = st[a + 1] * dims[a + 1]
    return st


class SparseTensor:
    __slots__ = ("order", "dims", "keys", "num", "den")

    def __init__(self, order, dims, keys, num, den=1, normalized=False):
        self.order = order
        self.dims = tuple(int(d) for d in dims)
        if prod(self.dims) >= LIMIT:
            raise ValueError(f"tensor shape {self.dims} too large for flat keys")
        self.keys = keys
        self.num = num
        self.den = int(den)
        if not normalized:
            self._normalize()

    def _normalize(self):
        self.keys, self.num = _aggregate(self.keys, self.num)
        if self.num.dtype == object:
            self.num = _fit(self.num)
        if self.den < 0:
            self.den, self.num = -self.den, -self.num
        if self.den != 1:
            if self.num.size == 0:
                self.den = 1
                return
            if self.num.dtype == object:
                g = reduce(gcd, (int(x) for x in self.num.flat), self.den)
            else:
                g = gcd(int(np.gcd.reduce(self.num.ravel())), self.den)
            if g > 1:
                self.num = self.num // g
                self.den //= g

    # -- construction
    @classmethod
    def zeros(cls, dims, order=1):
        return cls(order, dims, np.zeros(0, np.int64), np.zeros((0, phi(order)), np.int64), 1, True)

    @classmethod
    def from_dict(cls, entries, dims, order=1):
        dims = tuple(dims)
        st = _strides(dims)
        d = phi(order)
        keys, rows, dens = [], [], []
        for ix, v in entries.items():
            if isinstance(ix, int):
                ix = (ix,)
            if len(ix) != len(dims) or any(not 0 <= i < n for i, n in zip(ix, dims)):
                raise IndexError(f"index {ix} outside {dims}")
            c, den = scalar_coords(v, order)
            keys.append(sum(i * s for i, s in zip(ix, st)))
            rows.append(c)
            dens.append(den)
        if not keys:
            return cls.zeros(dims, order)
        L = reduce(lcm, dens, 1)
        num = np.array([[x * (L // q) for x in r] for r, q in zip(rows, dens)], dtype=object).reshape(len(rows), d)
        return cls(order, dims, np.array(keys, dtype=np.int64), num, L)

    @classmethod
    def vector(cls, values, order=1):
        return cls.from_dict({(i,): v for i, v in enumerate(values) if v}, (len(values),), order)

    @classmethod
    def basis(cls, n, i, order=1):
        return cls(order, (n,), np.array([i], np.int64), _unit_row(order), 1, True)

    @classmethod
    def identity(cls, n, order=1):
        keys = np.arange(n, dtype=np.int64) * (n + 1)
        num = np.zeros((n, phi(order)), np.int64)
        num[:, 0] = 1
        return cls(order, (n, n), keys, num, 1, True)

    # -- access
    @property
    def arity(self):
        return len(self.dims)

    @property
    def nnz(self):
        return int(self.keys.size)

    def indices(self):
        if not self.dims:
            return np.zeros((self.nnz, 0), np.int64)
        return np.stack(np.unravel_index(self.keys, self.dims), axis=1).astype(np.int64)

    def _scalar(self, row):
        c = [fmpq(int(x), self.den) for x in row]
        return Scalar(c, self.order)

    def items(self):
        idx = self.indices()
        for r in range(self.nnz):
            yield tuple(int(i) for i in idx[r]), self._scalar(self.num[r])

    def to_dict(self):
        return dict(self.items())

    def __getitem__(self, ix):
        if isinstance(ix, (int, np.integer)):
            ix = (int(ix),)
        k = sum(i * s for i, s in zip(ix, _strides(self.dims)))
        p = int(np.searchsorted(self.keys, k))
        if p < self.nnz and self.keys[p] == k:
            return self._scalar(self.num[p])
        return Scalar(0)

    def dense(self):
        """Nested lists of Scalars (small tensors only)."""
        out = np.full(self.dims, None, dtype=object)
        zero = Scalar(0)
        for i in np.ndindex(*self.dims):
            out[i] = zero
        for ix, v in self.items():
            out[ix] = v
        return out.tolist()

    def tolist(self):
        if self.arity != 1:
            raise ValueError("tolist is for vectors")
        out = [Scalar(0)] * self.dims[0]
        for (i,), v in self.items():
            out[i] = v
        return out

    def __repr__(self):
        return f"SparseTensor(N={self.order}, dims={self.dims}, nnz={self.nnz})"

    # -- linear structure
    def _align(self, other):
        if self.dims != other.dims:
            raise ValueError(f"shape mismatch {self.dims} vs {other.dims}")
        a, b = self, other
        if a.order != b.order:
            n = lcm(a.order, b.order)
            a, b = a.as_order(n), b.as_order(n)
        L = lcm(a.den, b.den)
        fa, fb = L // a.den, L // b.den
        na = a.num if fa == 1 else _fit(a.num, fa * 2) * fa
        nb = b.num if fb == 1 else _fit(b.num, fb * 2) * fb
        if na.dtype != nb.dtype:
            na, nb = _obj(na), _obj(nb)
        return a.order, na, nb, L

    def __add__(self, other):
        n, na, nb, L = self._align(other)
        if _maxabs(na) + _maxabs(nb) >= LIMIT:
            na, nb = _obj(na), _obj(nb)
        return SparseTensor(n, self.dims, np.concatenate([self.keys, other.keys]), np.concatenate([na, nb]), L)

    def __neg__(self):
        return SparseTensor(self.order, self.dims, self.keys, -self.num, self.den, True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = s if isinstance(s, Scalar) else Scalar(s)
        if not s:
            return SparseTensor.zeros(self.dims, self.order)
        t = self
        if s.order != 1 and s.order != self.order:
            t = self.as_order(lcm(s.order, self.order))
        c, den = scalar_coords(s, t.order)
        row = np.array([c], dtype=object)
        row = _fit(row)
        num = cmul(t.num, np.repeat(row, t.nnz, axis=0), t.order) if t.nnz else t.num
        return SparseTensor(t.order, t.dims, t.keys, num, t.den * den)

    __mul__ = scale

    def __rmul__(self, s):
        return self.scale(s)

    def is_zero(self):
        return self.nnz == 0

    def __eq__(self, other):
        if not isinstance(other, SparseTensor):
            return NotImplemented
        if self.dims != other.dims:
            return False
        if self.nnz != other.nnz:
            return False
        if not np.array_equal(self.keys, other.keys):
            return False
        if self.order == other.order and self.den == other.den:
            return bool(np.all(_obj(self.num) == _obj(other.num))) if self.num.dtype != other.num.dtype \
                else bool(np.array_equal(self.num, other.num))
        return (self - other).is_zero()

    __hash__ = None

    def as_order(self, n):
        if n == self.order:
            return self
        if n % self.order:
            raise ValueError(f"cannot embed order {self.order} into {n}")
        d = phi(n)
        num = np.zeros((self.nnz, d), dtype=object)
        step = n // self.order
        tab = power_table(n)
        for i in range(self.num.shape[1]):
            col = _obj(self.num[:, i])
            for t, v in enumerate(tab[(i * step) % n]):
                if v:
                    num[:, t] = num[:, t] + col * v
        return SparseTensor(n, self.dims, self.keys, num, self.den)

    def galois(self, k):
        n = self.order
        if n == 1:
            return self
        d = phi(n)
        tab = power_table(n)
        num = np.zeros((self.nnz, d), dtype=object)
        for i in range(d):
            col = _obj(self.num[:, i])
            for t, v in enumerate(tab[(i * k) % n]):
                if v:
                    num[:, t] = num[:, t] + col * v
        return SparseTensor(n, self.dims, self.keys, num, self.den)

    def conj(self):
        return self.galois(-1 % self.order) if self.order > 2 else self

    # -- reshaping
    def transpose(self, perm):
        perm = tuple(perm)
        if perm == tuple(range(self.arity)):
            return self
        idx = self.indices()[:, perm]
        dims = tuple(self.dims[p] for p in perm)
        keys = _flat(idx, dims)
        o = np.argsort(keys, kind="stable")
        return SparseTensor(self.order, dims, keys[o], self.num[o], self.den, True)

    def reshape(self, dims):
        dims = tuple(dims)
        if prod(dims) != prod(self.dims):
            raise ValueError("reshape changes size")
        return SparseTensor(self.order, dims, self.keys, self.num, self.den, True)

    def select(self, axis, i):
        """Slice with axis fixed to i."""
        idx = self.indices()
        m = idx[:, axis] == i
        rest = [a for a in range(self.arity) if a != axis]
        dims = tuple(self.dims[a] for a in rest)
        return SparseTensor(self.order, dims, _flat(idx[m][:, rest], dims), self.num[m], self.den, True)

    def embed(self, dims, offsets):
        """Place self inside a larger zero tensor at the given offsets."""
        idx = self.indices() + np.array(offsets, dtype=np.int64)
        return SparseTensor(self.order, dims, _flat(idx, dims), self.num, self.den, True)


def _unit_row(order):
    r = np.zeros((1, phi(order)), np.int64)
    r[0, 0] = 1
    return r


def _flat(idx, dims):
    if idx.shape[1] == 0:
        return np.zeros(idx.shape[0], np.int64)
    st = np.array(_strides(dims), dtype=np.int64)
    return (idx * st).sum(axis=1).astype(np.int64)


def contract(A, la, B, lb, lout):
    """Sum over letters not in lout; letters shared by A and B are matched."""
    if A.order != B.order:
        n = lcm(A.order, B.order)
        A, B = A.as_order(n), B.as_order(n)
    n = A.order
    dim_of = {}
    for lab, T in ((la, A), (lb, B)):
        if len(set(lab)) != len(lab) or len(lab) != T.arity:
            raise ValueError(f"bad labels {lab!r} for arity {T.arity}")
        for c, d in zip(lab, T.dims):
            if dim_of.setdefault(c, d) != d:
                raise ValueError(f"dimension mismatch on {c}")
    out_dims = tuple(dim_of[c] for c in lout)
    den = A.den * B.den
    if A.nnz == 0 or B.nnz == 0:
        return SparseTensor.zeros(out_dims, n)
    shared = [c for c in la if c in lb]
    ia_all, ib_all = A.indices(), B.indices()
    sd = tuple(dim_of[c] for c in shared)
    kA = _flat(ia_all[:, [la.index(c) for c in shared]], sd)
    kB = _flat(ib_all[:, [lb.index(c) for c in shared]], sd)
    ob = np.argsort(kB, kind="stable")
    kBs = kB[ob]
    lo = np.searchsorted(kBs, kA, "left")
    cnt = np.searchsorted(kBs, kA, "right") - lo
    rows = np.flatnonzero(cnt)
    if rows.size == 0:
        return SparseTensor.zeros(out_dims, n)
    lo, cnt = lo[rows], cnt[rows]
    src = [(0, la.index(c)) if c in la else (1, lb.index(c)) for c in lout]
    st = np.array(_strides(out_dims), dtype=np.int64) if out_dims else np.zeros(0, np.int64)
    chunk = config.DEFAULT.chunk_pairs
    csum = np.cumsum(cnt)
    parts_k, parts_n = [], []
    r0 = 0
    while r0 < rows.size:
        base = csum[r0 - 1] if r0 else 0
        r1 = int(np.searchsorted(csum, base + chunk, "right"))
        r1 = max(r1, r0 + 1)
        c = cnt[r0:r1]
        tot = int(c.sum())
        ia = np.repeat(rows[r0:r1], c)
        offs = np.repeat(lo[r0:r1] - (np.cumsum(c) - c), c) + np.arange(tot)
        ib = ob[offs]
        key = np.zeros(tot, np.int64)
        for (which, col), s in zip(src, st):
            key += (ia_all[ia, col] if which == 0 else ib_all[ib, col]) * s
        num = cmul(A.num[ia], B.num[ib], n)
        k, v = _aggregate(key, num)
        parts_k.append(k)
        parts_n.append(v)
        r0 = r1
    if len(parts_k) == 1:
        keys, num = parts_k[0], parts_n[0]
    else:
        if any(p.dtype == object for p in parts_n):
            parts_n = [_obj(p) for p in parts_n]
        keys, num = _aggregate(np.concatenate(parts_k), np.concatenate(parts_n))
    return SparseTensor(n, out_dims, keys, num, den, normalized=False)


def _estimate(cur, cl, op, ol):
    """Rough nnz of contracting cur with op, assuming uniformly spread entries."""
    shared = [c for c in ol if c in cl]
    space = prod(op.dims[ol.index(c)] for c in shared) if shared else 1
    return cur.nnz * op.nnz / space


def einsum(spec, *ops):
    """Sparse einsum, e.g. einsum('ab,bc->ac', X, Y).

    Starts from the first operand and greedily contracts the operand with the
    smallest estimated result next.
    """
    lhs, lout = spec.replace(" ", "").split("->")
    labs = lhs.split(",")
    if len(labs) != len(ops):
        raise ValueError("operand count mismatch")
    cur, cl = ops[0], labs[0]
    rest = list(range(1, len(ops)))
    while rest:
        pick = min(rest, key=lambda j: (_estimate(cur, cl, ops[j], labs[j]), j))
        rest.remove(pick)
        later = set(lout).union(*(labs[j] for j in rest))
        nl = labs[pick]
        keep = [c for c in cl if c in later] + [c for c in nl if c in later and c not in cl]
        target = "".join(keep)
        if not rest and sorted(target) == sorted(lout):
            target = lout
        cur = contract(cur, cl, ops[pick], nl, target)
        cl = target
    if cl != lout:
        if set(cl) == set(lout):
            cur = cur.transpose([cl.index(c) for c in lout])
        else:
            one = SparseTensor(cur.order, (), np.zeros(1, np.int64), _unit_row(cur.order), 1, True)
            cur = contract(cur, cl, one, "", lout)
    return cur


def outer(*ts):
    letters = "abcdefghijklmnopqrstuvwxyz"
    labs, pos = [], 0
    for t in ts:
        labs.append(letters[pos:pos + t.arity])
        pos += t.arity
    return einsum(",".join(labs) + "->" + "".join(labs), *ts)
