"""Elements of cyclotomic fields Q(zeta_N) in the power basis."""
import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

from flint import fmpq, fmpq_poly, fmpz_poly

from .. import config


class FieldError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def phi(n):
    return fmpz_poly.cyclotomic(n).degree()


@lru_cache(maxsize=None)
def cyclo(n):
    return fmpq_poly(fmpz_poly.cyclotomic(n))


@lru_cache(maxsize=None)
def power_table(n):
    """Integer coordinates of zeta^k, k < max(n, 2*phi(n)-1)."""
    d = phi(n)
    top = max(n, 2 * d - 1)
    rows = []
    for k in range(top):
        r = (fmpq_poly([0] * k + [1]) % cyclo(n)) if k >= d else None
        if r is None:
            v = [0] * d
            v[k] = 1
        else:
            c = [int(x) for x in r.coeffs()]
            v = c + [0] * (d - len(c))
        rows.append(tuple(v))
    return tuple(rows)


_ZERO = fmpq(0)
_ONE = fmpq(1)


def _lcm(a, b):
    return a * b // gcd(a, b)


def _lift(coeffs, n, m):
    """Re-express an element of Q(zeta_n) inside Q(zeta_m), n | m."""
    if n == m:
        return coeffs
    step = m // n
    tab = power_table(m)
    out = [_ZERO] * phi(m)
    for i, c in enumerate(coeffs):
        if c:
            for t, v in enumerate(tab[(i * step) % m]):
                if v:
                    out[t] += c * v
    return tuple(out)


def _reduce(conv, n):
    d = phi(n)
    if len(conv) <= d:
        return tuple(conv) + (_ZERO,) * (d - len(conv))
    out = list(conv[:d])
    tab = power_table(n)
    for k in range(d, len(conv)):
        c = conv[k]
        if c:
            for t, v in enumerate(tab[k]):
                if v:
                    out[t] += c * v
    return tuple(out)


def _poly(coeffs):
    return fmpq_poly(list(coeffs))


def _from_poly(p, n):
    c = list(p.coeffs())
    d = phi(n)
    return tuple(c) + (_ZERO,) * (d - len(c))


def _q(x):
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    return fmpq(x)


class Scalar:
    """a_0 + a_1 z + ... + a_{d-1} z^{d-1} with z a primitive N-th root of unity.

    Rational values are stored with order 1, whatever field they came from.
    """
    __slots__ = ("order", "coeffs")

    def __init__(self, value=0, order=1):
        if isinstance(value, Scalar):
            self.order, self.coeffs = value.order, value.coeffs
            return
        if isinstance(value, (tuple, list)):
            c = tuple(_q(x) for x in value)
            self.order, self.coeffs = _canon(c, order)
            return
        self.order = 1
        self.coeffs = (_q(value),)

    @classmethod
    def _make(cls, coeffs, order):
        s = object.__new__(cls)
        s.order, s.coeffs = _canon(coeffs, order)
        return s

    # -- structure
    def is_rational(self):
        return self.order == 1

    def rational(self):
        if self.order != 1:
            raise FieldError(f"{self} is not rational")
        return self.coeffs[0]

    def __bool__(self):
        return any(self.coeffs)

    def _promote(self, other):
        if not isinstance(other, Scalar):
            other = Scalar(other)
        n, m = self.order, other.order
        if n == m:
            return n, self.coeffs, other.coeffs
        if n == 1:
            return m, _lift(self.coeffs, 1, m) if self else (_ZERO,) * phi(m), other.coeffs
        if m == 1:
            return n, self.coeffs, _lift(other.coeffs, 1, n) if other else (_ZERO,) * phi(n)
        L = _lcm(n, m)
        if L > config.DEFAULT.max_order:
            raise FieldError(f"order promotion {n},{m} -> {L} exceeds bound")
        return L, _lift(self.coeffs, n, L), _lift(other.coeffs, m, L)

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, (Scalar, int, fmpq)):
            return NotImplemented
        n, a, b = self._promote(other)
        return Scalar._make(tuple(x + y for x, y in zip(a, b)), n)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._make(tuple(-x for x in self.coeffs), self.order)

    def __sub__(self, other):
        if not isinstance(other, (Scalar, int, fmpq)):
            return NotImplemented
        n, a, b = self._promote(other)
        return Scalar._make(tuple(x - y for x, y in zip(a, b)), n)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, fmpq)):
            if not other:
                return Scalar()
            return Scalar._make(tuple(x * other for x in self.coeffs), self.order)
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.order == 1:
            return self * other.coeffs[0]
        if self.order == 1:
            return other * self.coeffs[0]
        n, a, b = self._promote(other)
        d = len(a)
        conv = [_ZERO] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        return Scalar._make(_reduce(conv, n), n)

    __rmul__ = __mul__

    def inv(self):
        if not self:
            raise ZeroDivisionError("inverse of zero scalar")
        if self.order == 1:
            return Scalar(1 / self.coeffs[0])
        g, s, _ = _poly(self.coeffs).xgcd(cyclo(self.order))
        return Scalar._make(_from_poly(s / g.coeffs()[0], self.order), self.order)

    def __truediv__(self, other):
        if isinstance(other, (int, fmpq)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return Scalar(other) * self.inv()

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        out, base = Scalar(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def galois(self, k):
        """Apply zeta -> zeta^k, gcd(k, N) = 1."""
        n = self.order
        if n == 1:
            return self
        if gcd(k, n) != 1:
            raise FieldError(f"{k} is not a unit mod {n}")
        tab = power_table(n)
        out = [_ZERO] * phi(n)
        for i, c in enumerate(self.coeffs):
            if c:
                for t, v in enumerate(tab[(i * k) % n]):
                    if v:
                        out[t] += c * v
        return Scalar._make(tuple(out), n)

    def conj(self):
        return self.galois(-1 % self.order) if self.order > 2 else self

    def norm(self):
        """Product of all Galois conjugates, a rational."""
        n = self.order
        out = Scalar(1)
        for k in range(1, max(n, 2)):
            if gcd(k, n) == 1:
                out = out * self.galois(k)
        return out.rational()

    # -- comparison
    def __eq__(self, other):
        if isinstance(other, (int, fmpq)):
            return self.order == 1 and self.coeffs[0] == other
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.order == other.order:
            return self.coeffs == other.coeffs
        return not (self - other)

    def __hash__(self):
        if self.order == 1:
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    # -- conversion
    def to_complex(self):
        import cmath
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c.p) / float(c.q) * z ** i for i, c in enumerate(self.coeffs))

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        if self.order == 1:
            return f"Scalar({format_scalar(self)})"
        return f"Scalar({format_scalar(self)}, N={self.order})"


def _canon(coeffs, order):
    d = phi(order)
    if len(coeffs) != d:
        if len(coeffs) > d:
            coeffs = _reduce(list(coeffs), order)
        else:
            coeffs = tuple(coeffs) + (_ZERO,) * (d - len(coeffs))
    if order > 1 and not any(coeffs[1:]):
        return 1, (coeffs[0],)
    return order, coeffs


def zeta(n, k=1):
    """zeta_n^k."""
    k %= n
    if n <= 2:
        return Scalar(-1 if (n == 2 and k) else 1)
    return Scalar._make(tuple(fmpq(v) for v in power_table(n)[k]), n)


def scalar(value, order=1):
    if isinstance(value, Scalar):
        return value
    if isinstance(value, str):
        return parse_scalar(value, order)
    return Scalar(value)


# -- text form -----------------------------------------------------------

def _fmt_q(q):
    return str(q.p) if q.q == 1 else f"{q.p}/{q.q}"


def format_scalar(s):
    parts = []
    for k, c in enumerate(s.coeffs):
        if not c:
            continue
        mag = _fmt_q(abs(c))
        body = mag if k == 0 else (f"{mag}*z" if k == 1 else f"{mag}*z^{k}")
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("-" if c < 0 else "+") + body)
    return "".join(parts) if parts else "0"


_TERM = re.compile(r"\s*([+-]?)\s*(\d+)(?:/(\d+))?\s*(\*?\s*z(?:\s*\^\s*(-?\d+))?)?\s*")


def parse_scalar(text, order=1):
    """Inverse of format_scalar; z means the primitive order-th root of unity."""
    if not isinstance(text, str) or not text.strip():
        raise ValueError(f"empty scalar text {text!r}")
    pos, out, first = 0, Scalar(0), True
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad scalar text {text!r} at {pos}")
        sign, a, b, zpart, e = m.groups()
        if not first and not sign:
            raise ValueError(f"missing operator in {text!r} at {pos}")
        if b is not None and int(b) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        c = fmpq(int(a), int(b) if b else 1)
        if sign == "-":
            c = -c
        if zpart:
            if order == 1:
                raise ValueError(f"z used in rational context: {text!r}")
            out = out + zeta(order, int(e) if e else 1) * c
        else:
            out = out + c
        first = False
        pos = m.end()
    return out
