"""Exact scalars: rationals, Gaussian rationals and polynomials in one variable.

Rationals are ``gmpy2.mpq`` values (always reduced, positive denominator).
Gaussian rationals are elements of Q(i); polynomials are dense coefficient
tuples over either field, variable written ``z`` when printed.
"""
from __future__ import annotations

import re
from fractions import Fraction

import gmpy2

Rational = type(gmpy2.mpq(0))
ZERO = gmpy2.mpq(0)
ONE = gmpy2.mpq(1)


class UnsupportedRing(TypeError):
    """An operation that needs a field was handed polynomial entries."""


def rat(x) -> Rational:
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to a rational."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, str):
        x = x.strip()
        return gmpy2.mpq(x[1:] if x.startswith("+") else x)
    if isinstance(x, Fraction):
        return gmpy2.mpq(x.numerator, x.denominator)
    if isinstance(x, (int, type(gmpy2.mpz(0)))):
        return gmpy2.mpq(x)
    if isinstance(x, Gaussian):
        if x.im:
            raise ValueError(f"{x} is not real")
        return x.re
    raise TypeError(f"cannot make a rational from {x!r}")


def format_rational(x) -> str:
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_square(x) -> bool:
    x = rat(x)
    return x >= 0 and gmpy2.is_square(x.numerator) and gmpy2.is_square(x.denominator)


def sqrt_rational(x) -> Rational:
    if not is_square(x):
        raise ValueError(f"{x} has no rational square root")
    x = rat(x)
    return gmpy2.mpq(gmpy2.isqrt(x.numerator), gmpy2.isqrt(x.denominator))


class Gaussian:
    """Element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Rational) else rat(re)
        self.im = im if isinstance(im, Rational) else rat(im)

    @staticmethod
    def _make(re, im):
        g = Gaussian.__new__(Gaussian)
        g.re = re
        g.im = im
        return g

    def __add__(self, o):
        if isinstance(o, Gaussian):
            return Gaussian._make(self.re + o.re, self.im + o.im)
        return Gaussian._make(self.re + o, self.im)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, Gaussian):
            return Gaussian._make(self.re - o.re, self.im - o.im)
        return Gaussian._make(self.re - o, self.im)

    def __rsub__(self, o):
        return Gaussian._make(o - self.re, -self.im)

    def __mul__(self, o):
        if isinstance(o, Gaussian):
            a, b, c, d = self.re, self.im, o.re, o.im
            return Gaussian._make(a * c - b * d, a * d + b * c)
        if isinstance(o, Poly):
            return NotImplemented
        return Gaussian._make(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Gaussian):
            c, d = o.re, o.im
            n = c * c + d * d
            a, b = self.re, self.im
            return Gaussian._make((a * c + b * d) / n, (b * c - a * d) / n)
        return Gaussian._make(self.re / o, self.im / o)

    def __rtruediv__(self, o):
        return Gaussian._make(rat(o), ZERO) / self

    def __neg__(self):
        return Gaussian._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return Gaussian._make(self.re, -self.im)

    def norm(self) -> Rational:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, Gaussian):
            return self.re == o.re and self.im == o.im
        if isinstance(o, (int, Rational, Fraction)):
            return not self.im and self.re == o
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Gaussian({format_rational(self.re)!r}, {format_rational(self.im)!r})"

    def __str__(self):
        return format_gaussian(self)


I = Gaussian(0, 1)

_GAUSS_RE = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<im>[+-]\s*(?:\d+(?:/\d+)?)?)\s*\*?\s*i)?\s*$"
)


def format_gaussian(x) -> str:
    """``"p/q+r/si"``; purely real values print as plain rationals."""
    if not isinstance(x, Gaussian):
        return format_rational(x)
    if not x.im:
        return format_rational(x.re)
    im = format_rational(x.im)
    if not x.re:
        return f"{im}i"
    if not im.startswith("-"):
        im = "+" + im
    return f"{format_rational(x.re)}{im}i"


def parse_scalar(s):
    """Parse a rational or Gaussian-rational string; returns mpq when real."""
    if not isinstance(s, str):
        return rat(s)
    if "i" not in s:
        return rat(s)
    m = _GAUSS_RE.match(s)
    if not m:
        raise ValueError(f"bad scalar {s!r}")
    re_part = rat(m.group("re")) if m.group("re") else ZERO
    im = m.group("im").replace(" ", "")
    if im in ("+", "-"):
        im += "1"
    return Gaussian(re_part, rat(im))


def conj(x):
    return x.conjugate() if isinstance(x, Gaussian) else x


def to_gaussian(x) -> Gaussian:
    return x if isinstance(x, Gaussian) else Gaussian._make(rat(x), ZERO)


class Poly:
    """Polynomial in ``z`` with coefficients in Q or Q(i), lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def const(cls, a):
        return cls((a,))

    @classmethod
    def z(cls):
        return cls((ZERO, ONE))

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.c) - 1

    def lead(self):
        return self.c[-1]

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, o):
        if not isinstance(o, Poly):
            o = Poly.const(o)
        return self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, o):
        if not isinstance(o, Poly):
            o = Poly.const(o)
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, v in enumerate(b):
            out[k] = out[k] + v
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-x for x in self.c])

    def __sub__(self, o):
        return self + (-o if isinstance(o, Poly) else Poly.const(-o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, Poly):
            if not o:
                return Poly()
            return Poly([x * o for x in self.c])
        if not self.c or not o.c:
            return Poly()
        out = [ZERO] * (len(self.c) + len(o.c) - 1)
        for i, x in enumerate(self.c):
            if not x:
                continue
            for j, y in enumerate(o.c):
                out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, o):
        if not o:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(o.c)
        if dq < 0:
            return Poly(), self
        q = [ZERO] * (dq + 1)
        inv = ONE / o.lead() if not isinstance(o.lead(), Gaussian) else Gaussian._make(ONE, ZERO) / o.lead()
        for k in range(dq, -1, -1):
            f = r[k + len(o.c) - 1] * inv
            q[k] = f
            if f:
                for j, y in enumerate(o.c):
                    r[k + j] = r[k + j] - f * y
        return Poly(q), Poly(r[: len(o.c) - 1])

    def __floordiv__(self, o):
        return divmod(self, o)[0]

    def __mod__(self, o):
        return divmod(self, o)[1]

    def monic(self) -> "Poly":
        if not self.c:
            return self
        lc = self.lead()
        if lc == 1:
            return self
        inv = (Gaussian._make(ONE, ZERO) / lc) if isinstance(lc, Gaussian) else ONE / lc
        return Poly([x * inv for x in self.c])

    def __call__(self, x):
        acc = ZERO
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic()


def format_poly(p: Poly, var: str = "z") -> str:
    if not p.c:
        return "0"
    terms = []
    for k in range(len(p.c) - 1, -1, -1):
        a = p.c[k]
        if not a:
            continue
        s = format_gaussian(a)
        if isinstance(a, Gaussian) and a.im and a.re:
            s = f"({s})"
        if k == 0:
            t = s
        else:
            mono = var if k == 1 else f"{var}^{k}"
            if s == "1":
                t = mono
            elif s == "-1":
                t = "-" + mono
            else:
                t = f"{s}*{mono}"
        terms.append(t)
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out
