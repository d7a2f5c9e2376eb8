"""Rational quaternions and their real 4x4 matrix representations."""
from __future__ import annotations

import random

from .exact import ONE, ZERO, Rational, format_rational, rat
from . import linalg as la


class Quaternion:
    """``w + x i + y j + z k`` with rational coefficients."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w=0, x=0, y=0, z=0):
        self.w, self.x, self.y, self.z = rat(w), rat(x), rat(y), rat(z)

    @property
    def coords(self) -> tuple[Rational, Rational, Rational, Rational]:
        return (self.w, self.x, self.y, self.z)

    @property
    def vector(self) -> tuple[Rational, Rational, Rational]:
        return (self.x, self.y, self.z)

    def __add__(self, o):
        o = _q(o)
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __sub__(self, o):
        o = _q(o)
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, o):
        if not isinstance(o, Quaternion):
            o = rat(o)
            return Quaternion(self.w * o, self.x * o, self.y * o, self.z * o)
        a1, b1, c1, d1 = self.coords
        a2, b2, c2, d2 = o.coords
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __rmul__(self, o):
        return self * o

    def conjugate(self):
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> Rational:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def inverse(self):
        n = self.norm2()
        if not n:
            raise ZeroDivisionError("zero quaternion")
        c = self.conjugate()
        return Quaternion(c.w / n, c.x / n, c.y / n, c.z / n)

    def __truediv__(self, o):
        if isinstance(o, Quaternion):
            return self * o.inverse()
        o = rat(o)
        return Quaternion(self.w / o, self.x / o, self.y / o, self.z / o)

    def __eq__(self, o):
        if not isinstance(o, Quaternion):
            try:
                o = _q(o)
            except TypeError:
                return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return f"Quaternion({format_quaternion(self)})"


def _q(o) -> Quaternion:
    return o if isinstance(o, Quaternion) else Quaternion(rat(o))


Q1 = Quaternion(1)
QI = Quaternion(0, 1)
QJ = Quaternion(0, 0, 1)
QK = Quaternion(0, 0, 0, 1)
BASIS = (Q1, QI, QJ, QK)


def format_quaternion(q: Quaternion) -> str:
    return ",".join(format_rational(c) for c in q.coords)


def parse_quaternion(s: str) -> Quaternion:
    parts = [p for p in s.split(",")]
    if len(parts) != 4:
        raise ValueError(f"quaternion needs 4 comma-separated coefficients: {s!r}")
    return Quaternion(*(rat(p) for p in parts))


def left_matrix(q: Quaternion) -> la.Matrix:
    """Matrix of x -> q x in the basis (1, i, j, k)."""
    return la.transpose(tuple((q * b).coords for b in BASIS))


def right_matrix(q: Quaternion) -> la.Matrix:
    """Matrix of x -> x q in the basis (1, i, j, k)."""
    return la.transpose(tuple((b * q).coords for b in BASIS))


def rotation_of(q: Quaternion) -> la.Matrix:
    """SO(3) matrix of v -> q v q^-1 on Im H; rational for any rational q != 0."""
    qi = q.inverse()
    cols = [(q * b * qi).vector for b in BASIS[1:]]
    return la.transpose(tuple(cols))


def canonical_sign(q: Quaternion) -> Quaternion:
    """Representative of {q, -q} whose first nonzero coordinate is positive."""
    for c in q.coords:
        if c:
            return q if c > 0 else -q
    return q


def unit_from(q: Quaternion) -> Quaternion:
    """q^2 / |q|^2: a rational point of S^3 from any nonzero rational quaternion."""
    return (q * q) / q.norm2()


def random_quaternion(rng: random.Random, bound: int = 3) -> Quaternion:
    while True:
        q = Quaternion(*(rng.randint(-bound, bound) for _ in range(4)))
        if q:
            return q


def random_unit(rng: random.Random, bound: int = 3) -> Quaternion:
    return unit_from(random_quaternion(rng, bound))


def imaginary_unit_from(v: tuple) -> Quaternion:
    """Rational point of S^2 by inverse stereographic projection from -i."""
    # stereographic from (-1, 0, 0) applied to a rational point (s, t) of the plane
    s, t = rat(v[0]), rat(v[1])
    d = 1 + s * s + t * t
    return Quaternion(ZERO, (1 - s * s - t * t) / d, 2 * s / d, 2 * t / d)


def random_imaginary_unit(rng: random.Random, bound: int = 4) -> Quaternion:
    s = rat(rng.randint(-bound, bound)) / rng.randint(1, bound)
    t = rat(rng.randint(-bound, bound)) / rng.randint(1, bound)
    return imaginary_unit_from((s, t))


def random_rotation(rng: random.Random, bound: int = 3) -> la.Matrix:
    return rotation_of(random_quaternion(rng, bound))


def cross(a, b) -> tuple:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def is_rotation(r: la.Matrix) -> bool:
    """Exact test for membership in SO(3)."""
    if len(r) != 3 or any(len(row) != 3 for row in r):
        return False
    return la.mat_equal(la.matmul(la.transpose(r), r), la.identity(3)) and la.det(r) == ONE
