"""Linear hypercomplex and quaternionic structures on Q^(4k).

A quaternionic structure is handled through a hypercomplex representative
``(I, J, K)``; anything that should depend only on the quaternionic class is
tested for invariance under :func:`rotate_representative`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple

from . import linalg as la
from .exact import ONE, ZERO, Gaussian, rat, to_gaussian
from .quaternion import (
    QI,
    QJ,
    QK,
    Quaternion,
    is_rotation,
    left_matrix,
    random_quaternion,
    random_unit,
    right_matrix,
    rotation_of,
)


class StructureError(ValueError):
    """Structure matrices fail one of the quaternion identities."""


@dataclass(frozen=True)
class HypercomplexStructure:
    dim: int
    I: la.Matrix
    J: la.Matrix
    K: la.Matrix

    @property
    def k(self) -> int:
        return self.dim // 4

    @property
    def generators(self) -> tuple[la.Matrix, la.Matrix, la.Matrix]:
        return (self.I, self.J, self.K)

    def __repr__(self):
        return f"HypercomplexStructure(dim={self.dim})"


def structure_violations(s: HypercomplexStructure) -> list[str]:
    """Names of the quaternion identities that fail, empty when valid."""
    bad = []
    if s.dim % 4 or s.dim <= 0:
        bad.append(f"dimension {s.dim} is not a positive multiple of 4")
        return bad
    for name, m in zip("IJK", s.generators):
        if len(m) != s.dim or any(len(r) != s.dim for r in m):
            bad.append(f"{name} is not {s.dim}x{s.dim}")
    if bad:
        return bad
    minus = la.mneg(la.identity(s.dim))
    I, J, K = s.generators
    checks = [
        ("I^2 = -Id", la.matmul(I, I), minus),
        ("J^2 = -Id", la.matmul(J, J), minus),
        ("K^2 = -Id", la.matmul(K, K), minus),
        ("IJ = K", la.matmul(I, J), K),
        ("JK = I", la.matmul(J, K), I),
        ("KI = J", la.matmul(K, I), J),
        ("JI = -K", la.matmul(J, I), la.mneg(K)),
    ]
    for name, lhs, rhs in checks:
        if not la.mat_equal(lhs, rhs):
            bad.append(name)
    return bad


def check_structure(s: HypercomplexStructure) -> HypercomplexStructure:
    bad = structure_violations(s)
    if bad:
        raise StructureError("structure identities violated: " + ", ".join(bad))
    return s


def make_structure(I, J, K) -> HypercomplexStructure:
    I, J, K = la.ratmat(I), la.ratmat(J), la.ratmat(K)
    return check_structure(HypercomplexStructure(len(I), I, J, K))


def standard_structure(k: int) -> HypercomplexStructure:
    """Left multiplication on H^k, real basis (1, i, j, k) per H-coordinate."""
    if k < 1:
        raise ValueError("standard_structure needs k >= 1")
    blocks = [left_matrix(q) for q in (QI, QJ, QK)]
    idk = la.identity(k)
    return HypercomplexStructure(4 * k, *(la.kron(idk, b) for b in blocks))


class AdmissiblePoint(NamedTuple):
    a: object
    b: object
    c: object


def admissible_point(a, b, c) -> AdmissiblePoint:
    p = AdmissiblePoint(rat(a), rat(b), rat(c))
    if p.a * p.a + p.b * p.b + p.c * p.c != 1:
        raise ValueError(f"({p.a}, {p.b}, {p.c}) is not on the unit sphere")
    return p


def admissible_operator(s: HypercomplexStructure, p) -> la.Matrix:
    """aI + bJ + cK for a rational point (a, b, c) of the unit sphere."""
    p = p if isinstance(p, AdmissiblePoint) else admissible_point(*p)
    if p.a * p.a + p.b * p.b + p.c * p.c != 1:
        raise ValueError("admissible point must have unit norm")
    return combine(s, p)


def combine(s: HypercomplexStructure, coeffs) -> la.Matrix:
    a, b, c = coeffs
    n = s.dim
    I, J, K = s.generators
    return tuple(
        tuple(a * I[r][q] + b * J[r][q] + c * K[r][q] for q in range(n)) for r in range(n)
    )


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "INF"


INF = _Infinity()


def chart_to_sphere(z) -> AdmissiblePoint:
    """Inverse stereographic chart: 0 -> I, 1 -> J, i -> K, INF -> -I."""
    if z is INF:
        return AdmissiblePoint(-ONE, ZERO, ZERO)
    z = to_gaussian(z)
    n = z.norm()
    d = 1 + n
    return AdmissiblePoint((1 - n) / d, 2 * z.re / d, 2 * z.im / d)


def sphere_to_chart(p):
    a, b, c = (rat(x) for x in p)
    if a == -1:
        return INF
    return Gaussian(b / (1 + a), c / (1 + a))


def sample_chart_points(count: int, seed: int = 0, include_infinity: bool = True) -> list:
    """Deterministic distinct chart coordinates with small rational parts."""
    rng = random.Random(seed)
    pts = [Gaussian(0, 0), Gaussian(1, 0), Gaussian(0, 1)]
    if include_infinity:
        pts.append(INF)
    seen = {(p.re, p.im) for p in pts if p is not INF}
    while len(pts) < count:
        re = rat(rng.randint(-5, 5)) / rng.randint(1, 4)
        im = rat(rng.randint(-5, 5)) / rng.randint(1, 4)
        if (re, im) in seen:
            continue
        seen.add((re, im))
        pts.append(Gaussian(re, im))
    return pts[:count]


def dual_structure(s: HypercomplexStructure) -> HypercomplexStructure:
    """sigma*(q) = transpose of sigma(conj q): generators become -X^T."""
    return HypercomplexStructure(s.dim, *(la.mneg(la.transpose(x)) for x in s.generators))


def direct_sum(*structures: HypercomplexStructure) -> HypercomplexStructure:
    return HypercomplexStructure(
        sum(s.dim for s in structures),
        la.block_diag(*(s.I for s in structures)),
        la.block_diag(*(s.J for s in structures)),
        la.block_diag(*(s.K for s in structures)),
    )


def rotate_representative(s: HypercomplexStructure, r: la.Matrix) -> HypercomplexStructure:
    """Representative sigma o a for the rotation a with matrix ``r``.

    The new I is the admissible operator at the first column of ``r``, and so
    on; the quaternionic structure (the sphere Z) is unchanged.
    """
    if not is_rotation(r):
        raise ValueError("representative change needs a matrix in SO(3)")
    cols = la.transpose(r)
    return HypercomplexStructure(s.dim, *(combine(s, col) for col in cols))


def conjugate_structure(s: HypercomplexStructure, t: la.Matrix, t_inv: la.Matrix | None = None) -> HypercomplexStructure:
    """Structure transported along an isomorphism t: X -> t X t^-1."""
    ti = la.inverse(t) if t_inv is None else t_inv
    return HypercomplexStructure(s.dim, *(la.matmul(la.matmul(t, x), ti) for x in s.generators))


@dataclass(frozen=True)
class QuaternionicMap:
    """Linear map t with t o J = T(J) o t; ``rotation`` is the matrix of T."""

    t: la.Matrix
    rotation: la.Matrix


def is_quaternionic_map(t: la.Matrix, s: HypercomplexStructure, s2: HypercomplexStructure):
    """Rotation R with t X_a = (sum_b R_ba X'_b) t for the generators, else None.

    For t = 0 every rotation works and the identity is returned.
    """
    if len(t) != s2.dim or any(len(r) != s.dim for r in t):
        raise ValueError("map dimensions do not match the structures")
    if la.is_zero(t):
        return la.identity(3)
    flat = lambda m: [x for r in m for x in r]  # noqa: E731
    cols = [flat(la.matmul(x, t)) for x in s2.generators]
    system = tuple(zip(*cols))
    rcols = []
    for x in s.generators:
        sol = la.solve(system, flat(la.matmul(t, x)))
        if sol is None:
            return None
        rcols.append(sol)
    r = la.transpose(tuple(rcols))
    if not is_rotation(r):
        return None
    return r


def standardize(s: HypercomplexStructure) -> QuaternionicMap:
    """Hypercomplex isomorphism from ``s`` onto the standard H^k.

    Pick the first coordinate vector outside the quaternionic span built so
    far, adjoin e, Ie, Je, Ke, and repeat.
    """
    check_structure(s)
    from .subspace import contains, span, zero

    basis = []
    cur = zero(s.dim)
    idn = la.identity(s.dim)
    for e in idn:
        if len(basis) == s.dim:
            break
        if contains(cur, e):
            continue
        block = [e] + [la.matvec(x, e) for x in s.generators]
        basis.extend(block)
        cur = span(basis, s.dim)
    p = la.from_columns(basis)
    return QuaternionicMap(la.inverse(p), la.identity(3))


def _right_block_matrix(a: Quaternion, b: list[list[Quaternion]]) -> la.Matrix:
    """Real matrix of the row-vector map x -> a x b on H^k."""
    k = len(b)
    la_ = left_matrix(a)
    rows = []
    for j in range(k):
        blocks = [la.matmul(la_, right_matrix(b[i][j])) for i in range(k)]
        for r in range(4):
            rows.append(tuple(x for blk in blocks for x in blk[r]))
    return tuple(rows)


def random_invertible_quaternionic(k: int, rng: random.Random, bound: int = 1) -> list[list[Quaternion]]:
    """L U with L unit lower and U upper triangular; invertible by construction."""
    def entry():
        return Quaternion(*(rng.randint(-bound, bound) for _ in range(4)))

    lower = [[Quaternion(1) if i == j else (entry() if i > j else Quaternion()) for j in range(k)] for i in range(k)]
    upper = [[(random_quaternion(rng, bound) if i == j else (entry() if i < j else Quaternion())) for j in range(k)] for i in range(k)]
    out = []
    for i in range(k):
        row = []
        for j in range(k):
            acc = Quaternion()
            for m in range(k):
                acc = acc + lower[i][m] * upper[m][j]
            row.append(acc)
        out.append(row)
    return out


def quaternionic_matrix_map(a: Quaternion, b: list[list[Quaternion]]) -> QuaternionicMap:
    """x -> a x b on the standard H^k (x a row of quaternions)."""
    return QuaternionicMap(_right_block_matrix(a, b), rotation_of(a))


def random_automorphism(s: HypercomplexStructure, seed, *, bound: int = 1, hypercomplex: bool = False) -> QuaternionicMap:
    """Seeded element of Sp(1).GL(k, H) acting on ``s``.

    On the standard H^k this is x -> a x B with a a rational unit quaternion
    and B invertible (equivalently a x A^-1 with A = B^-1). Other structures
    are reached through :func:`standardize`. ``hypercomplex`` forces a = 1.
    """
    rng = random.Random(seed)
    a = Quaternion(1) if hypercomplex else random_unit(rng, 3)
    b = random_invertible_quaternionic(s.k, rng, bound)
    m = quaternionic_matrix_map(a, b)
    if _is_standard(s):
        return m
    std = standardize(s).t
    t = la.matmul(la.inverse(std), la.matmul(m.t, std))
    return QuaternionicMap(t, m.rotation)


def _is_standard(s: HypercomplexStructure) -> bool:
    st = standard_structure(s.k)
    return s.I == st.I and s.J == st.J and s.K == st.K


def compose(f: QuaternionicMap, g: QuaternionicMap) -> QuaternionicMap:
    """f o g."""
    return QuaternionicMap(la.matmul(f.t, g.t), la.matmul(f.rotation, g.rotation))
