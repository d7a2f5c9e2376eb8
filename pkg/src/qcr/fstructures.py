"""Linear f-quaternionic triples (E, U, V) and the automorphisms of the models.

The model on H^(l+m) has U = (Im H)^l x H^m and V = R^l. A group element
(A, q.B) acts on U by (X, Y) -> (q A(X) q^-1, q Y B^-1), where A acts on
each of the three real components of X; on all of E the same formula with
X ranging over H^l is used, so the real axes R^l are moved by A alone.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg as la
from .exact import ONE
from .pencil import Pair, is_co_cr_pair, is_cr_pair
from .quaternion import (
    Quaternion,
    canonical_sign,
    left_matrix,
    random_quaternion,
    right_matrix,
    rotation_of,
)
from .structures import (
    HypercomplexStructure,
    conjugate_structure,
    is_quaternionic_map,
    random_invertible_quaternionic,
    standard_structure,
)
from .subspace import Subspace, coordinate, image, intersect, is_subspace_of


class InvalidTriple(ValueError):
    def __init__(self, clauses):
        self.clauses = list(clauses)
        super().__init__("invalid f-quaternionic triple: " + "; ".join(self.clauses))


@dataclass(frozen=True)
class FQuatTriple:
    e: HypercomplexStructure
    u: Subspace
    v: Subspace


@dataclass(frozen=True)
class TripleReport:
    violations: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations


def structural_violations(t: FQuatTriple) -> list[str]:
    n = t.e.dim
    if t.u.ambient != n or t.v.ambient != n:
        return ["subspace ambient does not match the structure"]
    bad = []
    if t.u.dim + t.v.dim != n or intersect(t.u, t.v).dim:
        bad.append("E = U + V is not a direct sum")
    for name, x in zip("IJK", t.e.generators):
        if not is_subspace_of(image(x, t.v, n), t.u):
            bad.append(f"{name}(V) is not inside U")
    return bad


def validate_triple(t: FQuatTriple, samples: int = 25, seed: int = 0) -> TripleReport:
    """Defining clauses, then the CR side and the co-CR side."""
    bad = structural_violations(t)
    if bad:
        return TripleReport(tuple(bad))
    if not is_cr_pair(cr_side_unchecked(t), samples, seed):
        bad.append("(U, E) is not CR")
    if not is_co_cr_pair(cocr_side_unchecked(t), samples, seed):
        bad.append("(V, E) is not co-CR")
    return TripleReport(tuple(bad))


def _require_valid(t: FQuatTriple) -> None:
    bad = structural_violations(t)
    if bad:
        raise InvalidTriple(bad)


def cr_side_unchecked(t: FQuatTriple) -> Pair:
    return Pair(t.e, t.u)


def cocr_side_unchecked(t: FQuatTriple) -> Pair:
    return Pair(t.e, t.v)


def cr_side(t: FQuatTriple) -> Pair:
    _require_valid(t)
    return cr_side_unchecked(t)


def cocr_side(t: FQuatTriple) -> Pair:
    """(V, E): the co-CR pair stores the kernel V of the projection onto U."""
    _require_valid(t)
    return cocr_side_unchecked(t)


def model_f_triple(l: int, m: int) -> FQuatTriple:
    """(H^(l+m), (Im H)^l x H^m, R^l)."""
    if l < 0 or m < 0 or l + m < 1:
        raise ValueError("model_f_triple needs l, m >= 0 and l + m >= 1")
    n = 4 * (l + m)
    u = coordinate(n, [4 * a + c for a in range(l) for c in (1, 2, 3)] + list(range(4 * l, n)))
    v = coordinate(n, [4 * a for a in range(l)])
    return FQuatTriple(standard_structure(l + m), u, v)


# ------------------------------------------------------------- the group


@dataclass(frozen=True)
class GroupElement:
    """(A, q.B) in GL(l, R) x Sp(1).GL(m, H).

    ``q`` may be any nonzero rational quaternion: (q, B) and (cq, cB) act
    identically, which lets a half-angle like (1 + i)/sqrt(2) be stored as
    1 + i. The sign of q is canonicalised, flipping B along with it.
    """

    a: la.Matrix
    q: Quaternion
    b: tuple

    def __post_init__(self):
        if not self.q:
            raise ValueError("q must be nonzero")
        if canonical_sign(self.q) != self.q:
            # (q, B) and (-q, -B) are the same element
            object.__setattr__(self, "q", -self.q)
            object.__setattr__(self, "b", tuple(tuple(-x for x in r) for r in self.b))
        l = len(self.a)
        if any(len(r) != l for r in self.a) or (l and not la.det(self.a)):
            raise ValueError("A must be an invertible square matrix")
        m = len(self.b)
        if any(len(r) != m for r in self.b):
            raise ValueError("B must be square")
        if m and not la.det(_right_mult(self.b)):
            raise ValueError("B must be invertible")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.a), len(self.b))


def _right_mult(b) -> la.Matrix:
    """Real matrix of the row-vector map y -> y B on H^m."""
    m = len(b)
    rows = []
    for j in range(m):
        blocks = [right_matrix(b[i][j]) for i in range(m)]
        for r in range(4):
            rows.append(tuple(x for blk in blocks for x in blk[r]))
    return tuple(rows)


def identity_element(l: int, m: int) -> GroupElement:
    b = tuple(tuple(Quaternion(1) if i == j else Quaternion() for j in range(m)) for i in range(m))
    return GroupElement(la.identity(l), Quaternion(1), b)


def group_matrix(g: GroupElement) -> la.Matrix:
    """Real matrix on H^(l+m) of (x, y) -> (q A(x) q^-1, q y B^-1)."""
    l, m = g.shape
    conj_q = la.matmul(left_matrix(g.q), right_matrix(g.q.inverse()))
    blocks = []
    if l:
        blocks.append(la.matmul(la.kron(la.identity(l), conj_q), la.kron(g.a, la.identity(4))))
    if m:
        blocks.append(la.matmul(la.kron(la.identity(m), left_matrix(g.q)), la.inverse(_right_mult(g.b))))
    return la.block_diag(*blocks)


def group_act(g: GroupElement, point) -> tuple:
    """Act on a point (X_1..X_l, Y_1..Y_m) given as quaternions."""
    l, m = g.shape
    if len(point) != l + m:
        raise ValueError(f"point has {len(point)} coordinates, expected {l + m}")
    flat = [c for x in point for c in Quaternion(*x.coords).coords]
    out = la.matvec(group_matrix(g), flat)
    return tuple(Quaternion(*out[4 * a:4 * a + 4]) for a in range(l + m))


def group_compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """(A, q.B)(A', q'.B') = (AA', qq'.BB')."""
    if g.shape != h.shape:
        raise ValueError("group elements of different shapes")
    m = g.shape[1]
    bb = tuple(
        tuple(sum((g.b[i][k] * h.b[k][j] for k in range(m)), Quaternion()) for j in range(m))
        for i in range(m)
    )
    return GroupElement(la.matmul(g.a, h.a), g.q * h.q, bb)


def rho(g: GroupElement) -> la.Matrix:
    """SO(3) matrix of conjugation by q; the sign of q does not matter."""
    return rotation_of(g.q)


def random_group_element(l: int, m: int, seed, bound: int = 2) -> GroupElement:
    rng = random.Random(seed)
    while True:
        a = tuple(tuple(rng.randint(-bound, bound) for _ in range(l)) for _ in range(l))
        a = la.ratmat(a) if l else ()
        if not l or la.det(a):
            break
    q = random_quaternion(rng, bound)
    b = random_invertible_quaternionic(m, rng, 1) if m else []
    return GroupElement(a, q, tuple(tuple(r) for r in b))


def automorphism_violations(g: GroupElement) -> list[str]:
    """Check that g preserves U and V of the model and is quaternionic with rotation rho(g)."""
    l, m = g.shape
    t = model_f_triple(l, m)
    mat = group_matrix(g)
    n = t.e.dim
    bad = []
    if image(mat, t.u, n) != t.u:
        bad.append("U is not preserved")
    if image(mat, t.v, n) != t.v:
        bad.append("V is not preserved")
    r = is_quaternionic_map(mat, t.e, t.e)
    if r is None:
        bad.append("not a quaternionic map")
    elif not la.mat_equal(r, rho(g)):
        bad.append("rotation differs from rho")
    return bad


# ------------------------------------------------------- conformal 3d


class FrameError(ValueError):
    pass


def conformal_3d(frame, gram=None) -> FQuatTriple:
    """Triple on E = R + R^3 from a positive conformal frame (f1, f2, f3).

    The frame vectors must be pairwise orthogonal and of equal length for
    ``gram`` (default the dot product), and positively oriented. H is
    identified with E by 1 -> (1, 0) and i, j, k -> (0, f_a); then U = R^3
    and V = R.
    """
    f = la.ratmat(frame)
    if len(f) != 3 or any(len(r) != 3 for r in f):
        raise FrameError("frame must be three vectors in R^3")
    g = la.identity(3) if gram is None else la.ratmat(gram)
    if not la.mat_equal(g, la.transpose(g)):
        raise FrameError("inner product must be symmetric")
    prod = la.matmul(la.matmul(f, g), la.transpose(f))
    lam = prod[0][0]
    if lam <= 0 or not la.mat_equal(prod, la.mscale(lam, la.identity(3))):
        raise FrameError("frame is not orthonormal up to a common scale")
    if la.det(f) <= 0:
        raise FrameError("frame is not positively oriented")
    p = la.block_diag(((ONE,),), la.transpose(f))
    e = conjugate_structure(standard_structure(1), p)
    u = coordinate(4, [1, 2, 3])
    v = coordinate(4, [0])
    return FQuatTriple(e, u, v)

