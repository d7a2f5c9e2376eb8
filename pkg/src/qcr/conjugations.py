"""Quaternionifications, conjugations and the real-form and subspace correspondences.

H (x) U is written in the basis (1 (x) u_a, i (x) u_a, j (x) u_a, k (x) u_a)
grouped by a, so it is H^n with left multiplication: quaternionify(n) is
standard_structure(n) and a linear map f becomes kron(f, Id_4).

The conditions quantified over all conjugations are checked over tau_i,
tau_j, tau_k and a seeded sample of tau_q; outputs are then certified on the
pencil side.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg as la
from .exact import ONE, ZERO, sqrt_rational
from .models import dual_pair
from .pencil import Pair, analyze_pair
from .quaternion import (
    QI,
    QJ,
    QK,
    Quaternion,
    canonical_sign,
    left_matrix,
    random_imaginary_unit,
    right_matrix,
)
from .structures import (
    HypercomplexStructure,
    check_structure,
    is_quaternionic_map,
    standard_structure,
)
from .subspace import (
    Subspace,
    add,
    annihilator,
    complement_basis,
    full,
    image,
    intersect,
    is_invariant,
    preimage,
    quotient_map,
    span,
)


class ConjugationError(ValueError):
    """Input maps are not a valid pair of conjugations."""


class ConditionFailed(ValueError):
    """A sampled correspondence condition does not hold; ``condition`` names it."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(f"{condition} fails" + (f": {detail}" if detail else ""))


def quaternionify(n: int) -> HypercomplexStructure:
    if n < 1:
        raise ValueError("quaternionify needs n >= 1")
    return standard_structure(n)


def quaternionify_map(f: la.Matrix, ncols: int = 0) -> la.Matrix:
    """Id_H (x) f for f: Q^ncols -> Q^rows; ``ncols`` only matters when f has no rows."""
    if not f:
        return la.zeros(0, 4 * ncols)
    return la.kron(la.ratmat(f), la.identity(4))


def _tau_block(q: Quaternion) -> la.Matrix:
    # q' -> -q q' q
    return la.mneg(la.matmul(left_matrix(q), right_matrix(q)))


def tau(q: Quaternion, n: int) -> la.Matrix:
    """q' (x) u -> -q q' q (x) u on H (x) Q^n."""
    if q.w or q.norm2() != 1:
        raise ConjugationError(f"tau needs an imaginary unit quaternion, got {q}")
    if n < 1:
        raise ValueError("tau needs n >= 1")
    return la.kron(la.identity(n), _tau_block(q))


def is_conjugation(m: la.Matrix, s: HypercomplexStructure) -> bool:
    """Involutive quaternionic automorphism whose sphere map is a half turn."""
    n = s.dim
    if len(m) != n or any(len(r) != n for r in m):
        return False
    idn = la.identity(n)
    if la.mat_equal(m, idn) or not la.mat_equal(la.matmul(m, m), idn):
        return False
    r = is_quaternionic_map(m, s, s)
    if r is None:
        return False
    i3 = la.identity(3)
    return not la.mat_equal(r, i3) and la.mat_equal(la.matmul(r, r), i3)


def half_turn_axis(r: la.Matrix) -> Quaternion | None:
    """Unit imaginary quaternion on the axis of a half turn, if it is rational.

    A half turn is 2 v v^T - Id, so v v^T = (R + Id) / 2; the sign is
    canonicalised (first nonzero coordinate positive).
    """
    p = la.mscale(ONE / 2, la.madd(r, la.identity(3)))
    c = next(i for i in range(3) if p[i][i])
    try:
        vc = sqrt_rational(p[c][c])
    except ValueError:
        return None
    v = tuple(p[i][c] / vc for i in range(3))
    return canonical_sign(Quaternion(ZERO, *v))


@dataclass(frozen=True)
class RealForm:
    """E = H (x) U with U = fix(tau1) cap fix(tau2).

    ``iso`` maps quaternionify(dim U) onto E by q (x) u -> q0 u + q1 I u +
    q2 J u + q3 K u on the canonical basis of ``u``; ``axes`` are the fixed
    lines of the two sphere half turns (None when irrational).
    """

    u: Subspace
    iso: la.Matrix
    axes: tuple


def _fixed(m: la.Matrix, n: int) -> Subspace:
    return span(la.nullspace(la.msub(m, la.identity(n)), n), n)


def recover_real_form(s: HypercomplexStructure, t1: la.Matrix, t2: la.Matrix) -> RealForm:
    check_structure(s)
    n = s.dim
    for name, t in (("first", t1), ("second", t2)):
        if not is_conjugation(t, s):
            raise ConjugationError(f"{name} map is not a conjugation")
    if la.mat_equal(t1, t2):
        raise ConjugationError("conjugations must be distinct")
    if not la.mat_equal(la.matmul(t1, t2), la.matmul(t2, t1)):
        raise ConjugationError("conjugations do not commute")
    r1, r2 = (is_quaternionic_map(t, s, s) for t in (t1, t2))
    u = intersect(_fixed(t1, n), _fixed(t2, n))
    if 4 * u.dim != n:
        raise ConjugationError(f"common fixed space has dimension {u.dim}, expected {n // 4}")
    cols = []
    for b in u.basis:
        cols.append(b)
        cols.extend(la.matvec(x, b) for x in s.generators)
    iso = la.from_columns(cols, n)
    if la.rank(iso) != n:
        raise ConjugationError("U + IU + JU + KU is not all of E")
    return RealForm(u, iso, (half_turn_axis(r1), half_turn_axis(r2)))


def is_quaternionification_of_map(m: la.Matrix, n_out: int, n_in: int) -> bool:
    """Whether ``m`` is kron(f, Id_4) for some f."""
    f = tuple(tuple(m[4 * a][4 * b] for b in range(n_in)) for a in range(n_out))
    return la.mat_equal(m, la.kron(f, la.identity(4)))


# ----------------------------------------------------- Bonan subspaces


def _standard_taus(n: int, samples: int, seed: int) -> list[la.Matrix]:
    rng = random.Random(seed)
    qs = [QI, QJ, QK] + [random_imaginary_unit(rng) for _ in range(samples)]
    return [tau(q, n) for q in qs]


def graph_subspace(s: HypercomplexStructure) -> Subspace:
    """B = {1 (x) e - i (x) Ie - j (x) Je - k (x) Ke} inside H (x) E."""
    n = s.dim
    rows = []
    for e in la.identity(n):
        parts = [e] + [tuple(-y for y in la.matvec(x, e)) for x in s.generators]
        v = [ZERO] * (4 * n)
        for a in range(n):
            for c in range(4):
                v[4 * a + c] = parts[c][a]
        rows.append(tuple(v))
    return span(rows, 4 * n)


def cosum_subspace(b: Subspace, taus: list[la.Matrix] | None = None) -> Subspace:
    """C = tau_i(B) + tau_j(B) + tau_k(B) (or the sum over ``taus``)."""
    n = b.ambient // 4
    taus = _standard_taus(n, 0, 0) if taus is None else taus
    out = image(taus[0], b, b.ambient)
    for t in taus[1:]:
        out = add(out, image(t, b, b.ambient))
    return out


def is_quaternionic_subspace(c: Subspace) -> bool:
    s = standard_structure(c.ambient // 4)
    return all(is_invariant(c, x) for x in s.generators)


def bonan_violations(s: HypercomplexStructure, samples: int = 10, seed: int = 0) -> list[str]:
    """Sampled checks that graph and cosum are complementary and linked."""
    b = graph_subspace(s)
    c = cosum_subspace(b)
    n = 4 * s.dim
    bad = []
    if b.dim + c.dim != n or add(b, c).dim != n:
        bad.append("H (x) E = B + C is not direct")
    if not is_quaternionic_subspace(b):
        bad.append("B is not quaternionic")
    if not is_quaternionic_subspace(c):
        bad.append("C is not quaternionic")
    meet = full(n)
    for t in _standard_taus(s.dim, samples, seed):
        meet = intersect(meet, image(t, c, n))
    if meet != b:
        bad.append("B is not the intersection of the tau(C)")
    return bad


# -------------------------------------------------- CR / co-CR pipelines


def _check_quaternionic(c: Subspace) -> None:
    if c.ambient % 4:
        raise ConditionFailed("quaternionic", f"ambient {c.ambient} is not a multiple of 4")
    if not is_quaternionic_subspace(c):
        raise ConditionFailed("quaternionic", "subspace is not closed under I, J, K")


def cr_conditions(c: Subspace, samples: int = 10, seed: int = 0) -> list[str]:
    """Failed sampled conditions: C cap (meet of tau(C)) = 0, C + sigma(C) = all."""
    n = c.ambient
    taus = _standard_taus(n // 4, samples, seed)
    images = [image(t, c, n) for t in taus]
    bad = []
    meet = c
    for im in images:
        meet = intersect(meet, im)
    if meet.dim:
        bad.append("C meets the intersection of its conjugates")
    for q, im in enumerate(images):
        if add(c, im).dim != n:
            bad.append(f"C + sigma(C) is not everything for sample {q}")
            break
    return bad


def cocr_conditions(b: Subspace, samples: int = 10, seed: int = 0) -> list[str]:
    """Failed sampled conditions: B + sum of tau(B) = all, B cap sigma(B) = 0."""
    n = b.ambient
    taus = _standard_taus(n // 4, samples, seed)
    images = [image(t, b, n) for t in taus]
    bad = []
    total = b
    for im in images:
        total = add(total, im)
    if total.dim != n:
        bad.append("B and its conjugates do not span")
    for q, im in enumerate(images):
        if intersect(b, im).dim:
            bad.append(f"B meets sigma(B) for sample {q}")
            break
    return bad


def quotient_structure(c: Subspace) -> tuple[HypercomplexStructure, la.Matrix]:
    """(structure on H (x) U / C, quotient map) for a quaternionic C."""
    q = quotient_map(c)
    sect = la.from_columns(complement_basis(c), c.ambient)
    s = standard_structure(c.ambient // 4)
    m = len(q)
    gens = [la.matmul(la.matmul(q, x), sect, m) for x in s.generators]
    return check_structure(HypercomplexStructure(m, *gens)), q


def cr_from_subspace(c: Subspace, samples: int = 10, seed: int = 0) -> Pair:
    """The CR pair (iota(U), H (x) U / C), iota = inclusion as 1 (x) U then projection."""
    _check_quaternionic(c)
    bad = cr_conditions(c, samples, seed)
    if bad:
        raise ConditionFailed(bad[0])
    if c.dim == c.ambient:
        raise ConditionFailed("C + sigma(C) is not everything", "quotient is zero")
    s, q = quotient_structure(c)
    nu = c.ambient // 4
    ones = [tuple(ONE if j == 4 * a else ZERO for j in range(c.ambient)) for a in range(nu)]
    u = span([la.matvec(q, v) for v in ones], s.dim)
    if u.dim != nu:
        raise ConditionFailed("injectivity", "U does not embed in the quotient")
    return Pair(s, u)


def subspace_from_cr(p: Pair) -> Subspace:
    """(iota^H)^-1(C_E) for iota the inclusion of U, taken in its canonical basis."""
    rep = analyze_pair(p)
    if not rep.is_cr:
        raise ConditionFailed("CR", "pair is not CR")
    d = p.u.dim
    iota = la.from_columns(p.u.basis, p.e.dim)
    c_e = cosum_subspace(graph_subspace(p.e))
    return preimage(quaternionify_map(iota), c_e, 4 * d)


def cocr_from_subspace(b: Subspace, samples: int = 10, seed: int = 0) -> Pair:
    """Dual of the CR pair built on the annihilator of B."""
    _check_quaternionic(b)
    bad = cocr_conditions(b, samples, seed)
    if bad:
        raise ConditionFailed(bad[0])
    return dual_pair(cr_from_subspace(annihilator(b), samples, seed))


def subspace_from_cocr(p: Pair) -> Subspace:
    """Annihilator of the CR subspace of the dual pair."""
    rep = analyze_pair(p)
    if not rep.is_co_cr:
        raise ConditionFailed("co-CR", "pair is not co-CR")
    return annihilator(subspace_from_cr(dual_pair(p)))



def transport_defects(s: HypercomplexStructure, t1: la.Matrix, t2: la.Matrix, phi) -> list[str]:
    """Compare the real forms of (t1, t2) and of their conjugates by ``phi``.

    ``phi`` is a quaternionic automorphism of ``s`` with rotation R. The
    common fixed space must move to phi(U), and iso'^-1 phi iso must be
    kron(P, diag(1, R)) for an invertible P.
    """
    n = s.dim
    inv = la.inverse(phi.t)
    c1, c2 = (la.matmul(la.matmul(phi.t, t), inv) for t in (t1, t2))
    a, b = recover_real_form(s, t1, t2), recover_real_form(s, c1, c2)
    bad = []
    if image(phi.t, a.u, n) != b.u:
        bad.append("fixed space is not carried to its image")
    for name, rf in (("original", a), ("conjugated", b)):
        if is_quaternionic_map(rf.iso, quaternionify(n // 4), s) != la.identity(3):
            bad.append(f"{name} iso is not hypercomplex")
    m = la.matmul(la.inverse(b.iso), la.matmul(phi.t, a.iso))
    k = n // 4
    p = tuple(tuple(m[4 * i][4 * j] for j in range(k)) for i in range(k))
    block = la.block_diag(((ONE,),), phi.rotation)
    if not la.mat_equal(m, la.kron(p, block)):
        bad.append("transported iso differs by more than a change of real basis")
    return bad
