"""Subspaces of Q^n (or Q(i)^n) in canonical reduced row-echelon form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import linalg as la
from .exact import ONE, ZERO


class AmbientMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Subspace:
    """Row span of ``basis`` inside an ``ambient``-dimensional space.

    Build through :func:`span`; the basis is then the RREF of the spanning
    set, so two equal subspaces have identical fields.
    """

    ambient: int
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"


def span(vectors: Iterable[Sequence], ambient: int) -> Subspace:
    rows = [tuple(v) for v in vectors]
    for r in rows:
        if len(r) != ambient:
            raise AmbientMismatch(f"vector of length {len(r)} in ambient {ambient}")
    _, basis = la.rref(tuple(rows), ambient)
    return Subspace(ambient, basis)


def zero(n: int) -> Subspace:
    return Subspace(n, ())


def full(n: int) -> Subspace:
    return Subspace(n, la.identity(n))


def coordinate(n: int, indices: Iterable[int]) -> Subspace:
    idn = la.identity(n)
    return span([idn[i] for i in sorted(set(indices))], n)


def _same(a: Subspace, b: Subspace) -> None:
    if a.ambient != b.ambient:
        raise AmbientMismatch(f"ambient dimensions {a.ambient} and {b.ambient} differ")


def add(a: Subspace, b: Subspace) -> Subspace:
    _same(a, b)
    return span(a.basis + b.basis, a.ambient)


def annihilator(a: Subspace) -> Subspace:
    """Functionals vanishing on ``a``, written in the dual coordinate basis."""
    return span(la.nullspace(a.basis, a.ambient), a.ambient)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _same(a, b)
    if not a.dim or not b.dim:
        return zero(a.ambient)
    return annihilator(add(annihilator(a), annihilator(b)))


def quotient_map(a: Subspace) -> la.Matrix:
    """Surjection Q^n -> Q^(n - dim a) whose kernel is exactly ``a``.

    Rows are indexed by the non-pivot coordinates of the canonical basis.
    """
    return tuple(la.nullspace(a.basis, a.ambient))


def contains(a: Subspace, v: Sequence) -> bool:
    if len(v) != a.ambient:
        raise AmbientMismatch("vector length does not match ambient")
    return not any(la.matvec(quotient_map(a), v))


def is_subspace_of(a: Subspace, b: Subspace) -> bool:
    _same(a, b)
    q = quotient_map(b)
    return la.is_zero(la.matmul(a.basis, la.transpose(q, b.ambient), len(q))) if a.basis and q else True


def image(t: la.Matrix, a: Subspace, target_dim: int | None = None) -> Subspace:
    """``t(a)`` for a linear map given as a matrix acting on column vectors."""
    n = len(t) if target_dim is None else target_dim
    if not a.basis:
        return zero(n)
    return span(la.transpose(la.matmul(t, la.transpose(a.basis))), n)


def preimage(t: la.Matrix, b: Subspace, source_dim: int) -> Subspace:
    q = quotient_map(b)
    if not q:
        return full(source_dim)
    return span(la.nullspace(la.matmul(q, t, source_dim), source_dim), source_dim)


def is_invariant(a: Subspace, t: la.Matrix) -> bool:
    return is_subspace_of(image(t, a, a.ambient), a)


def complement_basis(a: Subspace) -> list[tuple]:
    """Unit vectors on the non-pivot coordinates; together with ``a`` a basis."""
    _, piv = la.rref_pivots(a.basis, a.ambient)
    pivset = set(piv)
    return [
        tuple(ONE if j == f else ZERO for j in range(a.ambient))
        for f in range(a.ambient)
        if f not in pivset
    ]
