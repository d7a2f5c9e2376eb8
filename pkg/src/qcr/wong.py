"""Minimal indices of a pencil A + t B through its Wong sequence.

W_1 = ker A, W_(j+1) = A^-1(B W_j) has dim W_j = sum over the right minimal
indices e of min(j, e + 1), provided t = 0 is no eigenvalue of the regular
part; a point where A is onto is never one. When A is onto, fix a right
inverse A+; then A^-1(S) = ker A + A+ S, so with G = A+ B the sequence is
the Krylov chain W_(j+1) = W_j + G W_j and only the vectors new at step j
need to be pushed through G.

The basis of W_j is kept in reduced echelon form and grown a block at a
time. Entries then stay at the height of the subspace itself; eliminating
from scratch at every step, or deflating the pencil, compounds heights.

:func:`wong_dimensions` does the same over Q on realified matrices
[[Re, -Im], [Im, Re]] with FLINT, where the bignum work runs in C. The
realification is an injective ring map that doubles every dimension, so
complex dimensions are the real ones halved.
"""
from __future__ import annotations

import flint

from . import linalg as la
from .exact import ZERO, to_gaussian


class Echelon:
    """Reduced row echelon basis of a growing subspace of K^n."""

    def __init__(self, n: int):
        self.n = n
        self.rows: dict[int, list] = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v) -> list:
        v = list(v)
        for pc, row in self.rows.items():
            c = v[pc]
            if c:
                for j, x in enumerate(row):
                    if x:
                        v[j] = v[j] - c * x
        return v

    def add(self, v):
        """Insert ``v``; returns its reduced normalised form, or None if dependent."""
        v = self.reduce(v)
        pc = next((j for j, x in enumerate(v) if x), None)
        if pc is None:
            return None
        inv = 1 / v[pc]
        v = [x * inv if x else ZERO for x in v]
        for row in self.rows.values():
            c = row[pc]
            if c:
                for j, x in enumerate(v):
                    if x:
                        row[j] = row[j] - c * x
        self.rows[pc] = v
        return v


def right_inverse(a: la.Matrix, p: int, q: int):
    """(solve, kernel) for an onto p x q matrix ``a``: a solve(y) = y."""
    eye = la.identity(p)
    aug = tuple(tuple(r) + eye[i] for i, r in enumerate(a))
    rows, piv = la.rref_pivots(aug, q + p)
    if len(piv) != p or any(c >= q for c in piv):
        raise ValueError("matrix is not onto")
    t = tuple(r[q:] for r in rows)
    red = tuple(r[:q] for r in rows)

    def solve(y):
        ty = la.matvec(t, y)
        x = [ZERO] * q
        for k, c in enumerate(piv):
            x[c] = ty[k]
        return x

    return solve, la.nullspace(red, q)


def wong_dimensions_exact(a: la.Matrix, b: la.Matrix, p: int, q: int) -> list[int]:
    """0, dim W_1, dim W_2, ... up to the first repeat; ``a`` must be onto."""
    solve, ker = right_inverse(a, p, q)
    w = Echelon(q)
    new = [v for v in (w.add(k) for k in ker) if v is not None]
    dims = [0, w.dim]
    while new:
        fresh = []
        for v in new:
            x = w.add(solve(la.matvec(b, v)))
            if x is not None:
                fresh.append(x)
        new = fresh
        dims.append(w.dim)
    return dims


def _fq(x) -> flint.fmpq:
    return flint.fmpq(int(x.numerator), int(x.denominator))


def realify(m: la.Matrix, nrows: int, ncols: int) -> flint.fmpq_mat:
    out = flint.fmpq_mat(2 * nrows, 2 * ncols)
    for r, row in enumerate(m):
        for c, x in enumerate(row):
            if not x:
                continue
            g = to_gaussian(x)
            if g.re:
                v = _fq(g.re)
                out[r, c] = v
                out[r + nrows, c + ncols] = v
            if g.im:
                v = _fq(g.im)
                out[r, c + ncols] = -v
                out[r + nrows, c] = v
    return out


def _pivots(rows: list) -> list[int]:
    return [next(j for j, x in enumerate(r) if x) for r in rows]


def _selector(n: int, cols: list[int]) -> flint.fmpz_mat:
    s = flint.fmpz_mat(n, len(cols))
    for k, c in enumerate(cols):
        s[c, k] = 1
    return s


class IntEchelon:
    """:class:`Echelon` over Q stored as R / D with R an integer matrix.

    A reduced echelon basis has the pivot minor as a natural common
    denominator, so all updates are integer matrix products and the only
    gcd per step is the content of the whole matrix.
    """

    def __init__(self, n: int):
        self.n = n
        self.r = flint.fmpz_mat(0, n)
        self.d = flint.fmpz(1)
        self.piv: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.piv)

    def add_columns(self, x: flint.fmpz_mat) -> flint.fmpz_mat | None:
        """Insert the columns of ``x``; returns the new echelon rows as columns."""
        n = self.n
        if self.piv:
            xp = _selector(n, self.piv).transpose() * x
            x = x * self.d - self.r.transpose() * xp
        red, den, rank = x.transpose().rref()
        if not rank:
            return None
        new_rows = red.tolist()[:rank]
        npiv = _pivots(new_rows)
        nw = flint.fmpz_mat(new_rows)
        if self.piv:
            coef = self.r * _selector(n, npiv)
            top = self.r * den - coef * nw
            rows = top.tolist() + (nw * self.d).tolist()
            d = self.d * den
        else:
            rows, d = new_rows, den
        self.r, self.d = _lowest_terms(flint.fmpz_mat(rows), d)
        self.piv.extend(npiv)
        out = flint.fmpz_mat(rank, n)
        base = self.dim - rank
        for i in range(rank):
            for j in range(n):
                out[i, j] = self.r[base + i, j]
        return out.transpose()


def _lowest_terms(m: flint.fmpz_mat, d: flint.fmpz):
    """Divide m and d by their common content.

    Once the running gcd has shrunk, each further step is a cheap reduction
    of a big entry modulo a small number.
    """
    g = flint.fmpz(d)
    for v in m.entries():
        if v:
            g = g.gcd(v)
            if g == 1:
                return m, d
    return m / g, d // g


def _kernel_columns(a: flint.fmpz_mat) -> flint.fmpz_mat | None:
    x, nullity = a.nullspace()
    if not nullity:
        return None
    return flint.fmpz_mat([row[:nullity] for row in x.tolist()])


def wong_dimensions(a: la.Matrix, b: la.Matrix, p: int, q: int) -> list[int]:
    """Complex 0, dim W_1, dim W_2, ... up to the first repeat; ``a`` must be onto."""
    ar, br = realify(a, p, q), realify(b, p, q)
    if ar.rank() != 2 * p:
        raise ValueError("matrix is not onto")
    # A^T (A A^T)^-1 is a right inverse of the onto matrix A; scale is irrelevant
    g, _ = (ar.transpose() * (ar * ar.transpose()).solve(br)).numer_denom()
    w = IntEchelon(2 * q)
    k0 = _kernel_columns(ar.numer_denom()[0])
    new = w.add_columns(k0) if k0 is not None else None
    dims = [0, w.dim // 2]
    while new is not None:
        new = w.add_columns(g * new)
        dims.append(w.dim // 2)
    return dims


def complex_rank(m: la.Matrix, nrows: int, ncols: int) -> int:
    """Rank over Q(i), read off the realification."""
    if not nrows or not ncols:
        return 0
    return realify(m, nrows, ncols).rank() // 2


def indices_from_wong(dims: list[int]) -> list[int]:
    """Right minimal indices from dim W_j: #{e >= j - 1} = dim W_j - dim W_(j-1)."""
    at_least = [dims[j] - dims[j - 1] for j in range(1, len(dims))] + [0]
    out = []
    for e in range(len(at_least) - 1):
        out.extend([e] * (at_least[e] - at_least[e + 1]))
    return out
