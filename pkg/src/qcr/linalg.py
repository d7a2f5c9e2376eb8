"""Dense exact matrices as tuples of row tuples.

Entries are mpq or :class:`~qcr.exact.Gaussian`; a zero-row matrix carries no
column count, so callers that can produce one pass the width explicitly.
Inputs are never mutated.
"""
from __future__ import annotations

from typing import Sequence

from .exact import ONE, ZERO, Gaussian, Poly, UnsupportedRing, rat

Matrix = tuple  # tuple[tuple[scalar, ...], ...]


def as_matrix(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)


def ratmat(rows) -> Matrix:
    return tuple(tuple(rat(x) for x in r) for r in rows)


def shape(m: Matrix, ncols: int | None = None) -> tuple[int, int]:
    if m:
        return len(m), len(m[0])
    return 0, (ncols or 0)


def zeros(r: int, c: int) -> Matrix:
    return tuple((ZERO,) * c for _ in range(r))


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def transpose(m: Matrix, ncols: int | None = None) -> Matrix:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def matmul(a: Matrix, b: Matrix, ncols: int | None = None) -> Matrix:
    """Product skipping zero entries of ``a``; ``ncols`` is b's width if b is empty."""
    if not b:
        return zeros(len(a), ncols or 0)
    w = len(b[0])
    out = []
    for row in a:
        acc = [ZERO] * w
        for k, x in enumerate(row):
            if not x:
                continue
            bk = b[k]
            for j in range(w):
                y = bk[j]
                if y:
                    acc[j] = acc[j] + x * y
        out.append(tuple(acc))
    return tuple(out)


def matvec(a: Matrix, v: Sequence) -> tuple:
    out = []
    for row in a:
        acc = ZERO
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return tuple(out)


def madd(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def msub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mscale(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in r) for r in a)


def mneg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in r) for r in a)


def is_zero(a: Matrix) -> bool:
    return all(not x for r in a for x in r)


def mat_equal(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(
        len(r) == len(s) and all(x == y for x, y in zip(r, s)) for r, s in zip(a, b)
    )


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = []
    off = 0
    for b in blocks:
        for r in b:
            out.append((ZERO,) * off + tuple(r) + (ZERO,) * (n - off - len(r)))
        off += len(b)
    return tuple(out)


def kron(a: Matrix, b: Matrix) -> Matrix:
    out = []
    for ra in a:
        for rb in b:
            out.append(tuple(x * y for x in ra for y in rb))
    return tuple(out)


def hstack(*ms: Matrix) -> Matrix:
    return tuple(tuple(x for m in ms for x in m[i]) for i in range(len(ms[0])))


def vstack(*ms: Matrix) -> Matrix:
    return tuple(r for m in ms for r in m)


def columns(m: Matrix) -> list[tuple]:
    return list(transpose(m))


def from_columns(cols: Sequence[Sequence], nrows: int | None = None) -> Matrix:
    if not cols:
        return zeros(nrows or 0, 0)
    return tuple(zip(*cols))


def _check_field(rows) -> None:
    for r in rows:
        for x in r:
            if isinstance(x, Poly):
                raise UnsupportedRing("row reduction needs field entries, got polynomials")
            return


def _rref_rows(rows, ncols: int):
    """Gauss-Jordan on a list of mutable rows; returns (rows, pivots)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        p = None
        for i in range(r, nrows):
            if m[i][c]:
                p = i
                break
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        prow = m[r]
        piv = prow[c]
        if piv != 1:
            inv = ONE / piv if not isinstance(piv, Gaussian) else Gaussian._make(ONE, ZERO) / piv
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] = prow[j] * inv
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            f = row[c]
            if f:
                for j in nz:
                    row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rref(m: Matrix, ncols: int | None = None) -> tuple[int, Matrix]:
    """Reduced row-echelon basis of the row space: ``(rank, basis)``."""
    _check_field(m)
    _, w = shape(m, ncols)
    rows, piv = _rref_rows(m, w)
    return len(piv), tuple(tuple(r) for r in rows)


def rref_pivots(m: Matrix, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    _check_field(m)
    _, w = shape(m, ncols)
    rows, piv = _rref_rows(m, w)
    return tuple(tuple(r) for r in rows), piv


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    # eliminate along the shorter side
    if len(m[0]) < len(m):
        m = transpose(m)
    return rref(m)[0]


def nullspace(m: Matrix, ncols: int | None = None) -> list[tuple]:
    """Basis of {v : m v = 0}, one vector per free column."""
    _, w = shape(m, ncols)
    rows, piv = rref_pivots(m, w)
    pivset = set(piv)
    zero = ZERO
    basis = []
    for f in range(w):
        if f in pivset:
            continue
        v = [zero] * w
        v[f] = ONE
        for row, p in zip(rows, piv):
            if row[f]:
                v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def left_nullspace(m: Matrix, ncols: int | None = None) -> list[tuple]:
    """Basis of {w : w m = 0}."""
    return nullspace(transpose(m, ncols), len(m))


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [tuple(r) + identity(n)[i] for i, r in enumerate(m)]
    rows, piv = _rref_rows(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(r[n:]) for r in rows[:n])


def solve(a: Matrix, b: Sequence) -> tuple | None:
    """One solution x of a x = b, or None when inconsistent."""
    _, w = shape(a)
    aug = [tuple(r) + (y,) for r, y in zip(a, b)]
    rows, piv = _rref_rows(aug, w + 1)
    if piv and piv[-1] == w:
        return None
    x = [ZERO] * w
    for row, p in zip(rows, piv):
        x[p] = row[w]
    return tuple(x)


def det(m: Matrix):
    n = len(m)
    a = [list(r) for r in m]
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        piv = a[c][c]
        d = d * piv
        for i in range(c + 1, n):
            f = a[i][c] / piv
            if f:
                for j in range(c, n):
                    a[i][j] = a[i][j] - f * a[c][j]
    return d


def complexify(m: Matrix) -> Matrix:
    return tuple(tuple(x if isinstance(x, Gaussian) else Gaussian._make(x, ZERO) for x in r) for r in m)


def real_part(m: Matrix) -> Matrix:
    return tuple(tuple(x.re if isinstance(x, Gaussian) else x for x in r) for r in m)


def imag_part(m: Matrix) -> Matrix:
    return tuple(tuple(x.im if isinstance(x, Gaussian) else ZERO for x in r) for r in m)
