"""Smith normal form of polynomial matrices over Q[z] or Q(i)[z]."""
from __future__ import annotations

from .exact import Poly


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def smith_normal_form(m) -> list[Poly]:
    """Nonzero invariant factors d_1 | d_2 | ... | d_r, each monic.

    Classical elementary-operation reduction: pick a minimal-degree pivot,
    clear its row and column by division with remainder, and fold any
    entry the pivot does not divide back into the pivot row.
    """
    a = [[_as_poly(x) for x in row] for row in m]
    nr = len(a)
    nc = len(a[0]) if a else 0
    factors = []
    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    e = a[i][j]
                    if e and (best is None or e.degree < best[0]):
                        best = (e.degree, i, j)
                        if best[0] == 0:
                            break
                if best is not None and best[0] == 0:
                    break
            if best is None:
                return factors
            _, pi, pj = best
            a[t], a[pi] = a[pi], a[t]
            if pj != t:
                for row in a:
                    row[t], row[pj] = row[pj], row[t]
            piv = a[t][t]
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    q, r = divmod(a[i][t], piv)
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if r:
                        clean = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    q, r = divmod(a[t][j], piv)
                    for row in a:
                        if row[t]:
                            row[j] = row[j] - q * row[t]
                    if r:
                        clean = False
            if not clean:
                continue
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] and (a[i][j] % piv):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        factors.append(a[t][t].monic())
    return factors

