"""The sheaf of a pair (U, E) as a linear matrix pencil over the twistor sphere.

On the chart z of Z = CP^1 the antiholomorphic bundle E^{0,1} has the frame
M(z) = M0 + z M1, and the tautological map u: E^{0,1} -> (E/U)^C becomes the
pencil N(z) = Q M(z) with Q the quotient map by U. E^{0,1} is 2k O(-1), so

* ker u splits as the sum of O(-1 - e) over the right minimal indices e of N,
* coker u (when locally free) splits as the sum of O(h) over the left
  minimal indices h of N,
* whatever is left is the regular part of N; it is nonzero exactly when
  rank N(z) drops somewhere on CP^1, i.e. when coker u has torsion.

Minimal indices come from Wong subspace sequences at a point of full rank,
or from an exact staircase reduction when no such point exists. The block
Toeplitz count of polynomial syzygies is kept as an independent route.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import linalg as la
from . import wong
from .exact import ONE, ZERO, Gaussian, Poly, format_poly, to_gaussian
from .smith import smith_normal_form
from .structures import (
    INF,
    HypercomplexStructure,
    admissible_operator,
    chart_to_sphere,
    check_structure,
    sample_chart_points,
)
from .subspace import Subspace, quotient_map


class TorsionDetected(ValueError):
    """coker u is not locally free; ``factors`` lists its elementary divisors."""

    def __init__(self, factors):
        self.factors = list(factors)
        super().__init__("cokernel has torsion: " + ", ".join(self.factors))


class SplittingError(RuntimeError):
    """A syzygy dimension sequence matches no multiset of degrees (a bug)."""


class CrossOracleMismatch(RuntimeError):
    """The pencil and the pointwise definition disagree at a sphere point."""


@dataclass(frozen=True)
class Pair:
    e: HypercomplexStructure
    u: Subspace

    def __post_init__(self):
        if self.u.ambient != self.e.dim:
            raise ValueError(f"subspace ambient {self.u.ambient} != structure dim {self.e.dim}")

    @property
    def k(self) -> int:
        return self.e.k


@dataclass(frozen=True)
class AntiholoFrame:
    m0: la.Matrix
    m1: la.Matrix

    def at(self, z) -> la.Matrix:
        if z is INF:
            return self.m1
        z = to_gaussian(z)
        return tuple(tuple(a + z * b for a, b in zip(r0, r1)) for r0, r1 in zip(self.m0, self.m1))


@dataclass(frozen=True)
class SheafPencil:
    """N(z) = n0 + z n1, an m x n matrix pencil over Q(i)."""

    m: int
    n: int
    n0: la.Matrix
    n1: la.Matrix

    def at(self, z) -> la.Matrix:
        if z is INF:
            return self.n1
        z = to_gaussian(z)
        return tuple(tuple(a + z * b for a, b in zip(r0, r1)) for r0, r1 in zip(self.n0, self.n1))

    def transpose(self) -> "SheafPencil":
        return SheafPencil(self.n, self.m, la.transpose(self.n0, self.n), la.transpose(self.n1, self.n))

    def poly_matrix(self) -> list[list[Poly]]:
        return [[Poly((a, b)) for a, b in zip(r0, r1)] for r0, r1 in zip(self.n0, self.n1)]

    def at_infinity_chart(self) -> "SheafPencil":
        """The same pencil in the coordinate w = 1/z: n1 + w n0."""
        return SheafPencil(self.m, self.n, self.n1, self.n0)


@dataclass(frozen=True)
class SplittingType:
    degrees: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted(int(d) for d in self.degrees)))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def total(self) -> int:
        return sum(self.degrees)

    def negated(self) -> "SplittingType":
        return SplittingType(tuple(-d for d in self.degrees))

    def __add__(self, other: "SplittingType") -> "SplittingType":
        return SplittingType(self.degrees + other.degrees)

    def __iter__(self):
        return iter(self.degrees)

    def __len__(self):
        return len(self.degrees)


@dataclass(frozen=True)
class SheafReport:
    is_cr: bool
    is_co_cr: bool
    minus: SplittingType
    plus: SplittingType | None
    torsion: tuple = field(default=())

    @property
    def has_torsion(self) -> bool:
        return self.plus is None

    def to_json(self) -> dict:
        plus = {"torsion": list(self.torsion)} if self.plus is None else list(self.plus.degrees)
        return {"cr": self.is_cr, "cocr": self.is_co_cr, "minus": list(self.minus.degrees), "plus": plus}

    @classmethod
    def from_json(cls, d: dict) -> "SheafReport":
        plus = d["plus"]
        if isinstance(plus, dict):
            return cls(bool(d["cr"]), bool(d["cocr"]), SplittingType(d["minus"]), None, tuple(plus["torsion"]))
        return cls(bool(d["cr"]), bool(d["cocr"]), SplittingType(d["minus"]), SplittingType(plus))


# ---------------------------------------------------------------- frame


@lru_cache(maxsize=32)
def antiholomorphic_frame(s: HypercomplexStructure) -> AntiholoFrame:
    """M0 spans ker(I + i); M1 = (K + iJ) M0 / 2 spans the +i eigenspace of I."""
    check_structure(s)
    n = s.dim
    shifted = tuple(
        tuple(Gaussian._make(s.I[r][c], ONE if r == c else ZERO) for c in range(n)) for r in range(n)
    )
    m0 = la.from_columns(la.nullspace(shifted, n), n)
    half = ONE / 2
    kij = tuple(
        tuple(Gaussian._make(s.K[r][c] * half, s.J[r][c] * half) for c in range(n)) for r in range(n)
    )
    m1 = la.matmul(kij, m0)
    return AntiholoFrame(m0, m1)


def sheaf_pencil(pair: Pair) -> SheafPencil:
    fr = antiholomorphic_frame(pair.e)
    q = quotient_map(pair.u)
    n = 2 * pair.k
    if not q:
        return SheafPencil(0, n, (), ())
    return SheafPencil(len(q), n, la.matmul(q, fr.m0), la.matmul(q, fr.m1))


# ----------------------------------------------------- minimal indices


def _select_columns(m: la.Matrix, cols: list[int]) -> la.Matrix:
    return tuple(tuple(r[c] for c in cols) for r in m)


def right_minimal_indices(p: SheafPencil) -> list[int]:
    """Column minimal indices of n0 + z n1 by the staircase reduction.

    Each step compresses the kernel of the z-coefficient (n_i columns), then
    the rows hit by the constant coefficient on that kernel (rho_i rows), and
    deflates to the remaining block. Step i contributes n_i - rho_i indices
    equal to i; the sequence stops once the z-coefficient is injective.
    """
    a, b, m, n = p.n0, p.n1, p.m, p.n
    out: list[int] = []
    step = 0
    while n:
        if m:
            rows, piv = la.rref_pivots(b, n)
        else:
            rows, piv = (), []
        pivset = set(piv)
        ker = []
        for f in range(n):
            if f in pivset:
                continue
            v = [ZERO] * n
            v[f] = ONE
            for row, pc in zip(rows, piv):
                if row[f]:
                    v[pc] = -row[f]
            ker.append(v)
        n1 = len(ker)
        if not n1:
            break
        if m:
            a1 = la.matmul(a, la.from_columns(ker), n1)
            left = la.left_nullspace(a1, n1)
            rho = m - len(left)
        else:
            left, rho = [], 0
        out.extend([step] * (n1 - rho))
        n = len(piv)
        if left:
            a = la.matmul(tuple(left), _select_columns(a, piv), n)
            b = la.matmul(tuple(left), _select_columns(b, piv), n)
        else:
            a = b = ()
        m = len(a)
        step += 1
    return out


def left_minimal_indices(p: SheafPencil) -> list[int]:
    return right_minimal_indices(p.transpose())


@dataclass(frozen=True)
class KroneckerProfile:
    right: tuple
    left: tuple
    regular_degree: int


def _indices_at_full_rank_point(p: SheafPencil, tries: int = 4):
    """(right, left) indices by Wong sequences, or None if no point helps.

    At a point z0 where N(z0) is onto there is no left index and no regular
    part at z0, so the Wong sequence of N(z) = N(z0) + (z - z0) N1 gives the
    right indices; symmetrically for N(z0) injective and the transpose.
    """
    m, n = p.m, p.n
    for z in sample_chart_points(tries, seed=11, include_infinity=False):
        a = p.at(z)
        r = wong.complex_rank(a, m, n)
        if r != n and r != m:
            continue
        eps: list[int] = []
        eta: list[int] = []
        if r == m and r != n:
            eps = wong.indices_from_wong(wong.wong_dimensions(a, p.n1, m, n))
        if r == n and r != m:
            at, bt = la.transpose(a, n), la.transpose(p.n1, n)
            eta = wong.indices_from_wong(wong.wong_dimensions(at, bt, n, m))
        return eps, eta
    return None


def kronecker_profile(p: SheafPencil, method: str = "auto") -> KroneckerProfile:
    """Minimal indices and regular degree of N.

    ``auto`` uses Wong sequences at a point of full rank when one turns up
    and the staircase otherwise; ``staircase`` forces the staircase.
    """
    found = None
    if method == "auto" and p.m and p.n:
        found = _indices_at_full_rank_point(p)
    if found is None:
        eps = right_minimal_indices(p)
        eta = left_minimal_indices(p)
    else:
        eps, eta = found
    reg = p.n - sum(e + 1 for e in eps) - sum(eta)
    if reg < 0 or p.m - sum(eps) - sum(h + 1 for h in eta) != reg:
        raise SplittingError(f"inconsistent Kronecker data {eps}, {eta} for {p.m}x{p.n}")
    return KroneckerProfile(tuple(sorted(eps)), tuple(sorted(eta)), reg)


# ------------------------------------------- syzygy dimension counting


def generic_rank(p: SheafPencil) -> int:
    """Rank over Q(i)(z): the maximum over min(m, n) + 1 distinct points."""
    pts = sample_chart_points(min(p.m, p.n) + 1, seed=7, include_infinity=False)
    return max((wong.complex_rank(p.at(z), p.m, p.n) for z in pts), default=0)


def _toeplitz_kernel_dim(p: SheafPencil, d: int) -> int:
    m, n = p.m, p.n
    if m == 0:
        return n * d
    rows = []
    zero_row = (ZERO,) * (n * d)
    for r in range(d + 1):
        for i in range(m):
            row = list(zero_row)
            if r < d:
                row[r * n:(r + 1) * n] = p.n0[i]
            if r >= 1:
                row[(r - 1) * n:r * n] = p.n1[i]
            rows.append(tuple(row))
    return n * d - wong.complex_rank(tuple(rows), m * (d + 1), n * d)


def syzygy_dimensions(p: SheafPencil, dmax: int) -> list[int]:
    """h(d) = dim{polynomial q of degree <= d - 1 : N(z) q(z) = 0}, d = 0..dmax."""
    return [0] + [_toeplitz_kernel_dim(p, d) for d in range(1, dmax + 1)]


def indices_from_dimensions(h: list[int]) -> list[int]:
    """Invert h(d) = sum_j max(0, d - e_j) for the multiset {e_j}."""
    delta = [0] + [h[d] - h[d - 1] for d in range(1, len(h))]
    out = []
    for e in range(len(delta) - 1):
        c = delta[e + 1] - delta[e]
        if c < 0:
            raise SplittingError(f"dimension sequence {h} is not a splitting sequence")
        out.extend([e] * c)
    return out


def right_indices_by_syzygies(p: SheafPencil) -> list[int]:
    """Right minimal indices from syzygy counts, stopping once h is linear."""
    corank = p.n - generic_rank(p)
    limit = min(p.m, p.n) + 2
    h = [0]
    while h[-1] - (h[-2] if len(h) > 1 else 0) != corank or len(h) == 1:
        if len(h) > limit + 1:
            raise SplittingError(f"syzygy count did not stabilise by degree {limit}: {h}")
        h.append(_toeplitz_kernel_dim(p, len(h)))
    idx = indices_from_dimensions(h)
    if len(idx) != corank:
        raise SplittingError(f"recovered {len(idx)} indices, generic corank {corank}")
    return idx


# ------------------------------------------------------------ splittings


def kernel_splitting(p: SheafPencil, method: str = "staircase") -> SplittingType:
    """Splitting type of ker u: degrees -1 - e over the right minimal indices."""
    eps = right_minimal_indices(p) if method == "staircase" else right_indices_by_syzygies(p)
    return SplittingType(tuple(-1 - e for e in eps))


def cokernel_splitting(p: SheafPencil, method: str = "staircase") -> SplittingType:
    """Splitting type of coker u; raises TorsionDetected if not locally free.

    The dual of coker u is the kernel of the transposed pencil, so the
    degrees are the left minimal indices.
    """
    if method == "staircase":
        prof = kronecker_profile(p)
        if prof.regular_degree:
            raise TorsionDetected(torsion_factors(p))
        return SplittingType(prof.left)
    eta = right_indices_by_syzygies(p.transpose())
    eps = right_indices_by_syzygies(p)
    if p.n - sum(e + 1 for e in eps) - sum(eta):
        raise TorsionDetected(torsion_factors(p))
    return SplittingType(tuple(eta))


# ------------------------------------------------- Smith-form profile


@dataclass(frozen=True)
class FiberProfile:
    """Rank drops of N(z) over CP^1 read off Smith forms in both charts."""

    generic_rank: int
    finite: tuple  # nonconstant invariant factors in z
    infinite: tuple  # orders of w = 1/z in the invariant factors at infinity

    @property
    def drops_somewhere(self) -> bool:
        return bool(self.finite or self.infinite)


def _w_order(f: Poly) -> int:
    k = 0
    while k < len(f.c) and not f.c[k]:
        k += 1
    return k


def fiber_profile(p: SheafPencil) -> FiberProfile:
    if p.m == 0 or p.n == 0:
        return FiberProfile(0, (), ())
    fin = smith_normal_form(p.poly_matrix())
    inf = smith_normal_form(p.at_infinity_chart().poly_matrix())
    return FiberProfile(
        len(fin),
        tuple(f for f in fin if f.degree > 0),
        tuple(o for o in (_w_order(f) for f in inf) if o > 0),
    )


def torsion_factors(p: SheafPencil) -> list[str]:
    prof = fiber_profile(p)
    out = [format_poly(f) for f in prof.finite]
    out += ["inf:w" if o == 1 else f"inf:w^{o}" for o in prof.infinite]
    return out


def fiberwise_injective(p: SheafPencil) -> bool:
    """Smith-form decision of injectivity of N(z) at every z in CP^1."""
    if p.n == 0:
        return True
    prof = fiber_profile(p)
    return prof.generic_rank == p.n and not prof.drops_somewhere


def fiberwise_surjective(p: SheafPencil) -> bool:
    if p.m == 0:
        return True
    prof = fiber_profile(p)
    return prof.generic_rank == p.m and not prof.drops_somewhere


# --------------------------------------------------------------- pairs


def analyze_pair(pair: Pair, samples: int = 0, seed: int = 0) -> SheafReport:
    """Flags and splitting types of the sheaf of ``pair``.

    With ``samples`` > 0 the pencil is also checked pointwise against the
    definition at that many rational sphere points.
    """
    p = sheaf_pencil(pair)
    prof = kronecker_profile(p)
    minus = SplittingType(tuple(-1 - e for e in prof.right))
    is_co_cr = not prof.right and not prof.regular_degree
    is_cr = not prof.left and not prof.regular_degree
    if prof.regular_degree:
        report = SheafReport(is_cr, is_co_cr, minus, None, tuple(torsion_factors(p)))
    else:
        report = SheafReport(is_cr, is_co_cr, minus, SplittingType(prof.left))
    _check_sums(report, pair.k)
    if samples:
        bad = sphere_mismatches(pair, sample_chart_points(samples, seed), p)
        if bad:
            raise CrossOracleMismatch(f"pencil and definition disagree at {bad}")
    return report


def _check_sums(r: SheafReport, k: int) -> None:
    if r.is_cr and r.minus.total != -2 * k:
        raise SplittingError(f"CR pair with kernel degree {r.minus.total}, expected {-2 * k}")
    if r.is_co_cr and r.plus.total != 2 * k:
        raise SplittingError(f"co-CR pair with cokernel degree {r.plus.total}, expected {2 * k}")


def pointwise_intersection_dim(pair: Pair, z) -> int:
    """dim_R (U cap J U) for the admissible J at chart point z."""
    j = admissible_operator(pair.e, chart_to_sphere(z))
    u = pair.u
    if not u.dim:
        return 0
    ju = la.transpose(la.matmul(j, la.transpose(u.basis)))
    return 2 * u.dim - wong.complex_rank(u.basis + ju, 2 * u.dim, pair.e.dim)


def sphere_mismatches(pair: Pair, points, pencil: SheafPencil | None = None) -> list:
    """Points where dim(U cap JU) != 2 (2k - rank N(z)).

    The identity holds pointwise because x -> x + iJx maps U cap JU onto
    ker N(z); a mismatch means the frame or the quotient map is wrong.
    """
    p = pencil if pencil is not None else sheaf_pencil(pair)
    bad = []
    for z in points:
        r = wong.complex_rank(p.at(z), p.m, p.n)
        if pointwise_intersection_dim(pair, z) != 2 * (p.n - r):
            bad.append(z)
    return bad


def is_co_cr_pointwise(pair: Pair, z) -> bool:
    return pointwise_intersection_dim(pair, z) == 0


def is_cr_pointwise(pair: Pair, z) -> bool:
    return 2 * pair.u.dim - pointwise_intersection_dim(pair, z) == pair.e.dim


def is_cr_pair(pair: Pair, samples: int = 25, seed: int = 0) -> bool:
    """U + JU = E for every admissible J, decided exactly on the pencil."""
    return analyze_pair(pair, samples, seed).is_cr


def is_co_cr_pair(pair: Pair, samples: int = 25, seed: int = 0) -> bool:
    """U cap JU = 0 for every admissible J, decided exactly on the pencil."""
    return analyze_pair(pair, samples, seed).is_co_cr


def transform_pair(pair: Pair, t: la.Matrix, target: HypercomplexStructure | None = None) -> Pair:
    """(t(U), E') for a quaternionic isomorphism t: E -> E'."""
    from .subspace import image

    e2 = pair.e if target is None else target
    return Pair(e2, image(t, pair.u, e2.dim))
