"""Model (co-)CR pairs, dual pairs, direct sums and classification."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .exact import ONE, ZERO
from .pencil import Pair, SheafReport, analyze_pair
from .structures import direct_sum as structure_sum
from .structures import dual_structure, standard_structure
from .subspace import annihilator, span

CO_TAGS = ("CoV", "CoVp")
CR_TAGS = ("CrV", "CrVp")
DUAL_TAG = {"CoV": "CrV", "CoVp": "CrVp", "CrV": "CoV", "CrVp": "CoVp"}


class NotClassifiable(ValueError):
    """The pair is neither CR nor co-CR."""


class ClassificationInconsistency(RuntimeError):
    """Degrees violate the co-CR degree laws; the input broke a precondition."""


@dataclass(frozen=True, order=True)
class FactorSpec:
    tag: str
    k: int

    def __post_init__(self):
        if self.tag not in DUAL_TAG:
            raise ValueError(f"unknown factor tag {self.tag!r}")
        lo = 1 if self.tag in ("CoV", "CrV") else 0
        if self.k < lo:
            raise ValueError(f"{self.tag} needs k >= {lo}")

    @property
    def quaternionic_dim(self) -> int:
        return self.k if self.tag in ("CoV", "CrV") else 2 * self.k + 1

    def dual(self) -> "FactorSpec":
        return FactorSpec(DUAL_TAG[self.tag], self.k)

    def to_json(self) -> dict:
        return {"tag": self.tag, "k": self.k}

    def __str__(self):
        return f"{self.tag}:{self.k}"


def parse_factor(s: str) -> FactorSpec:
    tag, _, k = s.partition(":")
    return FactorSpec(tag.strip(), int(k))


# z = x + y i inside H, written in the real basis (1, i, j, k) of one slot
def _slot_vectors(kdim: int, last_index: int, constraint: str | None):
    """Real basis of {(z_1, conj z_1 + z_2 j, z_3 - conj z_2 j, ...)}.

    Slot 1 holds z_1; slot 2m holds conj(z_{2m-1}) + z_{2m} j; slot 2m+1
    holds z_{2m+1} - conj(z_{2m}) j. Parameters z_1..z_last are complex,
    z_m = 0 beyond ``last_index``; ``constraint`` ("real" or "imag") cuts
    z_last to a real line.
    """
    n = 4 * kdim
    vecs = []
    for m in range(1, last_index + 1):
        parts = ("re", "im")
        if m == last_index and constraint == "real":
            parts = ("re",)
        elif m == last_index and constraint == "imag":
            parts = ("im",)
        for part in parts:
            v = [ZERO] * n
            slot = m - 1
            if m % 2 == 1:
                # odd slot: leading complex coordinate z_m
                if part == "re":
                    v[4 * slot] = ONE
                else:
                    v[4 * slot + 1] = ONE
            else:
                # even slot 2p: z_m j with z = x + y i gives x j + y k
                if part == "re":
                    v[4 * slot + 2] = ONE
                else:
                    v[4 * slot + 3] = ONE
            if m < kdim:
                nxt = m
                if m % 2 == 1:
                    # slot m+1 = 2p carries conj(z_m) as its complex part
                    if part == "re":
                        v[4 * nxt] = ONE
                    else:
                        v[4 * nxt + 1] = -ONE
                else:
                    # slot m+1 = 2p+1 carries -conj(z_m) j = -x j + y k
                    if part == "re":
                        v[4 * nxt + 2] = -ONE
                    else:
                        v[4 * nxt + 3] = ONE
            vecs.append(tuple(v))
    return vecs


def model_V(k: int) -> Pair:
    """(V_k, H^k): z_1..z_k complex with conj(z_k) = (-1)^k z_k; dim 2k - 1."""
    if k < 1:
        raise ValueError("model_V needs k >= 1")
    vecs = _slot_vectors(k, k, "real" if k % 2 == 0 else "imag")
    u = span(vecs, 4 * k)
    if u.dim != 2 * k - 1:
        raise AssertionError(f"V_{k} has dimension {u.dim}")
    return Pair(standard_structure(k), u)


def model_Vp(k: int) -> Pair:
    """(V'_k, H^(2k+1)): z_1..z_2k complex, the last slot is -conj(z_2k) j."""
    if k < 0:
        raise ValueError("model_Vp needs k >= 0")
    kdim = 2 * k + 1
    vecs = _slot_vectors(kdim, 2 * k, None) if k else []
    u = span(vecs, 4 * kdim)
    if u.dim != 4 * k:
        raise AssertionError(f"V'_{k} has dimension {u.dim}")
    return Pair(standard_structure(kdim), u)


def dual_pair(p: Pair) -> Pair:
    """(Ann U, E*) with the dual structure."""
    return Pair(dual_structure(p.e), annihilator(p.u))


def direct_sum(*pairs: Pair) -> Pair:
    e = structure_sum(*(p.e for p in pairs))
    rows = []
    off = 0
    for p in pairs:
        for r in p.u.basis:
            rows.append((ZERO,) * off + tuple(r) + (ZERO,) * (e.dim - off - p.e.dim))
        off += p.e.dim
    return Pair(e, span(rows, e.dim))


def model(f: FactorSpec) -> Pair:
    if f.tag == "CoV":
        return model_V(f.k)
    if f.tag == "CoVp":
        return model_Vp(f.k)
    if f.tag == "CrV":
        return dual_pair(model_V(f.k))
    return dual_pair(model_Vp(f.k))


def build(factors) -> Pair:
    """Direct sum of the models of ``factors`` in the given order."""
    return direct_sum(*(model(f) for f in factors))


def decomposition_from_report(r: SheafReport) -> list[FactorSpec]:
    if r.is_co_cr:
        degrees, tags = list(r.plus.degrees), CO_TAGS
    elif r.is_cr:
        degrees, tags = [-d for d in r.minus.degrees], CR_TAGS
    else:
        raise NotClassifiable("pair is neither CR nor co-CR")
    out = []
    odd = Counter()
    for d in degrees:
        if d < 1:
            raise ClassificationInconsistency(f"degree {d} cannot occur in a (co-)CR bundle")
        if d % 2 == 0:
            out.append(FactorSpec(tags[0], d // 2))
        else:
            odd[d] += 1
    for d, c in sorted(odd.items()):
        if c % 2:
            raise ClassificationInconsistency(f"odd degree {d} occurs {c} times")
        out.extend([FactorSpec(tags[1], (d - 1) // 2)] * (c // 2))
    return sorted(out)


def classify(p: Pair) -> list[FactorSpec]:
    """Model factors of a (co-)CR pair, as a sorted multiset."""
    return decomposition_from_report(analyze_pair(p))


def degree_law_violations(r: SheafReport) -> list[str]:
    """Co-CR degree laws on the + part; empty when they hold."""
    out = []
    if r.plus is None:
        return ["cokernel has torsion"]
    counts = Counter(r.plus.degrees)
    for d, c in counts.items():
        if d < 1:
            out.append(f"degree {d} < 1")
        if d % 2 and c % 2:
            out.append(f"odd degree {d} with multiplicity {c}")
    return out
