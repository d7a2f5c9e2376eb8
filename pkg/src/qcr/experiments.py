"""Seeded random round trips: build a model product, disguise it, classify it."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .models import FactorSpec, build, classify
from .pencil import Pair, transform_pair
from .quaternion import random_rotation
from .structures import random_automorphism, rotate_representative


def random_factors(rng: random.Random, max_dim: int = 24, kind: str | None = None) -> list[FactorSpec]:
    """A nonempty multiset of co-CR (or CR) factors of total H-dimension <= max_dim."""
    if kind is None:
        kind = rng.choice(("co", "cr"))
    tags = ("CoV", "CoVp") if kind == "co" else ("CrV", "CrVp")
    budget = rng.randint(1, max_dim)
    out: list[FactorSpec] = []
    while True:
        options = [(tags[0], k) for k in range(1, budget + 1)]
        options += [(tags[1], k) for k in range((budget - 1) // 2 + 1)]
        if not options:
            break
        f = FactorSpec(*rng.choice(options))
        out.append(f)
        budget -= f.quaternionic_dim
        if budget <= 0 or rng.random() < 0.3:
            break
    return sorted(out)


def disguise(pair: Pair, seed) -> Pair:
    """Move U by a random automorphism and rotate the representative."""
    rng = random.Random(seed)
    phi = random_automorphism(pair.e, rng.getrandbits(64))
    moved = transform_pair(pair, phi.t)
    return Pair(rotate_representative(moved.e, random_rotation(rng)), moved.u)


@dataclass(frozen=True)
class RoundTrip:
    seed: int
    factors: tuple
    recovered: tuple

    @property
    def ok(self) -> bool:
        return self.factors == self.recovered

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "input": [f.to_json() for f in self.factors],
            "recovered": [f.to_json() for f in self.recovered],
            "ok": self.ok,
        }


def round_trip(seed: int, max_dim: int = 24) -> RoundTrip:
    rng = random.Random(seed)
    factors = random_factors(rng, max_dim)
    pair = disguise(build(factors), rng.getrandbits(64))
    return RoundTrip(seed, tuple(factors), tuple(classify(pair)))
