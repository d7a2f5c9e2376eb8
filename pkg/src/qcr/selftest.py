"""Desk-scale invariant suites for every module, driven by one seed.

Each check walks its sampled cases from small to large and stops at the
first failure, so the reported input is the smallest one that fails.
``mutate`` corrupts a builtin table, as a negative control for the harness.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg as la
from .conjugations import (
    bonan_violations,
    cocr_from_subspace,
    cr_from_subspace,
    is_conjugation,
    quaternionify,
    subspace_from_cocr,
    subspace_from_cr,
    tau,
    transport_defects,
)
from .exact import Gaussian, Poly, rat
from .experiments import disguise, round_trip
from .fstructures import (
    automorphism_violations,
    conformal_3d,
    group_compose,
    group_matrix,
    model_f_triple,
    random_group_element,
    rho,
    validate_triple,
)
from .models import FactorSpec, build, classify, dual_pair, model_V, model_Vp
from .pencil import (
    analyze_pair,
    antiholomorphic_frame,
    kronecker_profile,
    left_minimal_indices,
    right_indices_by_syzygies,
    right_minimal_indices,
    sheaf_pencil,
    sphere_mismatches,
    transform_pair,
)
from .quaternion import QI, QJ, QK, Q1, Quaternion, random_imaginary_unit, random_rotation
from .serialize import (
    pair_from_json,
    pair_to_json,
    report_from_json,
    report_to_json,
    structure_from_json,
    structure_to_json,
)
from .smith import smith_normal_form
from .structures import (
    admissible_operator,
    chart_to_sphere,
    dual_structure,
    is_quaternionic_map,
    random_automorphism,
    rotate_representative,
    sample_chart_points,
    standard_structure,
    standardize,
    structure_violations,
)
from .subspace import add, intersect, span

# products of basis units: (a, b) -> (sign, unit)
UNIT_TABLE = {
    ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
    ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
    ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
}
_UNITS = {"1": Q1, "i": QI, "j": QJ, "k": QK}
MUTATIONS = ("quaternion-table", "model-degree")


@dataclass
class Failure:
    module: str
    invariant: str
    reproducer: str


@dataclass
class Summary:
    seed: int
    passed: list = field(default_factory=list)
    failed: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "passed": len(self.passed),
            "failed": len(self.failed),
            "failures": [f.__dict__ for f in self.failed],
        }


def _first(cases, bad):
    """The first case (cases come smallest first) on which ``bad`` is truthy."""
    for c in cases:
        if bad(c):
            return c
    return None


def _rand_rat(rng, b=5):
    return rat(rng.randint(-b, b)) / rng.randint(1, b)


def _rand_matrix(rng, r, c, b=3):
    return tuple(tuple(rat(rng.randint(-b, b)) for _ in range(c)) for _ in range(r))


# ------------------------------------------------------------ suites


def _exact_checks(rng, table):
    def gaussian_field():
        cases = [(Gaussian(_rand_rat(rng), _rand_rat(rng)), Gaussian(_rand_rat(rng), _rand_rat(rng))) for _ in range(30)]

        def bad(c):
            a, b = c
            if a * b != b * a or a.conjugate().conjugate() != a or (a * b).conjugate() != a.conjugate() * b.conjugate():
                return True
            return bool(a) and a * (1 / a) != Gaussian(1, 0)

        return _first(cases, bad)

    def unit_table():
        for (x, y), (sign, z) in sorted(table.items()):
            if _UNITS[x] * _UNITS[y] != _UNITS[z] * sign:
                return f"{x}*{y}"
        return None

    def associativity():
        qs = [Quaternion(*(rng.randint(-3, 3) for _ in range(4))) for _ in range(60)]
        cases = list(zip(qs[:20], qs[20:40], qs[40:]))
        return _first(cases, lambda c: (c[0] * c[1]) * c[2] != c[0] * (c[1] * c[2])
                      or (c[0] * c[1]).norm2() != c[0].norm2() * c[1].norm2())

    def rref_idempotent():
        cases = [_rand_matrix(rng, r, c) for r in range(1, 5) for c in range(1, 5)]
        return _first(cases, lambda m: la.rref(la.rref(m)[1], len(m[0]))[1] != la.rref(m)[1])

    def rank_of_product():
        cases = [(_rand_matrix(rng, n, n + 1, 1), _rand_matrix(rng, n + 1, n, 1)) for n in range(1, 6)]
        return _first(cases, lambda c: la.rank(la.matmul(c[0], c[1])) > min(la.rank(c[0]), la.rank(c[1])))

    def modular_identity():
        cases = []
        for n in range(2, 7):
            a = span(_rand_matrix(rng, rng.randint(0, n), n, 1), n)
            b = span(_rand_matrix(rng, rng.randint(0, n), n, 1), n)
            cases.append((a, b))
        return _first(cases, lambda c: c[0].dim + c[1].dim != add(*c).dim + intersect(*c).dim)

    def smith_invariance():
        z = Poly.z()
        one = Poly.const(1)
        d = [[one, Poly.const(0)], [Poly.const(0), z * (z - one)]]
        cases = []
        for _ in range(4):
            c = Poly((rng.randint(-2, 2), rng.randint(-2, 2)))
            u = [[one, c], [Poly.const(0), one]]
            cases.append(u)
        ref = smith_normal_form(d)

        def bad(u):
            prod = [[sum((u[i][k] * d[k][j] for k in range(2)), Poly.const(0)) for j in range(2)] for i in range(2)]
            return smith_normal_form(prod) != ref

        return _first(cases, bad)

    return [
        ("Gaussian field axioms and conjugation", gaussian_field),
        ("quaternion unit multiplication table", unit_table),
        ("quaternion associativity and multiplicative norm", associativity),
        ("rref idempotence", rref_idempotent),
        ("rank(AB) <= min(rank A, rank B)", rank_of_product),
        ("dim(a)+dim(b) = dim(a+b)+dim(a cap b)", modular_identity),
        ("Smith form invariant under unimodular change", smith_invariance),
    ]


def _structure_checks(rng):
    def identities():
        return _first([1, 2, 3], lambda k: structure_violations(standard_structure(k)))

    def admissible_square():
        s = standard_structure(1)
        minus = la.mneg(la.identity(4))
        pts = sample_chart_points(25, rng.randint(0, 10**6))
        return _first(pts, lambda z: la.matmul(*(admissible_operator(s, chart_to_sphere(z)),) * 2) != minus)

    def functoriality():
        s = standard_structure(2)
        cases = [(random_automorphism(s, rng.getrandbits(32)), random_automorphism(s, rng.getrandbits(32))) for _ in range(5)]

        def bad(c):
            f, g = c
            r = is_quaternionic_map(la.matmul(f.t, g.t), s, s)
            return r != la.matmul(f.rotation, g.rotation)

        return _first(cases, bad)

    def standardize_round_trip():
        cases = [dual_structure(standard_structure(1))]
        for k in (1, 2):
            s = standard_structure(k)
            phi = random_automorphism(s, rng.getrandbits(32))
            cases.append(rotate_representative(s, phi.rotation) if k == 1 else s)

        def bad(s):
            t = standardize(s).t
            std = standard_structure(s.k)
            return is_quaternionic_map(t, s, std) != la.identity(3)

        return _first(cases, bad)

    def dual_admissible():
        s = standard_structure(2)
        d = dual_structure(s)
        pts = sample_chart_points(10, rng.randint(0, 10**6), include_infinity=False)

        def bad(z):
            p = chart_to_sphere(z)
            return admissible_operator(d, p) != la.mneg(la.transpose(admissible_operator(s, p)))

        if dual_structure(d) != s:
            return "dual of dual"
        return _first(pts, bad)

    return [
        ("standard structure identities", identities),
        ("admissible operators square to -Id", admissible_square),
        ("rotation of a composite is the product", functoriality),
        ("standardize yields a hypercomplex isomorphism", standardize_round_trip),
        ("dual admissible operator is minus the transpose", dual_admissible),
    ]


def _pencil_checks(rng, degree_shift):
    def frame_identity():
        cases = [standard_structure(1), dual_structure(standard_structure(2)), build([FactorSpec("CrV", 1)]).e]
        pts = sample_chart_points(25, rng.randint(0, 10**6))

        def bad(s):
            fr = antiholomorphic_frame(s)
            for z in pts:
                j = admissible_operator(s, chart_to_sphere(z))
                m = fr.at(z)
                lhs = la.matmul(j, m)
                rhs = tuple(tuple(Gaussian(0, -1) * x for x in r) for r in m)
                if lhs != rhs:
                    return True
            return False

        return _first(cases, bad)

    def cross_oracle():
        cases = [model_V(1), model_Vp(1), dual_pair(model_V(2))]
        pts = sample_chart_points(25, rng.randint(0, 10**6))
        return _first(cases, lambda p: sphere_mismatches(p, pts))

    def three_routes():
        cases = [model_V(2), model_Vp(1), dual_pair(model_V(2)), build([FactorSpec("CoV", 1), FactorSpec("CoVp", 0)])]

        def bad(p):
            n = sheaf_pencil(p)
            prof = kronecker_profile(n)
            stair = sorted(right_minimal_indices(n)), sorted(left_minimal_indices(n))
            syz = sorted(right_indices_by_syzygies(n)), sorted(right_indices_by_syzygies(n.transpose()))
            return (list(prof.right), list(prof.left)) != stair or stair != syz

        return _first(cases, bad)

    def automorphism_invariance():
        p = build([FactorSpec("CoV", 2)])
        ref = analyze_pair(p)
        seeds = [rng.getrandbits(32) for _ in range(5)]
        return _first(seeds, lambda s: analyze_pair(transform_pair(p, random_automorphism(p.e, s).t)) != ref)

    def representative_invariance():
        p = build([FactorSpec("CoVp", 1)])
        ref = analyze_pair(p)
        rots = [random_rotation(rng) for _ in range(3)]
        return _first(rots, lambda r: analyze_pair(type(p)(rotate_representative(p.e, r), p.u)) != ref)

    def model_degrees():
        cases = [("V", k) for k in (1, 2, 3)] + [("Vp", k) for k in (0, 1)]

        def bad(c):
            tag, k = c
            p, want = (model_V(k), [2 * k]) if tag == "V" else (model_Vp(k), [2 * k + 1] * 2)
            return list(analyze_pair(p).plus.degrees) != [d + degree_shift for d in want]

        return _first(cases, bad)

    return [
        ("J(z) M(z) = -i M(z) on the frame", frame_identity),
        ("pencil ranks agree with U cap JU at sphere points", cross_oracle),
        ("Wong, staircase and syzygy indices agree", three_routes),
        ("report invariant under automorphisms", automorphism_invariance),
        ("report invariant under representative rotation", representative_invariance),
        ("model cokernel degrees 2k and 2k+1, 2k+1", model_degrees),
    ]


def _model_checks(rng):
    def round_trips():
        seeds = [rng.getrandbits(32) for _ in range(4)]
        return _first(seeds, lambda s: not round_trip(s, 6).ok)

    def duality():
        cases = [[FactorSpec("CoV", 1)], [FactorSpec("CoV", 1), FactorSpec("CoVp", 1)]]
        return _first(cases, lambda fs: classify(dual_pair(build(fs))) != sorted(f.dual() for f in fs))

    def disguised_sum():
        fs = [FactorSpec("CoV", 1), FactorSpec("CoV", 1), FactorSpec("CoVp", 1)]
        p = build(fs)
        seeds = [rng.getrandbits(32) for _ in range(3)]
        return _first(seeds, lambda s: classify(disguise(p, s)) != fs)

    return [
        ("classify recovers random model products", round_trips),
        ("classify of the dual is the dual decomposition", duality),
        ("classification of a disguised sum", disguised_sum),
    ]


def _f_checks(rng):
    def valid_models():
        return _first([(1, 0), (0, 1), (2, 1), (1, 2)], lambda lm: not validate_triple(model_f_triple(*lm)).ok)

    def automorphisms():
        cases = [random_group_element(l, m, rng.getrandbits(32)) for (l, m) in ((1, 0), (2, 1), (1, 2)) for _ in range(3)]
        return _first(cases, automorphism_violations)

    def homomorphism():
        cases = [
            (random_group_element(l, m, rng.getrandbits(32)), random_group_element(l, m, rng.getrandbits(32)))
            for (l, m) in ((1, 0), (2, 1), (1, 2))
        ]

        def bad(c):
            g, h = c
            gh = group_compose(g, h)
            return group_matrix(gh) != la.matmul(group_matrix(g), group_matrix(h)) or rho(gh) != la.matmul(rho(g), rho(h))

        return _first(cases, bad)

    def conformal():
        return None if conformal_3d(la.identity(3)) == model_f_triple(1, 0) else "standard frame"

    return [
        ("model triples are valid", valid_models),
        ("group elements are f-quaternionic automorphisms", automorphisms),
        ("composition is a homomorphism", homomorphism),
        ("conformal_3d of the standard frame is the (1, 0) model", conformal),
    ]


def _conjugation_checks(rng):
    def involution():
        qs = [QI, QJ, QK] + [random_imaginary_unit(rng) for _ in range(10)]
        return _first(qs, lambda q: la.matmul(tau(q, 2), tau(q, 2)) != la.identity(8) or not is_conjugation(tau(q, 1), quaternionify(1)))

    def real_form():
        cases = [(n, rng.getrandbits(32)) for n in (1, 2, 3)]

        def bad(c):
            n, s = c
            q = quaternionify(n)
            return transport_defects(q, tau(QI, n), tau(QJ, n), random_automorphism(q, s))

        return _first(cases, bad)

    def bonan():
        return _first([standard_structure(1), dual_structure(standard_structure(2))], bonan_violations)

    def pipelines():
        cases = [dual_pair(model_V(1)), dual_pair(model_Vp(1)), model_V(2), model_Vp(0)]

        def bad(p):
            r = analyze_pair(p)
            if r.is_cr:
                q = cr_from_subspace(subspace_from_cr(p))
            else:
                q = cocr_from_subspace(subspace_from_cocr(p))
            return analyze_pair(q) != r

        return _first(cases, bad)

    return [
        ("tau_q is an involutive conjugation", involution),
        ("real form recovery is equivariant", real_form),
        ("graph and cosum subspaces are complementary and linked", bonan),
        ("subspace pipelines reproduce reports", pipelines),
    ]


def _cli_checks(rng):
    def documents():
        cases = [model_V(1), dual_pair(model_Vp(1))]

        def bad(p):
            if pair_from_json(pair_to_json(p)) != p:
                return True
            if structure_from_json(structure_to_json(p.e)) != p.e:
                return True
            r = analyze_pair(p)
            return report_from_json(report_to_json(r)) != r

        return _first(cases, bad)

    return [("documents round-trip through the parsers", documents)]


def run_selftest(seed: int = 0, mutate: str | None = None) -> Summary:
    rng = random.Random(seed)
    table = dict(UNIT_TABLE)
    shift = 0
    if mutate == "quaternion-table":
        table[("i", "j")] = (-1, "k")
    elif mutate == "model-degree":
        shift = 1
    elif mutate is not None:
        raise ValueError(f"unknown mutation {mutate!r}; known: {', '.join(MUTATIONS)}")
    suites = [
        ("exact-algebra", _exact_checks(rng, table)),
        ("quaternion-structures", _structure_checks(rng)),
        ("twistor-pencil", _pencil_checks(rng, shift)),
        ("models-classification", _model_checks(rng)),
        ("f-structures", _f_checks(rng)),
        ("conjugations", _conjugation_checks(rng)),
        ("cli", _cli_checks(rng)),
    ]
    out = Summary(seed)
    for module, checks in suites:
        for name, check in checks:
            try:
                bad = check()
            except Exception as exc:  # a crash is a failure of that invariant
                bad = f"raised {type(exc).__name__}: {exc}"
            if bad is None:
                out.passed.append((module, name))
            else:
                out.failed.append(Failure(module, name, _describe(bad)))
    return out


def _describe(x) -> str:
    if isinstance(x, str):
        return x
    return repr(x)[:400]

