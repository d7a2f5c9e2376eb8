"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import random
import time

import pytest

from qcr import linalg as la
from qcr.conjugations import (
    cocr_from_subspace,
    cr_from_subspace,
    quaternionify,
    recover_real_form,
    subspace_from_cocr,
    subspace_from_cr,
    tau,
    transport_defects,
)
from qcr.exact import Gaussian
from qcr.experiments import disguise, random_factors
from qcr.fstructures import (
    automorphism_violations,
    cocr_side,
    conformal_3d,
    group_compose,
    group_matrix,
    model_f_triple,
    random_group_element,
    rho,
)
from qcr.models import build, decomposition_from_report, degree_law_violations, dual_pair, model_V, model_Vp, parse_factor
from qcr.pencil import (
    Pair,
    analyze_pair,
    antiholomorphic_frame,
    cokernel_splitting,
    is_co_cr_pair,
    is_co_cr_pointwise,
    is_cr_pair,
    is_cr_pointwise,
    kernel_splitting,
    sheaf_pencil,
    transform_pair,
)
from qcr.quaternion import QI, QJ, random_rotation
from qcr.structures import (
    INF,
    admissible_operator,
    chart_to_sphere,
    conjugate_structure,
    dual_structure,
    is_quaternionic_map,
    random_automorphism,
    rotate_representative,
    sample_chart_points,
    standard_structure,
)
from qcr.subspace import full, zero


class Criterion:
    """Context manager marking a criterion passed if its body finishes."""

    def __init__(self, n, title, capsys):
        self.n, self.title, self.capsys = n, title, capsys

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        ok = exc_type is None
        with self.capsys.disabled():
            dt = time.perf_counter() - self.start
            print(f"\ncriterion {self.n:>2}: {'PASS' if ok else 'FAIL'}  {self.title} ({dt:.1f} s)")
        return False


@pytest.fixture
def criterion(capsys):
    return lambda n, title: Criterion(n, title, capsys)


# classification corpus shared by criteria 4 and 7
ROUND_TRIP_SEED = 20240601
N_ROUND_TRIPS = 50


@pytest.fixture(scope="module")
def corpus():
    rng = random.Random(ROUND_TRIP_SEED)
    out = []
    start = time.perf_counter()
    for _ in range(N_ROUND_TRIPS):
        factors = random_factors(rng, 24)
        pair = disguise(build(factors), rng.getrandbits(64))
        report = analyze_pair(pair)
        out.append((factors, pair, report, decomposition_from_report(report)))
    return out, time.perf_counter() - start


def test_criterion_01_model_splittings(criterion):
    with criterion(1, "cokernel splittings of V_k and V'_k"):
        for k in range(1, 5):
            t = time.perf_counter()
            assert cokernel_splitting(sheaf_pencil(model_V(k))).degrees == (2 * k,)
            assert time.perf_counter() - t < 10
        for k in range(4):
            t = time.perf_counter()
            assert cokernel_splitting(sheaf_pencil(model_Vp(k))).degrees == (2 * k + 1, 2 * k + 1)
            assert time.perf_counter() - t < 10


def test_criterion_02_duals(criterion):
    with criterion(2, "duals are CR with kernel splittings -2k and -2k-1 twice"):
        for k in range(1, 5):
            d = dual_pair(model_V(k))
            r = analyze_pair(d)
            assert r.is_cr
            assert kernel_splitting(sheaf_pencil(d)).degrees == (-2 * k,) == r.minus.degrees
        for k in range(4):
            d = dual_pair(model_Vp(k))
            r = analyze_pair(d)
            assert r.is_cr
            assert kernel_splitting(sheaf_pencil(d)).degrees == (-2 * k - 1,) * 2 == r.minus.degrees


def test_criterion_03_dichotomy_flags(criterion):
    with criterion(3, "dichotomy flags agree with the sphere-point definition"):
        pts = sample_chart_points(25, seed=3)
        assert len(pts) == 25
        cases = [(model_V(k), True, False) for k in range(1, 5)]
        cases += [(model_Vp(k), True, False) for k in range(4)]
        for k in (1, 2, 3):
            e = standard_structure(k)
            cases.append((Pair(e, full(e.dim)), None, True))
            cases.append((Pair(e, zero(e.dim)), True, None))
        for p, co, cr in cases:
            r = analyze_pair(p, samples=25, seed=3)
            if co is not None:
                assert r.is_co_cr is co
            if cr is not None:
                assert r.is_cr is cr
            assert all(is_co_cr_pointwise(p, z) for z in pts) is r.is_co_cr
            assert all(is_cr_pointwise(p, z) for z in pts) is r.is_cr


def test_criterion_04_classification_round_trip(criterion, corpus):
    runs, seconds = corpus
    recovered = sum(sorted(f) == got for f, _, _, got in runs)
    title = f"{recovered}/{len(runs)} disguised random multisets classified exactly, corpus built in {seconds:.1f} s"
    with criterion(4, title):
        assert all(sum(x.quaternionic_dim for x in f) <= 24 for f, *_ in runs)
        assert recovered == N_ROUND_TRIPS
        assert seconds < 600


def test_criterion_05_invariance(criterion):
    with criterion(5, "reports invariant under 100 automorphisms and 20 rotations"):
        fixed = [
            build([parse_factor("CoV:1"), parse_factor("CoVp:1")]),
            dual_pair(model_V(2)),
            model_V(3),
            build([parse_factor("CrV:1"), parse_factor("CrVp:0")]),
        ]
        refs = [analyze_pair(p) for p in fixed]
        violations = 0
        for seed in range(100):
            p, ref = fixed[seed % 4], refs[seed % 4]
            if analyze_pair(transform_pair(p, random_automorphism(p.e, seed).t)) != ref:
                violations += 1
        rng = random.Random(5)
        for q in range(20):
            p, ref = fixed[q % 4], refs[q % 4]
            if analyze_pair(Pair(rotate_representative(p.e, random_rotation(rng)), p.u)) != ref:
                violations += 1
        assert violations == 0


def test_criterion_06_frame_property(criterion):
    with criterion(6, "J(z) M(z) = -i M(z) at 25 points and infinity up to dim 32"):
        pts = sample_chart_points(25, seed=6, include_infinity=False) + [INF]
        rng = random.Random(6)
        structures = []
        for k in (1, 2, 4, 8):
            s = standard_structure(k)
            structures += [s, dual_structure(s)]
        s4 = standard_structure(4)
        structures.append(conjugate_structure(s4, random_automorphism(s4, 1).t))
        structures.append(rotate_representative(standard_structure(8), random_rotation(rng)))
        minus_i = Gaussian(0, -1)
        for s in structures:
            fr = antiholomorphic_frame(s)
            for z in pts:
                j = admissible_operator(s, chart_to_sphere(z))
                m = fr.at(z)
                assert la.matmul(j, m) == tuple(tuple(minus_i * x for x in r) for r in m)
        assert max(s.dim for s in structures) == 32


def test_criterion_07_checksums_and_degree_laws(criterion, corpus):
    with criterion(7, "checksums and degree laws on all generated co-CR pairs"):
        runs, _ = corpus
        reports = []
        for factors, pair, report, _ in runs:
            if report.is_co_cr:
                reports.append((pair.k, report))
            else:
                reports.append((pair.k, analyze_pair(dual_pair(pair))))
        violations = []
        for k, r in reports:
            assert r.is_co_cr
            if r.plus.total != 2 * k:
                violations.append(f"sum {r.plus.total} != {2 * k}")
            violations += degree_law_violations(r)
        assert violations == []


def test_criterion_08_real_form_recovery(criterion):
    with criterion(8, "real forms recovered from conjugated tau_i, tau_j for n = 1..4"):
        for n in range(1, 5):
            s = quaternionify(n)
            t1, t2 = tau(QI, n), tau(QJ, n)
            for seed in range(20):
                phi = random_automorphism(s, 1000 * n + seed)
                inv = la.inverse(phi.t)
                c1, c2 = (la.matmul(la.matmul(phi.t, t), inv) for t in (t1, t2))
                rf = recover_real_form(s, c1, c2)
                assert rf.u.dim == n
                assert is_quaternionic_map(rf.iso, quaternionify(n), s) == la.identity(3)
                assert transport_defects(s, t1, t2, phi) == []


def test_criterion_09_group_action(criterion):
    with criterion(9, "100 group elements act as f-quaternionic automorphisms"):
        shapes = [(1, 0), (2, 1), (1, 2)]
        elements = [random_group_element(*shapes[i % 3], seed=i) for i in range(100)]
        assert all(automorphism_violations(g) == [] for g in elements)
        for i in range(97):
            g, h = elements[i], elements[i + 3]
            gh = group_compose(g, h)
            assert group_matrix(gh) == la.matmul(group_matrix(g), group_matrix(h))
            assert rho(gh) == la.matmul(rho(g), rho(h))


def test_criterion_10_subspace_pipelines(criterion):
    with criterion(10, "subspace pipelines certified on 20 seeded instances each"):
        rng = random.Random(10)
        cr_done = co_done = 0
        while cr_done < 20 or co_done < 20:
            kind = "cr" if cr_done < 20 else "co"
            fs = random_factors(rng, 4, kind)
            p = disguise(build(fs), rng.getrandbits(64))
            ref = analyze_pair(p)
            if kind == "cr":
                q = cr_from_subspace(subspace_from_cr(p), seed=cr_done)
                assert is_cr_pair(q)
                cr_done += 1
            else:
                q = cocr_from_subspace(subspace_from_cocr(p), seed=co_done)
                assert is_co_cr_pair(q)
                co_done += 1
            assert analyze_pair(q) == ref


def test_criterion_11_conformal_3d(criterion):
    with criterion(11, "conformal_3d of the standard frame is the (1, 0) model"):
        t = conformal_3d(la.identity(3))
        assert t == model_f_triple(1, 0)
        assert analyze_pair(cocr_side(t)).plus.degrees == (2,)
