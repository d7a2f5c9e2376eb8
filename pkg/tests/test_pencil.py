import random

import pytest

from oracles import kronecker_pencil, rand_invertible, sympy_rank
from qcr import linalg as la
from qcr import wong
from qcr.exact import Gaussian, rat
from qcr.models import build, dual_pair, model_V, model_Vp, parse_factor
from qcr.pencil import (
    Pair,
    SheafReport,
    SplittingType,
    TorsionDetected,
    analyze_pair,
    antiholomorphic_frame,
    cokernel_splitting,
    fiber_profile,
    fiberwise_injective,
    fiberwise_surjective,
    generic_rank,
    is_co_cr_pair,
    is_co_cr_pointwise,
    is_cr_pair,
    is_cr_pointwise,
    kernel_splitting,
    kronecker_profile,
    pointwise_intersection_dim,
    right_indices_by_syzygies,
    sheaf_pencil,
    sphere_mismatches,
    transform_pair,
)
from qcr.quaternion import random_rotation
from qcr.structures import (
    INF,
    admissible_operator,
    chart_to_sphere,
    dual_structure,
    random_automorphism,
    rotate_representative,
    sample_chart_points,
    standard_structure,
)
from qcr.subspace import full, span, zero

MINUS_I = Gaussian(0, -1)

KRONECKER_CASES = [
    # (eps, eta, finite, infinite)
    ((0,), (), (), ()),
    ((1,), (), (), ()),
    ((), (2,), (), ()),
    ((0, 2), (1,), (), ()),
    ((1, 1), (0, 3), (), ()),
    ((2,), (1,), ((Gaussian(1, 1), 2),), ()),
    ((), (1,), (), (2,)),
    ((0,), (0,), ((rat(3), 1),), (1,)),
]


def _frame_identity(s, points):
    fr = antiholomorphic_frame(s)
    for z in points:
        j = admissible_operator(s, chart_to_sphere(z))
        m = fr.at(z)
        if la.matmul(j, m) != tuple(tuple(MINUS_I * x for x in r) for r in m):
            return False
        if wong.complex_rank(m, s.dim, len(m[0])) != s.dim // 2:
            return False
    return True


@pytest.mark.parametrize("k", [1, 2, 3])
def test_frame_identity_on_standard_and_dual(k):
    pts = sample_chart_points(25, seed=k)
    assert _frame_identity(standard_structure(k), pts)
    assert _frame_identity(dual_structure(standard_structure(k)), pts)


def test_frame_on_disguised_structure():
    s = standard_structure(2)
    t = random_automorphism(s, 9).t
    from qcr.structures import conjugate_structure

    assert _frame_identity(conjugate_structure(s, t), sample_chart_points(25, seed=3))


def test_pencil_shape_for_zero_and_full_subspace():
    s = standard_structure(1)
    p = sheaf_pencil(Pair(s, zero(4)))
    assert (p.m, p.n) == (4, 2)
    q = sheaf_pencil(Pair(s, full(4)))
    assert (q.m, q.n) == (0, 2)


def test_zero_subspace_is_co_cr_with_trivial_sum():
    r = analyze_pair(Pair(standard_structure(1), zero(4)), samples=25)
    assert r.is_co_cr and not r.is_cr
    assert r.plus.degrees == (1, 1)


def test_full_subspace_is_cr_with_kernel_minus_one():
    r = analyze_pair(Pair(standard_structure(2), full(8)), samples=25)
    assert r.is_cr and not r.is_co_cr
    assert r.minus.degrees == (-1, -1, -1, -1)


@pytest.mark.parametrize("case", KRONECKER_CASES)
def test_kronecker_pencils_three_routes(case):
    eps, eta, fin, inf = case
    p = kronecker_pencil(eps, eta, fin, inf, seed=len(eps) + 3 * len(eta))
    reg = sum(s for _, s in fin) + sum(inf)
    for method in ("auto", "staircase"):
        prof = kronecker_profile(p, method)
        assert prof.right == tuple(sorted(eps))
        assert prof.left == tuple(sorted(eta))
        assert prof.regular_degree == reg
    assert sorted(right_indices_by_syzygies(p)) == sorted(eps)
    assert sorted(right_indices_by_syzygies(p.transpose())) == sorted(eta)


@pytest.mark.parametrize("case", KRONECKER_CASES)
def test_generic_rank_matches_sympy_at_random_point(case):
    p = kronecker_pencil(*case, seed=5)
    z = Gaussian(rat(7) / 3, rat(-5) / 11)
    assert generic_rank(p) == sympy_rank(p.at(z))


def test_kernel_splitting_of_kronecker_blocks():
    p = kronecker_pencil((0, 2), (1,), seed=1)
    assert kernel_splitting(p).degrees == (-3, -1)
    assert kernel_splitting(p, "syzygy").degrees == (-3, -1)


def test_cokernel_splitting_raises_on_regular_part():
    p = kronecker_pencil((), (1,), ((rat(2), 1),), seed=2)
    with pytest.raises(TorsionDetected) as exc:
        cokernel_splitting(p)
    assert exc.value.factors == ["z-2"]
    with pytest.raises(TorsionDetected):
        cokernel_splitting(p, "syzygy")


def test_wong_exact_agrees_with_flint():
    rng = random.Random(8)
    for _ in range(10):
        p, q = rng.randint(1, 4), rng.randint(4, 7)
        a = tuple(tuple(Gaussian(rng.randint(-1, 1), rng.randint(-1, 1)) for _ in range(q)) for _ in range(p))
        if wong.complex_rank(a, p, q) != p:
            continue
        b = tuple(tuple(Gaussian(rng.randint(-1, 1), rng.randint(-1, 1)) for _ in range(q)) for _ in range(p))
        assert wong.wong_dimensions_exact(a, b, p, q) == wong.wong_dimensions(a, b, p, q)


def test_smith_profile_predicts_pointwise_ranks():
    p = kronecker_pencil((1,), (0,), ((rat(1), 2), (Gaussian(0, 1), 1)), (1,), seed=4)
    prof = fiber_profile(p)
    pts = sample_chart_points(46, seed=6, include_infinity=False) + [rat(1), Gaussian(0, 1)]
    pts = pts[:50]
    for z in pts:
        expected = prof.generic_rank - sum(1 for f in prof.finite if not f(z))
        assert wong.complex_rank(p.at(z), p.m, p.n) == expected == sympy_rank(p.at(z))
    assert wong.complex_rank(p.n1, p.m, p.n) == prof.generic_rank - len(prof.infinite)


def test_torsion_example_is_reported():
    # U = span{1, i} is I-invariant, so it meets I U and -I U
    s = standard_structure(1)
    u = span(la.ratmat([[1, 0, 0, 0], [0, 1, 0, 0]]), 4)
    r = analyze_pair(Pair(s, u), samples=25)
    assert r.has_torsion and r.plus is None
    assert not r.is_cr and not r.is_co_cr
    assert set(r.torsion) == {"z", "inf:w"}
    assert not is_co_cr_pointwise(Pair(s, u), Gaussian(0, 0))
    assert is_co_cr_pointwise(Pair(s, u), Gaussian(1, 0))
    with pytest.raises(TorsionDetected):
        cokernel_splitting(sheaf_pencil(Pair(s, u)))


def test_fiberwise_decisions_match_flags():
    co = sheaf_pencil(model_V(2))
    assert fiberwise_injective(co)
    assert fiberwise_surjective(co) is False
    cr = sheaf_pencil(dual_pair(model_V(2)))
    assert fiberwise_surjective(cr) is True


def test_flags_against_definition_at_sphere_points():
    pts = sample_chart_points(25, seed=12)
    cases = [model_V(1), model_V(2), model_Vp(1), dual_pair(model_V(1)), dual_pair(model_Vp(1))]
    for p in cases:
        r = analyze_pair(p, samples=25)
        if r.is_co_cr:
            assert all(is_co_cr_pointwise(p, z) for z in pts)
        if r.is_cr:
            assert all(is_cr_pointwise(p, z) for z in pts)
        assert sphere_mismatches(p, pts) == []


def test_pointwise_intersection_dim_of_models_is_zero():
    p = model_V(3)
    for z in sample_chart_points(10, seed=1):
        assert pointwise_intersection_dim(p, z) == 0


def test_report_invariant_under_automorphisms_and_rotations():
    p = build([parse_factor("CoV:1"), parse_factor("CoVp:1")])
    ref = analyze_pair(p)
    rng = random.Random(0)
    for seed in range(10):
        assert analyze_pair(transform_pair(p, random_automorphism(p.e, seed).t)) == ref
    for _ in range(5):
        assert analyze_pair(Pair(rotate_representative(p.e, random_rotation(rng)), p.u)) == ref


def test_torsion_moves_with_the_sphere_rotation():
    # locations are chart points, so only hypercomplex maps fix them
    u = span(la.ratmat([[1, 0, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0, 0, 0]]), 8)
    p = Pair(standard_structure(2), u)
    ref = analyze_pair(p)
    for seed in range(5):
        assert analyze_pair(transform_pair(p, random_automorphism(p.e, seed, hypercomplex=True).t)) == ref
        moved = analyze_pair(transform_pair(p, random_automorphism(p.e, seed).t))
        assert moved.has_torsion
        assert (moved.is_cr, moved.is_co_cr, moved.minus) == (ref.is_cr, ref.is_co_cr, ref.minus)
        prof = fiber_profile(sheaf_pencil(transform_pair(p, random_automorphism(p.e, seed).t)))
        assert sum(f.degree for f in prof.finite) + sum(prof.infinite) == 2


def test_duality_reverses_flags_and_negates_degrees():
    for p in (model_V(1), model_V(3), model_Vp(2)):
        r = analyze_pair(p)
        d = analyze_pair(dual_pair(p))
        assert d.is_cr and not d.is_co_cr
        assert d.minus == r.plus.negated()


def test_direct_sum_adds_splittings():
    a, b = model_V(2), model_Vp(1)
    s = analyze_pair(build([parse_factor("CoV:2"), parse_factor("CoVp:1")]))
    assert s.plus == analyze_pair(a).plus + analyze_pair(b).plus


def test_is_pair_helpers():
    assert is_co_cr_pair(model_V(1)) and not is_cr_pair(model_V(1))
    assert is_cr_pair(dual_pair(model_V(1)))


def test_report_json_round_trip():
    for r in (analyze_pair(model_V(2)), SheafReport(False, False, SplittingType((-1,)), None, ("z",))):
        assert SheafReport.from_json(r.to_json()) == r


def test_sheaf_pencil_uses_quotient_coordinates():
    p = model_V(1)
    n = sheaf_pencil(p)
    assert n.m == 4 - p.u.dim and n.n == 2
    assert sympy_rank(n.at(INF)) == wong.complex_rank(n.n1, n.m, n.n)


def test_rand_invertible_oracle_is_invertible():
    m = rand_invertible(random.Random(1), 4)
    assert sympy_rank(m) == 4
