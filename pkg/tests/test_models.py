import random

import pytest

from qcr.experiments import disguise, random_factors, round_trip
from qcr.models import (
    ClassificationInconsistency,
    FactorSpec,
    NotClassifiable,
    build,
    classify,
    decomposition_from_report,
    degree_law_violations,
    dual_pair,
    model_V,
    model_Vp,
    parse_factor,
)
from qcr.pencil import Pair, SheafReport, SplittingType, analyze_pair
from qcr.structures import standard_structure
from qcr.subspace import span
from qcr import linalg as la


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_model_V_dimensions_and_degree(k):
    p = model_V(k)
    assert p.u.dim == 2 * k - 1 and p.e.dim == 4 * k
    r = analyze_pair(p, samples=10)
    assert r.is_co_cr and not r.is_cr
    assert r.plus.degrees == (2 * k,)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_model_Vp_dimensions_and_degree(k):
    p = model_Vp(k)
    assert p.u.dim == 4 * k and p.e.dim == 4 * (2 * k + 1)
    r = analyze_pair(p, samples=10)
    assert r.plus.degrees == (2 * k + 1, 2 * k + 1)


def test_model_arguments_are_checked():
    with pytest.raises(ValueError):
        model_V(0)
    with pytest.raises(ValueError):
        model_Vp(-1)
    with pytest.raises(ValueError):
        parse_factor("CoW:1")
    with pytest.raises(ValueError):
        FactorSpec("CoV", 0)


def test_factor_spec_text_and_dual():
    f = parse_factor("CoVp:2")
    assert str(f) == "CoVp:2" and f.quaternionic_dim == 5
    assert f.dual() == FactorSpec("CrVp", 2)
    assert f.dual().dual() == f
    assert f.to_json() == {"tag": "CoVp", "k": 2}


def test_classify_models_and_duals():
    for f in ("CoV:1", "CoV:3", "CoVp:0", "CoVp:2"):
        fs = parse_factor(f)
        assert classify(build([fs])) == [fs]
        assert classify(dual_pair(build([fs]))) == [fs.dual()]


def test_classify_is_order_independent():
    fs = [parse_factor(x) for x in ("CoVp:1", "CoV:2", "CoV:1")]
    assert classify(build(fs)) == sorted(fs)
    assert classify(build(list(reversed(fs)))) == sorted(fs)


def test_classify_disguised_products():
    fs = [parse_factor(x) for x in ("CrV:1", "CrV:1", "CrVp:0")]
    for seed in range(5):
        assert classify(disguise(build(fs), seed)) == sorted(fs)


def test_not_classifiable():
    s = standard_structure(1)
    u = span(la.ratmat([[1, 0, 0, 0], [0, 1, 0, 0]]), 4)
    with pytest.raises(NotClassifiable):
        classify(Pair(s, u))


def test_inconsistent_reports_are_rejected():
    odd = SheafReport(False, True, SplittingType(()), SplittingType((3,)))
    with pytest.raises(ClassificationInconsistency):
        decomposition_from_report(odd)
    neg = SheafReport(False, True, SplittingType(()), SplittingType((0, 2)))
    with pytest.raises(ClassificationInconsistency):
        decomposition_from_report(neg)


def test_degree_laws():
    assert degree_law_violations(analyze_pair(build([parse_factor("CoVp:1"), parse_factor("CoV:2")]))) == []
    bad = SheafReport(False, True, SplittingType(()), SplittingType((3, 0)))
    assert len(degree_law_violations(bad)) == 2


def test_random_factors_respect_budget():
    rng = random.Random(3)
    for _ in range(50):
        fs = random_factors(rng, 12)
        assert fs and sum(f.quaternionic_dim for f in fs) <= 12
        assert len({f.tag[:2] for f in fs}) == 1


def test_round_trips_small():
    for seed in range(8):
        r = round_trip(seed, 8)
        assert r.ok, r.to_json()
