import pytest

from qcr import linalg as la
from qcr.exact import rat
from qcr.fstructures import (
    FQuatTriple,
    FrameError,
    GroupElement,
    InvalidTriple,
    automorphism_violations,
    cocr_side,
    conformal_3d,
    cr_side,
    group_act,
    group_compose,
    group_matrix,
    identity_element,
    model_f_triple,
    random_group_element,
    rho,
    structural_violations,
    validate_triple,
)
from qcr.pencil import analyze_pair
from qcr.quaternion import QI, Quaternion
from qcr.structures import standard_structure
from qcr.subspace import coordinate, span

SHAPES = [(1, 0), (0, 1), (2, 1), (1, 2)]


@pytest.mark.parametrize("lm", SHAPES)
def test_model_triples_are_valid(lm):
    t = model_f_triple(*lm)
    assert validate_triple(t).ok
    l, m = lm
    assert t.u.dim == 3 * l + 4 * m and t.v.dim == l


@pytest.mark.parametrize("lm", SHAPES)
def test_model_sides(lm):
    l, m = lm
    t = model_f_triple(l, m)
    cr = analyze_pair(cr_side(t))
    co = analyze_pair(cocr_side(t))
    assert cr.is_cr and co.is_co_cr
    assert co.plus.degrees == tuple(sorted([2] * l + [1, 1] * m))
    assert sum(co.plus.degrees) == 2 * (l + m)


def test_invalid_triples():
    s = standard_structure(1)
    bad = FQuatTriple(s, coordinate(4, [0, 1, 2]), span(la.ratmat([[1, 0, 0, 1]]), 4))
    assert structural_violations(bad)
    assert not validate_triple(bad).ok
    with pytest.raises(InvalidTriple):
        cr_side(bad)
    with pytest.raises(ValueError):
        model_f_triple(0, 0)


@pytest.mark.parametrize("lm", [(1, 0), (2, 1), (1, 2)])
def test_random_group_elements_are_automorphisms(lm):
    for seed in range(10):
        assert automorphism_violations(random_group_element(*lm, seed)) == []


@pytest.mark.parametrize("lm", [(1, 0), (2, 1), (1, 2)])
def test_composition_is_homomorphism(lm):
    for seed in range(5):
        g = random_group_element(*lm, 2 * seed)
        h = random_group_element(*lm, 2 * seed + 1)
        gh = group_compose(g, h)
        assert group_matrix(gh) == la.matmul(group_matrix(g), group_matrix(h))
        assert rho(gh) == la.matmul(rho(g), rho(h))


def test_identity_element():
    e = identity_element(2, 1)
    assert group_matrix(e) == la.identity(12)
    g = random_group_element(2, 1, 4)
    assert group_matrix(group_compose(e, g)) == group_matrix(g)


def test_sign_of_q_is_canonical():
    g = GroupElement(la.identity(1), Quaternion(-1), ((Quaternion(2),),))
    h = GroupElement(la.identity(1), Quaternion(1), ((Quaternion(-2),),))
    assert g == h
    assert group_matrix(g) == group_matrix(h)


def test_group_act_on_points():
    g = GroupElement(la.ratmat([[2]]), QI, ())
    out = group_act(g, (Quaternion(0, 0, 1, 0),))
    # i j i^-1 = -j, scaled by A = 2
    assert out[0] == Quaternion(0, 0, -2, 0)


def test_group_element_validation():
    with pytest.raises(ValueError):
        GroupElement(la.ratmat([[0]]), QI, ())
    with pytest.raises(ValueError):
        GroupElement(la.identity(1), Quaternion(), ())


def test_conformal_standard_frame_is_model():
    t = conformal_3d(la.identity(3))
    assert t == model_f_triple(1, 0)
    assert analyze_pair(cocr_side(t)).plus.degrees == (2,)


def test_conformal_scaled_rotated_frame():
    f = [[3, 4, 0], [-4, 3, 0], [0, 0, 5]]
    t = conformal_3d(f)
    assert validate_triple(t).ok
    assert analyze_pair(cocr_side(t)).plus.degrees == (2,)


def test_conformal_rejects_bad_frames():
    with pytest.raises(FrameError):
        conformal_3d([[1, 0, 0], [0, 1, 0], [0, 0, -1]])
    with pytest.raises(FrameError):
        conformal_3d([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(FrameError):
        conformal_3d([[1, 0, 0], [0, 2, 0], [0, 0, 1]])
    assert conformal_3d(la.identity(3), gram=[[rat(2), 0, 0], [0, 2, 0], [0, 0, 2]])
