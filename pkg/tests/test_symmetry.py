import pytest
from hypothesis import given, strategies as st
from fractions import Fraction as F

from parasym.linalg import Mat, det, inverse
from parasym.models import build_model
from parasym.symmetry import (Verdict, anticommutant_g0, check_symmetry_element,
                              exp_nilpotent, geometry_kernel, in_kernel, preserves_grading,
                              satisfies_group, symmetry_family_element, symmetry_verdict)


def conformal_pair(n):
    return {Mat.diag([-1] + [1] * n + [-1]), Mat.diag([1] + [-1] * n + [1])}


@pytest.mark.parametrize("p,q", [(2, 1), (3, 0), (2, 2), (3, 1), (4, 1)])
def test_conformal_orthogonal_solutions(p, q):
    model = build_model("conformal", (p, q), "O")
    got = {c.matrix for c in anticommutant_g0(model)}
    assert got == conformal_pair(p + q)
    kernel = {c.matrix for c in geometry_kernel(model)}
    N = p + q + 2
    assert kernel == {Mat.identity(N), Mat.identity(N).scale(-1)}


def test_conformal_projective_orthogonal_single_class():
    model = build_model("conformal", (2, 1), "PO")
    got = [c.matrix for c in anticommutant_g0(model)]
    assert len(got) == 1 and got[0] in conformal_pair(3)


@pytest.mark.parametrize("m", [3, 5])
def test_projective_special_linear_odd_has_no_symmetry(m):
    model = build_model("projective", (m,), "Sl")
    assert anticommutant_g0(model) == []
    rep = symmetry_verdict(model)
    assert rep.verdict is Verdict.NOT_SYMMETRIC
    assert "determinant" in rep.notes["obstruction"]


@pytest.mark.parametrize("m", [2, 4])
def test_projective_special_linear_even(m):
    model = build_model("projective", (m,), "Sl")
    got = [c.matrix for c in anticommutant_g0(model)]
    assert len(got) == 1
    assert det(got[0]) == 1


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_projective_general_linear_class(m):
    model = build_model("projective", (m,), "PGl")
    got = [c.matrix for c in anticommutant_g0(model)]
    assert got == [Mat.diag([1] + [-1] * m)]
    kernel = [c.matrix for c in geometry_kernel(model)]
    assert kernel == [Mat.identity(m + 1)]


def test_grassmannian_solutions():
    model = build_model("grassmannian", (2, 3), "PGl")
    assert [c.matrix for c in anticommutant_g0(model)] == [Mat.diag([1, 1, -1, -1, -1])]
    sl = build_model("grassmannian", (2, 3), "Sl")
    assert [c.matrix for c in anticommutant_g0(sl)] == [Mat.diag([-1, -1, 1, 1, 1])]


@pytest.mark.parametrize("family,params", [("conformal", (3, 0)), ("conformal", (2, 2)),
                                           ("conformal", (4, 2)), ("quaternionic", (1,)),
                                           ("grassmannian", (2, 2))])
def test_symmetric_families(family, params):
    assert symmetry_verdict(build_model(family, params)).verdict is Verdict.SYMMETRIC


def test_quaternionic_solution_is_quaternion_linear():
    model = build_model("quaternionic", (1,))
    (c,) = anticommutant_g0(model)
    assert c.membership.ok()
    assert check_symmetry_element(model, c)


def test_identity_is_not_a_symmetry():
    model = build_model("conformal", (2, 1))
    assert not check_symmetry_element(model, Mat.identity(5))


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_exp_part_keeps_the_symmetry(coeffs):
    model = build_model("conformal", (2, 1), "O")
    g0 = Mat.diag([-1, 1, 1, 1, -1])
    Z = Mat.zeros(5, 5)
    for c, B in zip(coeffs, model.basis_1):
        Z = Z + B.scale(F(c))
    g = symmetry_family_element(g0, Z)
    assert check_symmetry_element(model, g)
    assert satisfies_group(model, g)


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=2))
def test_exp_nilpotent_inverse(coeffs):
    model = build_model("projective", (2,))
    Z = model.basis_1[0].scale(F(coeffs[0])) + model.basis_1[1].scale(F(coeffs[1]))
    assert exp_nilpotent(Z) @ exp_nilpotent(Z.scale(-1)) == Mat.identity(3)
    assert inverse(exp_nilpotent(Z)) == exp_nilpotent(Z.scale(-1))


def test_kernel_elements_act_trivially():
    for family, params in (("conformal", (2, 1)), ("projective", (3,)), ("quaternionic", (1,))):
        model = build_model(family, params)
        for k in geometry_kernel(model):
            assert in_kernel(model, k.matrix)
            kinv = inverse(k.matrix)
            assert all(k.matrix @ B @ kinv == B for B in model.basis)


def test_group_constraints():
    proj = build_model("projective", (2,), "Sl")
    assert satisfies_group(proj, Mat.diag([1, -1, -1]))
    assert not satisfies_group(proj, Mat.diag([2, 1, 1]))
    conf = build_model("conformal", (2, 1), "O")
    assert satisfies_group(conf, Mat.identity(5))
    assert not satisfies_group(conf, Mat.diag([2, 1, 1, 1, 1]))
    assert preserves_grading(conf, Mat.diag([2, 1, 1, 1, F(1, 2)]))
