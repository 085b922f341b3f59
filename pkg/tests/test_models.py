from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from parasym.linalg import Mat, rank
from parasym.models import (Family, ModelMismatch, UnsupportedParams, block_rank, bracket, complex_structures,
                            build_model, cartan_dual, dual_g1_basis, grade_component,
                            grading_element, killing, structure_violations)
from parasym.oracles import jacobi_violations

SMALL = [(Family.PROJECTIVE, (2,)), (Family.PROJECTIVE, (3,)), (Family.CONFORMAL, (2, 1)),
         (Family.CONFORMAL, (3, 1)), (Family.GRASSMANNIAN, (2, 2)), (Family.QUATERNIONIC, (1,))]


def E(n, i, j):
    return Mat.from_sparse(n, n, {(i, j): 1})


def random_element(model, data):
    coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=model.dim, max_size=model.dim))
    return model.element([F(c) for c in coeffs])


@pytest.mark.parametrize("family,params,dims", [
    ("projective", (2,), (2, 4, 2)),
    ("conformal", (2, 1), (3, 4, 3)),
    ("grassmannian", (2, 2), (4, 7, 4)),
    ("quaternionic", (1,), (4, 7, 4)),
])
def test_dimensions(family, params, dims):
    m = build_model(family, params)
    assert (m.dims["neg1"], m.dims["zero"], m.dims["one"]) == dims
    assert m.dim == sum(dims)


@pytest.mark.parametrize("family,params", [
    ("projective", (1,)), ("conformal", (1, 1)), ("grassmannian", (1, 3)),
    ("quaternionic", (0,)), ("hyperbolic", (2,)),
])
def test_unsupported(family, params):
    with pytest.raises(UnsupportedParams):
        build_model(family, params)


def test_group_variant_checked():
    with pytest.raises(UnsupportedParams):
        build_model("conformal", (2, 1), "Sl")


@pytest.mark.parametrize("family,params", SMALL)
def test_structure_sound(family, params):
    model = build_model(family, params)
    assert not any(structure_violations(model).values())


@pytest.mark.parametrize("family,params", SMALL[:4])
def test_jacobi_with_matrix_brackets(family, params):
    assert jacobi_violations(build_model(family, params)) == 0


@pytest.mark.parametrize("family,params", SMALL)
def test_grading_element_acts_by_degree(family, params):
    model = build_model(family, params)
    Eg = grading_element(model).matrix
    for j, basis in ((-1, model.basis_neg1), (0, model.basis_0), (1, model.basis_1)):
        for Y in basis:
            assert Eg.commutator(Y) == Y.scale(j)


@pytest.mark.parametrize("m", [2, 3, 5])
def test_projective_grading_element(m):
    model = build_model("projective", (m,))
    want = Mat.diag([F(m, m + 1)] + [F(-1, m + 1)] * m)
    assert grading_element(model).matrix == want


@pytest.mark.parametrize("p,q", [(2, 1), (3, 0), (2, 2)])
def test_conformal_grading_element(p, q):
    model = build_model("conformal", (p, q))
    n = p + q
    assert grading_element(model).matrix == Mat.diag([1] + [0] * n + [-1])


def test_bracket_examples():
    model = build_model("projective", (3,))
    X = model.basis_element(model.degree_indices(-1)[0])
    assert bracket(X, X).is_zero()
    # V = (1, 0, 0): the bracket is diag(-1, V^T V)
    Z = model.wrap(E(4, 0, 1))
    Xv = model.wrap(E(4, 1, 0))
    assert bracket(Xv, Z).matrix == Mat.diag([-1, 1, 0, 0])


@pytest.mark.parametrize("p,q", [(2, 1), (3, 1), (2, 2)])
def test_conformal_bracket_corners(p, q):
    model = build_model("conformal", (p, q))
    n = p + q
    J = [1] * p + [-1] * q
    V = list(range(1, n + 1))
    length = sum(v * v * s for v, s in zip(V, J))
    Zm = Mat.from_sparse(n + 2, n + 2, {**{(0, 1 + i): F(v) for i, v in enumerate(V)},
                                        **{(1 + i, n + 1): F(-v * J[i]) for i, v in enumerate(V)}})
    Z = model.wrap(Zm)
    X = cartan_dual(Z)
    H = bracket(X, Z).matrix
    assert H == Mat.diag([-length] + [0] * n + [length])


def test_grade_component():
    model = build_model("projective", (2,))
    x = model.basis_element(model.degree_indices(-1)[0])
    assert grade_component(x, -1).matrix == x.matrix
    assert grade_component(x, 1).is_zero()
    parts = [model.basis_element(model.degree_indices(j)[0]) for j in (-1, 0, 1)]
    total = parts[0] + parts[1] + parts[2]
    assert grade_component(total, 0).matrix == parts[1].matrix
    with pytest.raises(ValueError):
        grade_component(x, 2)


def adjoint_trace_killing(model, x, y):
    """tr(ad x ad y) computed from matrix commutators only."""
    total = F(0)
    for a, B in enumerate(model.basis):
        total += model.coords(x.commutator(y.commutator(B)))[a]
    return total


def test_killing_projective_grading_element_positive():
    model = build_model("projective", (2,))
    Eg = grading_element(model)
    val = killing(Eg, Eg)
    assert val > 0
    assert val == adjoint_trace_killing(model, Eg.matrix, Eg.matrix)


@pytest.mark.parametrize("family,params,factor", [
    ("projective", (2,), 6), ("projective", (3,), 8), ("grassmannian", (2, 2), 8),
    ("conformal", (2, 1), 3), ("conformal", (3, 1), 4),
])
@given(data=st.data())
def test_killing_classical_formula(family, params, factor, data):
    # sl(N): 2N tr(xy); o(N): (N-2) tr(xy)
    model = build_model(family, params)
    x, y = random_element(model, data), random_element(model, data)
    assert killing(x, y) == killing(y, x)
    assert killing(x, y) == factor * (x.matrix @ y.matrix).trace()


def test_killing_quaternionic_matches_adjoint_trace():
    model = build_model("quaternionic", (1,))
    for a in (0, 5, 9):
        for b in (0, 3, 12):
            x, y = model.basis_element(a), model.basis_element(b)
            assert killing(x, y) == adjoint_trace_killing(model, x.matrix, y.matrix)


@pytest.mark.parametrize("family,params", SMALL)
def test_dual_basis_pairs_to_identity(family, params):
    model = build_model(family, params)
    duals = dual_g1_basis(model)
    for i, X in enumerate(model.basis_neg1):
        for j, Z in enumerate(duals):
            assert killing(model.wrap(X), Z) == (1 if i == j else 0)
    assert rank(model.pairing_matrix) == model.n


def test_projective_dual_is_transposed_elementary():
    model = build_model("projective", (2,))
    for X, Z in zip(model.basis_neg1, dual_g1_basis(model)):
        (i, j), = X.to_sparse().keys()
        sp = Z.matrix.to_sparse()
        assert set(sp) == {(j, i)}


def test_conformal_dual_sign_pattern():
    model = build_model("conformal", (2, 1))
    J = [1, 1, -1]
    for i, Z in enumerate(dual_g1_basis(model)):
        sp = Z.matrix.to_sparse()
        assert set(sp) == {(0, i + 1), (i + 1, 4)}
        assert sp[(i + 1, 4)] == -J[i] * sp[(0, i + 1)]


def test_coords_rejects_outside_algebra():
    model = build_model("projective", (2,))
    with pytest.raises(ValueError):
        model.coords(Mat.identity(3))
    assert not model.contains(Mat.identity(3))


def test_model_mismatch():
    a = build_model("projective", (2,))
    b = build_model("projective", (3,))
    with pytest.raises(ModelMismatch):
        bracket(a.basis_element(0), b.basis_element(0))


def test_block_rank():
    model = build_model("grassmannian", (2, 3))
    Z = model.wrap(E(5, 0, 2) + E(5, 1, 3))
    assert block_rank(Z) == 2
    assert block_rank(model.wrap(E(5, 0, 2))) == 1


def test_descriptor():
    d = build_model("grassmannian", (2, 3)).descriptor()
    assert d == {"family": "grassmannian", "params": {"p": 2, "q": 3}, "ambient_size": 5,
                 "dims": {"neg1": 6, "zero": 12, "one": 6}}


def test_quaternionic_complex_structures_commute():
    model = build_model("quaternionic", (1,))
    for C in complex_structures(2):
        for B in model.basis:
            assert C @ B == B @ C
