from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from parasym.cohomology import Cochain, cochain_space, harmonic_h2
from parasym.gate import (GateStatus, algebraic_action, bracket_spectrum, eigenvalue_gate,
                          gate_violation, group_action_on_cochains, joint_weyl_solutions,
                          symmetry_fixed_curvature, two_symmetry_flatness)
from parasym.linalg import Mat
from parasym.models import ModelMismatch, build_model, cartan_dual, grading_element
from parasym.oracles import (action_bruteforce, basis_cochains, cochain_as_endomorphisms,
                             four_term_bruteforce)
from parasym.symmetry import anticommutant_g0, exp_nilpotent

ints = st.integers(-3, 3)


def g1_matrix(model, coeffs):
    Z = Mat.zeros(model.ambient_size, model.ambient_size)
    for c, B in zip(coeffs, model.basis_1):
        Z = Z + B.scale(F(c))
    return Z


@st.composite
def projective_parabolic(draw):
    """Random element of the parabolic subgroup of PGl(3)."""
    model = build_model("projective", (2,))
    a = draw(st.integers(1, 3)) * draw(st.sampled_from([1, -1]))
    l = draw(ints)
    u1, u3 = (draw(st.sampled_from([-2, -1, 1, 2])) for _ in range(2))
    u2 = draw(ints)
    block = Mat.from_rows([[1, 0], [l, 1]]) @ Mat.from_rows([[u1, u2], [0, u3]])
    g0 = Mat.from_rows([[a, 0, 0], [0, block[0, 0], block[0, 1]], [0, block[1, 0], block[1, 1]]])
    Z = g1_matrix(model, draw(st.lists(ints, min_size=2, max_size=2)))
    return g0 @ exp_nilpotent(Z)


@st.composite
def conformal_parabolic(draw):
    """Random element of the parabolic subgroup of O(3,2)."""
    model = build_model("conformal", (2, 1))
    t = F(draw(st.integers(1, 3)), draw(st.integers(1, 3))) * draw(st.sampled_from([1, -1]))
    boost = Mat.diag([t, 1, 1, 1, 1 / t])
    rot = Mat.from_rows([[1, 0, 0, 0, 0], [0, F(3, 5), F(-4, 5), 0, 0],
                         [0, F(4, 5), F(3, 5), 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]])
    g0 = boost @ (rot if draw(st.booleans()) else Mat.identity(5))
    if draw(st.booleans()):
        g0 = g0 @ Mat.diag([-1, 1, 1, 1, -1])
    Z = g1_matrix(model, draw(st.lists(ints, min_size=3, max_size=3)))
    return g0 @ exp_nilpotent(Z)


@given(projective_parabolic())
def test_group_action_matches_bruteforce_projective(g):
    model = build_model("projective", (2,))
    M = group_action_on_cochains(model, g, 2)
    for i, phi in enumerate(basis_cochains(model, 2)):
        assert tuple(M[r, i] for r in range(M.rows)) == action_bruteforce(model, g, phi).coefficients


@given(conformal_parabolic())
def test_group_action_matches_bruteforce_conformal(g):
    model = build_model("conformal", (2, 1))
    M = group_action_on_cochains(model, g, 2)
    for i, phi in enumerate(basis_cochains(model, 2)):
        assert tuple(M[r, i] for r in range(M.rows)) == action_bruteforce(model, g, phi).coefficients


@given(conformal_parabolic(), conformal_parabolic())
def test_action_is_a_representation(g, h):
    model = build_model("conformal", (2, 1))
    for k in (1, 2):
        lhs = group_action_on_cochains(model, g, k) @ group_action_on_cochains(model, h, k)
        assert lhs == group_action_on_cochains(model, g @ h, k)


def test_identity_acts_trivially():
    model = build_model("conformal", (2, 1))
    M = group_action_on_cochains(model, Mat.identity(5), 2)
    assert M == Mat.identity(cochain_space(model, 2).dim)


def test_symmetry_on_torsion_slice_is_minus_identity():
    model = build_model("conformal", (2, 1))
    g = Mat.diag([-1, 1, 1, 1, -1])
    M = group_action_on_cochains(model, g, 2)
    space = cochain_space(model, 2)
    for i in space.slice(-1):
        for r in range(M.rows):
            assert M[r, i] == (-1 if r == i else 0)
    # degree 0: the two argument signs cancel, leaving conjugation on g_0
    for i in space.slice(0):
        I, b = space.unpack(i)
        conj = model.coords(g @ model.basis[b] @ g)
        for c, v in enumerate(conj):
            assert M[space.index(I, c), i] == v


def test_fixed_curvature_conformal():
    model = build_model("conformal", (2, 1))
    fx = symmetry_fixed_curvature(model, Mat.diag([-1, 1, 1, 1, -1]))
    assert fx.fixed[-1] == 0 and fx.fixed[1] == 0
    big = build_model("conformal", (2, 2))
    fx = symmetry_fixed_curvature(big, Mat.diag([-1, 1, 1, 1, 1, -1]))
    assert fx.fixed_normal[0] > 0
    assert fx.fixed_harmonic[0] == harmonic_h2(big).h2_by_degree[2]


def test_fixed_curvature_projective_plane():
    model = build_model("projective", (2,), "Sl")
    (g,) = anticommutant_g0(model)
    fx = symmetry_fixed_curvature(model, g)
    assert fx.fixed[-1] == 0 and fx.fixed[1] == 0
    assert fx.fixed_harmonic[0] == 0


@pytest.mark.parametrize("m", [2, 3, 4])
def test_projective_spectrum(m):
    model = build_model("projective", (m,))
    Z = model.wrap(model.basis_1[0])
    X = model.wrap(model.basis_neg1[0])
    s = bracket_spectrum(model, Z, X)
    assert s.eigenvalues == tuple([F(1)] * (m - 1) + [F(2)])
    assert s.diagonalizable


@pytest.mark.parametrize("p,q,V", [(2, 1, [1, 1, 0]), (3, 1, [1, 2, 0, 1]), (2, 2, [2, 0, 1, 0])])
def test_conformal_single_eigenvalue(p, q, V):
    model = build_model("conformal", (p, q))
    n = p + q
    J = [1] * p + [-1] * q
    length = sum(v * v * s for v, s in zip(V, J))
    Zm = Mat.from_sparse(n + 2, n + 2, {**{(0, 1 + i): F(v) for i, v in enumerate(V)},
                                        **{(1 + i, n + 1): F(-v * J[i]) for i, v in enumerate(V)}})
    Z = model.wrap(Zm)
    s = bracket_spectrum(model, Z, cartan_dual(Z))
    assert s.eigenvalues == (length,) * n and s.diagonalizable
    assert eigenvalue_gate(s)


def test_zero_bracket_spectrum():
    model = build_model("projective", (3,))
    zero = model.element([0] * model.dim)
    s = bracket_spectrum(model, zero, model.wrap(model.basis_neg1[0]))
    assert s.eigenvalues == (0, 0, 0)


def test_bracket_spectrum_checks_degrees():
    model = build_model("projective", (2,))
    with pytest.raises(ValueError):
        bracket_spectrum(model, model.wrap(model.basis_neg1[0]), model.wrap(model.basis_neg1[0]))
    other = build_model("projective", (3,))
    with pytest.raises(ModelMismatch):
        bracket_spectrum(model, other.wrap(other.basis_1[0]), model.wrap(model.basis_neg1[0]))


def test_eigenvalue_gate_examples():
    assert eigenvalue_gate([1, 2])
    assert eigenvalue_gate([F(-3, 2)])
    assert not eigenvalue_gate([0])
    assert not eigenvalue_gate([1, -1])
    assert gate_violation([1, -1]) is not None
    assert gate_violation([1, 2]) is None


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4))
def test_eigenvalue_gate_bruteforce(eigs):
    hit = any(a + b + c - d == 0 for a in eigs for b in eigs for c in eigs for d in eigs)
    assert eigenvalue_gate(eigs) == (not hit)


def weyl_space(model):
    return cochain_space(model, 2)


def random_weyl(model, data):
    space = weyl_space(model)
    idx = space.slice(0)
    vals = data.draw(st.lists(ints, min_size=len(idx), max_size=len(idx)))
    coeffs = [F(0)] * space.dim
    for i, v in zip(idx, vals):
        coeffs[i] = F(v)
    return Cochain(space, tuple(coeffs))


def test_algebraic_action_of_zero():
    model = build_model("projective", (2,))
    A = model.element([0] * model.dim)
    for W in basis_cochains(model, 2, 0):
        assert algebraic_action(model, A, W).is_zero()


@pytest.mark.parametrize("family,params", [("projective", (2,)), ("conformal", (2, 1))])
def test_grading_element_scales_by_two(family, params):
    model = build_model(family, params)
    Eg = grading_element(model)
    for W in basis_cochains(model, 2, 0):
        got = algebraic_action(model, Eg, W)
        assert got.coefficients == W.scale(2).coefficients
        assert cochain_as_endomorphisms(model, got) == four_term_bruteforce(model, Eg.matrix, W)


@pytest.mark.parametrize("family,params", [("projective", (2,)), ("conformal", (2, 1))])
@given(data=st.data())
def test_algebraic_action_matches_four_term_formula(family, params, data):
    model = build_model(family, params)
    zero_idx = model.degree_indices(0)
    vals = data.draw(st.lists(ints, min_size=len(zero_idx), max_size=len(zero_idx)))
    coeffs = [F(0)] * model.dim
    for i, v in zip(zero_idx, vals):
        coeffs[i] = F(v)
    A = model.element(coeffs)
    W = random_weyl(model, data)
    lhs = cochain_as_endomorphisms(model, algebraic_action(model, A, W))
    assert lhs == four_term_bruteforce(model, A.matrix, W)


@given(data=st.data())
def test_algebraic_action_linear(data):
    model = build_model("conformal", (2, 1))
    A = model.wrap(model.basis_0[data.draw(st.integers(0, len(model.basis_0) - 1))])
    W1, W2 = random_weyl(model, data), random_weyl(model, data)
    lhs = algebraic_action(model, A, W1 + W2)
    rhs = algebraic_action(model, A, W1) + algebraic_action(model, A, W2)
    assert lhs.coefficients == rhs.coefficients


def test_algebraic_action_rejects_wrong_slice():
    model = build_model("projective", (2,))
    W = next(basis_cochains(model, 2, -1))
    with pytest.raises(ValueError):
        algebraic_action(model, grading_element(model), W)


@given(st.lists(ints, min_size=3, max_size=3).filter(any))
def test_projective_any_Z_flat(coeffs):
    model = build_model("projective", (3,))
    Z = model.wrap(g1_matrix(model, coeffs))
    v = two_symmetry_flatness(model, Z)
    assert v.status is GateStatus.CURVATURE_VANISHES
    assert v.joint_solution_dim == 0


@pytest.mark.parametrize("a", [0, 1, 2, 3])
def test_quaternionic_flat(a):
    model = build_model("quaternionic", (1,))
    v = two_symmetry_flatness(model, model.wrap(model.basis_1[a]))
    assert v.status is GateStatus.CURVATURE_VANISHES


def test_conformal_null_difference_inconclusive():
    model = build_model("conformal", (2, 2))
    Zm = Mat.from_sparse(6, 6, {(0, 1): F(1), (0, 4): F(1), (1, 5): F(-1), (4, 5): F(1)})
    v = two_symmetry_flatness(model, model.wrap(Zm))
    assert v.status is GateStatus.INCONCLUSIVE
    assert v.violating_quadruple is not None


def test_grassmannian_rank_condition():
    model = build_model("grassmannian", (2, 3))
    r1 = Mat.from_sparse(5, 5, {(0, 2): F(1)})
    r2 = Mat.from_sparse(5, 5, {(0, 2): F(1), (1, 3): F(1)})
    v1 = two_symmetry_flatness(model, model.wrap(r1))
    v2 = two_symmetry_flatness(model, model.wrap(r2))
    assert v1.status is GateStatus.INCONCLUSIVE and not v1.conditions["has_max_rank"]
    assert v2.status is GateStatus.CURVATURE_VANISHES and v2.conditions["has_max_rank"]


def test_zero_difference_rejected():
    model = build_model("projective", (2,))
    with pytest.raises(ValueError):
        two_symmetry_flatness(model, model.element([0] * model.dim))


def test_verdict_deterministic_and_scale_invariant():
    model = build_model("grassmannian", (2, 2))
    Zm = Mat.from_sparse(4, 4, {(0, 2): F(1), (1, 3): F(1)})
    a = two_symmetry_flatness(model, model.wrap(Zm), seed=5).to_json()
    b = two_symmetry_flatness(model, model.wrap(Zm), seed=5).to_json()
    assert a == b
    c = two_symmetry_flatness(model, model.wrap(Zm.scale(3)))
    assert c.status.value == a["verdict"]


def test_joint_system_is_stronger_than_the_gate():
    # null conformal difference: [X, Z] vanishes for the dual X only, so the
    # gate is inconclusive while the full linear system over all X still
    # leaves no Weyl component
    model = build_model("conformal", (2, 2))
    Zm = Mat.from_sparse(6, 6, {(0, 1): F(1), (0, 4): F(1), (1, 5): F(-1), (4, 5): F(1)})
    v = two_symmetry_flatness(model, model.wrap(Zm))
    assert v.status is GateStatus.INCONCLUSIVE
    assert joint_weyl_solutions(model, model.wrap(Zm)) == 0 == v.joint_solution_dim
