from fractions import Fraction as F

import pytest

from parasym.cohomology import (AmbiguousClassification, Classification, Cochain,
                                apply_codifferential, codifferential_columns,
                                codifferential_matrix, codifferential_squares, cochain_space,
                                flatness_classification, harmonic_h2, unsliced_h2)
from parasym.models import build_model, dual_g1_basis

SMALL = [("projective", (2,)), ("projective", (3,)), ("conformal", (2, 1)),
         ("conformal", (2, 2)), ("grassmannian", (2, 2)), ("quaternionic", (1,))]


def test_cochain_dimensions():
    assert cochain_space(build_model("projective", (2,)), 2).dim == 8
    conf = build_model("conformal", (2, 1))
    assert cochain_space(conf, 2).dim == 30
    assert cochain_space(conf, 3).dim == 10
    with pytest.raises(ValueError):
        cochain_space(conf, 4)


def codifferential_oracle(model, k, idx):
    """d* of one basis (k+1)-cochain, via matrix commutators with the dual basis."""
    src = cochain_space(model, k + 1)
    dst = cochain_space(model, k)
    combo, b = src.unpack(idx)
    duals = [Z.matrix for Z in dual_g1_basis(model)]
    W = model.basis[b]
    out = [F(0)] * dst.dim
    for t, i in enumerate(combo):
        rest = combo[:t] + combo[t + 1:]
        val = model.coords(duals[i].commutator(W))
        for c, v in enumerate(val):
            out[dst.index(rest, c)] += (-1) ** (t + 1) * v
    return out


@pytest.mark.parametrize("family,params", SMALL[:3])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_codifferential_matches_commutator_oracle(family, params, k):
    model = build_model(family, params)
    M = codifferential_matrix(model, k)
    for idx in range(cochain_space(model, k + 1).dim):
        assert [M[r, idx] for r in range(M.rows)] == codifferential_oracle(model, k, idx)


def test_one_form_codifferential_is_minus_bracket():
    model = build_model("projective", (2,))
    duals = dual_g1_basis(model)
    space = cochain_space(model, 1)
    for idx in range(space.dim):
        (i,), b = space.unpack(idx)
        coeffs = [F(0)] * space.dim
        coeffs[idx] = F(1)
        out = apply_codifferential(Cochain(space, tuple(coeffs)))
        want = model.coords(duals[i].matrix.commutator(model.basis[b]).scale(-1))
        assert list(out.coefficients) == want


@pytest.mark.parametrize("family,params", SMALL)
def test_codifferential_squares_to_zero(family, params):
    model = build_model(family, params)
    for cols in codifferential_squares(model):
        assert all(not c for c in cols)


def test_codifferential_squares_dense():
    model = build_model("conformal", (2, 1))
    a = codifferential_matrix(model, 1)
    b = codifferential_matrix(model, 2)
    assert (a @ b).is_zero()


@pytest.mark.parametrize("family,params", SMALL[:4])
def test_codifferential_raises_value_degree(family, params):
    model = build_model(family, params)
    dst = cochain_space(model, 1)
    for j in (-1, 0, 1):
        for col in codifferential_columns(model, 1, j):
            assert all(dst.value_degree(r) == j + 1 for r in col)
    assert codifferential_columns(model, 1, 1) == [{}] * len(cochain_space(model, 2).slice(1))


@pytest.mark.parametrize("family,params,want", [
    ("projective", (2,), {1: 0, 2: 0, 3: 2}),
    ("projective", (3,), {1: 0, 2: 15, 3: 0}),
    ("conformal", (3, 0), {1: 0, 2: 0, 3: 5}),
    ("conformal", (2, 1), {1: 0, 2: 0, 3: 5}),
    ("conformal", (2, 2), {1: 0, 2: 10, 3: 0}),
    ("grassmannian", (2, 3), {1: 24, 2: 24, 3: 0}),
    ("grassmannian", (3, 3), {1: 180, 2: 0, 3: 0}),
    ("quaternionic", (1,), {1: 0, 2: 10, 3: 0}),
])
def test_harmonic_dimensions(family, params, want):
    assert harmonic_h2(build_model(family, params)).h2_by_degree == want


@pytest.mark.parametrize("family,params,cls", [
    ("projective", (2,), Classification.FLAT_IF_SYMMETRIC_DEGREE3),
    ("projective", (3,), Classification.INTERESTING_DEGREE2),
    ("conformal", (3, 0), Classification.FLAT_IF_SYMMETRIC_DEGREE3),
    ("conformal", (2, 2), Classification.INTERESTING_DEGREE2),
    ("grassmannian", (2, 3), Classification.INTERESTING_DEGREE2),
    ("grassmannian", (3, 3), Classification.FLAT_IF_SYMMETRIC_DEGREE1),
])
def test_classification(family, params, cls):
    assert harmonic_h2(build_model(family, params)).classification is cls


def test_classification_edge_cases():
    assert flatness_classification({1: 0, 2: 0, 3: 0}) is Classification.FLAT_IF_SYMMETRIC_DEGREE1
    assert flatness_classification({1: 0, 2: 0, 3: 4}) is Classification.FLAT_IF_SYMMETRIC_DEGREE3
    with pytest.raises(AmbiguousClassification) as e:
        flatness_classification({1: 2, 2: 0, 3: 4})
    assert e.value.degrees == (1, 3)


@pytest.mark.parametrize("family,params", SMALL)
def test_sliced_matches_unsliced(family, params):
    model = build_model(family, params)
    assert unsliced_h2(model) == harmonic_h2(model).h2_total


@pytest.mark.parametrize("family,params", SMALL)
def test_pairing_scale_invariance(family, params):
    model = build_model(family, params)
    base = harmonic_h2(model).h2_by_degree
    for s in (2, F(1, 3), -1):
        assert harmonic_h2(model, pairing_scale=s).h2_by_degree == base


@pytest.mark.parametrize("family,params", [("projective", (3,)), ("conformal", (2, 1)),
                                           ("grassmannian", (2, 2))])
def test_basis_permutation_invariance(family, params):
    model = build_model(family, params)
    perm = list(reversed(range(model.n)))
    assert harmonic_h2(model.permuted_neg1(perm)).h2_by_degree == harmonic_h2(model).h2_by_degree


def test_report_json():
    doc = harmonic_h2(build_model("projective", (3,))).to_json()
    assert doc["h2_by_degree"] == {"1": 0, "2": 15, "3": 0}
    assert doc["classification"] == "Interesting_Degree2"
