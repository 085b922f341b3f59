"""Curvature restrictions at points with one or two symmetries.

Curvature values are 2-cochains on ``g_-1`` with values in ``g``.  A symmetry
``g`` fixes the curvature at its centre, which kills the parts of degree -1
and +1; two distinct symmetries with difference ``Z`` in ``g_1`` make the
Weyl part (value degree 0) annihilated by every ``[X, Z]``.  When some
``[X, Z]`` acts on ``g_-1`` diagonalizably with eigenvalues ``a_i`` such that
no ``a + b + c - d`` vanishes, that action is invertible on the Weyl slice and
the curvature vanishes.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .cohomology import (Cochain, _sort_sign, codifferential_columns,
                         cochain_space)
from .linalg import (ONE, ZERO, Mat, SpectrumResult, format_rational, inverse,
                     rational_spectrum, sparse_rank)
from .models import (AlgebraElement, Family, GradedModel, ModelMismatch,
                     block_rank, cartan_dual)
from .symmetry import GroupCandidate, matrix_json, preserves_grading


class GateStatus(enum.Enum):
    CURVATURE_VANISHES = "CurvatureVanishes"
    INCONCLUSIVE = "Inconclusive"
    NON_RATIONAL_SPECTRUM = "NonRationalSpectrum"


@dataclass(frozen=True)
class SpectrumReport:
    bracket_element: AlgebraElement
    eigenvalues: tuple
    diagonalizable: bool
    fully_split: bool

    def to_json(self) -> dict:
        return {"bracket": matrix_json(self.bracket_element.matrix),
                "eigenvalues": [format_rational(a) for a in self.eigenvalues],
                "diagonalizable": self.diagonalizable,
                "fully_split": self.fully_split}


@dataclass(frozen=True)
class GateVerdict:
    status: GateStatus
    witness_X: AlgebraElement | None = None
    violating_quadruple: tuple | None = None
    eigenvalues: tuple = ()
    joint_solution_dim: int | None = None
    conditions: dict = field(default_factory=dict)
    tried: int = 0

    def to_json(self) -> dict:
        out = {
            "verdict": self.status.value,
            "witness_X": matrix_json(self.witness_X.matrix) if self.witness_X else None,
            "eigenvalues": [format_rational(a) for a in self.eigenvalues],
            "violating_quadruple": ([format_rational(a) for a in self.violating_quadruple]
                                    if self.violating_quadruple else None),
            "joint_solution_dim": self.joint_solution_dim,
            "candidates_tried": self.tried,
        }
        out.update(self.conditions)
        return out


# ---------------------------------------------------------------------------
# group action on cochains


def _neg1_action(model: GradedModel, g: Mat, ginv: Mat) -> list:
    """``U[i][j]``: coefficient of ``X_i`` in ``Ad_{g^-1} X_j`` modulo ``p``."""
    n = model.n
    U = [[ZERO] * n for _ in range(n)]
    for j, X in enumerate(model.basis_neg1):
        c = model.coords(ginv @ X @ g)
        for i in range(n):
            U[i][j] = c[i]
    return U


def _adjoint(model: GradedModel, g: Mat, ginv: Mat) -> list:
    """Sparse columns of ``Ad_g`` in the full basis."""
    cols = []
    for B in model.basis:
        c = model.coords(g @ B @ ginv)
        cols.append({a: v for a, v in enumerate(c) if v})
    return cols


def _minor(U, rows, cols) -> Fraction:
    k = len(rows)
    if k == 0:
        return ONE
    if k == 1:
        return U[rows[0]][cols[0]]
    if k == 2:
        (a, b), (c, d) = rows, cols
        return U[a][c] * U[b][d] - U[a][d] * U[b][c]
    total = ZERO
    for perm in itertools.permutations(range(k)):
        sign, _ = _sort_sign(perm)
        prod = ONE
        for r, p in zip(rows, perm):
            prod *= U[r][cols[p]]
            if not prod:
                break
        total += sign * prod
    return total


def cochain_action_columns(model: GradedModel, g: Mat, k: int,
                           value_degree: int | None = None) -> list:
    """Sparse columns of the action of ``g`` on ``k``-cochains.

    ``(g . phi)(X_1, ..., X_k) = Ad_g phi(Ad_{g^-1} X_1, ..., Ad_{g^-1} X_k)``
    with the arguments read modulo ``p``.  ``value_degree`` restricts the
    columns to cochains valued in ``g_j``.
    """
    ginv = inverse(g)
    U = _neg1_action(model, g, ginv)
    Ad = _adjoint(model, g, ginv)
    space = cochain_space(model, k)
    idx = space.slice(value_degree) if value_degree is not None else range(space.dim)
    minors = {}
    out = []
    for flat in idx:
        I, b = space.unpack(flat)
        col = {}
        for J in space.combos:
            key = (I, J)
            m = minors.get(key)
            if m is None:
                m = minors[key] = _minor(U, I, J)
            if not m:
                continue
            base = space.index(J, 0)
            for c, v in Ad[b].items():
                col[base + c] = m * v
        out.append(col)
    return out


def group_action_on_cochains(model: GradedModel, g, k: int) -> Mat:
    g = g.matrix if isinstance(g, GroupCandidate) else g
    cols = cochain_action_columns(model, g, k)
    return Mat.from_columns(cochain_space(model, k).dim, cols)


@dataclass(frozen=True)
class FixedCurvature:
    """Dimensions of curvature values fixed by a symmetry, per value degree."""

    fixed: dict
    fixed_normal: dict
    fixed_harmonic: dict | None

    def to_json(self) -> dict:
        f = lambda d: {str(k): v for k, v in sorted(d.items())}  # noqa: E731
        return {"fixed": f(self.fixed), "fixed_in_ker_codifferential": f(self.fixed_normal),
                "fixed_harmonic": f(self.fixed_harmonic) if self.fixed_harmonic else None}


def _shift(col: dict, offset: int) -> dict:
    return {r + offset: v for r, v in col.items()}


def _minus_identity(cols: list, idx) -> list:
    out = []
    for col, i in zip(cols, idx):
        c = dict(col)
        nv = c.get(i, ZERO) - ONE
        if nv:
            c[i] = nv
        else:
            c.pop(i, None)
        out.append(c)
    return out


def symmetry_fixed_curvature(model: GradedModel, g) -> FixedCurvature:
    """Fixed 2-cochains of ``g`` per value degree, with and without ``ker d*``.

    ``fixed_harmonic`` (fixed classes in ``H^2`` per degree) is only computed
    when ``g`` preserves the grading, since only then does ``g`` commute with
    the codifferential.
    """
    g = g.matrix if isinstance(g, GroupCandidate) else g
    space2 = cochain_space(model, 2)
    total = space2.dim
    fixed, normal, harmonic = {}, {}, {}
    graded = preserves_grading(model, g)
    act_full = cochain_action_columns(model, g, 2) if graded else None
    for j in (-1, 0, 1):
        idx = space2.slice(j)
        act = _minus_identity(cochain_action_columns(model, g, 2, j), idx)
        fixed[j] = len(idx) - sparse_rank(act)
        if j < 1:
            dstar = codifferential_columns(model, 1, j)
            stacked = [{**a, **_shift(b, total)} for a, b in zip(act, dstar)]
            normal[j] = len(idx) - sparse_rank(stacked)
        else:
            normal[j] = fixed[j]
        if graded:
            if j > -1:
                image = codifferential_columns(model, 2, j - 1)
                moved = []
                for col in image:
                    acc = {}
                    for r, v in col.items():
                        for r2, w in act_full[r].items():
                            acc[r2] = acc.get(r2, ZERO) + v * w
                        acc[r] = acc.get(r, ZERO) - v
                    moved.append({k: v for k, v in acc.items() if v})
                in_image = sparse_rank(image) - sparse_rank(moved)
            else:
                in_image = 0
            harmonic[j] = normal[j] - in_image
    return FixedCurvature(fixed, normal, harmonic if graded else None)


# ---------------------------------------------------------------------------
# spectra and the eigenvalue gate


def _degree_of(x: AlgebraElement) -> set:
    return {x.model.degrees[a] for a, c in enumerate(x.coords) if c}


def neg1_adjoint_matrix(H: AlgebraElement) -> Mat:
    """Matrix of ``ad H`` on ``g_-1`` for ``H`` in ``g_0``."""
    model = H.model
    cols = []
    for X in model.basis_neg1:
        c = model.coords(H.matrix.commutator(X))
        cols.append({i: c[i] for i in range(model.n) if c[i]})
        if any(c[a] for a in range(model.n, model.dim)):
            raise ValueError("bracket element does not preserve g_-1")
    return Mat.from_columns(model.n, cols)


def bracket_spectrum(model: GradedModel, Z: AlgebraElement, X: AlgebraElement) -> SpectrumReport:
    if Z.model is not model or X.model is not model:
        raise ModelMismatch("elements belong to a different model")
    if not _degree_of(Z) <= {1}:
        raise ValueError("Z must lie in g_1")
    if not _degree_of(X) <= {-1}:
        raise ValueError("X must lie in g_-1")
    H = AlgebraElement(X.matrix.commutator(Z.matrix), model)
    spectrum: SpectrumResult = rational_spectrum(neg1_adjoint_matrix(H))
    return SpectrumReport(H, spectrum.roots, spectrum.diagonalizable, spectrum.fully_split)


def gate_violation(eigenvalues) -> tuple | None:
    """First ``(a, b, c, d)`` over distinct eigenvalues with ``a + b + c - d = 0``."""
    vals = sorted(set(eigenvalues))
    for a, b, c in itertools.combinations_with_replacement(vals, 3):
        s = a + b + c
        if s in vals:
            return (a, b, c, s)
    return None


def eigenvalue_gate(spectrum) -> bool:
    """True iff no choice of eigenvalues (repeats allowed) has ``a + b + c - d = 0``.

    Accepts a :class:`SpectrumReport` or a plain collection of eigenvalues.
    """
    vals = spectrum.eigenvalues if isinstance(spectrum, SpectrumReport) else spectrum
    return gate_violation(vals) is None


# ---------------------------------------------------------------------------
# algebraic action on the Weyl slice


def _weyl_slice_check(W: Cochain):
    space = W.space
    if space.k != 2:
        raise ValueError("W must be a 2-cochain")
    for i, c in enumerate(W.coefficients):
        if c and space.value_degree(i) != 0:
            raise ValueError("W must take values in g_0")


def algebraic_action_columns(model: GradedModel, A) -> list:
    """Sparse columns of ``W -> A . W`` on 2-cochains valued in ``g_0``.

    ``(A . W)(x, y) = [A, W(x, y)] - W([A, x], y) - W(x, [A, y])``; reading the
    ``g_0`` values as endomorphisms of ``g_-1`` this is the four-term action on
    ``W(x, y)(z)``.
    """
    a = A.coords if isinstance(A, AlgebraElement) else list(A)
    space = cochain_space(model, 2)
    n, d = model.n, model.dim
    # D[s][j]: coefficient of X_s in [A, X_j]
    D = [[ZERO] * n for _ in range(n)]
    for j in range(n):
        x = [ZERO] * d
        x[j] = ONE
        c = model.bracket_coords(a, x)
        for s in range(n):
            D[s][j] = c[s]
    ad_a = model.ad_columns(a)
    out = []
    for flat in space.slice(0):
        I, b = space.unpack(flat)
        col = {}
        base = space.index(I, 0)
        for c, v in ad_a[b].items():
            col[base + c] = col.get(base + c, ZERO) + v
        # pullback of Z^I along the derivation ad A on both arguments
        for J in space.combos:
            coef = ZERO
            for t in range(2):
                for s in range(n):
                    dv = D[s][J[t]]
                    if not dv:
                        continue
                    args = list(J)
                    args[t] = s
                    sign, srt = _sort_sign(args)
                    if sign and srt == I:
                        coef += sign * dv
            if coef:
                key = space.index(J, b)
                col[key] = col.get(key, ZERO) - coef
        out.append({k: v for k, v in col.items() if v})
    return out


def algebraic_action(model: GradedModel, A: AlgebraElement, W: Cochain) -> Cochain:
    if A.model is not model or W.space.model is not model:
        raise ModelMismatch("elements belong to a different model")
    if not _degree_of(A) <= {0}:
        raise ValueError("A must lie in g_0")
    _weyl_slice_check(W)
    space = W.space
    cols = algebraic_action_columns(model, A)
    out = [ZERO] * space.dim
    for flat, col in zip(space.slice(0), cols):
        x = W.coefficients[flat]
        if x:
            for r, v in col.items():
                out[r] += x * v
    return Cochain(space, tuple(out))


def joint_weyl_solutions(model: GradedModel, Z: AlgebraElement) -> int:
    """``dim {W valued in g_0 : [X, Z] . W = 0 for all X} cap ker d*``."""
    space = cochain_space(model, 2)
    total = space.dim
    blocks = []
    for X in model.basis_neg1:
        H = model.coords(X.commutator(Z.matrix))
        blocks.append(algebraic_action_columns(model, H))
    blocks.append(codifferential_columns(model, 1, 0))
    stacked = []
    for cols in zip(*blocks):
        merged = {}
        for t, c in enumerate(cols):
            merged.update(_shift(c, t * total))
        stacked.append(merged)
    return len(stacked) - sparse_rank(stacked)


# ---------------------------------------------------------------------------


def _candidate_X(model: GradedModel, Z: AlgebraElement, seed: int, random_tries: int):
    yield cartan_dual(Z)
    for X in model.basis_neg1:
        yield AlgebraElement(X, model)
    rng = random.Random(seed)
    for _ in range(random_tries):
        c = [Fraction(rng.randint(-2, 2)) for _ in range(model.n)]
        if any(c):
            yield model.element(c + [ZERO] * (model.dim - model.n))


def rank_conditions(model: GradedModel, Z: AlgebraElement) -> dict:
    if model.family is not Family.GRASSMANNIAN:
        return {}
    p, q = model.params
    r = block_rank(Z)
    return {"Z_rank": r, "max_rank": min(p, q), "has_max_rank": r == min(p, q)}


def two_symmetry_flatness(model: GradedModel, Z: AlgebraElement,
                          extra_conditions: dict | None = None, *,
                          seed: int = 0, random_tries: int = 8) -> GateVerdict:
    """Decide whether two symmetries with difference ``Z`` force flatness.

    Candidates ``X`` are tried in a fixed order: the Cartan dual of ``Z``,
    then each ``g_-1`` basis vector, then seeded small-integer combinations.
    """
    if Z.model is not model:
        raise ModelMismatch("Z belongs to a different model")
    if Z.is_zero():
        raise ValueError("the difference of two distinct symmetries is nonzero")
    if not _degree_of(Z) <= {1}:
        raise ValueError("Z must lie in g_1")
    conditions = dict(rank_conditions(model, Z))
    if extra_conditions:
        conditions.update(extra_conditions)
    joint = joint_weyl_solutions(model, Z)
    conditions["cross_check"] = "ok"
    first_split = None
    tried = 0
    for X in _candidate_X(model, Z, seed, random_tries):
        tried += 1
        spectrum = bracket_spectrum(model, Z, X)
        if not (spectrum.fully_split and spectrum.diagonalizable):
            continue
        if first_split is None:
            first_split = spectrum
        if eigenvalue_gate(spectrum):
            if joint != 0:
                conditions["cross_check"] = "failed"
                raise AssertionError(
                    f"{model.label}: gate passed but {joint} Weyl solutions survive")
            return GateVerdict(GateStatus.CURVATURE_VANISHES, X, None,
                               spectrum.eigenvalues, joint, conditions, tried)
    if first_split is None:
        return GateVerdict(GateStatus.NON_RATIONAL_SPECTRUM, None, None, (),
                           joint, conditions, tried)
    return GateVerdict(GateStatus.INCONCLUSIVE, None,
                       gate_violation(first_split.eigenvalues),
                       first_split.eigenvalues, joint, conditions, tried)


__all__ = [
    "FixedCurvature", "GateStatus", "GateVerdict", "SpectrumReport",
    "algebraic_action", "algebraic_action_columns", "bracket_spectrum",
    "cochain_action_columns", "eigenvalue_gate", "gate_violation",
    "group_action_on_cochains", "joint_weyl_solutions", "neg1_adjoint_matrix",
    "rank_conditions", "symmetry_fixed_curvature", "two_symmetry_flatness",
]
