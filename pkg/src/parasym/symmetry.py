"""Group elements inducing symmetries of the homogeneous model.

A symmetry at the origin comes from ``g = g0 exp Z`` in ``P`` where ``g0``
preserves the grading and acts as ``-id`` on ``g_-1``; ``Z`` in ``g_1`` is
free.  The ``g0`` part is found by solving the linear condition
``g0 X = -X g0`` over grading-preserving (block diagonal) matrices and then
imposing the group constraints of the chosen ``G`` on that small space.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import (ONE, ZERO, Mat, det, format_rational, inverse,
                     rational_nth_root, sparse_kernel_basis)
from .models import ConstraintKind, GradedModel, complex_structures


class SolutionSpaceTooLarge(RuntimeError):
    pass


class Verdict(enum.Enum):
    SYMMETRIC = "Symmetric"
    NOT_SYMMETRIC = "NotSymmetric"


@dataclass(frozen=True)
class Membership:
    invertible: bool
    grading_preserved: bool
    family_constraints: bool

    def ok(self) -> bool:
        return self.invertible and self.grading_preserved and self.family_constraints


@dataclass(frozen=True)
class GroupCandidate:
    matrix: Mat
    membership: Membership

    def to_json(self):
        return matrix_json(self.matrix)


def matrix_json(m: Mat) -> list:
    return [[format_rational(x) for x in m.row(i)] for i in range(m.rows)]


@dataclass(frozen=True)
class SymmetryReport:
    family: str
    params: dict
    group_variant: str
    g0_solutions: tuple
    family_dimension_of_exp_part: int
    verdict: Verdict
    kernel: tuple = ()
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "group_variant": self.group_variant,
            "verdict": self.verdict.value,
            "g0_solutions": [c.to_json() for c in self.g0_solutions],
            "exp_part_dimension": self.family_dimension_of_exp_part,
            "kernel": [c.to_json() for c in self.kernel],
            "notes": self.notes,
        }


# ---------------------------------------------------------------------------
# helpers


def grading_blocks(model: GradedModel) -> list:
    """Index groups of the ambient space on which the grading element is constant."""
    E = model.matrix_of(model.grading_coords)
    N = model.ambient_size
    if any(E[i, j] for i in range(N) for j in range(N) if i != j):
        raise AssertionError("grading element is not diagonal in this realisation")
    groups = {}
    for i in range(N):
        groups.setdefault(E[i, i], []).append(i)
    return [groups[k] for k in sorted(groups, reverse=True)]


def exp_nilpotent(Z: Mat) -> Mat:
    """``exp Z`` for nilpotent ``Z``; the series stops at the first zero power."""
    N = Z.rows
    out = Mat.identity(N)
    power = Mat.identity(N)
    fact = 1
    for k in range(1, N + 1):
        power = power @ Z
        if power.is_zero():
            return out
        fact *= k
        out = out + power.scale(Fraction(1, fact))
    if not (power @ Z).is_zero():
        raise ValueError("matrix is not nilpotent")
    return out


def _lower_block(model: GradedModel, g: Mat) -> Mat:
    k = model.group_constraints.split
    N = model.ambient_size
    return Mat.from_rows([[g[i, j] for j in range(k, N)] for i in range(k, N)])


def satisfies_group(model: GradedModel, g: Mat) -> bool:
    """Family constraints of the model's group (for quotients: of a representative)."""
    gc = model.group_constraints
    d = det(g)
    if d == 0:
        return False
    if gc.variant == "Sl":
        return d == 1 and det(_lower_block(model, g)) > 0
    if gc.variant == "PGl":
        return True
    if gc.kind is ConstraintKind.ORTHOGONAL_J:
        Q = gc.form
        lhs = g @ Q @ g.transpose()
        if gc.variant == "O":
            return lhs == Q
        c = lhs[0, Q.cols - 1]
        return c != 0 and lhs == Q.scale(c)
    if gc.kind is ConstraintKind.QUATERNIONIC_QUOTIENT:
        return all(g.commutator(J).is_zero() for J in _qstructures(model))
    raise AssertionError(f"unknown group variant {gc.variant}")


def _qstructures(model: GradedModel) -> list:
    return complex_structures(model.ambient_size // 4)


def preserves_grading(model: GradedModel, g: Mat, ginv: Mat | None = None) -> bool:
    ginv = inverse(g) if ginv is None else ginv
    for a, B in enumerate(model.basis):
        try:
            c = model.coords(g @ B @ ginv)
        except ValueError:
            return False
        deg = model.degrees[a]
        if any(x for b, x in enumerate(c) if model.degrees[b] != deg):
            return False
    return True


def membership(model: GradedModel, g: Mat, require_grading: bool = True) -> Membership:
    if det(g) == 0:
        return Membership(False, False, False)
    ginv = inverse(g)
    graded = preserves_grading(model, g, ginv) if require_grading else True
    return Membership(True, graded, satisfies_group(model, g))


def _canonical_class(model: GradedModel, g: Mat) -> Mat:
    """Representative used to de-duplicate elements of quotient groups."""
    gc = model.group_constraints
    if gc.variant == "PO":
        neg = -g
        return min(g, neg, key=lambda m: m.entries)
    if gc.quotient:
        lead = next(x for x in g.entries if x)
        return g.scale(1 / lead)
    return g


def _linear_constraint_columns(model: GradedModel, unknowns, conditions) -> list:
    """Sparse columns of the map ``u -> [cond(E_rc) for cond in conditions]``.

    ``unknowns`` lists matrix positions ``(r, c)``; each condition maps an
    elementary matrix to a matrix whose entries become equations.
    """
    N = model.ambient_size
    cols = []
    for (r, c) in unknowns:
        Erc = Mat.from_sparse(N, N, {(r, c): ONE})
        col = {}
        for t, cond in enumerate(conditions):
            for (i, j), v in cond(Erc).to_sparse().items():
                col[t * N * N + i * N + j] = v
        cols.append(col)
    return cols


def _span_matrices(model, unknowns, vecs) -> list:
    N = model.ambient_size
    out = []
    for v in vecs:
        d = {pos: x for pos, x in zip(unknowns, v) if x}
        out.append(Mat.from_sparse(N, N, d))
    return out


def _solve_on_span(model: GradedModel, span: list) -> list:
    """All group elements in the linear span, up to the group's quotient.

    A 1-dimensional span ``t S`` is solved exactly in ``t``; larger spans
    are searched over sign patterns of the parameters.
    """
    gc = model.group_constraints
    N = model.ambient_size
    found = []
    if len(span) == 1:
        S = span[0]
        if gc.quotient:
            if det(S) != 0:
                found.append(S)
        elif gc.variant == "Sl":
            dS = det(S)
            if dS != 0:
                found.extend(S.scale(t) for t in rational_nth_root(1 / dS, N))
        elif gc.variant == "O":
            Q = gc.form
            lhs = S @ Q @ S.transpose()
            c = lhs[0, N - 1]
            if c != 0 and lhs == Q.scale(c):
                found.extend(S.scale(t) for t in rational_nth_root(1 / c, 2))
    else:
        for ts in itertools.product((-1, 0, 1), repeat=len(span)):
            if not any(ts):
                continue
            g = Mat.zeros(N, N)
            for t, S in zip(ts, span):
                if t:
                    g = g + S.scale(t)
            found.append(g)
    sols = {}
    for g in found:
        if not satisfies_group(model, g):
            continue
        rep = _canonical_class(model, g)
        sols.setdefault(rep.entries, rep)
    return [sols[k] for k in sorted(sols)]


def _family_linear_conditions(model: GradedModel) -> list:
    if model.group_constraints.kind is ConstraintKind.QUATERNIONIC_QUOTIENT:
        return [lambda M, J=J: M.commutator(J) for J in _qstructures(model)]
    return []


# ---------------------------------------------------------------------------
# public operations


def anticommutant_g0(model: GradedModel) -> list:
    """Grading-preserving ``g0`` in ``G`` with ``Ad_{g0} X = -X`` on ``g_-1``."""
    unknowns = [(r, c) for block in grading_blocks(model) for r in block for c in block]
    conds = [lambda M, X=X: M @ X + X @ M for X in model.basis_neg1]
    cols = _linear_constraint_columns(model, unknowns, conds)
    space = sparse_kernel_basis(cols)
    if len(space) > 4:
        raise SolutionSpaceTooLarge(
            f"{model.label}: anticommutant space has dimension {len(space)}")
    extra = _family_linear_conditions(model)
    if extra:
        span = _span_matrices(model, unknowns, space)
        # restrict to the subspace satisfying the linear family conditions
        sub_cols = []
        for S in span:
            col = {}
            for t, cond in enumerate(extra):
                for (i, j), v in cond(S).to_sparse().items():
                    col[t * model.ambient_size ** 2 + i * model.ambient_size + j] = v
            sub_cols.append(col)
        combos = sparse_kernel_basis(sub_cols)
        space = []
        for w in combos:
            g = Mat.zeros(model.ambient_size, model.ambient_size)
            for c, S in zip(w, span):
                if c:
                    g = g + S.scale(c)
            space.append([g[r, c] for (r, c) in unknowns])
    span = _span_matrices(model, unknowns, space)
    span = [S.scale(1 / next(x for x in S.entries if x)) for S in span]
    out = []
    for g in _solve_on_span(model, span):
        cand = GroupCandidate(g, membership(model, g))
        if not (cand.membership.ok() and check_symmetry_element(model, cand)):
            raise AssertionError(f"{model.label}: solver produced an invalid element")
        out.append(cand)
    return out


def check_symmetry_element(model: GradedModel, g) -> bool:
    """True iff ``g`` acts as ``-id`` on ``g_-1`` modulo ``p``."""
    g = g.matrix if isinstance(g, GroupCandidate) else g
    if det(g) == 0:
        raise ValueError("symmetry candidates must be invertible")
    ginv = inverse(g)
    neg = model.degree_indices(-1)
    for a, X in enumerate(model.basis_neg1):
        try:
            c = model.coords(g @ X @ ginv)
        except ValueError:
            return False
        for b in neg:
            want = -ONE if b == neg[a] else ZERO
            if c[b] != want:
                return False
    return True


def geometry_kernel(model: GradedModel) -> list:
    """Elements of ``G`` acting trivially on ``g`` by conjugation."""
    N = model.ambient_size
    unknowns = [(r, c) for r in range(N) for c in range(N)]
    conds = [lambda M, B=B: M @ B - B @ M for B in model.basis]
    conds += _family_linear_conditions(model)
    space = sparse_kernel_basis(_linear_constraint_columns(model, unknowns, conds))
    span = _span_matrices(model, unknowns, space)
    span = [S.scale(1 / next(x for x in S.entries if x)) for S in span]
    out = []
    for g in _solve_on_span(model, span):
        out.append(GroupCandidate(g, membership(model, g)))
    return out


def in_kernel(model: GradedModel, g: Mat) -> bool:
    if det(g) == 0 or not satisfies_group(model, g):
        return False
    return all((g @ B - B @ g).is_zero() for B in model.basis)


def symmetry_verdict(model: GradedModel) -> SymmetryReport:
    sols = anticommutant_g0(model)
    notes = {}
    if not sols:
        notes["obstruction"] = _obstruction_note(model)
    kernel = geometry_kernel(model)
    return SymmetryReport(
        model.family.value, model.param_dict, model.group_constraints.variant,
        tuple(sols), model.dims["one"],
        Verdict.SYMMETRIC if sols else Verdict.NOT_SYMMETRIC,
        tuple(kernel), notes)


def _obstruction_note(model: GradedModel) -> str:
    if model.group_constraints.variant == "Sl":
        return ("determinant: the anticommuting block-diagonal elements have no "
                "representative with det 1 and positive lower-block determinant")
    return "no element of G0 satisfies the group constraints"


def symmetry_family_element(g0: Mat, Z: Mat) -> Mat:
    """``g0 exp Z``: the general element inducing the same symmetry as ``g0``."""
    return g0 @ exp_nilpotent(Z)


__all__ = [
    "GroupCandidate", "Membership", "SolutionSpaceTooLarge", "SymmetryReport",
    "Verdict", "anticommutant_g0", "check_symmetry_element", "exp_nilpotent",
    "geometry_kernel", "grading_blocks", "in_kernel", "matrix_json", "membership",
    "preserves_grading", "satisfies_group", "symmetry_family_element",
    "symmetry_verdict",
]
