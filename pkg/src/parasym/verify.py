"""The acceptance matrix behind ``parasym verify-all``.

Each check is a named row tied to one acceptance criterion and one model (or
a small group of models).  A budget bounds the family parameters; rows whose
models fall outside it are reported as skipped rather than dropped, so the
row list is the same for every run.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import __version__
from .cohomology import codifferential_squares, harmonic_h2
from .gate import (GateStatus, bracket_spectrum, eigenvalue_gate,
                   symmetry_fixed_curvature,
                   two_symmetry_flatness, algebraic_action, cochain_action_columns)
from .linalg import ONE, ZERO, Mat
from .models import (Family, GradedModel, build_model, cartan_dual,
                     grading_element, structure_violations)
from .oracles import (action_bruteforce, basis_cochains, cochain_as_endomorphisms,
                      four_term_bruteforce)
from .symmetry import (Verdict, anticommutant_g0, geometry_kernel,
                       symmetry_family_element, symmetry_verdict)


class BudgetError(ValueError):
    pass


@dataclass(frozen=True)
class Budget:
    m: int = 5          # projective m
    pq: int = 6         # conformal and Grassmannian p + q
    quat: int = 2       # quaternionic m

    @classmethod
    def parse(cls, text: str | None) -> "Budget":
        if not text:
            return cls()
        values = {}
        for part in text.split(","):
            match = re.fullmatch(r"\s*(m|pq|quat)\s*=\s*(\d+)\s*", part)
            if not match:
                raise BudgetError(f"malformed budget entry {part!r}; expected m=N, pq=N or quat=N")
            values[match.group(1)] = int(match.group(2))
        return cls(**values)

    def allows(self, family: Family, params: tuple) -> bool:
        if family is Family.PROJECTIVE:
            return params[0] <= self.m
        if family is Family.QUATERNIONIC:
            return params[0] <= self.quat
        return sum(params) <= self.pq


FULL = Budget()

PROJECTIVE_M = (2, 3, 4, 5)
CONFORMAL_PQ = tuple((p, s - p) for s in (3, 4, 5, 6) for p in range(s, (s - 1) // 2, -1))
GRASSMANNIAN_PQ = ((2, 2), (2, 3), (2, 4), (3, 3))
QUATERNIONIC_M = (1, 2)


def catalog(budget: Budget = FULL) -> list:
    """``(family, params)`` of every catalog model inside ``budget``."""
    rows = [(Family.PROJECTIVE, (m,)) for m in PROJECTIVE_M]
    rows += [(Family.CONFORMAL, pq) for pq in CONFORMAL_PQ]
    rows += [(Family.GRASSMANNIAN, pq) for pq in GRASSMANNIAN_PQ]
    rows += [(Family.QUATERNIONIC, (m,)) for m in QUATERNIONIC_M]
    return [r for r in rows if budget.allows(*r)]


@dataclass
class CheckResult:
    criterion: int
    name: str
    target: str
    status: str                  # "pass", "fail" or "skip"
    detail: str = ""

    def to_json(self) -> dict:
        return {"criterion": self.criterion, "name": self.name, "target": self.target,
                "status": self.status, "detail": self.detail}

    def line(self) -> str:
        tail = f"  ({self.detail})" if self.detail else ""
        return f"{self.status.upper():4} [{self.criterion:2}] {self.name}: {self.target}{tail}"


@dataclass
class RunReport:
    command: list
    checks: list = field(default_factory=list)
    version: str = __version__

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skip": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_json(self) -> dict:
        return {"command": self.command, "version": self.version,
                "summary": self.counts(), "ok": self.ok,
                "checks": [c.to_json() for c in self.checks]}


# ---------------------------------------------------------------------------
# reusable model-level predicates


def top_row_Z(model: GradedModel, vector) -> Mat:
    """``g_1`` matrix with top block ``vector`` (the ``V`` that parametrises a conformal difference)."""
    coords = [ZERO] * model.dim
    pos = list(model.degree_indices(1))
    if model.family is Family.QUATERNIONIC:
        # real part of each quaternion entry
        for i, v in enumerate(vector):
            coords[pos[4 * i]] = Fraction(v)
    else:
        for i, v in enumerate(vector):
            coords[pos[i]] = Fraction(v)
    return model.matrix_of(coords)


def grassmannian_Z(model: GradedModel, rank: int) -> Mat:
    p, q = model.params
    N = p + q
    return Mat.from_sparse(N, N, {(i, p + i): ONE for i in range(rank)})


def conformal_form_value(model: GradedModel, V) -> Fraction:
    p, q = model.params
    return sum((Fraction(v) ** 2 * (1 if i < p else -1) for i, v in enumerate(V)), ZERO)


def conformal_pairs(model: GradedModel) -> list:
    """Vectors ``V`` with nonzero length used in the spectrum checks."""
    n = sum(model.params)
    out = [[1] + [0] * (n - 1), [0] * (n - 1) + [1]]
    generic = list(range(1, n + 1))
    if conformal_form_value(model, generic) != 0:
        out.append(generic)
    return out


def torsion_free_targets(budget: Budget) -> list:
    out = []
    for fam, params in catalog(budget):
        for group in {Family.PROJECTIVE: ("PGl", "Sl"), Family.GRASSMANNIAN: ("PGl",),
                      Family.CONFORMAL: ("O", "PO"), Family.QUATERNIONIC: ("PGlH",)}[fam]:
            out.append((fam, params, group))
    return out


# ---------------------------------------------------------------------------
# criteria


def _c1_structure(model):
    bad = {k: v for k, v in structure_violations(model).items() if v}
    return not bad, ", ".join(f"{k}={v}" for k, v in bad.items())


def _c2_conformal(model):
    N = model.ambient_size
    E = [ONE] * (N - 2)
    want = {Mat.diag([-1] + E + [-1]), Mat.diag([1] + [-x for x in E] + [1])}
    got = {c.matrix for c in anticommutant_g0(model)}
    kern = {c.matrix for c in geometry_kernel(model)}
    want_k = {Mat.identity(N), Mat.identity(N).scale(-1)}
    ok = got == want and len(got) == 2 and kern == want_k
    return ok, f"{len(got)} g0 solutions, kernel size {len(kern)}"


def _c3_parity(m):
    sl = symmetry_verdict(build_model(Family.PROJECTIVE, (m,), "Sl")).verdict
    pgl = symmetry_verdict(build_model(Family.PROJECTIVE, (m,), "PGl")).verdict
    want_sl = Verdict.SYMMETRIC if m % 2 == 0 else Verdict.NOT_SYMMETRIC
    ok = sl is want_sl and pgl is Verdict.SYMMETRIC
    return ok, f"Sl {sl.value}, PGl {pgl.value}"


def _c4_complex(model):
    sq = codifferential_squares(model)
    nz = sum(1 for cols in sq for c in cols if c)
    return nz == 0, f"{nz} nonzero columns"


HARMONIC_EXPECTATIONS = {
    (Family.PROJECTIVE, (2,)): ("no2",),
    (Family.GRASSMANNIAN, (3, 3)): ("no2", "has1"),
}


def _c5_expect(fam, params):
    if (fam, params) in HARMONIC_EXPECTATIONS:
        return HARMONIC_EXPECTATIONS[(fam, params)]
    if fam is Family.CONFORMAL and sum(params) == 3:
        return ("no2",)
    return ("has2",)


def _c5_harmonic(model):
    h = harmonic_h2(model).h2_by_degree
    exp = _c5_expect(model.family, model.params)
    ok = True
    if "no2" in exp:
        ok &= h[2] == 0
    if "has2" in exp:
        ok &= h[2] > 0
    if "has1" in exp:
        ok &= h[1] > 0
    return ok, f"h2 by degree {h[1]}/{h[2]}/{h[3]}"


def _c6_torsion(model):
    sols = anticommutant_g0(model)
    if not sols:
        return True, "not symmetric; nothing to check"
    bad = []
    for c in sols:
        fx = symmetry_fixed_curvature(model, c)
        if fx.fixed[-1] or fx.fixed[1]:
            bad.append(fx.fixed)
    return not bad, f"{len(sols)} g0 checked" + (f"; violations {bad}" if bad else "")


def _c7_projective(model):
    m = model.params[0]
    Z = model.wrap(model.basis_1[0])
    X = model.wrap(model.basis_neg1[0])
    spectrum = bracket_spectrum(model, Z, X)
    want = tuple(sorted([Fraction(1)] * (m - 1) + [Fraction(2)]))
    ok = spectrum.eigenvalues == want and spectrum.diagonalizable and eigenvalue_gate(spectrum)
    dual_ok = cartan_dual(Z).matrix == X.matrix
    return ok and dual_ok, f"eigenvalues {[str(a) for a in spectrum.eigenvalues]}"


def _c7_conformal(model):
    details = []
    ok = True
    n = sum(model.params)
    for V in conformal_pairs(model):
        Z = model.wrap(top_row_Z(model, V))
        X = cartan_dual(Z)
        spectrum = bracket_spectrum(model, Z, X)
        c = conformal_form_value(model, V)
        ok &= spectrum.eigenvalues == (c,) * n and spectrum.diagonalizable and eigenvalue_gate(spectrum)
        E = grading_element(model)
        ok &= spectrum.bracket_element.matrix == E.matrix.scale(-c)
        details.append(f"V={V}: {c}^{n}")
    return ok, "; ".join(details)


def _c7_null(model):
    Z = model.wrap(top_row_Z(model, [1, 0, 0, 1]))
    spectrum = bracket_spectrum(model, Z, cartan_dual(Z))
    verdict = two_symmetry_flatness(model, Z)
    ok = (spectrum.bracket_element.is_zero() and set(spectrum.eigenvalues) == {ZERO}
          and verdict.status is GateStatus.INCONCLUSIVE)
    return ok, f"bracket zero={spectrum.bracket_element.is_zero()}, verdict {verdict.status.value}"


def _gate_cases(budget: Budget) -> list:
    """``(label, model, Z matrix, expected status)`` for the flatness verdicts."""
    cases = []
    for fam, params in catalog(budget):
        model = build_model(fam, params)
        if fam is Family.PROJECTIVE:
            cases.append(("canonical Z", model, model.basis_1[0], GateStatus.CURVATURE_VANISHES))
        elif fam is Family.QUATERNIONIC:
            cases.append(("canonical Z", model, model.basis_1[0], GateStatus.CURVATURE_VANISHES))
        elif fam is Family.GRASSMANNIAN and params[0] == 2:
            cases.append(("rank-2 Z", model, grassmannian_Z(model, 2), GateStatus.CURVATURE_VANISHES))
            if params == (2, 3):
                cases.append(("rank-1 Z", model, grassmannian_Z(model, 1), GateStatus.INCONCLUSIVE))
    return cases


def _c8_gate(model, Zm, expected):
    verdict = two_symmetry_flatness(model, model.wrap(Zm))
    ok = verdict.status is expected
    if verdict.status is GateStatus.CURVATURE_VANISHES:
        ok &= verdict.joint_solution_dim == 0
    return ok, (f"{verdict.status.value}, joint Weyl solutions {verdict.joint_solution_dim}"
                + (f", Z rank {verdict.conditions['Z_rank']}" if "Z_rank" in verdict.conditions else ""))


def _c9_oracles(model):
    g0 = anticommutant_g0(model)[0].matrix
    Z = model.matrix_of(model.dual_g1_coords[0])
    mismatches = 0
    checked = 0
    for g in (g0, symmetry_family_element(g0, Z.scale(3))):
        cols = cochain_action_columns(model, g, 2)
        for i, phi in enumerate(basis_cochains(model, 2)):
            brute = action_bruteforce(model, g, phi).coefficients
            fast = [ZERO] * len(brute)
            for r, v in cols[i].items():
                fast[r] = v
            mismatches += tuple(fast) != brute
            checked += 1
    elems = [grading_element(model)] + [model.basis_element(a) for a in model.degree_indices(0)]
    for A in elems:
        for W in basis_cochains(model, 2, 0):
            lhs = cochain_as_endomorphisms(model, algebraic_action(model, A, W))
            mismatches += lhs != four_term_bruteforce(model, A.matrix, W)
            checked += 1
    return mismatches == 0, f"{checked} basis evaluations, {mismatches} mismatches"


def _c10_gate_scale(model, Zm):
    a = two_symmetry_flatness(model, model.wrap(Zm)).status
    b = two_symmetry_flatness(model, model.wrap(Zm.scale(3))).status
    return a is b, f"{a.value} vs {b.value}"


def _c10_killing_scale(model):
    a = harmonic_h2(model).h2_by_degree
    b = harmonic_h2(model, pairing_scale=2).h2_by_degree
    return a == b, f"{a} vs {b}"


# ---------------------------------------------------------------------------


def _full_rows() -> list:
    """Every row of the default matrix: ``(criterion, name, target, family, params, thunk)``."""
    rows = []

    def add(crit, name, fam, params, fn, target=None):
        target = target or _label(fam, params)
        rows.append((crit, name, target, fam, params, fn))

    for fam, params in catalog():
        add(1, "structure", fam, params, lambda f=fam, p=params: _c1_structure(build_model(f, p)))
    for fam, params in catalog():
        if fam is Family.CONFORMAL:
            add(2, "conformal symmetry elements", fam, params,
                lambda p=params: _c2_conformal(build_model(Family.CONFORMAL, p, "O")))
    for m in PROJECTIVE_M:
        add(3, "projective parity", Family.PROJECTIVE, (m,), lambda m=m: _c3_parity(m))
    for fam, params in catalog():
        add(4, "codifferential squares to zero", fam, params,
            lambda f=fam, p=params: _c4_complex(build_model(f, p)))
    for fam, params in catalog():
        if fam is not Family.QUATERNIONIC:
            add(5, "harmonic classification", fam, params,
                lambda f=fam, p=params: _c5_harmonic(build_model(f, p)))
    for fam, params, group in torsion_free_targets(FULL):
        add(6, "torsion-free fixed curvature", fam, params,
            lambda f=fam, p=params, g=group: _c6_torsion(build_model(f, p, g)),
            target=f"{_label(fam, params)} {group}")
    for m in PROJECTIVE_M:
        add(7, "projective spectrum", Family.PROJECTIVE, (m,),
            lambda m=m: _c7_projective(build_model(Family.PROJECTIVE, (m,))))
    for fam, params in catalog():
        if fam is Family.CONFORMAL:
            add(7, "conformal spectrum", fam, params,
                lambda p=params: _c7_conformal(build_model(Family.CONFORMAL, p)))
    add(7, "conformal null difference", Family.CONFORMAL, (2, 2),
        lambda: _c7_null(build_model(Family.CONFORMAL, (2, 2))))
    for label, model, Zm, expected in _gate_cases(FULL):
        add(8, f"flatness verdict ({label})", model.family, model.params,
            lambda mo=model, z=Zm, e=expected: _c8_gate(mo, z, e))
    for fam, params in ((Family.PROJECTIVE, (2,)), (Family.CONFORMAL, (2, 1))):
        add(9, "oracle equivalence", fam, params,
            lambda f=fam, p=params: _c9_oracles(build_model(f, p)))
    for label, model, Zm, _ in _gate_cases(FULL):
        add(10, f"gate scale invariance ({label})", model.family, model.params,
            lambda mo=model, z=Zm: _c10_gate_scale(mo, z))
    for fam, params in catalog():
        if fam is not Family.QUATERNIONIC:
            add(10, "Killing normalisation invariance", fam, params,
                lambda f=fam, p=params: _c10_killing_scale(build_model(f, p)))
    return rows


def _label(fam: Family, params: tuple) -> str:
    if fam in (Family.PROJECTIVE, Family.QUATERNIONIC):
        return f"{fam.value}(m={params[0]})"
    return f"{fam.value}(p={params[0]},q={params[1]})"


def verify_all(budget: Budget | str | None = None, command=None,
               on_result: Callable | None = None) -> RunReport:
    if not isinstance(budget, Budget):
        budget = Budget.parse(budget)
    report = RunReport(list(command or ["verify-all"]))
    for crit, name, target, fam, params, fn in _full_rows():
        if not budget.allows(fam, params):
            res = CheckResult(crit, name, target, "skip", "outside budget")
        else:
            try:
                ok, detail = fn()
                res = CheckResult(crit, name, target, "pass" if ok else "fail", detail)
            except Exception as exc:  # a crash is a failed check, not a crashed run
                res = CheckResult(crit, name, target, "fail", f"{type(exc).__name__}: {exc}")
        report.checks.append(res)
        if on_result:
            on_result(res)
    return report


__all__ = ["Budget", "BudgetError", "CheckResult", "RunReport", "catalog",
           "conformal_form_value", "grassmannian_Z", "top_row_Z", "verify_all"]
