"""Matrix realisations of the |1|-graded simple Lie algebras in the catalog.

Four families are built, each as a subalgebra of ``gl(N)`` with a basis
split by degree:

* projective: ``sl(m+1)`` with block split ``1 | m``
* Grassmannian: ``sl(p+q)`` with block split ``p | q``
* conformal: ``o(p+1, q+1)`` preserving the form ``[[0,0,1],[0,J,0],[1,0,0]]``
* quaternionic: ``sl(m+1, H)`` with block split ``1 | m``, each quaternion
  entry realised as the 4x4 real matrix of left multiplication

Bases are listed block by block in lexicographic (row, column) order of the
elementary matrices they are built from; for quaternionic entries the unit
order is ``1, i, j, k``.  In every family ``g_-1`` is the block below the
diagonal and ``g_1`` the block above it.

All structural data (structure constants, Killing form, grading element,
dual basis) is computed exactly once per model and cached.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations

from .linalg import ONE, ZERO, Mat, _rref_rows, det, inverse, rank


class UnsupportedParams(ValueError):
    pass


class ModelMismatch(ValueError):
    pass


class Family(enum.Enum):
    PROJECTIVE = "projective"
    CONFORMAL = "conformal"
    GRASSMANNIAN = "grassmannian"
    QUATERNIONIC = "quaternionic"


class ConstraintKind(enum.Enum):
    SPECIAL_LINEAR_CONNECTED = "SpecialLinearConnected"
    PROJECTIVE_QUOTIENT = "ProjectiveQuotient"
    ORTHOGONAL_J = "OrthogonalJ"
    QUATERNIONIC_QUOTIENT = "QuaternionicQuotient"


#: group variants accepted per family, the first one is the default
GROUP_VARIANTS = {
    Family.PROJECTIVE: ("PGl", "Sl"),
    Family.GRASSMANNIAN: ("PGl", "Sl"),
    Family.CONFORMAL: ("O", "PO"),
    Family.QUATERNIONIC: ("PGlH",),
}


@dataclass(frozen=True)
class GroupConstraints:
    """Which Lie group ``G`` (with the maximal ``P``) a model refers to.

    ``quotient`` marks groups taken modulo their centre: matrices then stand
    for classes, and membership only has to hold up to a nonzero scalar.
    """

    kind: ConstraintKind
    variant: str
    form: Mat | None = None
    quotient: bool = False
    split: int = 1          # size of the top-left block of the grading
    unit: int = 1           # 4 for quaternionic realisations

    def __post_init__(self):
        if self.form is not None:
            f = self.form
            if f.transpose() != f:
                raise ValueError("group form must be symmetric")
            if det(f) == 0:
                raise ValueError("group form must be invertible")


# ---------------------------------------------------------------------------
# quaternion units as 4x4 real matrices

def _quat_mult(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0)


_UNITS = [tuple(1 if k == u else 0 for k in range(4)) for u in range(4)]


def _left_mult(u: int) -> dict:
    """Matrix of ``x -> e_u * x`` on ``H = R^4`` as ``{(row, col): value}``."""
    out = {}
    for col in range(4):
        img = _quat_mult(_UNITS[u], _UNITS[col])
        for row, v in enumerate(img):
            if v:
                out[(row, col)] = Fraction(v)
    return out


def _right_mult(u: int) -> dict:
    out = {}
    for col in range(4):
        img = _quat_mult(_UNITS[col], _UNITS[u])
        for row, v in enumerate(img):
            if v:
                out[(row, col)] = Fraction(v)
    return out


LEFT_UNITS = [_left_mult(u) for u in range(4)]
RIGHT_UNITS = [_right_mult(u) for u in range(4)]


def complex_structures(blocks: int) -> list:
    """The right multiplications by ``i, j, k`` on ``H^blocks`` as matrices."""
    n = 4 * blocks
    out = []
    for u in (1, 2, 3):
        d = {}
        for b in range(blocks):
            for (r, c), v in RIGHT_UNITS[u].items():
                d[(4 * b + r, 4 * b + c)] = v
        out.append(Mat.from_sparse(n, n, d))
    return out


# ---------------------------------------------------------------------------
# sparse matrix helpers (dict keyed by (row, col))

def _sp_mul(a: dict, b: dict) -> dict:
    by_row = {}
    for (t, j), y in b.items():
        by_row.setdefault(t, []).append((j, y))
    out = {}
    for (i, t), x in a.items():
        for j, y in by_row.get(t, ()):
            k = (i, j)
            v = out.get(k, ZERO) + x * y
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def _sp_comm(a: dict, b: dict) -> dict:
    out = _sp_mul(a, b)
    for k, v in _sp_mul(b, a).items():
        nv = out.get(k, ZERO) - v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


# ---------------------------------------------------------------------------
# basis construction per family


def _linear_bases(p: int, q: int):
    """Bases of ``sl(p+q)`` graded by the ``p | q`` block split."""
    top, bottom = range(p), range(p, p + q)
    neg = [{(i, j): ONE} for i in bottom for j in top]
    pos = [{(i, j): ONE} for i in top for j in bottom]
    zero = []
    for block in (top, bottom):
        for i in block:
            for j in block:
                if i != j:
                    zero.append({(i, j): ONE})
                elif i != 0:
                    zero.append({(i, i): ONE, (0, 0): -ONE})
    return neg, zero, pos


def _conformal_bases(p: int, q: int):
    n = p + q
    sig = [ONE] * p + [-ONE] * q
    last = n + 1
    neg, pos, zero = [], [], []
    for i in range(n):
        # X = e_i in the (1,0) block, -X^T J in the (2,1) block
        neg.append({(1 + i, 0): ONE, (last, 1 + i): -sig[i]})
    for i in range(n):
        # Z = e_i^T in the (0,1) block, -J Z^T in the (1,2) block
        pos.append({(0, 1 + i): ONE, (1 + i, last): -sig[i]})
    zero.append({(0, 0): ONE, (last, last): -ONE})
    for i, j in combinations(range(n), 2):
        # (E_ij - E_ji) J
        zero.append({(1 + i, 1 + j): sig[j], (1 + j, 1 + i): -sig[i]})
    return neg, zero, pos


def _quaternionic_bases(m: int):
    def entry(r, c, u):
        return {(4 * r + a, 4 * c + b): v for (a, b), v in LEFT_UNITS[u].items()}

    blocks = m + 1
    neg = [entry(r, 0, u) for r in range(1, blocks) for u in range(4)]
    pos = [entry(0, c, u) for c in range(1, blocks) for u in range(4)]
    zero = []
    for block in (range(1), range(1, blocks)):
        for r in block:
            for c in block:
                for u in range(4):
                    if r == c and u == 0:
                        if r == 0:
                            continue
                        d = entry(r, r, 0)
                        d.update({k: -v for k, v in entry(0, 0, 0).items()})
                        zero.append(d)
                    else:
                        zero.append(entry(r, c, u))
    return neg, zero, pos


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GradedModel:
    family: Family
    params: tuple                 # (m,) or (p, q)
    ambient_size: int
    basis_neg1: tuple             # of Mat
    basis_0: tuple
    basis_1: tuple
    group_constraints: GroupConstraints
    _sparse: tuple = field(repr=False, default=())

    # -- basic shape ---------------------------------------------------------

    @property
    def dims(self) -> dict:
        return {"neg1": len(self.basis_neg1), "zero": len(self.basis_0),
                "one": len(self.basis_1)}

    @property
    def dim(self) -> int:
        return len(self.basis_neg1) + len(self.basis_0) + len(self.basis_1)

    @property
    def n(self) -> int:
        """``dim g_-1``."""
        return len(self.basis_neg1)

    @property
    def basis(self) -> tuple:
        return self.basis_neg1 + self.basis_0 + self.basis_1

    @cached_property
    def degrees(self) -> tuple:
        return ((-1,) * len(self.basis_neg1) + (0,) * len(self.basis_0)
                + (1,) * len(self.basis_1))

    def degree_indices(self, j: int) -> range:
        a, b = len(self.basis_neg1), len(self.basis_0)
        if j == -1:
            return range(0, a)
        if j == 0:
            return range(a, a + b)
        if j == 1:
            return range(a + b, self.dim)
        return range(0)

    @property
    def param_dict(self) -> dict:
        if self.family in (Family.PROJECTIVE, Family.QUATERNIONIC):
            return {"m": self.params[0]}
        return {"p": self.params[0], "q": self.params[1]}

    @property
    def label(self) -> str:
        ps = ",".join(f"{k}={v}" for k, v in self.param_dict.items())
        return f"{self.family.value}({ps})"

    def descriptor(self) -> dict:
        return {"family": self.family.value, "params": self.param_dict,
                "ambient_size": self.ambient_size, "dims": self.dims}

    # -- coordinates ---------------------------------------------------------

    @cached_property
    def _coord_data(self):
        """Pivot positions and the inverse used to read off coordinates."""
        N = self.ambient_size
        rows = [[ZERO] * (N * N) for _ in range(self.dim)]
        for a, sp in enumerate(self._sparse):
            for (i, j), v in sp.items():
                rows[a][i * N + j] = v
        # independent matrix positions serve as coordinate read-outs
        cols = [[rows[a][k] for a in range(self.dim)] for k in range(N * N)]
        piv_positions = _pivot_rows(cols, self.dim)
        if len(piv_positions) != self.dim:
            raise AssertionError(f"{self.label}: basis is linearly dependent")
        sub = Mat.from_rows([cols[k] for k in piv_positions])  # dim x dim
        inv = inverse(sub)
        return tuple(divmod(k, N) for k in piv_positions), inv

    def coords_sparse(self, sp: dict, check: bool = True) -> list:
        """Coordinates of a matrix given as ``{(i, j): value}``."""
        positions, inv = self._coord_data
        vals = [sp.get(pos, ZERO) for pos in positions]
        d = self.dim
        e = inv.entries
        out = [ZERO] * d
        for k, v in enumerate(vals):
            if v:
                for a in range(d):
                    x = e[a * d + k]
                    if x:
                        out[a] += x * v
        if check:
            recon = self._combine_sparse(out)
            clean = {k: v for k, v in sp.items() if v}
            if recon != clean:
                raise ValueError(f"matrix is not in {self.label}")
        return out

    def coords(self, m: Mat, check: bool = True) -> list:
        if m.shape != (self.ambient_size, self.ambient_size):
            raise ModelMismatch("matrix size does not match the model")
        return self.coords_sparse(m.to_sparse(), check)

    def contains(self, m: Mat) -> bool:
        try:
            self.coords(m)
        except ValueError:
            return False
        return True

    def _combine_sparse(self, coeffs) -> dict:
        out = {}
        for a, c in enumerate(coeffs):
            if c:
                for k, v in self._sparse[a].items():
                    nv = out.get(k, ZERO) + c * v
                    if nv:
                        out[k] = nv
                    else:
                        out.pop(k, None)
        return out

    def matrix_of(self, coeffs) -> Mat:
        N = self.ambient_size
        return Mat.from_sparse(N, N, self._combine_sparse(coeffs))

    def element(self, coeffs) -> "AlgebraElement":
        return AlgebraElement(self.matrix_of(coeffs), self)

    def wrap(self, m: Mat) -> "AlgebraElement":
        self.coords(m)
        return AlgebraElement(m, self)

    def basis_element(self, a: int) -> "AlgebraElement":
        return AlgebraElement(self.basis[a], self)

    # -- structure constants -------------------------------------------------

    @cached_property
    def structure(self) -> tuple:
        """``structure[a][b]`` = sparse coordinates ``{c: coeff}`` of ``[B_a, B_b]``."""
        d = self.dim
        table = [[None] * d for _ in range(d)]
        for a in range(d):
            table[a][a] = {}
            for b in range(a + 1, d):
                comm = _sp_comm(self._sparse[a], self._sparse[b])
                cs = self.coords_sparse(comm) if comm else [ZERO] * d
                sp = {c: v for c, v in enumerate(cs) if v}
                table[a][b] = sp
                table[b][a] = {c: -v for c, v in sp.items()}
        return tuple(tuple(r) for r in table)

    def bracket_coords(self, x, y) -> list:
        out = [ZERO] * self.dim
        st = self.structure
        for a, xa in enumerate(x):
            if not xa:
                continue
            row = st[a]
            for b, yb in enumerate(y):
                if not yb:
                    continue
                f = xa * yb
                for c, v in row[b].items():
                    out[c] += f * v
        return out

    def ad_columns(self, x) -> list:
        """Sparse columns of ``ad x`` in the full basis."""
        st = self.structure
        cols = []
        for b in range(self.dim):
            acc = {}
            for a, xa in enumerate(x):
                if xa:
                    for c, v in st[a][b].items():
                        nv = acc.get(c, ZERO) + xa * v
                        if nv:
                            acc[c] = nv
                        else:
                            acc.pop(c, None)
            cols.append(acc)
        return cols

    def ad_matrix(self, x) -> Mat:
        return Mat.from_columns(self.dim, self.ad_columns(x))

    @cached_property
    def killing_matrix(self) -> Mat:
        """Gram matrix of the Killing form ``tr(ad x ad y)`` on the full basis."""
        d = self.dim
        st = self.structure
        # ad_a[c][b] = coefficient of B_c in [B_a, B_b]
        K = [[ZERO] * d for _ in range(d)]
        for a in range(d):
            for b in range(a, d):
                s = ZERO
                # tr(ad_a ad_b) = sum_{c,e} ad_a[c][e] ad_b[e][c]
                for e in range(d):
                    for c, v in st[b][e].items():
                        w = st[a][c].get(e)
                        if w:
                            s += w * v
                K[a][b] = K[b][a] = s
        return Mat.from_rows(K)

    def killing_coords(self, x, y) -> Fraction:
        K = self.killing_matrix
        d = self.dim
        s = ZERO
        for a, xa in enumerate(x):
            if xa:
                for b, yb in enumerate(y):
                    if yb:
                        s += xa * K.entries[a * d + b] * yb
        return s

    @cached_property
    def pairing_matrix(self) -> Mat:
        """Killing form restricted to ``g_-1 x g_1`` (rows: g_-1 basis)."""
        K = self.killing_matrix
        return Mat.from_rows([[K[a, b] for b in self.degree_indices(1)]
                              for a in self.degree_indices(-1)])

    @cached_property
    def dual_g1_coords(self) -> tuple:
        return self.dual_g1_coords_scaled(ONE)

    def dual_g1_coords_scaled(self, scale) -> tuple:
        """Coordinates of the ``g_1`` basis dual to ``basis_neg1``.

        ``scale`` multiplies the pairing before inverting it; the default 1 is
        the Killing form itself.
        """
        P = self.pairing_matrix.scale(scale)
        inv = inverse(P)  # columns give the dual elements in the g_1 basis
        pos = list(self.degree_indices(1))
        out = []
        for j in range(self.n):
            v = [ZERO] * self.dim
            for l, b in enumerate(pos):
                v[b] = inv[l, j]
            out.append(tuple(v))
        return tuple(out)

    @cached_property
    def grading_coords(self) -> tuple:
        """Coordinates of the grading element, solved from ``[E, Y] = jY``."""
        d = self.dim
        zero_idx = list(self.degree_indices(0))
        st = self.structure
        rows, rhs = [], []
        for b in range(d):
            j = self.degrees[b]
            for c in range(d):
                rows.append([st[a][b].get(c, ZERO) for a in zero_idx])
                rhs.append(Fraction(j) if c == b else ZERO)
        A = Mat.from_rows(rows)
        aug = [r + [v] for r, v in zip(A.to_rows(), rhs)]
        piv = _rref_rows(aug, len(zero_idx) + 1)
        if len(zero_idx) in piv:
            raise AssertionError(f"{self.label}: no grading element")
        if len(piv) != len(zero_idx):
            raise AssertionError(f"{self.label}: grading element is not unique")
        out = [ZERO] * d
        for r, c in enumerate(piv):
            out[zero_idx[c]] = aug[r][-1]
        return tuple(out)

    # -- variants ------------------------------------------------------------

    def with_group(self, variant: str) -> "GradedModel":
        if variant == self.group_constraints.variant:
            return self
        return build_model(self.family, self.params, variant)

    def permuted_neg1(self, perm) -> "GradedModel":
        """Same algebra with ``basis_neg1`` reordered (``new[i] = old[perm[i]]``)."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("not a permutation")
        neg = tuple(self._sparse[i] for i in perm)
        return _assemble(self.family, self.params, self.ambient_size,
                         [neg, self._sparse[self.n:self.n + len(self.basis_0)],
                          self._sparse[self.n + len(self.basis_0):]],
                         self.group_constraints)


def _pivot_rows(rows: list, ncols: int) -> list:
    """Indices of rows of ``rows`` forming a maximal independent set (greedy)."""
    chosen = []
    basis = []  # reduced rows with pivot col
    for idx, r in enumerate(rows):
        v = r[:]
        for pc, prow in basis:
            f = v[pc]
            if f:
                for j in range(ncols):
                    if prow[j]:
                        v[j] -= f * prow[j]
        pc = next((j for j in range(ncols) if v[j]), None)
        if pc is None:
            continue
        inv = 1 / v[pc]
        v = [x * inv for x in v]
        # keep earlier pivots clean so later reductions stay one-pass
        for k, (qc, qrow) in enumerate(basis):
            f = qrow[pc]
            if f:
                basis[k] = (qc, [a - f * b for a, b in zip(qrow, v)])
        basis.append((pc, v))
        chosen.append(idx)
        if len(chosen) == ncols:
            break
    return chosen


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    matrix: Mat
    model: GradedModel

    @cached_property
    def coords(self) -> list:
        return self.model.coords(self.matrix)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and other.model is self.model
                and other.matrix == self.matrix)

    def __hash__(self):
        return hash(self.matrix)

    def __add__(self, other):
        _same_model(self, other)
        return AlgebraElement(self.matrix + other.matrix, self.model)

    def __sub__(self, other):
        _same_model(self, other)
        return AlgebraElement(self.matrix - other.matrix, self.model)

    def scale(self, s):
        return AlgebraElement(self.matrix.scale(s), self.model)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


def _same_model(x, y):
    if x.model is not y.model:
        raise ModelMismatch("elements belong to different models")


# ---------------------------------------------------------------------------
# public operations


def _assemble(family, params, N, blocks, constraints) -> GradedModel:
    neg, zero, pos = (tuple(b) for b in blocks)
    sparse = neg + zero + pos
    to_mat = lambda sp: Mat.from_sparse(N, N, sp)  # noqa: E731
    return GradedModel(family, tuple(params), N,
                       tuple(map(to_mat, neg)), tuple(map(to_mat, zero)),
                       tuple(map(to_mat, pos)), constraints, sparse)


def _coerce_family(family) -> Family:
    if isinstance(family, Family):
        return family
    try:
        return Family(str(family).lower())
    except ValueError:
        raise UnsupportedParams(f"unknown family {family!r}") from None


def normalize_params(family, params) -> tuple:
    family = _coerce_family(family)
    if isinstance(params, dict):
        keys = ("m",) if family in (Family.PROJECTIVE, Family.QUATERNIONIC) else ("p", "q")
        try:
            params = tuple(params[k] for k in keys)
        except KeyError as e:
            raise UnsupportedParams(f"missing parameter {e.args[0]!r}") from None
    elif isinstance(params, int):
        params = (params,)
    params = tuple(int(x) for x in params)
    if family in (Family.PROJECTIVE, Family.QUATERNIONIC):
        if len(params) != 1:
            raise UnsupportedParams(f"{family.value} takes one parameter m")
        (m,) = params
        low = 2 if family is Family.PROJECTIVE else 1
        if m < low:
            raise UnsupportedParams(f"{family.value} needs m >= {low}")
    else:
        if len(params) != 2:
            raise UnsupportedParams(f"{family.value} takes parameters p, q")
        p, q = params
        if family is Family.CONFORMAL and (p < 0 or q < 0 or p + q < 3):
            raise UnsupportedParams("conformal needs p, q >= 0 and p + q >= 3")
        if family is Family.GRASSMANNIAN and (p < 2 or q < 2):
            raise UnsupportedParams("grassmannian needs p, q >= 2")
    return params


def build_model(family, params, group: str | None = None) -> GradedModel:
    family = _coerce_family(family)
    params = normalize_params(family, params)
    variants = GROUP_VARIANTS[family]
    group = group or variants[0]
    if group not in variants:
        raise UnsupportedParams(
            f"group {group!r} not available for {family.value}; use one of {variants}")
    return _build_cached(family, params, group)


@lru_cache(maxsize=None)
def _build_cached(family: Family, params: tuple, group: str) -> GradedModel:
    if family is Family.PROJECTIVE:
        (m,) = params
        N, blocks, split, unit = m + 1, _linear_bases(1, m), 1, 1
    elif family is Family.GRASSMANNIAN:
        p, q = params
        N, blocks, split, unit = p + q, _linear_bases(p, q), p, 1
    elif family is Family.CONFORMAL:
        p, q = params
        N, blocks, split, unit = p + q + 2, _conformal_bases(p, q), 1, 1
    else:
        (m,) = params
        N, blocks, split, unit = 4 * (m + 1), _quaternionic_bases(m), 4, 4

    form = None
    if family is Family.CONFORMAL:
        p, q = params
        d = {(0, N - 1): ONE, (N - 1, 0): ONE}
        for i in range(p + q):
            d[(1 + i, 1 + i)] = ONE if i < p else -ONE
        form = Mat.from_sparse(N, N, d)
    kind = {
        "Sl": ConstraintKind.SPECIAL_LINEAR_CONNECTED,
        "PGl": ConstraintKind.PROJECTIVE_QUOTIENT,
        "O": ConstraintKind.ORTHOGONAL_J,
        "PO": ConstraintKind.ORTHOGONAL_J,
        "PGlH": ConstraintKind.QUATERNIONIC_QUOTIENT,
    }[group]
    constraints = GroupConstraints(kind, group, form,
                                   quotient=group in ("PGl", "PO", "PGlH"),
                                   split=split, unit=unit)
    model = _assemble(family, params, N, blocks, constraints)
    _assert_in_algebra(model)
    return model


def _assert_in_algebra(model: GradedModel):
    """Every basis matrix satisfies the defining conditions of its family."""
    for b in model.basis:
        if model.family is Family.CONFORMAL:
            f = model.group_constraints.form
            if not (b @ f + f @ b.transpose()).is_zero():
                raise AssertionError(f"{model.label}: basis matrix not in o(Q)")
        elif b.trace() != 0:
            raise AssertionError(f"{model.label}: basis matrix not traceless")
        if model.family is Family.QUATERNIONIC:
            for J in complex_structures(model.params[0] + 1):
                if not b.commutator(J).is_zero():
                    raise AssertionError(f"{model.label}: basis not quaternion-linear")


def structure_violations(model: GradedModel) -> dict:
    """Count failures of each structural identity over all basis pairs/triples."""
    d = model.dim
    st = model.structure
    K = model.killing_matrix.entries
    deg = model.degrees
    out = {"jacobi": 0, "killing_invariance": 0, "grading": 0,
           "grading_element": 0, "pairing_degenerate": 0}

    def br(x: dict, b: int) -> dict:
        acc = {}
        for a, xa in x.items():
            for c, v in st[a][b].items():
                acc[c] = acc.get(c, ZERO) + xa * v
        return {c: v for c, v in acc.items() if v}

    for a in range(d):
        for b in range(d):
            if any(abs(deg[c] - deg[a] - deg[b]) for c in st[a][b]):
                out["grading"] += 1
    for a, b, c in combinations(range(d), 3):
        # [a,[b,c]] + [b,[c,a]] + [c,[a,b]], written as -[[b,c],a] etc.
        total = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for k, v in br(st[y][z], x).items():
                total[k] = total.get(k, ZERO) - v
        if any(total.values()):
            out["jacobi"] += 1
    for a in range(d):
        for b in range(d):
            xy = st[a][b]
            for w in range(d):
                s1 = sum((v * K[c * d + w] for c, v in xy.items()), ZERO)
                s2 = sum((v * K[b * d + c] for c, v in st[a][w].items()), ZERO)
                if s1 + s2:
                    out["killing_invariance"] += 1
    E = model.grading_coords
    for b in range(d):
        want = [ZERO] * d
        want[b] = Fraction(deg[b])
        x = [ZERO] * d
        x[b] = ONE
        if model.bracket_coords(E, x) != want:
            out["grading_element"] += 1
    if not model.n or det(model.pairing_matrix) == 0:
        out["pairing_degenerate"] = 1
    return out


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    _same_model(x, y)
    return AlgebraElement(x.matrix.commutator(y.matrix), x.model)


def grade_component(x: AlgebraElement, i: int) -> AlgebraElement:
    if i not in (-1, 0, 1):
        raise ValueError("degree must be -1, 0 or 1")
    model = x.model
    keep = set(model.degree_indices(i))
    coeffs = [c if a in keep else ZERO for a, c in enumerate(x.coords)]
    return model.element(coeffs)


def killing(x: AlgebraElement, y: AlgebraElement) -> Fraction:
    _same_model(x, y)
    return x.model.killing_coords(x.coords, y.coords)


def grading_element(model: GradedModel) -> AlgebraElement:
    return model.element(model.grading_coords)


def dual_g1_basis(model: GradedModel) -> list:
    return [model.element(c) for c in model.dual_g1_coords]


def cartan_dual(Z: AlgebraElement) -> AlgebraElement:
    """The ``g_-1`` element paired with ``Z`` by the model's Cartan involution.

    This is ``S Z^T S`` with ``S`` the identity, or ``diag(1, J, 1)`` in the
    conformal case.  It is what the flatness proofs use as "the dual of Z":
    ``V^T`` for projective structures and ``J V^T`` for conformal ones.
    """
    model = Z.model
    if model.family is Family.CONFORMAL:
        f = model.group_constraints.form
        N = model.ambient_size
        S = Mat.from_sparse(N, N, {(0, 0): ONE, (N - 1, N - 1): ONE,
                                   **{(i, i): f[i, i] for i in range(1, N - 1)}})
        m = S @ Z.matrix.transpose() @ S
    else:
        m = Z.matrix.transpose()
    return model.wrap(m)


def neg1_block(x: AlgebraElement) -> Mat:
    """The lower-left block holding the coordinates of a ``g_-1`` element."""
    model = x.model
    k = model.group_constraints.split
    N = model.ambient_size
    return Mat.from_rows([[x.matrix[i, j] for j in range(k)] for i in range(k, N)])


def pos1_block(x: AlgebraElement) -> Mat:
    """The upper-right block of a ``g_1`` element (e.g. the ``p x q`` block)."""
    model = x.model
    k = model.group_constraints.split
    N = model.ambient_size
    if model.family is Family.CONFORMAL:
        return Mat.from_rows([[x.matrix[0, j] for j in range(1, N - 1)]])
    return Mat.from_rows([[x.matrix[i, j] for j in range(k, N)] for i in range(k)])


def block_rank(Z: AlgebraElement) -> int:
    return rank(pos1_block(Z))


__all__ = [
    "AlgebraElement", "ConstraintKind", "Family", "GROUP_VARIANTS", "GradedModel",
    "GroupConstraints", "ModelMismatch", "UnsupportedParams", "block_rank",
    "structure_violations",
    "bracket", "build_model", "cartan_dual", "complex_structures", "dual_g1_basis",
    "grade_component", "grading_element", "killing", "neg1_block", "pos1_block",
]
