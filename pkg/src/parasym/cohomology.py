"""Cochains on ``g_-1`` with values in ``g``, the codifferential, and ``H^2``.

A k-cochain is stored in the basis ``Z^I (x) B_b`` where ``I`` runs over
increasing k-tuples of ``g_-1`` indices (``Z^i`` the ``g_1`` element dual to
the i-th ``g_-1`` basis vector under the Killing form) and ``B_b`` over the
full basis of ``g``.  The flat index of ``(I, b)`` is ``rank(I) * dim g + b``
with tuples ranked in lexicographic order.

A 2-cochain valued in ``g_j`` has homogeneity ``j + 2``; the codifferential
raises the value degree by one, so every computation is done slice by slice.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

from .linalg import ZERO, Mat, sparse_matmul_columns, sparse_rank
from .models import GradedModel


class Classification(enum.Enum):
    FLAT_IF_SYMMETRIC_DEGREE1 = "FlatIfSymmetric_Degree1"
    FLAT_IF_SYMMETRIC_DEGREE3 = "FlatIfSymmetric_Degree3"
    INTERESTING_DEGREE2 = "Interesting_Degree2"


class AmbiguousClassification(ValueError):
    """Harmonic curvature has degree 1 and degree 3 parts but no degree 2 part."""

    def __init__(self, degrees):
        super().__init__(f"harmonic curvature in degrees {sorted(degrees)} only")
        self.degrees = tuple(sorted(degrees))


@dataclass(frozen=True, eq=False)
class CochainSpace:
    model: GradedModel
    k: int
    combos: tuple

    @property
    def dim(self) -> int:
        return len(self.combos) * self.model.dim

    def __len__(self):
        return self.dim

    def index(self, combo, b: int) -> int:
        return self._rank[combo] * self.model.dim + b

    def unpack(self, idx: int):
        r, b = divmod(idx, self.model.dim)
        return self.combos[r], b

    def value_degree(self, idx: int) -> int:
        return self.model.degrees[idx % self.model.dim]

    def labels(self) -> list:
        return [self.value_degree(i) for i in range(self.dim)]

    def slice(self, j: int) -> list:
        """Flat indices of basis cochains valued in ``g_j``."""
        d = self.model.dim
        vals = self.model.degree_indices(j)
        return [r * d + b for r in range(len(self.combos)) for b in vals]

    @property
    def _rank(self) -> dict:
        return _combo_rank(self.combos)


@lru_cache(maxsize=None)
def _combo_rank(combos: tuple) -> dict:
    return {c: i for i, c in enumerate(combos)}


def cochain_space(model: GradedModel, k: int) -> CochainSpace:
    if k not in (0, 1, 2, 3):
        raise ValueError("form degree must be 0, 1, 2 or 3")
    combos = tuple(combinations(range(model.n), k))
    assert len(combos) == comb(model.n, k)
    return CochainSpace(model, k, combos)


@dataclass(frozen=True, eq=False)
class Cochain:
    space: CochainSpace
    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) != self.space.dim:
            raise ValueError("coefficient vector has the wrong length")

    @property
    def degree_k(self) -> int:
        return self.space.k

    @property
    def value_degrees(self) -> list:
        return self.space.labels()

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.space.model is not self.space.model or other.space.k != self.space.k:
            raise ValueError("cochains live in different spaces")
        return Cochain(self.space, tuple(a + b for a, b in
                                         zip(self.coefficients, other.coefficients)))

    def scale(self, s) -> "Cochain":
        return Cochain(self.space, tuple(s * a for a in self.coefficients))

    def evaluate(self, args) -> list:
        """Value in ``g`` (coordinates) on ``g_-1`` basis indices ``args``."""
        sign, combo = _sort_sign(args)
        d = self.space.model.dim
        if sign == 0:
            return [ZERO] * d
        r = self.space._rank[combo]
        return [sign * c for c in self.coefficients[r * d:(r + 1) * d]]


def _sort_sign(args):
    """Sign of the permutation sorting ``args`` (0 on repeats) and the sorted tuple."""
    args = list(args)
    if len(set(args)) != len(args):
        return 0, None
    sign = 1
    for i in range(len(args)):
        for j in range(i + 1, len(args)):
            if args[i] > args[j]:
                sign = -sign
    return sign, tuple(sorted(args))


# ---------------------------------------------------------------------------
# codifferential


def _dual_ad(model: GradedModel, scale) -> list:
    duals = model.dual_g1_coords_scaled(Fraction(scale))
    for zi, zj in combinations(duals, 2):
        if any(model.bracket_coords(zi, zj)):
            raise AssertionError(f"{model.label}: g_1 is not abelian")
    return [model.ad_columns(z) for z in duals]


@lru_cache(maxsize=64)
def _dual_ad_cached(model: GradedModel, scale: Fraction) -> list:
    return _dual_ad(model, scale)


def codifferential_columns(model: GradedModel, k: int, value_degree=None,
                           pairing_scale=1) -> list:
    """Sparse columns of ``d*: C^{k+1} -> C^k``.

    With ``value_degree = j`` only the columns of cochains valued in ``g_j``
    are returned (their images are valued in ``g_{j+1}``).  Row indices are
    flat indices of the target space.
    """
    if not 0 <= k <= 2:
        raise ValueError("codifferential is built for k + 1 <= 3")
    src = cochain_space(model, k + 1)
    dst = cochain_space(model, k)
    ads = _dual_ad_cached(model, Fraction(pairing_scale))
    cols_idx = src.slice(value_degree) if value_degree is not None else range(src.dim)
    out = []
    for idx in cols_idx:
        combo, b = src.unpack(idx)
        col = {}
        for t, i in enumerate(combo):
            sign = -1 if t % 2 == 0 else 1          # (-1)^(t+1)
            rest = combo[:t] + combo[t + 1:]
            base = dst.index(rest, 0)
            for c, v in ads[i][b].items():
                key = base + c
                nv = col.get(key, ZERO) + sign * v
                if nv:
                    col[key] = nv
                else:
                    col.pop(key, None)
        # the [Z_i, Z_j] terms vanish: g_1 is abelian (checked in _dual_ad)
        out.append(col)
    return out


def codifferential_matrix(model: GradedModel, k: int, pairing_scale=1) -> Mat:
    """Dense matrix of ``d*`` from ``(k+1)``-cochains to ``k``-cochains."""
    cols = codifferential_columns(model, k, pairing_scale=pairing_scale)
    return Mat.from_columns(cochain_space(model, k).dim, cols)


def apply_codifferential(c: Cochain, pairing_scale=1) -> Cochain:
    model = c.space.model
    k = c.space.k - 1
    cols = codifferential_columns(model, k, pairing_scale=pairing_scale)
    dst = cochain_space(model, k)
    out = [ZERO] * dst.dim
    for x, col in zip(c.coefficients, cols):
        if x:
            for r, v in col.items():
                out[r] += x * v
    return Cochain(dst, tuple(out))


def codifferential_squares(model: GradedModel) -> list:
    """``d* o d*`` as sparse columns for k = 0 and k = 1 (both must vanish)."""
    out = []
    for k in (0, 1):
        outer = codifferential_columns(model, k)
        inner = codifferential_columns(model, k + 1)
        out.append(sparse_matmul_columns(outer, inner))
    return out


# ---------------------------------------------------------------------------
# harmonic curvature


@dataclass(frozen=True)
class CohomologyReport:
    family: str
    params: dict
    dim_ker: int
    dim_im: int
    h2_total: int
    h2_by_degree: dict
    classification: Classification | None
    notes: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "dim_ker": self.dim_ker,
            "dim_im": self.dim_im,
            "h2_total": self.h2_total,
            "h2_by_degree": {str(k): v for k, v in sorted(self.h2_by_degree.items())},
            "classification": self.classification.value if self.classification else None,
            "notes": list(self.notes),
        }


def h2_slice(model: GradedModel, homogeneity: int, pairing_scale=1) -> tuple:
    """``(dim ker, dim im)`` of ``d*`` on 2-cochains of the given homogeneity."""
    j = homogeneity - 2
    n2 = len(cochain_space(model, 2).slice(j))
    if j + 1 <= 1:
        ker = n2 - sparse_rank(codifferential_columns(model, 1, j, pairing_scale))
    else:
        ker = n2
    if j - 1 >= -1:
        im = sparse_rank(codifferential_columns(model, 2, j - 1, pairing_scale))
    else:
        im = 0
    return ker, im


def harmonic_h2(model: GradedModel, pairing_scale=1) -> CohomologyReport:
    return _harmonic_h2(model, Fraction(pairing_scale))


@lru_cache(maxsize=None)
def _harmonic_h2(model: GradedModel, pairing_scale: Fraction) -> CohomologyReport:
    by_degree = {}
    ker_total = im_total = 0
    for h in (1, 2, 3):
        ker, im = h2_slice(model, h, pairing_scale)
        ker_total += ker
        im_total += im
        by_degree[h] = ker - im
    notes = []
    try:
        cls = flatness_classification(by_degree)
    except AmbiguousClassification as e:
        cls = None
        notes.append(f"harmonic curvature in degrees {list(e.degrees)}; "
                     "both components are forced to vanish at a symmetry")
    return CohomologyReport(model.family.value, model.param_dict, ker_total,
                            im_total, ker_total - im_total, by_degree, cls,
                            tuple(notes))


def unsliced_h2(model: GradedModel, pairing_scale=1) -> int:
    """``H^2`` from the full (unsliced) codifferential matrices."""
    n2 = cochain_space(model, 2).dim
    ker = n2 - sparse_rank(codifferential_columns(model, 1, pairing_scale=pairing_scale))
    im = sparse_rank(codifferential_columns(model, 2, pairing_scale=pairing_scale))
    return ker - im


def flatness_classification(h2) -> Classification:
    """Decide which flatness argument applies from the degrees present in ``H^2``.

    Accepts a :class:`CohomologyReport` or a ``{degree: dim}`` mapping.
    """
    by_degree = h2.h2_by_degree if isinstance(h2, CohomologyReport) else h2
    present = {d for d, v in by_degree.items() if v}
    if 2 in present:
        return Classification.INTERESTING_DEGREE2
    if present == {1, 3}:
        raise AmbiguousClassification(present)
    if present <= {1}:
        return Classification.FLAT_IF_SYMMETRIC_DEGREE1
    return Classification.FLAT_IF_SYMMETRIC_DEGREE3


__all__ = [
    "AmbiguousClassification", "Classification", "Cochain", "CochainSpace",
    "CohomologyReport", "apply_codifferential", "codifferential_columns",
    "codifferential_matrix", "codifferential_squares", "cochain_space",
    "flatness_classification", "h2_slice", "harmonic_h2", "unsliced_h2",
]
