"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` throughout; nothing here ever touches
floating point.  Dense matrices are immutable :class:`Mat` values.  The
``sparse_*`` helpers work on rows given as ``{column: value}`` dicts and are
what the cochain computations use once matrices reach a few hundred rows.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    """Render ``x`` as ``"p/q"``, or ``"p"`` when integral."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


@dataclass(frozen=True)
class Mat:
    """Dense immutable rational matrix, entries stored row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if n else 0
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        return cls(n, m, tuple(as_rational(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls.diag([ONE] * n)

    @classmethod
    def diag(cls, values: Sequence) -> "Mat":
        n = len(values)
        e = [ZERO] * (n * n)
        for i, v in enumerate(values):
            e[i * n + i] = as_rational(v)
        return cls(n, n, tuple(e))

    @classmethod
    def from_sparse(cls, rows: int, cols: int, data: dict) -> "Mat":
        e = [ZERO] * (rows * cols)
        for (i, j), v in data.items():
            e[i * cols + j] = as_rational(v)
        return cls(rows, cols, tuple(e))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[dict]) -> "Mat":
        """Assemble a matrix from sparse column dicts ``{row: value}``."""
        cols = len(columns)
        e = [ZERO] * (rows * cols)
        for j, col in enumerate(columns):
            for i, v in col.items():
                e[i * cols + j] = v
        return cls(rows, cols, tuple(e))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def to_sparse(self) -> dict:
        c = self.cols
        return {divmod(k, c): v for k, v in enumerate(self.entries) if v}

    @property
    def shape(self):
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def transpose(self) -> "Mat":
        r, c = self.rows, self.cols
        e = self.entries
        return Mat(c, r, tuple(e[i * c + j] for j in range(c) for i in range(r)))

    T = property(transpose)

    def __add__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(self.rows, self.cols,
                   tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(self.rows, self.cols,
                   tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, s) -> "Mat":
        s = as_rational(s)
        return Mat(self.rows, self.cols, tuple(s * a for a in self.entries))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        n, k, m = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [ZERO] * (n * m)
        for i in range(n):
            base = i * m
            for t in range(k):
                x = a[i * k + t]
                if not x:
                    continue
                brow = t * m
                for j in range(m):
                    y = b[brow + j]
                    if y:
                        out[base + j] += x * y
        return Mat(n, m, tuple(out))

    def apply(self, v: Sequence) -> list:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        c = self.cols
        e = self.entries
        return [sum((e[i * c + j] * v[j] for j in range(c) if v[j]), ZERO)
                for i in range(self.rows)]

    def trace(self) -> Fraction:
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        return sum((self[i, i] for i in range(self.rows)), ZERO)

    def commutator(self, other: "Mat") -> "Mat":
        return self @ other - other @ self

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in self.row(i))
                         for i in range(self.rows))
        return f"Mat[{body}]"


# ---------------------------------------------------------------------------
# dense elimination


def _rref_rows(rows: list, ncols: int):
    """In-place reduced row echelon form of a list of Fraction lists."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r]
        inv = 1 / piv[c]
        if inv != 1:
            for j in range(c, ncols):
                if piv[j]:
                    piv[j] *= inv
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f:
                row = rows[i]
                for j in range(c, ncols):
                    if piv[j]:
                        row[j] -= f * piv[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Mat):
    """Return ``(R, rank)`` with ``R`` the reduced row echelon form of ``m``."""
    rows = m.to_rows()
    pivots = _rref_rows(rows, m.cols)
    return Mat.from_rows(rows) if m.rows else m, len(pivots)


def rank(m: Mat) -> int:
    return rref(m)[1]


def kernel_basis(m: Mat) -> list:
    """Basis of ``{v : m v = 0}``, one vector per free column of the RREF.

    Each vector has a 1 in its free column and 0 in every other free column,
    so the basis is canonical for a given matrix.
    """
    rows = m.to_rows()
    pivots = _rref_rows(rows, m.cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [ZERO] * m.cols
        v[f] = ONE
        for r, c in enumerate(pivots):
            v[c] = -rows[r][f]
        basis.append(v)
    return basis


def solve(m: Mat, b: Sequence):
    """One solution of ``m x = b`` (free variables set to 0), or ``None``."""
    aug = [row + [as_rational(bi)] for row, bi in zip(m.to_rows(), b)]
    pivots = _rref_rows(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [ZERO] * m.cols
    for r, c in enumerate(pivots):
        x[c] = aug[r][m.cols]
    return x


def inverse(m: Mat) -> Mat:
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = [row + [ONE if i == j else ZERO for j in range(n)]
           for i, row in enumerate(m.to_rows())]
    pivots = _rref_rows(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        raise ZeroDivisionError("matrix is singular")
    return Mat.from_rows([row[n:] for row in aug])


# ---------------------------------------------------------------------------
# determinants and characteristic polynomials


def _integer_scaled(m: Mat):
    """``(L, A)`` with ``A = L*m`` an integer matrix as nested lists."""
    den = 1
    for x in m.entries:
        den = lcm(den, x.denominator)
    return den, [[int(x * den) for x in m.row(i)] for i in range(m.rows)]


def bareiss_det_int(a: list) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k]), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def det(m: Mat) -> Fraction:
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    den, a = _integer_scaled(m)
    return Fraction(bareiss_det_int(a), den ** m.rows)


def charpoly_int(a: list) -> list:
    """Characteristic polynomial of an integer matrix, Faddeev-LeVerrier.

    Returns integer coefficients ``[c_n, ..., c_0]`` of ``det(xI - a)`` with
    ``c_n = 1``.  Every division is exact over the integers.
    """
    n = len(a)
    coeffs = [1]
    mk = [[0] * n for _ in range(n)]  # M_0 = 0
    c = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        prod = [[sum(a[i][t] * mk[t][j] for t in range(n) if a[i][t])
                 for j in range(n)] for i in range(n)]
        for i in range(n):
            prod[i][i] += c
        mk = prod
        am = sum(a[i][t] * mk[t][i] for i in range(n) for t in range(n) if a[i][t])
        if am % k:
            raise ArithmeticError("non-exact division in Faddeev-LeVerrier")
        c = -am // k
        coeffs.append(c)
    return coeffs


def charpoly(m: Mat) -> list:
    """Monic characteristic polynomial of ``m``, coefficients highest degree first."""
    if not m.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    den, a = _integer_scaled(m)
    # roots of charpoly(L m) are L times the roots of charpoly(m)
    ci = charpoly_int(a)
    return [Fraction(c, den ** k) for k, c in enumerate(ci)]


def _divisors(n: int) -> list:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def _synthetic_div(coeffs: list, r) -> tuple:
    out = [coeffs[0]]
    for c in coeffs[1:]:
        out.append(c + r * out[-1])
    return out[:-1], out[-1]


def integer_poly_rational_roots(coeffs: list) -> Counter:
    """Rational roots with multiplicity of an integer polynomial.

    ``coeffs`` are highest degree first.  Candidates come from the rational
    root theorem: ``p/q`` with ``p | constant`` and ``q | leading``.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    roots = Counter()
    if len(coeffs) <= 1:
        return roots
    while coeffs[-1] == 0 and len(coeffs) > 1:
        coeffs.pop()
        roots[ZERO] += 1
    if len(coeffs) == 1:
        return roots
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    coeffs = [c // g for c in coeffs]
    candidates = set()
    for p in _divisors(coeffs[-1]):
        for q in _divisors(coeffs[0]):
            candidates.add(Fraction(p, q))
            candidates.add(Fraction(-p, q))
    poly = [Fraction(c) for c in coeffs]
    for r in sorted(candidates):
        while len(poly) > 1:
            quot, rem = _synthetic_div(poly, r)
            if rem:
                break
            roots[r] += 1
            poly = quot
    return roots


@dataclass(frozen=True)
class SpectrumResult:
    roots: tuple            # sorted, with multiplicity
    fully_split: bool
    diagonalizable: bool

    def distinct(self) -> list:
        return sorted(set(self.roots))

    def multiplicities(self) -> dict:
        return dict(sorted(Counter(self.roots).items()))


def rational_spectrum(m: Mat) -> SpectrumResult:
    """Rational eigenvalues of ``m`` with algebraic multiplicity.

    ``diagonalizable`` means diagonalizable over the rationals: the spectrum
    splits and each geometric multiplicity equals the algebraic one.
    """
    if not m.is_square():
        raise ValueError("spectrum of a non-square matrix")
    n = m.rows
    den, a = _integer_scaled(m)
    roots = integer_poly_rational_roots(charpoly_int(a))
    found = Counter({r / den: k for r, k in roots.items()})
    total = sum(found.values())
    fully_split = total == n
    diagonalizable = fully_split
    if fully_split:
        for r, mult in found.items():
            shifted = m - Mat.identity(n).scale(r)
            if n - rank(shifted) != mult:
                diagonalizable = False
                break
    flat = tuple(sorted(found.elements()))
    return SpectrumResult(flat, fully_split, diagonalizable)


def rational_nth_root(x: Fraction, n: int) -> list:
    """All real rational ``t`` with ``t**n == x``."""
    if n <= 0:
        raise ValueError("root order must be positive")
    if x == 0:
        return [ZERO]
    if x < 0 and n % 2 == 0:
        return []
    sgn = -1 if x < 0 else 1
    num, den = abs(x.numerator), x.denominator
    rn, rd = _int_root(num, n), _int_root(den, n)
    if rn is None or rd is None:
        return []
    t = Fraction(rn, rd)
    if n % 2:
        return [sgn * t]
    return [-t, t]


def _int_root(a: int, n: int):
    lo, hi = 0, 1
    while hi ** n < a:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** n < a:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** n == a else None


# ---------------------------------------------------------------------------
# sparse elimination


class SparseEchelon:
    """Incrementally maintained echelon basis of sparse rational vectors.

    Vectors are ``{index: Fraction}`` dicts.  Each stored pivot row is
    normalised to 1 at its smallest index and reduced on insertion, which is
    enough to decide membership and rank exactly.
    """

    def __init__(self):
        self.pivots: dict = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, vec: dict) -> dict:
        v = {k: x for k, x in vec.items() if x}
        pivots = self.pivots
        while v:
            c = min(v)
            prow = pivots.get(c)
            if prow is None:
                return v
            f = v[c]
            # walk the whole vector past c; pivot rows only hold indices >= c
            for k, x in prow.items():
                nv = v.get(k, ZERO) - f * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
            # v[c] cancelled exactly by the loop above
            if c in v:
                raise ArithmeticError("pivot elimination failed")
        return v

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        inv = 1 / v[c]
        if inv != 1:
            v = {k: x * inv for k, x in v.items()}
        self.pivots[c] = v
        return True


def sparse_rank(vectors: Iterable[dict]) -> int:
    ech = SparseEchelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def sparse_kernel_dim(columns: Sequence[dict]) -> int:
    """``dim ker`` of the matrix whose columns are the given sparse dicts."""
    return len(columns) - sparse_rank(columns)


def sparse_kernel_basis(columns: Sequence[dict], ncols=None) -> list:
    """Kernel basis of the matrix given by sparse columns.

    Dependencies are tracked by augmenting each column with a unit tag in a
    shifted index range, so the kernel comes out of the same elimination.
    """
    ncols = len(columns) if ncols is None else ncols
    height = 1 + max((max(c) for c in columns if c), default=-1)
    ech = SparseEchelon()
    basis = []
    for j, col in enumerate(columns):
        aug = dict(col)
        aug[height + j] = ONE
        v = ech.reduce(aug)
        if v and min(v) < height:
            c = min(v)
            inv = 1 / v[c]
            ech.pivots[c] = {k: x * inv for k, x in v.items()}
        else:
            vec = [ZERO] * ncols
            for k, x in v.items():
                vec[k - height] = x
            basis.append(vec)
    return basis


def sparse_matmul_columns(a_cols: Sequence[dict], b_cols: Sequence[dict]) -> list:
    """Columns of ``A @ B`` where both factors are given by sparse columns."""
    out = []
    for bc in b_cols:
        acc: dict = {}
        for t, y in bc.items():
            for i, x in a_cols[t].items():
                nv = acc.get(i, ZERO) + x * y
                if nv:
                    acc[i] = nv
                else:
                    acc.pop(i, None)
        out.append(acc)
    return out


def columns_of(m: Mat) -> list:
    cols = [dict() for _ in range(m.cols)]
    for (i, j), v in m.to_sparse().items():
        cols[j][i] = v
    return cols
