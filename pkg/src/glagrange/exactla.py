"""Exact rational linear algebra.

Matrices are stored as an integer numerator table over one positive common
denominator, kept in lowest terms.  That representation is canonical (two
equal matrices have identical storage) and lets products and eliminations run
on Python integers instead of ``Fraction`` objects.

Vectors are rows throughout; a bilinear form with Gram matrix ``W`` evaluates
as ``v @ W @ w.T``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

__all__ = [
    "RationalMatrix",
    "Subspace",
    "QuotientMap",
    "rref",
    "kernel",
    "subspace_ops",
    "as_fraction",
]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused on purpose: one rounded entry silently breaks every
    downstream equality check.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot use {type(x).__name__} {x!r} as an exact rational")


def _normalize(num: list[list[int]], den: int) -> tuple[tuple[tuple[int, ...], ...], int]:
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if den < 0:
        num = [[-a for a in row] for row in num]
        den = -den
    g = den
    for row in num:
        for a in row:
            if a:
                g = gcd(g, a)
                if g == 1:
                    break
        if g == 1:
            break
    if g > 1:
        num = [[a // g for a in row] for row in num]
        den //= g
    return tuple(tuple(row) for row in num), den


class RationalMatrix:
    """Immutable exact rational matrix.

    Build with :meth:`from_rows`, :meth:`zeros`, :meth:`identity`; entries come
    back as ``Fraction`` through indexing (``M[i, j]``) or :meth:`tolist`.
    """

    __slots__ = ("rows", "cols", "_num", "_den", "_hash")

    def __init__(self, num, den: int = 1, cols: int | None = None):
        num = [list(r) for r in num]
        self._num, self._den = _normalize(num, den)
        self.rows = len(self._num)
        if cols is None:
            if not self._num:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(self._num[0])
        self.cols = cols
        for r in self._num:
            if len(r) != cols:
                raise ValueError("ragged rows")
        self._hash = None

    @classmethod
    def _raw(cls, num, den, rows, cols) -> "RationalMatrix":
        # trusted constructor: num already a tuple of int tuples in lowest terms
        m = object.__new__(cls)
        m._num, m._den, m.rows, m.cols, m._hash = num, den, rows, cols, None
        return m

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], cols: int | None = None) -> "RationalMatrix":
        fr = [[as_fraction(x) for x in r] for r in rows]
        if not fr:
            return cls.zeros(0, cols or 0)
        den = 1
        for r in fr:
            for x in r:
                if x.denominator != 1:
                    den = lcm(den, x.denominator)
        num = [[x.numerator * (den // x.denominator) for x in r] for r in fr]
        return cls(num, den, cols if cols is not None else len(fr[0]))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        return cls._raw(tuple((0,) * cols for _ in range(rows)), 1, rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls._raw(
            tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), 1, n, n
        )

    @classmethod
    def scalar(cls, n: int, c) -> "RationalMatrix":
        return cls.identity(n) * c

    @classmethod
    def block_diag(cls, blocks: Sequence["RationalMatrix"]) -> "RationalMatrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        den = reduce(lcm, (b._den for b in blocks), 1)
        num = [[0] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            s = den // b._den
            for i, row in enumerate(b._num):
                tgt = num[r0 + i]
                for j, a in enumerate(row):
                    if a:
                        tgt[c0 + j] = a * s
            r0 += b.rows
            c0 += b.cols
        return cls(num, den, m)

    @classmethod
    def hstack(cls, blocks: Sequence["RationalMatrix"]) -> "RationalMatrix":
        rows = blocks[0].rows
        if any(b.rows != rows for b in blocks):
            raise ValueError("hstack: row counts differ")
        den = reduce(lcm, (b._den for b in blocks), 1)
        num = [[] for _ in range(rows)]
        for b in blocks:
            s = den // b._den
            for i, row in enumerate(b._num):
                num[i].extend(a * s for a in row)
        return cls(num, den, sum(b.cols for b in blocks))

    @classmethod
    def vstack(cls, blocks: Sequence["RationalMatrix"]) -> "RationalMatrix":
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ValueError("vstack: column counts differ")
        den = reduce(lcm, (b._den for b in blocks), 1)
        num = []
        for b in blocks:
            s = den // b._den
            num.extend([a * s for a in row] for row in b._num)
        return cls(num, den, cols)

    # -- access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def numerators(self) -> tuple[tuple[int, ...], ...]:
        return self._num

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return Fraction(self._num[i][j], self._den)

    def row(self, i: int) -> "RationalMatrix":
        return RationalMatrix((self._num[i],), self._den, self.cols)

    def take_rows(self, idx: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix([self._num[i] for i in idx], self._den, self.cols)

    def take_cols(self, idx: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix([[r[j] for j in idx] for r in self._num], self._den, len(idx))

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "RationalMatrix":
        return RationalMatrix([r[c0:c1] for r in self._num[r0:r1]], self._den, c1 - c0)

    def tolist(self) -> list[list[Fraction]]:
        d = self._den
        return [[Fraction(a, d) for a in r] for r in self._num]

    def row_vectors(self) -> list[tuple[Fraction, ...]]:
        d = self._den
        return [tuple(Fraction(a, d) for a in r) for r in self._num]

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._num for a in r)

    def height(self) -> int:
        """Largest absolute numerator or denominator over all entries."""
        h = 0
        for x in (f for r in self.tolist() for f in r):
            h = max(h, abs(x.numerator), x.denominator)
        return h

    # -- arithmetic -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self._den == other._den
            and self._num == other._num
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._den, self._num))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.tolist())
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"

    @property
    def T(self) -> "RationalMatrix":
        if self.rows == 0:
            return RationalMatrix.zeros(self.cols, 0)
        return RationalMatrix._raw(
            tuple(zip(*self._num)), self._den, self.cols, self.rows
        )

    def _combine(self, other: "RationalMatrix", sign: int) -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        den = lcm(self._den, other._den)
        s1, s2 = den // self._den, sign * (den // other._den)
        num = [[a * s1 + b * s2 for a, b in zip(r1, r2)] for r1, r2 in zip(self._num, other._num)]
        return RationalMatrix(num, den, self.cols)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._raw(
            tuple(tuple(-a for a in r) for r in self._num), self._den, self.rows, self.cols
        )

    def __mul__(self, c) -> "RationalMatrix":
        c = as_fraction(c)
        num = [[a * c.numerator for a in r] for r in self._num]
        return RationalMatrix(num, self._den * c.denominator, self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols_b = list(zip(*other._num)) if other.rows else [()] * other.cols
        out = []
        for r in self._num:
            nz = [(k, a) for k, a in enumerate(r) if a]
            if not nz:
                out.append([0] * other.cols)
                continue
            out.append([sum(a * c[k] for k, a in nz) for c in cols_b])
        return RationalMatrix(out, self._den * other._den, other.cols)

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return Fraction(sum(self._num[i][i] for i in range(self.rows)), self._den)

    def rank(self) -> int:
        return len(rref(self)[1])

    def inverse(self) -> "RationalMatrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        R, piv = rref(RationalMatrix.hstack([self, RationalMatrix.identity(n)]))
        if piv[:n] != list(range(n)) or (len(piv) > n and piv[n] < n):
            raise ZeroDivisionError("matrix is singular")
        return R.submatrix(0, n, n, 2 * n)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def is_skew(self) -> bool:
        return self.rows == self.cols and self == -self.T

    def __pow__(self, k: int) -> "RationalMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = RationalMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result


def _row_content(row: list[int]) -> int:
    g = 0
    for a in row:
        if a:
            g = gcd(g, a)
            if g == 1:
                return 1
    return g


def _rref_int(num: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free Gauss-Jordan on integer rows.

    Returns primitive integer rows (not yet scaled to leading 1) and pivots.
    """
    rows = [r[:] for r in num if any(r)]
    for i, r in enumerate(rows):
        g = _row_content(r)
        if g > 1:
            rows[i] = [a // g for a in r]
    pivots: list[int] = []
    top = 0
    for c in range(ncols):
        if top == len(rows):
            break
        best = None
        for i in range(top, len(rows)):
            a = rows[i][c]
            if a and (best is None or abs(a) < abs(rows[best][c])):
                best = i
                if abs(a) == 1:
                    break
        if best is None:
            continue
        rows[top], rows[best] = rows[best], rows[top]
        prow = rows[top]
        pv = prow[c]
        pnz = [(k, prow[k]) for k in range(c, ncols) if prow[k]]
        for i in range(len(rows)):
            if i == top:
                continue
            r = rows[i]
            a = r[c]
            if not a:
                continue
            g = gcd(pv, a)
            m1, m2 = pv // g, a // g
            if m1 != 1:
                r = [m1 * x for x in r]
            for k, y in pnz:
                r[k] -= m2 * y
            g = _row_content(r)
            if g > 1:
                r = [x // g for x in r]
            rows[i] = r
        pivots.append(c)
        top += 1
    return rows[:top], pivots


def rref(M: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    """Reduced row-echelon form and the pivot columns.

    Zero rows are kept at the bottom so ``R`` has the shape of ``M``.
    """
    rows, pivots = _rref_int([list(r) for r in M._num], M.cols)
    den = 1
    for r, c in zip(rows, pivots):
        den = lcm(den, abs(r[c]))
    out = []
    for r, c in zip(rows, pivots):
        s = den // r[c]
        out.append([a * s for a in r])
    out.extend([0] * M.cols for _ in range(M.rows - len(rows)))
    if not out:
        return RationalMatrix.zeros(0, M.cols), []
    return RationalMatrix(out, den, M.cols), pivots


class Subspace:
    """A subspace of Q^n held by its reduced row-echelon basis.

    Canonical storage means ``==`` is set equality.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: RationalMatrix, pivots: list[int]):
        # use Subspace.span; this trusts its inputs
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None) -> "Subspace":
        if not isinstance(vectors, RationalMatrix):
            vectors = RationalMatrix.from_rows(list(vectors), cols=ambient_dim)
        if ambient_dim is not None and vectors.cols != ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        R, piv = rref(vectors)
        return cls(vectors.cols, R.take_rows(range(len(piv))) if piv else RationalMatrix.zeros(0, vectors.cols), piv)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, RationalMatrix.zeros(0, n), [])

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, RationalMatrix.identity(n), list(range(n)))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} in Q^{self.ambient_dim})"

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def reduce(self, vectors: RationalMatrix) -> RationalMatrix:
        """Normal form of each row modulo this subspace (zero at every pivot)."""
        if self.dim == 0:
            return vectors
        coeffs = vectors.take_cols(self.pivots)
        return vectors - coeffs @ self.basis

    def contains(self, vectors: RationalMatrix) -> bool:
        if vectors.rows == 0:
            return True
        return self.reduce(vectors).is_zero()

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return self.contains(other.basis)

    def coordinates(self, vectors: RationalMatrix) -> RationalMatrix:
        """Coordinates of rows already lying in this subspace, in the stored basis."""
        return vectors.take_cols(self.pivots)

    def image(self, A: RationalMatrix) -> "Subspace":
        """The subspace spanned by ``basis @ A`` (right action on rows)."""
        if self.dim == 0:
            return Subspace.zero(A.cols)
        return Subspace.span(self.basis @ A)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return Subspace.span(RationalMatrix.vstack([self.basis, other.basis]))

    def orthogonal(self) -> "Subspace":
        """Complement under the standard dot product."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        return kernel(self.basis)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        return (self.orthogonal() + other.orthogonal()).orthogonal()

    def complement_coordinates(self) -> list[int]:
        """Standard basis indices spanning a complement (the non-pivot columns)."""
        p = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in p]


def kernel(M: RationalMatrix) -> Subspace:
    """Right null space ``{v : M @ v.T == 0}`` as a Subspace of Q^cols."""
    R, piv = rref(M)
    n = M.cols
    pset = set(piv)
    free = [j for j in range(n) if j not in pset]
    if not free:
        return Subspace.zero(n)
    den = R._den
    vecs = []
    for f in free:
        v = [0] * n
        v[f] = den
        for k, p in enumerate(piv):
            v[p] = -R._num[k][f]
        vecs.append(v)
    return Subspace.span(RationalMatrix(vecs, den, n))


class QuotientMap:
    """Linear surjection from a subspace ``A`` onto coordinates of ``A / B``.

    Classes are represented by reduction modulo ``B``; the reduced vectors of
    ``A`` span a complement ``U`` of ``B`` inside ``A`` and coordinates are read
    off at ``U``'s pivots.  ``lift`` returns ``U``'s basis, a section of the map.
    """

    def __init__(self, A: Subspace, B: Subspace):
        if not A.contains_subspace(B):
            raise ValueError("quotient requires B to be contained in A")
        self.source = A
        self.kernel = B
        self.complement = Subspace.span(B.reduce(A.basis)) if A.dim else Subspace.zero(A.ambient_dim)

    @property
    def dim(self) -> int:
        return self.complement.dim

    @property
    def lift(self) -> RationalMatrix:
        return self.complement.basis

    def __call__(self, vectors: RationalMatrix) -> RationalMatrix:
        if not self.source.contains(vectors):
            raise ValueError("vector outside the quotient's source subspace")
        return self.complement.coordinates(self.kernel.reduce(vectors))


def subspace_ops(A: Subspace, B: Subspace) -> dict:
    """Sum, intersection, containment ``B <= A`` and (if contained) the quotient map."""
    A._check(B)
    contained = A.contains_subspace(B)
    return {
        "sum": A + B,
        "intersection": A & B,
        "containment": contained,
        "quotient_map": QuotientMap(A, B) if contained else None,
    }
