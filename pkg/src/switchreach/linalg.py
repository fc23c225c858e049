"""Exact rational linear algebra: dense matrices and canonical subspaces.

Everything is computed over Python's arbitrary-precision ``Fraction``, so
rank, span membership and subspace equality are exact predicates; there are
no tolerances anywhere.  A subspace is identified by its reduced-row-echelon
row basis, which is unique, making subspaces cheap, reliable dictionary keys.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ShapeError(ValueError):
    """Operand shapes or ambient dimensions are incompatible."""


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or numeric string ("3", "-2/5") to Fraction.

    Floats are rejected: they would smuggle rounding into a codebase whose
    point is exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational entry")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    raise TypeError(f"exact rational entry required, got {type(value).__name__}")


def _rref_rows(rows: Sequence[Sequence[Fraction]], ncols: int):
    """Gauss-Jordan reduction. Returns (reduced row list, pivot column list)."""
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if work[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        pv = work[r][c]
        if pv != 1:
            work[r] = [x / pv for x in work[r]]
        lead = work[r]
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], lead)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return work, pivots


class Matrix:
    """Immutable dense matrix with exact ``Fraction`` entries.

    Zero-width matrices (``ncols == 0``) are legal: an input matrix may be
    absent, in which case its image is the zero subspace.
    """

    __slots__ = ("data", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], *, ncols: int | None = None):
        data = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ShapeError("ragged rows in matrix literal")
            if ncols is not None and ncols != width:
                raise ShapeError(f"declared ncols={ncols}, rows have width {width}")
            ncols = width
        elif ncols is None:
            ncols = 0
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "_hash", hash((len(data), ncols, data)))

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(
            [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)],
            ncols=n,
        )

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[_ZERO] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], *, nrows: int | None = None) -> "Matrix":
        cols = [tuple(as_rational(x) for x in c) for c in columns]
        if cols:
            nrows_found = len(cols[0])
            if any(len(c) != nrows_found for c in cols):
                raise ShapeError("ragged columns")
            if nrows is not None and nrows != nrows_found:
                raise ShapeError("declared nrows does not match columns")
            nrows = nrows_found
        elif nrows is None:
            raise ShapeError("empty column list needs an explicit nrows")
        return cls([[c[i] for c in cols] for i in range(nrows)], ncols=len(cols))

    @classmethod
    def block_diag(cls, *blocks: "Matrix") -> "Matrix":
        """Block-diagonal assembly; zero-size blocks contribute nothing."""
        total_r = sum(b.nrows for b in blocks)
        total_c = sum(b.ncols for b in blocks)
        grid = [[_ZERO] * total_c for _ in range(total_r)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.nrows):
                row = b.data[i]
                for j in range(b.ncols):
                    grid[r0 + i][c0 + j] = row[j]
            r0 += b.nrows
            c0 += b.ncols
        return cls(grid, ncols=total_c)

    @classmethod
    def hstack(cls, *mats: "Matrix") -> "Matrix":
        nrows = mats[0].nrows
        if any(m.nrows != nrows for m in mats):
            raise ShapeError("hstack needs equal row counts")
        return cls(
            [sum((list(m.data[i]) for m in mats), []) for i in range(nrows)],
            ncols=sum(m.ncols for m in mats),
        )

    # -- access ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, key) -> Fraction:
        i, j = key
        return self.data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.data[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> Iterator[tuple[Fraction, ...]]:
        for j in range(self.ncols):
            yield self.column(j)

    def submatrix(self, rows0: int, rows1: int, cols0: int, cols1: int) -> "Matrix":
        return Matrix(
            [r[cols0:cols1] for r in self.data[rows0:rows1]],
            ncols=cols1 - cols0,
        )

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.data]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
            ncols=self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {other.shape} from {self.shape}")
        return Matrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)],
            ncols=self.ncols,
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        other_cols = [other.column(j) for j in range(other.ncols)]
        return Matrix(
            [
                [sum(a * b for a, b in zip(row, col)) for col in other_cols]
                for row in self.data
            ],
            ncols=other.ncols,
        )

    def __pow__(self, exponent: int) -> "Matrix":
        if not self.is_square:
            raise ShapeError("matrix power needs a square matrix")
        if exponent < 0:
            raise ValueError("negative matrix powers are not supported")
        result = Matrix.identity(self.nrows)
        for _ in range(exponent):
            result = result @ self
        return result

    def apply(self, vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(vector) != self.ncols:
            raise ShapeError("vector length does not match matrix width")
        return tuple(sum(a * v for a, v in zip(row, vector)) for row in self.data)

    def transpose(self) -> "Matrix":
        return Matrix(
            [[self.data[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            ncols=self.nrows,
        )

    # -- rank, determinant, inverse ----------------------------------------

    def rank(self) -> int:
        _, pivots = _rref_rows(self.data, self.ncols)
        return len(pivots)

    def det(self) -> Fraction:
        if not self.is_square:
            raise ShapeError("determinant needs a square matrix")
        n = self.nrows
        work = [list(r) for r in self.data]
        sign = 1
        result = _ONE
        for c in range(n):
            pivot_row = None
            for i in range(c, n):
                if work[i][c]:
                    pivot_row = i
                    break
            if pivot_row is None:
                return _ZERO
            if pivot_row != c:
                work[c], work[pivot_row] = work[pivot_row], work[c]
                sign = -sign
            pv = work[c][c]
            result *= pv
            for i in range(c + 1, n):
                if work[i][c]:
                    f = work[i][c] / pv
                    work[i] = [a - f * b for a, b in zip(work[i], work[c])]
        return result if sign > 0 else -result

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise ShapeError("inverse needs a square matrix")
        n = self.nrows
        aug = [list(r) + [_ONE if i == j else _ZERO for j in range(n)]
               for i, r in enumerate(self.data)]
        reduced, pivots = _rref_rows(aug, 2 * n)
        if len(pivots) < n or pivots[:n] != list(range(n)):
            raise ShapeError("matrix is singular")
        return Matrix([r[n:] for r in reduced[:n]], ncols=n)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ncols == other.ncols and self.data == other.data

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"Matrix({self.nrows}x{self.ncols}: {rows})"


class Subspace:
    """A linear subspace of Q^n stored by its canonical RREF row basis.

    Two ``Subspace`` objects are equal as sets exactly when their stored
    bases are identical entry for entry, so equality and hashing are O(size)
    with no normalisation at comparison time.  The zero subspace has an
    empty basis.
    """

    __slots__ = ("ambient", "basis", "pivots", "_hash")

    def __init__(self, ambient: int, rows: Iterable[Iterable] = (), *, _canonical=None):
        if ambient < 1:
            raise ShapeError("ambient dimension must be >= 1")
        if _canonical is not None:
            basis, pivots = _canonical
        else:
            raw = [[as_rational(x) for x in row] for row in rows]
            for row in raw:
                if len(row) != ambient:
                    raise ShapeError("spanning row length differs from ambient dimension")
            reduced, pivots = _rref_rows(raw, ambient)
            basis = tuple(tuple(r) for r in reduced[: len(pivots)])
            pivots = tuple(pivots)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pivots", pivots)
        object.__setattr__(self, "_hash", hash((ambient, basis)))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, _canonical=((), ()))

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        rows = tuple(
            tuple(_ONE if i == j else _ZERO for j in range(ambient))
            for i in range(ambient)
        )
        return cls(ambient, _canonical=(rows, tuple(range(ambient))))

    @classmethod
    def span(cls, ambient: int, rows: Iterable[Iterable]) -> "Subspace":
        return cls(ambient, rows)

    @classmethod
    def coordinate(cls, ambient: int, indices: Iterable[int]) -> "Subspace":
        """Span of the standard basis vectors with the given 0-based indices."""
        idx = sorted(set(indices))
        if idx and (idx[0] < 0 or idx[-1] >= ambient):
            raise ShapeError("coordinate index out of range")
        rows = tuple(
            tuple(_ONE if j == i else _ZERO for j in range(ambient)) for i in idx
        )
        return cls(ambient, _canonical=(rows, tuple(idx)))

    # -- inspection ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.basis

    @property
    def is_full(self) -> bool:
        return len(self.basis) == self.ambient

    def basis_matrix(self) -> Matrix:
        return Matrix(self.basis, ncols=self.ambient)

    def coordinate_indices(self) -> tuple[int, ...] | None:
        """0-based indices if this is a span of standard basis vectors, else None."""
        for row in self.basis:
            if sum(1 for x in row if x) != 1:
                return None
        return self.pivots

    def sort_key(self):
        return (self.dim, self.basis)

    def label_hash(self) -> str:
        """Short stable digest of the canonical basis, for display purposes."""
        text = ";".join(",".join(str(x) for x in row) for row in self.basis)
        return hashlib.sha1(text.encode()).hexdigest()[:8]

    # -- membership and comparison --------------------------------------------

    def contains_vector(self, vector: Sequence) -> bool:
        vec = [as_rational(x) for x in vector]
        if len(vec) != self.ambient:
            raise ShapeError("vector length differs from ambient dimension")
        for row, p in zip(self.basis, self.pivots):
            f = vec[p]
            if f:
                vec = [a - f * b for a, b in zip(vec, row)]
        return not any(vec)

    def contains(self, other: "Subspace") -> bool:
        if self.ambient != other.ambient:
            raise ShapeError("ambient dimensions differ")
        if other.dim > self.dim:
            return False
        return all(self.contains_vector(row) for row in other.basis)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self) -> int:
        return self._hash

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise ShapeError("ambient dimensions differ")
        if self.is_zero or other.contains(self):
            return other
        if other.is_zero or self.contains(other):
            return self
        return Subspace(self.ambient, list(self.basis) + list(other.basis))

    def apply(self, a: Matrix) -> "Subspace":
        """Image under a square matrix acting on the ambient space."""
        if a.nrows != a.ncols or a.ncols != self.ambient:
            raise ShapeError("map must be square with side = ambient dimension")
        if self.is_zero:
            return self
        return Subspace(self.ambient, [a.apply(v) for v in self.basis])

    def __repr__(self) -> str:
        idx = self.coordinate_indices()
        if idx is not None:
            if not idx:
                return f"Subspace(0 in Q^{self.ambient})"
            inside = ",".join(f"e{i + 1}" for i in idx)
            return f"Subspace(span{{{inside}}} in Q^{self.ambient})"
        return f"Subspace(dim {self.dim} in Q^{self.ambient} [{self.label_hash()}])"


# -- module-level operation surface ----------------------------------------


def rref(m: Matrix) -> Matrix:
    """Unique reduced row echelon form; its nonzero row count is the rank."""
    reduced, _ = _rref_rows(m.data, m.ncols)
    return Matrix(reduced, ncols=m.ncols)


def row_space(m: Matrix) -> Subspace:
    if m.ncols < 1:
        raise ShapeError("row space of a zero-width matrix has no ambient dimension")
    return Subspace(m.ncols, m.data)


def column_space(m: Matrix) -> Subspace:
    """Canonical subspace spanned by the columns of ``m``."""
    if m.nrows < 1:
        raise ShapeError("column space needs at least one row")
    return Subspace(m.nrows, [m.column(j) for j in range(m.ncols)])


def subspace_sum(u: Subspace, w: Subspace) -> Subspace:
    return u + w


def apply_map(a: Matrix, w: Subspace) -> Subspace:
    return w.apply(a)


def contains(u: Subspace, w: Subspace) -> bool:
    """Exact set containment u >= w."""
    return u.contains(w)


def equals(u: Subspace, w: Subspace) -> bool:
    if u.ambient != w.ambient:
        raise ShapeError("ambient dimensions differ")
    return u == w


def is_invertible(a: Matrix) -> bool:
    if not a.is_square:
        raise ShapeError("invertibility is defined for square matrices")
    return a.rank() == a.nrows
