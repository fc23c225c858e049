"""Rank-r reduction: collapse a shared r-dimensional input image.

When every mode has the same r-dimensional input image (r < n, all A_k
invertible), a change of basis puts that image on the first r coordinates;
a further shear Q = [[Id_r, P], [0, Id_{n-r}]] can always be chosen so the
bottom-right (n-r) x (n-r) block of every transformed A_k is invertible.
The last n-r coordinates then evolve as an (n-r)-dimensional switched
system driven through the bottom-left block, and a system is controllable
exactly when its reduction is; a shortest controllable sequence of the
original is at most one step longer than one of the reduction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, Subspace, _rref_rows, column_space, is_invertible
from .model import Mode, SwitchedSystem, validate
from .reachability import SingularModeError


class ReductionError(ValueError):
    """The system does not meet the reduction's shape requirements."""


@dataclass(frozen=True)
class BlockTransform:
    """Shear transform Q = [[Id_r, P], [0, Id_{n-r}]]; Q^{-1} negates P."""

    p: Matrix  # r x (n-r)

    @property
    def r(self) -> int:
        return self.p.nrows

    @property
    def n(self) -> int:
        return self.p.nrows + self.p.ncols

    def q(self) -> Matrix:
        r, n = self.r, self.n
        grid = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            grid[i][i] = Fraction(1)
        for i in range(r):
            for j in range(n - r):
                grid[i][r + j] = self.p.data[i][j]
        return Matrix(grid, ncols=n)

    def q_inv(self) -> Matrix:
        r, n = self.r, self.n
        grid = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            grid[i][i] = Fraction(1)
        for i in range(r):
            for j in range(n - r):
                grid[i][r + j] = -self.p.data[i][j]
        return Matrix(grid, ncols=n)


def _corner_block(m: Matrix, p: Matrix) -> Matrix:
    """Bottom-right block of Q^{-1} M Q, which works out to C P + D."""
    r = p.nrows
    n = m.nrows
    c = m.submatrix(r, n, 0, r)
    d = m.submatrix(r, n, r, n)
    return c @ p + d


def _random_p(rng: random.Random, r: int, width: int, bound: int) -> Matrix:
    return Matrix(
        [[Fraction(rng.randint(-bound, bound)) for _ in range(width)] for _ in range(r)],
        ncols=width,
    )


def _constructive_p(m: Matrix, r: int) -> Matrix:
    """Column-completion choice of P making C P + D invertible.

    The dependent columns of D are completed to a basis of the bottom space
    by columns of C (possible because the bottom block row (C D) of an
    invertible matrix has full row rank); placing a unit in P for each such
    pairing adds exactly those C columns to the corresponding D columns.
    """
    n = m.nrows
    width = n - r
    c = m.submatrix(r, n, 0, r)
    d = m.submatrix(r, n, r, n)
    if width == 0:
        raise ReductionError("nothing to reduce: r = n")
    if is_invertible(d):
        return Matrix.zeros(r, width)
    # independent columns of D = pivot columns of its RREF
    _, pivots = _rref_rows(d.data, d.ncols)
    independent = list(pivots)
    dependent = [j for j in range(width) if j not in set(independent)]
    span = Subspace(width, [d.column(j) for j in independent])
    pairs = []
    for j in range(r):
        if len(pairs) == len(dependent):
            break
        col = c.column(j)
        if not span.contains_vector(col):
            pairs.append((j, dependent[len(pairs)]))
            span = span + Subspace(width, [col])
    if len(pairs) < len(dependent):
        raise ReductionError("column completion failed")  # M singular in disguise
    grid = [[Fraction(0)] * width for _ in range(r)]
    for j_c, i_d in pairs:
        grid[j_c][i_d] = Fraction(1)
    return Matrix(grid, ncols=width)


def find_block_transform(
    m: Matrix, r: int, *, seed: int = 0, max_attempts: int = 64
) -> BlockTransform:
    """A shear making the bottom-right block of Q^{-1} M Q invertible.

    Uses the constructive column completion, falling back to seeded random
    integer shears (good shears are generic) with the result verified
    exactly either way.
    """
    if not m.is_square:
        raise ReductionError("block transform needs a square matrix")
    n = m.nrows
    if not 1 <= r < n:
        raise ReductionError(f"need 1 <= r < n, got r={r}, n={n}")
    if not is_invertible(m):
        raise ReductionError("matrix is singular")
    try:
        p = _constructive_p(m, r)
        if is_invertible(_corner_block(m, p)):
            return BlockTransform(p)
    except ReductionError:
        pass
    rng = random.Random(seed)
    bound = 1
    for attempt in range(max_attempts):
        p = _random_p(rng, r, n - r, bound)
        if is_invertible(_corner_block(m, p)):
            return BlockTransform(p)
        if attempt % 8 == 7:
            bound *= 2
    raise ReductionError("shear search budget exhausted")


def find_common_transform(
    sys: SwitchedSystem, r: int, *, seed: int = 0, max_attempts: int = 64
) -> BlockTransform:
    """One shear that works for every mode matrix simultaneously.

    Tries P = 0, then each mode's constructive P against all modes, then
    seeded random integer shears; per-mode good shears are generic, so a
    common one is found quickly.
    """
    report = validate(sys)
    if not report.all_a_invertible:
        raise SingularModeError("common block transform needs invertible A matrices")
    n = sys.n
    if not 1 <= r < n:
        raise ReductionError(f"need 1 <= r < n, got r={r}, n={n}")

    def good(p: Matrix) -> bool:
        return all(is_invertible(_corner_block(mode.A, p)) for mode in sys.modes)

    candidates = [Matrix.zeros(r, n - r)]
    for mode in sys.modes:
        try:
            candidates.append(_constructive_p(mode.A, r))
        except ReductionError:
            continue
    for p in candidates:
        if good(p):
            return BlockTransform(p)
    rng = random.Random(seed)
    bound = 1
    for attempt in range(max_attempts):
        p = _random_p(rng, r, n - r, bound)
        if good(p):
            return BlockTransform(p)
        if attempt % 8 == 7:
            bound *= 2
    raise ReductionError("common shear search budget exhausted")


@dataclass(frozen=True)
class ReducedSystem:
    """Result of the rank reduction.

    ``basis_change`` is the matrix T whose columns express the intermediate
    coordinates in the original ones (original x = T Q z for the final
    coordinates z); the reduced system lives on the last n - r coordinates.
    """

    reduced: SwitchedSystem
    transform: BlockTransform
    basis_change: Matrix


def reduce_rank_system(sys: SwitchedSystem, *, seed: int = 0) -> ReducedSystem:
    """Reduce a system whose modes share one r-dimensional input image.

    Requirements checked exactly: all A_k invertible; all Im(B_k) equal
    with common rank r, 1 <= r < n.  When the input images differ (so the
    one-step space is already bigger than r) this refuses: that situation
    is covered by the direct length bound, not by reduction.
    """
    report = validate(sys)
    if not report.all_a_invertible:
        raise SingularModeError("reduce_rank_system needs invertible A matrices")
    n = sys.n
    images = [column_space(mode.B) for mode in sys.modes]
    r = images[0].dim
    if any(img != images[0] for img in images):
        ranks = [img.dim for img in images]
        raise ReductionError(
            "modes have different input images (ranks "
            f"{ranks}); the one-step space then exceeds the common rank and "
            "the direct length bound applies instead of the reduction"
        )
    if r == 0:
        raise ReductionError("all input matrices are zero; nothing to reduce")
    if r >= n:
        raise ReductionError(f"need r < n, got r={r} = n; system is controllable in one step")

    # Change basis so the common image is span{e_1..e_r}: new coordinates
    # y satisfy x = T y with the image basis in the first r columns of T.
    image = images[0]
    completion = [j for j in range(n) if j not in set(image.pivots)]
    columns = [list(row) for row in image.basis] + [
        [Fraction(1) if i == j else Fraction(0) for i in range(n)] for j in completion
    ]
    t = Matrix.from_columns(columns)
    t_inv = t.inverse()
    normalized = SwitchedSystem(
        tuple(Mode(t_inv @ mode.A @ t, _stacked(n, r)) for mode in sys.modes)
    )
    transform = find_common_transform(normalized, r, seed=seed)
    q, q_inv = transform.q(), transform.q_inv()
    reduced_modes = []
    for mode in normalized.modes:
        final = q_inv @ mode.A @ q
        bottom_right = final.submatrix(r, n, r, n)
        bottom_left = final.submatrix(r, n, 0, r)
        reduced_modes.append(Mode(bottom_right, bottom_left))
    return ReducedSystem(
        reduced=SwitchedSystem(tuple(reduced_modes)),
        transform=transform,
        basis_change=t,
    )


def _stacked(n: int, r: int) -> Matrix:
    # replacing each B by [Id_r; 0] keeps its image, hence all reachable spaces
    return Matrix(
        [[Fraction(1) if i == j else Fraction(0) for j in range(r)] for i in range(n)],
        ncols=r,
    )
