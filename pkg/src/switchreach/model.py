"""Switched linear control systems: model types, validation, JSON I/O.

A system is a family of modes (A_i, B_i), i = 1..m, over a shared state
dimension n; the active mode at each step is itself a control choice.  Mode
indices are 1-based in every user-facing surface.  A switching sequence is a
tuple of mode indices in time order (first entry applied first).
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .linalg import Matrix, ShapeError, as_rational, column_space, is_invertible

ModeSequence = tuple[int, ...]


class SystemFormatError(ValueError):
    """Malformed or inconsistent system description."""


@dataclass(frozen=True)
class Mode:
    """One mode (A, B): A is n x n, B has n rows and any width (0 allowed)."""

    A: Matrix
    B: Matrix

    def __post_init__(self):
        if not self.A.is_square or self.A.nrows < 1:
            raise SystemFormatError("mode matrix A must be square, n >= 1")
        if self.B.nrows != self.A.nrows:
            raise SystemFormatError(
                f"B has {self.B.nrows} rows but A is {self.A.nrows}x{self.A.ncols}"
            )


@dataclass(frozen=True)
class SwitchedSystem:
    """Immutable switched linear control system with modes 1..m."""

    modes: tuple[Mode, ...]

    def __post_init__(self):
        if not self.modes:
            raise SystemFormatError("a system needs at least one mode")
        n = self.modes[0].A.nrows
        for i, mode in enumerate(self.modes, start=1):
            if mode.A.nrows != n:
                raise SystemFormatError(
                    f"mode {i} has dimension {mode.A.nrows}, expected {n}"
                )

    @property
    def n(self) -> int:
        return self.modes[0].A.nrows

    @property
    def m(self) -> int:
        return len(self.modes)

    def mode(self, index: int) -> Mode:
        """Mode by 1-based index."""
        if not 1 <= index <= self.m:
            raise IndexError(f"mode index {index} out of range 1..{self.m}")
        return self.modes[index - 1]

    @property
    def mode_indices(self) -> range:
        return range(1, self.m + 1)


def make_system(mode_pairs: Iterable[tuple]) -> SwitchedSystem:
    """Build a system from (A, B) pairs given as Matrix or nested lists.

    ``B=None`` or an empty list denotes a zero-width input matrix.
    """
    modes = []
    for a, b in mode_pairs:
        a = a if isinstance(a, Matrix) else Matrix(a)
        if b is None:
            b = Matrix([], ncols=0)
        elif not isinstance(b, Matrix):
            b = Matrix(b)
        if b.nrows == 0 and a.nrows > 0:
            b = Matrix([[] for _ in range(a.nrows)], ncols=0)
        modes.append(Mode(a, b))
    return SwitchedSystem(tuple(modes))


# -- validity -----------------------------------------------------------------


@dataclass(frozen=True)
class ModeValidity:
    index: int            # 1-based
    a_invertible: bool
    regular: bool         # Im(A) + Im(B) spans the whole state space
    b_rank: int


@dataclass(frozen=True)
class ValidityReport:
    per_mode: tuple[ModeValidity, ...]

    @property
    def all_a_invertible(self) -> bool:
        return all(v.a_invertible for v in self.per_mode)

    @property
    def all_modes_regular(self) -> bool:
        return all(v.regular for v in self.per_mode)

    @property
    def some_mode_regular(self) -> bool:
        return any(v.regular for v in self.per_mode)

    @property
    def some_b_nonzero(self) -> bool:
        return any(v.b_rank > 0 for v in self.per_mode)


@lru_cache(maxsize=512)
def validate(sys: SwitchedSystem) -> ValidityReport:
    """Exact per-mode validity flags.

    A mode is *regular* when Im(A) + Im(B) is the full state space; at least
    one regular mode is necessary for any controllable sequence to exist
    (it must be the last mode of such a sequence).
    """
    per_mode = []
    n = sys.n
    for i, mode in enumerate(sys.modes, start=1):
        a_inv = mode.A.rank() == n
        regular = a_inv or Matrix.hstack(mode.A, mode.B).rank() == n
        per_mode.append(
            ModeValidity(
                index=i,
                a_invertible=a_inv,
                regular=regular,
                b_rank=mode.B.rank(),
            )
        )
    return ValidityReport(per_mode=tuple(per_mode))


# -- mode sequences -----------------------------------------------------------


def parse_sequence(text: str, m: int) -> ModeSequence:
    """Parse "122121" (digits, m <= 9) or "1,2,2,1,2,1" into a mode tuple."""
    text = text.strip()
    if not text:
        return ()
    if "," in text:
        parts = [p.strip() for p in text.split(",")]
    else:
        parts = list(text)
    try:
        seq = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise SystemFormatError(f"cannot parse mode sequence {text!r}") from exc
    for v in seq:
        if not 1 <= v <= m:
            raise SystemFormatError(f"mode index {v} out of range 1..{m}")
    return seq


def format_sequence(seq: Sequence[int], m: int) -> str:
    """Digit string for m <= 9 (matching usual notation), else comma-separated."""
    if m <= 9:
        return "".join(str(v) for v in seq)
    return ",".join(str(v) for v in seq)


# -- JSON serialization --------------------------------------------------------


def _entry_from_json(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SystemFormatError(
            f"entry {value!r} is not exact; use integers or 'p/q' strings"
        )
    try:
        return as_rational(value)
    except (TypeError, ValueError) as exc:
        raise SystemFormatError(str(exc)) from exc


def _matrix_from_json(grid, n: int, what: str) -> Matrix:
    if not isinstance(grid, list):
        raise SystemFormatError(f"{what} must be a list of rows")
    if not grid:
        return Matrix([[] for _ in range(n)], ncols=0)
    rows = []
    for row in grid:
        if not isinstance(row, list):
            raise SystemFormatError(f"{what} rows must be lists")
        rows.append([_entry_from_json(x) for x in row])
    if len(rows) != n:
        raise SystemFormatError(f"{what} has {len(rows)} rows, expected {n}")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise SystemFormatError(f"{what} has ragged rows")
    if widths == {0}:
        return Matrix([[] for _ in range(n)], ncols=0)
    return Matrix(rows)


def matrix_to_json(m: Matrix) -> list[list[str]]:
    if m.ncols == 0:
        return []
    return [[str(x) for x in row] for row in m.data]


def load_system(text: str | bytes) -> SwitchedSystem:
    """Parse the JSON system format.

    Shape: {"n": 3, "modes": [{"A": [["1","0"],...], "B": [["1"],...]}, ...]}.
    Entries are strings parsed as integers or "p/q" fractions (bare JSON
    integers are also accepted); floats are rejected.  "B": [] denotes a
    zero-width input matrix.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFormatError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SystemFormatError("top level must be a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SystemFormatError('"n" must be a positive integer')
    raw_modes = doc.get("modes")
    if not isinstance(raw_modes, list) or not raw_modes:
        raise SystemFormatError('"modes" must be a non-empty list')
    modes = []
    for i, raw in enumerate(raw_modes, start=1):
        if not isinstance(raw, dict) or "A" not in raw or "B" not in raw:
            raise SystemFormatError(f'mode {i} must be an object with "A" and "B"')
        a = _matrix_from_json(raw["A"], n, f"mode {i} matrix A")
        if a.ncols != n:
            raise SystemFormatError(f"mode {i} matrix A must be {n}x{n}")
        b = _matrix_from_json(raw["B"], n, f"mode {i} matrix B")
        modes.append(Mode(a, b))
    return SwitchedSystem(tuple(modes))


def save_system(sys: SwitchedSystem, *, indent: int | None = None) -> str:
    """Serialize to the JSON system format; load(save(s)) == s bit for bit.

    With ``indent`` the layout keeps each matrix row on one line, which is
    the form people actually read and diff.
    """
    doc = {
        "n": sys.n,
        "modes": [
            {"A": matrix_to_json(mode.A), "B": matrix_to_json(mode.B)}
            for mode in sys.modes
        ],
    }
    if indent is None:
        return json.dumps(doc)
    pad = " " * indent

    def fmt_matrix(grid) -> str:
        if not grid:
            return "[]"
        rows = ", ".join(json.dumps(row) for row in grid)
        return f"[{rows}]"

    mode_blocks = []
    for mode in doc["modes"]:
        mode_blocks.append(
            f'{pad}{pad}{{"A": {fmt_matrix(mode["A"])},\n'
            f'{pad}{pad} "B": {fmt_matrix(mode["B"])}}}'
        )
    body = ",\n".join(mode_blocks)
    return f'{{\n{pad}"n": {sys.n},\n{pad}"modes": [\n{body}\n{pad}]\n}}'


# -- feedback regularization ----------------------------------------------------


class RegularizationError(ValueError):
    """A mode cannot be regularized (Im(A) + Im(B) is a proper subspace)."""


def _unit_matrix(nrows: int, ncols: int, i: int, j: int) -> Matrix:
    grid = [[Fraction(0)] * ncols for _ in range(nrows)]
    grid[i][j] = Fraction(1)
    return Matrix(grid, ncols=ncols)


def _find_gain(a: Matrix, b: Matrix, rng: random.Random, max_attempts: int) -> Matrix:
    """Gain K with A + B K invertible; assumes Im(A)+Im(B) is everything.

    Deterministic first: a greedy column-by-column sweep placing unit
    entries wherever they raise the rank, which resolves the common
    structured cases; a seeded random search with growing integer entries
    mops up the rest (invertibility of A + BK is generic in K).
    """
    n = a.nrows
    p = b.ncols
    k = Matrix.zeros(p, n)
    current = a
    rank = current.rank()
    for col in range(n):
        if rank == n:
            break
        for row in range(p):
            candidate_k = k + _unit_matrix(p, n, row, col)
            candidate = a + b @ candidate_k
            r = candidate.rank()
            if r > rank:
                k, current, rank = candidate_k, candidate, r
                break
    if rank == n:
        return k
    bound = 1
    for attempt in range(max_attempts):
        grid = [[Fraction(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(p)]
        candidate_k = Matrix(grid, ncols=n)
        if is_invertible(a + b @ candidate_k):
            return candidate_k
        if attempt % 8 == 7:
            bound *= 2
    raise RegularizationError("gain search budget exhausted")


def feedback_regularize(
    sys: SwitchedSystem, *, seed: int = 0, max_attempts: int = 200
) -> SwitchedSystem:
    """Replace each A_i by an invertible A_i + B_i K_i, keeping every B_i.

    Requires every mode to satisfy Im(A_i) + Im(B_i) = R^n.  The returned
    system has identical reachable spaces for every switching sequence:
    since B K W is contained in Im(B), the one-step image
    (A + BK) W + Im(B) equals A W + Im(B) for every subspace W.
    """
    report = validate(sys)
    for v in report.per_mode:
        if not v.regular:
            raise RegularizationError(
                f"mode {v.index} has Im(A)+Im(B) smaller than the state space; "
                "no feedback gain can make A + BK invertible"
            )
    if report.all_a_invertible:
        return sys
    rng = random.Random(seed)
    new_modes = []
    for v, mode in zip(report.per_mode, sys.modes):
        if v.a_invertible:
            new_modes.append(mode)
            continue
        if mode.B.ncols == 0:
            # regular + singular forces a usable B column, so this cannot happen
            raise RegularizationError(f"mode {v.index} is singular with no input")
        gain = _find_gain(mode.A, mode.B, rng, max_attempts)
        new_modes.append(Mode(mode.A + mode.B @ gain, mode.B))
    return SwitchedSystem(tuple(new_modes))


def all_sequences(m: int, max_len: int, min_len: int = 0):
    """All mode sequences with min_len <= length <= max_len, shortest first."""
    for length in range(min_len, max_len + 1):
        yield from itertools.product(range(1, m + 1), repeat=length)
