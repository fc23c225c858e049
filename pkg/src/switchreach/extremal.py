"""Extremal system families with known minimal controllable-sequence lengths.

Each generator builds a family of 0/1 block systems whose modes permute (or
partially erase) the standard basis, so every reachable space is a span of
basis vectors.  On such systems an integer weight per coordinate gives a
combinatorial lower-bound certificate: if applying any mode to a coordinate
subspace raises the total weight by at most one, then reaching the full
space from {0} needs at least weight(full) steps.

Closed-form minimal lengths:

    family_a(n, m)                   n + m(m-1)/2
    family_rank(n, r, m)             n - r + 1 + m(m-1)/2
    family_degenerate(n, m)          (n-m+1)m + m(m-1)/2
    family_degenerate_rank(n, r, m)  m(2n-m-2r+1)/2 + 1

The two degenerate families contain singular modes on purpose; their
minimal lengths exceed what any invertible-mode family of the same shape
can force, and the simple +1 certificate does not hold for them in general
(minimality is confirmed by exhaustive search instead).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, column_space
from .model import Mode, SwitchedSystem

FAMILY_TAGS = ("a", "rank", "degenerate", "degenerate-rank")


class CertificateError(ValueError):
    """The weight certificate does not apply to this system."""


def cyclic_matrix(k: int) -> Matrix:
    """k x k one-step cyclic shift: e_j -> e_{j+1}, e_k -> e_1; [1] for k = 1."""
    if k < 1:
        raise ValueError("cyclic_matrix needs k >= 1")
    grid = [[Fraction(0)] * k for _ in range(k)]
    grid[0][k - 1] = Fraction(1)
    for i in range(1, k):
        grid[i][i - 1] = Fraction(1)
    return Matrix(grid, ncols=k)


def _no_input(n: int) -> Matrix:
    return Matrix([[] for _ in range(n)], ncols=0)


def _e1_column(n: int) -> Matrix:
    return Matrix.from_columns([[1] + [0] * (n - 1)])


def _stacked_identity(n: int, r: int) -> Matrix:
    """n x r matrix [Id_r; 0]: full column rank r, image span{e_1..e_r}."""
    return Matrix(
        [[Fraction(1) if i == j else Fraction(0) for j in range(r)] for i in range(n)],
        ncols=r,
    )


def _swap_mode_matrix(n: int, m: int, k: int, *, degenerate: bool) -> Matrix:
    """Mode k >= 2 of the block families: swap coordinates
    (n-m+k-1, n-m+k); the leading block is the identity, or zero in the
    degenerate variants."""
    lead = n - m + k - 2
    lead_block = Matrix.zeros(lead, lead) if degenerate else Matrix.identity(lead)
    return Matrix.block_diag(lead_block, cyclic_matrix(2), Matrix.identity(m - k))


def family_a(n: int, m: int) -> SwitchedSystem:
    """Mode 1 shifts the first n-m+1 coordinates cyclically and injects e_1;
    modes 2..m swap one adjacent coordinate pair each, with no input.
    Shortest controllable sequence: exactly n + m(m-1)/2."""
    if not 2 <= m <= n:
        raise ValueError(f"family_a requires 2 <= m <= n, got n={n}, m={m}")
    a1 = Matrix.block_diag(cyclic_matrix(n - m + 1), Matrix.identity(m - 1))
    modes = [Mode(a1, _e1_column(n))]
    for k in range(2, m + 1):
        modes.append(Mode(_swap_mode_matrix(n, m, k, degenerate=False), _no_input(n)))
    return SwitchedSystem(tuple(modes))


def family_rank(n: int, r: int, m: int) -> SwitchedSystem:
    """Every mode injects span{e_1..e_r}; mode 1 additionally cycles the
    middle n-r-m+2 coordinates, modes 2..m swap adjacent pairs.
    Shortest controllable sequence: exactly n - r + 1 + m(m-1)/2."""
    if r < 1 or m < 2 or m > n - r:
        raise ValueError(
            f"family_rank requires r >= 1, m >= 2 and m <= n - r, got n={n}, r={r}, m={m}"
        )
    b = _stacked_identity(n, r)
    a1 = Matrix.block_diag(
        Matrix.identity(r - 1), cyclic_matrix(n - r - m + 2), Matrix.identity(m - 1)
    )
    modes = [Mode(a1, b)]
    for k in range(2, m + 1):
        modes.append(Mode(_swap_mode_matrix(n, m, k, degenerate=False), b))
    return SwitchedSystem(tuple(modes))


def family_degenerate(n: int, m: int) -> SwitchedSystem:
    """family_a with the leading identity block of modes 2..m zeroed out, so
    those modes erase low coordinates and are singular.
    Shortest controllable sequence: exactly (n-m+1)m + m(m-1)/2."""
    if not 2 <= m <= n:
        raise ValueError(f"family_degenerate requires 2 <= m <= n, got n={n}, m={m}")
    base = family_a(n, m)
    modes = [base.modes[0]]
    for k in range(2, m + 1):
        modes.append(Mode(_swap_mode_matrix(n, m, k, degenerate=True), _no_input(n)))
    return SwitchedSystem(tuple(modes))


def family_degenerate_rank(n: int, r: int, m: int) -> SwitchedSystem:
    """family_rank with the same zero-block replacement in modes 2..m.
    Shortest controllable sequence: exactly m(2n-m-2r+1)/2 + 1."""
    if r < 1 or m < 2 or m > n - r:
        raise ValueError(
            "family_degenerate_rank requires r >= 1, m >= 2 and m <= n - r, "
            f"got n={n}, r={r}, m={m}"
        )
    base = family_rank(n, r, m)
    b = base.modes[0].B
    modes = [base.modes[0]]
    for k in range(2, m + 1):
        modes.append(Mode(_swap_mode_matrix(n, m, k, degenerate=True), b))
    return SwitchedSystem(tuple(modes))


def family_a_length(n: int, m: int) -> int:
    return n + m * (m - 1) // 2


def family_rank_length(n: int, r: int, m: int) -> int:
    return n - r + 1 + m * (m - 1) // 2


def family_degenerate_length(n: int, m: int) -> int:
    return (n - m + 1) * m + m * (m - 1) // 2


def family_degenerate_rank_length(n: int, r: int, m: int) -> int:
    return m * (2 * n - m - 2 * r + 1) // 2 + 1


def generate_family(tag: str, n: int, r: int | None, m: int) -> SwitchedSystem:
    """Dispatch by tag: one of 'a', 'rank', 'degenerate', 'degenerate-rank'."""
    if tag == "a":
        return family_a(n, m)
    if tag == "rank":
        if r is None:
            raise ValueError("family 'rank' needs the rank parameter r")
        return family_rank(n, r, m)
    if tag == "degenerate":
        return family_degenerate(n, m)
    if tag == "degenerate-rank":
        if r is None:
            raise ValueError("family 'degenerate-rank' needs the rank parameter r")
        return family_degenerate_rank(n, r, m)
    raise ValueError(f"unknown family tag {tag!r}; expected one of {FAMILY_TAGS}")


def expected_length(tag: str, n: int, r: int | None, m: int) -> int:
    if tag == "a":
        return family_a_length(n, m)
    if tag == "rank":
        return family_rank_length(n, r, m)
    if tag == "degenerate":
        return family_degenerate_length(n, m)
    if tag == "degenerate-rank":
        return family_degenerate_rank_length(n, r, m)
    raise ValueError(f"unknown family tag {tag!r}; expected one of {FAMILY_TAGS}")


def canonical_weights(tag: str, n: int, r: int | None = None, m: int | None = None):
    """Per-coordinate weights used to certify each family's minimal length.

    The weight of span{e_{i_1},...,e_{i_h}} is the sum of the member
    weights; weight(full space) equals the family's closed-form length.
    """
    if m is None:
        raise ValueError("canonical_weights needs the mode count m")
    if tag == "a":
        if not 2 <= m <= n:
            raise ValueError("weights for 'a' need 2 <= m <= n")
        return tuple(1 if i <= n - m + 1 else i + m - n for i in range(1, n + 1))
    if tag == "rank":
        if r is None or r < 1 or m < 2 or m > n - r:
            raise ValueError("weights for 'rank' need r >= 1, 2 <= m <= n - r")
        return tuple(
            0 if i <= r - 1 else (1 if i <= n - m + 1 else i + m - n)
            for i in range(1, n + 1)
        )
    if tag == "degenerate":
        if not 2 <= m <= n:
            raise ValueError("weights for 'degenerate' need 2 <= m <= n")
        return tuple(1 if i <= n - m + 1 else i for i in range(1, n + 1))
    if tag == "degenerate-rank":
        if r is None or r < 1 or m < 2 or m > n - r:
            raise ValueError("weights for 'degenerate-rank' need r >= 1, 2 <= m <= n - r")
        return tuple(
            0 if i <= r - 1 else (1 if i <= n - m + 1 else i - r)
            for i in range(1, n + 1)
        )
    raise ValueError(f"unknown family tag {tag!r}; expected one of {FAMILY_TAGS}")


# -- weight certificate ---------------------------------------------------------


@dataclass(frozen=True)
class CertificateViolation:
    """A coordinate subspace and mode whose step raises the weight by > 1."""

    subspace_indices: tuple[int, ...]  # 1-based coordinate indices
    mode: int                          # 1-based
    weight_before: int
    weight_after: int


@dataclass(frozen=True)
class CertificateReport:
    holds: bool
    bound: int | None                  # certified lower bound, when holds
    violations: tuple[CertificateViolation, ...]
    states_checked: int
    full_lattice: bool


def _coordinate_action(mode: Mode) -> tuple[dict[int, int], frozenset[int]]:
    """Action of a mode on the coordinate-subspace lattice.

    Returns (column map, input support): column map sends basis index j to
    the index its image is supported on (absent if A e_j = 0).  Raises
    CertificateError when some A column mixes coordinates or Im(B) is not a
    coordinate subspace, since the mode then leaves the lattice.
    """
    a, b = mode.A, mode.B
    n = a.nrows
    col_map: dict[int, int] = {}
    for j in range(n):
        support = [i for i in range(n) if a.data[i][j]]
        if len(support) > 1:
            raise CertificateError(
                f"matrix column {j + 1} mixes coordinates; the mode maps some "
                "coordinate subspace outside the coordinate lattice"
            )
        if support:
            col_map[j] = support[0]
    b_idx = column_space(b).coordinate_indices()
    if b_idx is None:
        raise CertificateError(
            "input image is not a coordinate subspace; certificate inapplicable"
        )
    return col_map, frozenset(b_idx)


def _lattice_step(
    indices: frozenset[int], col_map: dict[int, int], b_support: frozenset[int]
) -> frozenset[int]:
    return frozenset(col_map[j] for j in indices if j in col_map) | b_support


def verify_weight_certificate(
    sys: SwitchedSystem, weights, *, full_lattice: bool = False
) -> CertificateReport:
    """Check the +1 step property of a weight vector and certify the bound.

    By default the property is checked on every coordinate subspace
    reachable from {0} under the mode transitions, which is exactly the
    family of spaces a switching sequence can ever produce here, so a clean
    report certifies: no controllable sequence is shorter than the total
    weight of the full space.  ``full_lattice=True`` instead sweeps all 2^n
    coordinate subspaces; that stronger sweep can flag unreachable
    subspaces on which the step property fails even though the bound is
    still valid (the rank families behave this way), so it is kept as an
    opt-in diagnostic.
    """
    n = sys.n
    weights = tuple(int(w) for w in weights)
    if len(weights) != n:
        raise ValueError(f"need exactly {n} weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    if full_lattice and n > 16:
        raise ValueError("full-lattice sweep is limited to n <= 16")

    actions = [_coordinate_action(mode) for mode in sys.modes]

    def weight(indices: frozenset[int]) -> int:
        return sum(weights[i] for i in indices)

    if full_lattice:
        domain = [
            frozenset(i for i in range(n) if mask >> i & 1) for mask in range(1 << n)
        ]
    else:
        seen = {frozenset()}
        frontier = [frozenset()]
        while frontier:
            nxt = []
            for s in frontier:
                for col_map, b_support in actions:
                    t = _lattice_step(s, col_map, b_support)
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt
        domain = sorted(seen, key=lambda s: (len(s), sorted(s)))

    violations = []
    for s in domain:
        ws = weight(s)
        for k, (col_map, b_support) in enumerate(actions, start=1):
            t = _lattice_step(s, col_map, b_support)
            wt = weight(t)
            if wt > ws + 1:
                violations.append(
                    CertificateViolation(
                        subspace_indices=tuple(i + 1 for i in sorted(s)),
                        mode=k,
                        weight_before=ws,
                        weight_after=wt,
                    )
                )
    holds = not violations
    return CertificateReport(
        holds=holds,
        bound=sum(weights) if holds else None,
        violations=tuple(violations),
        states_checked=len(domain),
        full_lattice=full_lattice,
    )
