"""Reachable spaces of switched linear systems and the controllability test.

The reachable space R(pi) of a switching sequence pi is computed by folding
the one-step image W -> A_s W + Im(B_s) over the sequence in time order.
The reachable set of the whole system (all A_i invertible) is the fixed
point of the subspace recursion

    V_1 = sum_i Im(B_i),      V_{k+1} = V_k + sum_i A_i V_k,

which stabilizes after at most n steps; the system is controllable exactly
when that fixed point is the full state space.  A brute-force power-sum
characterization is kept as an independent cross-check oracle for small
instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import Matrix, Subspace, column_space
from .model import ModeSequence, SwitchedSystem, validate


class SingularModeError(ValueError):
    """An operation that needs invertible A matrices got a singular one."""


class TermBudgetError(RuntimeError):
    """The brute-force enumeration would exceed its term budget."""


def _check_sequence(sys: SwitchedSystem, seq: Sequence[int]) -> None:
    for v in seq:
        if not 1 <= v <= sys.m:
            raise IndexError(f"mode index {v} out of range 1..{sys.m}")


def evolution_matrix(sys: SwitchedSystem, seq: Sequence[int]) -> Matrix:
    """Zero-input evolution matrix of a sequence: A_{i_k} ... A_{i_1}."""
    _check_sequence(sys, seq)
    result = Matrix.identity(sys.n)
    for s in seq:
        result = sys.mode(s).A @ result
    return result


def mode_step(sys: SwitchedSystem, w: Subspace, s: int) -> Subspace:
    """One-step image A_s W + Im(B_s) of a reachable space under mode s."""
    mode = sys.mode(s)
    return w.apply(mode.A) + column_space(mode.B)


def reachable_space_of_sequence(sys: SwitchedSystem, seq: Sequence[int]) -> Subspace:
    """Reachable space from the origin under the given sequence; R(()) = {0}."""
    _check_sequence(sys, seq)
    w = Subspace.zero(sys.n)
    for s in seq:
        w = mode_step(sys, w, s)
    return w


def concat_identity_check(
    sys: SwitchedSystem, seq1: Sequence[int], seq2: Sequence[int]
) -> bool:
    """Self-test: R(pi1 pi2) == A_{pi2} R(pi1) + R(pi2).  Always true."""
    lhs = reachable_space_of_sequence(sys, tuple(seq1) + tuple(seq2))
    rhs = reachable_space_of_sequence(sys, seq1).apply(
        evolution_matrix(sys, seq2)
    ) + reachable_space_of_sequence(sys, seq2)
    return lhs == rhs


@dataclass(frozen=True)
class VChain:
    """The increasing chain V_1 < V_2 < ... < V_ell up to its fixed point.

    ``all_b_zero`` flags the degenerate situation where every input matrix
    is zero, so V_1 = {0} and nothing is reachable.
    """

    spaces: tuple[Subspace, ...]
    ell: int
    all_b_zero: bool

    @property
    def fixed_point(self) -> Subspace:
        return self.spaces[-1]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.spaces)


def v_chain(sys: SwitchedSystem) -> VChain:
    """Run the subspace recursion until V_{k+1} = V_k and return the chain.

    The fixed point is reached after at most n strict growth steps because
    each pre-fixed-point space gains at least one dimension.
    """
    n = sys.n
    v = Subspace.zero(n)
    for mode in sys.modes:
        v = v + column_space(mode.B)
    if v.is_zero:
        return VChain(spaces=(v,), ell=1, all_b_zero=True)
    spaces = [v]
    while True:
        nxt = v
        for mode in sys.modes:
            nxt = nxt + v.apply(mode.A)
        if nxt == v:
            break
        spaces.append(nxt)
        v = nxt
    ell = len(spaces)
    if ell > n:
        raise AssertionError("fixed point index exceeded the state dimension")
    return VChain(spaces=tuple(spaces), ell=ell, all_b_zero=False)


def _require_invertible(sys: SwitchedSystem, what: str) -> None:
    report = validate(sys)
    if report.all_a_invertible:
        return
    bad = [v.index for v in report.per_mode if not v.a_invertible]
    if all(v.regular for v in report.per_mode):
        hint = (
            "every mode still satisfies Im(A)+Im(B) = R^n, so "
            "feedback_regularize() yields an equivalent invertible system"
        )
    else:
        hint = (
            "some mode also fails Im(A)+Im(B) = R^n; the fixed-point "
            "characterization does not cover this degenerate case and no "
            "general sequence-length bound is known for it"
        )
    raise SingularModeError(
        f"{what} requires invertible A matrices; singular in mode(s) "
        f"{', '.join(str(i) for i in bad)} ({hint})"
    )


def reachable_set(sys: SwitchedSystem) -> Subspace:
    """Span of every reachable space: the fixed point V_ell.

    Requires all A_i invertible (regularize first otherwise); with a
    singular mode the fixed point can strictly overestimate what switching
    sequences reach.
    """
    _require_invertible(sys, "reachable_set")
    return v_chain(sys).fixed_point


def is_controllable(sys: SwitchedSystem) -> bool:
    """True iff some switching sequence reaches the whole state space."""
    return reachable_set(sys).is_full


def ge_characterization(sys: SwitchedSystem, *, budget: int = 10**6) -> Subspace:
    """Brute-force reachable set: sum of A_{i_n}^{j_n} ... A_{i_1}^{j_1} Im(B_{i_1})
    over all i in {1..m}^n and all exponents j in {0..n-1}^n.

    Kept as an independent oracle: it must agree with ``reachable_set`` on
    every instance.  The nominal term count m^n * n^n is guarded by
    ``budget``; distinct intermediate images are deduplicated, so the actual
    work is usually far smaller.
    """
    _require_invertible(sys, "ge_characterization")
    n, m = sys.n, sys.m
    nominal = (m**n) * (n**n)
    if nominal > budget:
        raise TermBudgetError(
            f"nominal term count m^n * n^n = {nominal} exceeds budget {budget}; "
            "use reachable_set() instead"
        )
    powers = []
    for mode in sys.modes:
        acc = [Matrix.identity(n)]
        for _ in range(n - 1):
            acc.append(mode.A @ acc[-1])
        powers.append(acc)

    stage = set()
    for i, mode in enumerate(sys.modes):
        image = column_space(mode.B)
        for j in range(n):
            stage.add(image.apply(powers[i][j]))
    for _ in range(n - 1):
        nxt = set()
        for space in stage:
            for i in range(m):
                for j in range(n):
                    nxt.add(space.apply(powers[i][j]))
        stage = nxt

    total = Subspace.zero(n)
    for space in sorted(stage, key=lambda s: s.sort_key()):
        total = total + space
        if total.is_full:
            break
    return total
