"""Shortest controllable switching sequences via a subspace automaton.

The reachable spaces R(pi) of all sequences form a deterministic transition
system on canonical subspaces: from state W, mode s leads to
A_s W + Im(B_s).  Breadth-first search from the zero subspace therefore
finds the exact minimal length of a controllable sequence (a path to the
full space), and enumerating paths of that length lists every witness.

A constructive greedy alternative builds a controllable sequence by
repeatedly prepending a short dimension-increasing prefix; for invertible
systems its length never exceeds n(n+1)/2.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .linalg import Matrix, Subspace, column_space
from .model import ModeSequence, SwitchedSystem, validate
from .reachability import (
    SingularModeError,
    evolution_matrix,
    reachable_space_of_sequence,
    v_chain,
)


class StateBudgetError(RuntimeError):
    """Automaton construction exceeded its state-count guard."""


def sound_depth_cap(n: int) -> int:
    """Depth that suffices for any controllable system with invertible A's."""
    return n * (n + 1) // 2


@dataclass
class SubspaceAutomaton:
    """Deterministic transition system on canonical reachable subspaces.

    ``states`` maps each discovered subspace to the BFS depth at which it
    first appeared (its minimal sequence length); ``edges`` maps
    (state, mode) to the successor for every expanded state.
    """

    initial: Subspace
    states: dict[Subspace, int]
    edges: dict[tuple[Subspace, int], Subspace]
    closed: bool
    depth_explored: int
    accepting: Subspace | None
    n: int
    m: int

    @property
    def state_count(self) -> int:
        return len(self.states)

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def build_automaton(
    sys: SwitchedSystem,
    depth_cap: int,
    *,
    state_cap: int = 100_000,
    stop_at_full: bool = False,
) -> SubspaceAutomaton:
    """BFS the subspace automaton from {0} up to ``depth_cap`` layers.

    Stops early if the automaton closes under all transitions (every state
    expanded, nothing new) or, with ``stop_at_full``, once the full space
    has been discovered and its layer finished.
    """
    if depth_cap < 1:
        raise ValueError("depth_cap must be >= 1")
    n = sys.n
    zero = Subspace.zero(n)
    full = Subspace.full(n)
    mode_images = [column_space(mode.B) for mode in sys.modes]

    states: dict[Subspace, int] = {zero: 0}
    edges: dict[tuple[Subspace, int], Subspace] = {}
    frontier = [zero]
    accepting = full if zero.is_full else None
    depth = 0
    while frontier and depth < depth_cap and not (stop_at_full and accepting):
        next_frontier = []
        for w in frontier:
            for s in sys.mode_indices:
                mode = sys.modes[s - 1]
                target = w.apply(mode.A) + mode_images[s - 1]
                edges[(w, s)] = target
                if target not in states:
                    states[target] = depth + 1
                    next_frontier.append(target)
                    if target.is_full:
                        accepting = target
                    if len(states) > state_cap:
                        raise StateBudgetError(
                            f"more than {state_cap} distinct reachable subspaces; "
                            "raise state_cap to continue"
                        )
        frontier = next_frontier
        depth += 1
    return SubspaceAutomaton(
        initial=zero,
        states=states,
        edges=edges,
        closed=not frontier,
        depth_explored=max(states.values()),
        accepting=accepting,
        n=n,
        m=sys.m,
    )


class SearchStatus(enum.Enum):
    CONTROLLABLE = "controllable"
    NOT_CONTROLLABLE_WITHIN_DEPTH = "not-controllable-within-depth"
    PROVABLY_NOT_CONTROLLABLE = "provably-not-controllable"


@dataclass(frozen=True)
class SearchResult:
    status: SearchStatus
    shortest_length: int | None
    witnesses: tuple[ModeSequence, ...]
    depth_cap_used: int


def _exact_witnesses(
    aut: SubspaceAutomaton, length: int, cap: int
) -> tuple[ModeSequence, ...]:
    """All sequences of exactly ``length`` reaching the full space, in
    lexicographic order, up to ``cap`` of them."""
    target = aut.accepting
    # reach[t] = states from which the target is reachable in exactly t steps
    reach: list[set[Subspace]] = [set() for _ in range(length + 1)]
    reach[0].add(target)
    for t in range(1, length + 1):
        hit = reach[t - 1]
        layer = reach[t]
        for (w, _s), v in aut.edges.items():
            if v in hit:
                layer.add(w)

    out: list[ModeSequence] = []
    prefix: list[int] = []

    def walk(state: Subspace, remaining: int) -> None:
        if len(out) >= cap:
            return
        if remaining == 0:
            if state == target:
                out.append(tuple(prefix))
            return
        for s in range(1, aut.m + 1):
            nxt = aut.edges.get((state, s))
            if nxt is not None and nxt in reach[remaining - 1]:
                prefix.append(s)
                walk(nxt, remaining - 1)
                prefix.pop()
                if len(out) >= cap:
                    return

    walk(aut.initial, length)
    return tuple(out)


def shortest_controllable_sequences(
    sys: SwitchedSystem,
    depth_cap: int | None = None,
    witness_cap: int = 64,
    *,
    state_cap: int = 100_000,
) -> SearchResult:
    """Minimal controllable-sequence length and all shortest witnesses.

    With every A_i invertible the default depth cap n(n+1)/2 is sound: a
    controllable system always admits a sequence within it, so exhausting
    the cap is conclusive evidence only together with automaton closure.
    For systems with singular modes no general bound is known, hence an
    explicit ``depth_cap`` is required and a cap-limited miss is reported
    as inconclusive rather than as a negative.
    """
    report = validate(sys)
    if depth_cap is None:
        if not report.all_a_invertible:
            raise ValueError(
                "an explicit depth_cap is required when some A_i is singular: "
                "no sequence-length bound is known in the degenerate case"
            )
        depth_cap = sound_depth_cap(sys.n)
    aut = build_automaton(sys, depth_cap, state_cap=state_cap, stop_at_full=True)
    if aut.accepting is not None:
        length = aut.states[aut.accepting]
        witnesses = _exact_witnesses(aut, length, witness_cap)
        return SearchResult(
            status=SearchStatus.CONTROLLABLE,
            shortest_length=length,
            witnesses=witnesses,
            depth_cap_used=depth_cap,
        )
    if aut.closed and report.all_a_invertible:
        return SearchResult(
            status=SearchStatus.PROVABLY_NOT_CONTROLLABLE,
            shortest_length=None,
            witnesses=(),
            depth_cap_used=depth_cap,
        )
    return SearchResult(
        status=SearchStatus.NOT_CONTROLLABLE_WITHIN_DEPTH,
        shortest_length=None,
        witnesses=(),
        depth_cap_used=depth_cap,
    )


def greedy_controllable_sequence(sys: SwitchedSystem) -> ModeSequence:
    """Constructive controllable sequence of length at most n(n+1)/2.

    Maintains a sequence pi and, while R(pi) is not everything, prepends the
    first (in length-then-lex order) prefix pi0 of length at most k that
    strictly increases dim R(pi0 pi), where k is minimal with
    dim R(pi) < dim V_k.  Such a prefix always exists for invertible
    systems, and each prepend gains at least one dimension.
    """
    report = validate(sys)
    if not report.all_a_invertible:
        raise SingularModeError(
            "greedy construction requires every A_i invertible"
        )
    chain = v_chain(sys)
    n = sys.n
    if not chain.fixed_point.is_full:
        raise ValueError("system is not controllable; no controllable sequence exists")
    dims = (0,) + chain.dims
    seq: ModeSequence = ()
    reach = Subspace.zero(n)
    a_seq = Matrix.identity(n)  # evolution matrix of the current sequence
    while not reach.is_full:
        d = reach.dim
        k = next(j for j in range(1, chain.ell + 1) if dims[j] > d)
        chosen = None
        for length in range(1, k + 1):
            for cand in itertools.product(sys.mode_indices, repeat=length):
                grown = reachable_space_of_sequence(sys, cand).apply(a_seq) + reach
                if grown.dim > d:
                    chosen = (cand, grown)
                    break
            if chosen:
                break
        if chosen is None:  # impossible for invertible controllable systems
            raise AssertionError("no dimension-increasing prefix found")
        cand, reach = chosen
        seq = cand + seq
        a_seq = a_seq @ evolution_matrix(sys, cand)
    return seq


def _state_label(space: Subspace, n: int) -> str:
    if space.is_zero:
        return "0"
    if space.is_full:
        return f"R^{n}"
    idx = space.coordinate_indices()
    if idx is not None:
        return "span{" + ",".join(f"e{i + 1}" for i in idx) + "}"
    return f"dim {space.dim} [{space.label_hash()}]"


def export_dot(aut: SubspaceAutomaton, *, graph_name: str = "reachable_spaces") -> str:
    """Render the automaton as a DOT digraph.

    The initial state is drawn double-circled, the full space (if present)
    filled; edges carry 1-based mode labels.  Output is deterministic:
    states are ordered by discovery depth and canonical basis.
    """
    ordered = sorted(aut.states, key=lambda s: (aut.states[s], s.sort_key()))
    index = {s: i for i, s in enumerate(ordered)}
    ids = {s: f"s{i}" for i, s in enumerate(ordered)}
    lines = [
        f"digraph {graph_name} {{",
        "  rankdir=LR;",
        "  node [shape=circle];",
    ]
    for s in ordered:
        attrs = [f'label="{_state_label(s, aut.n)}"']
        if s == aut.initial:
            attrs.append("shape=doublecircle")
        if aut.accepting is not None and s == aut.accepting:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightgray")
        lines.append(f"  {ids[s]} [{', '.join(attrs)}];")
    for (src, mode), dst in sorted(
        aut.edges.items(), key=lambda kv: (index[kv[0][0]], kv[0][1])
    ):
        lines.append(f'  {ids[src]} -> {ids[dst]} [label="{mode}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
