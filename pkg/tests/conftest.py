import itertools
import random
from fractions import Fraction

import pytest

from switchreach import (
    Matrix,
    Mode,
    SwitchedSystem,
    make_system,
    reachable_space_of_sequence,
)


@pytest.fixture
def perm3_system() -> SwitchedSystem:
    """Two-mode 3-state system built from permutation matrices.

    Mode 1 fixes e1 and swaps e2/e3 while injecting e1; mode 2 cycles
    e1 -> e2 -> e3 -> e1 with no input.  Its shortest controllable
    sequences have length 6, strictly above both n and the n + m(m-1)/2
    floor, which makes it the standard worked example throughout the suite.
    """
    return make_system(
        [
            ([[1, 0, 0], [0, 0, 1], [0, 1, 0]], [[1], [0], [0]]),
            ([[0, 0, 1], [1, 0, 0], [0, 1, 0]], [[0], [0], [0]]),
        ]
    )


def random_matrix(rng: random.Random, nrows: int, ncols: int, bound: int = 2) -> Matrix:
    return Matrix(
        [[Fraction(rng.randint(-bound, bound)) for _ in range(ncols)] for _ in range(nrows)]
    )


def random_invertible(rng: random.Random, n: int, bound: int = 2) -> Matrix:
    while True:
        a = random_matrix(rng, n, n, bound)
        if a.rank() == n:
            return a


def random_invertible_system(
    rng: random.Random, n: int, m: int, bound: int = 2
) -> SwitchedSystem:
    modes = []
    for _ in range(m):
        a = random_invertible(rng, n, bound)
        width = rng.randint(1, n)
        modes.append(Mode(a, random_matrix(rng, n, width, bound)))
    return SwitchedSystem(tuple(modes))


def random_singular_regular_system(
    rng: random.Random, n: int, m: int, bound: int = 2
) -> SwitchedSystem:
    """Every mode regular (Im(A)+Im(B) full), at least one A singular."""
    modes = []
    for i in range(m):
        if i == 0:
            while True:
                rows = [
                    [Fraction(rng.randint(-bound, bound)) for _ in range(n)]
                    for _ in range(n - 1)
                ]
                coeffs = [Fraction(rng.randint(-1, 1)) for _ in range(n - 1)]
                last = [
                    sum(c * row[j] for c, row in zip(coeffs, rows)) for j in range(n)
                ]
                a = Matrix(rows + [last])
                if a.rank() < n:
                    break
        else:
            a = random_invertible(rng, n, bound)
        while True:
            width = rng.randint(1, n)
            b = random_matrix(rng, n, width, bound)
            if Matrix.hstack(a, b).rank() == n:
                break
        modes.append(Mode(a, b))
    return SwitchedSystem(tuple(modes))


def all_sequences(m: int, max_len: int, min_len: int = 0):
    for length in range(min_len, max_len + 1):
        yield from itertools.product(range(1, m + 1), repeat=length)


def brute_force_shortest(sys: SwitchedSystem, max_len: int):
    """Oracle: enumerate every sequence by increasing length.

    Returns (length, witnesses of that exact length) or (None, ()).
    Independent of the automaton search path.
    """
    for length in range(1, max_len + 1):
        found = [
            seq
            for seq in itertools.product(range(1, sys.m + 1), repeat=length)
            if reachable_space_of_sequence(sys, seq).is_full
        ]
        if found:
            return length, tuple(found)
    return None, ()
