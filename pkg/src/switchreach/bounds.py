"""Randomized experiments mapping worst-case minimal sequence lengths.

For a grid of cells (n, r, m) this module samples random systems with
invertible A matrices and rank-constrained B matrices, measures the exact
minimal controllable-sequence length of every controllable sample by BFS,
and flags any length exceeding the applicable theoretical bound:

    rank >= r >= 1:   (n-r+1)(n-r)/2 + 1
    r = 0 (any rank): n(n+1)/2
    r = n-1:          2
    (n, r) = (3, 1):  4        (m >= 2)

A matching extremal family instance can be planted into each cell (modes
duplicated up to the cell's m); planted instances must achieve exactly
their closed-form length, witnessing tightness where it is known to hold
(m >= n - r).  Cells where tightness is not settled are marked.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .extremal import family_a, family_a_length, family_rank, family_rank_length
from .linalg import Matrix
from .model import Mode, SwitchedSystem
from .reachability import is_controllable
from .search import (
    SearchStatus,
    StateBudgetError,
    shortest_controllable_sequences,
    sound_depth_cap,
)

RANK_MODES = ("exact", "at_least", "any")


@dataclass(frozen=True)
class BoundExperimentConfig:
    n_values: tuple[int, ...] = (2, 3, 4)
    r_values: tuple[int, ...] | None = None  # None: all 0 <= r < n per n
    m_values: tuple[int, ...] = (1, 2, 3, 4)
    samples: int = 50
    entry_bound: int = 2
    seed: int = 0
    rank_mode: str = "at_least"
    depth_cap: int | None = None  # None: the sound cap n(n+1)/2
    state_cap: int = 100_000
    plant_extremal: bool = True

    def __post_init__(self):
        if self.rank_mode not in RANK_MODES:
            raise ValueError(f"rank_mode must be one of {RANK_MODES}")
        if self.samples < 0 or self.entry_bound < 1:
            raise ValueError("samples must be >= 0 and entry_bound >= 1")

    def cells(self):
        for n in sorted(self.n_values):
            rs = self.r_values if self.r_values is not None else range(n)
            for r in sorted(set(rs)):
                if not 0 <= r < n:
                    continue
                for m in sorted(self.m_values):
                    yield (n, r, m)


def config_from_json(text: str) -> BoundExperimentConfig:
    doc = json.loads(text)
    kwargs = {}
    for key in (
        "samples",
        "entry_bound",
        "seed",
        "rank_mode",
        "depth_cap",
        "state_cap",
        "plant_extremal",
    ):
        if key in doc:
            kwargs[key] = doc[key]
    if "n" in doc:
        kwargs["n_values"] = tuple(doc["n"])
    if "r" in doc and doc["r"] is not None:
        kwargs["r_values"] = tuple(doc["r"])
    if "m" in doc:
        kwargs["m_values"] = tuple(doc["m"])
    return BoundExperimentConfig(**kwargs)


# -- sampling -------------------------------------------------------------------


def _random_matrix(rng: random.Random, nrows: int, ncols: int, bound: int) -> Matrix:
    return Matrix(
        [[Fraction(rng.randint(-bound, bound)) for _ in range(ncols)] for _ in range(nrows)],
        ncols=ncols,
    )


def _random_invertible(rng: random.Random, n: int, bound: int, budget: int) -> Matrix:
    for _ in range(budget):
        a = _random_matrix(rng, n, n, bound)
        if a.rank() == n:
            return a
    raise RuntimeError("resample budget exhausted for an invertible matrix")


def sample_system(
    n: int,
    m: int,
    rank_mode: str = "any",
    r: int = 0,
    entry_bound: int = 2,
    seed: int = 0,
    *,
    resample_budget: int = 1000,
) -> SwitchedSystem:
    """Seeded random system: invertible A_i, B_i meeting the rank spec.

    "exact": every B_i is a verified rank-r product of full-rank factors
    (zero-width when r = 0).  "at_least": random width >= r, resampled until
    rank >= r.  "any": unconstrained random width.  The same seed always
    reproduces the same system bit for bit.
    """
    if rank_mode not in RANK_MODES:
        raise ValueError(f"rank_mode must be one of {RANK_MODES}")
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    rng = random.Random(seed)
    modes = []
    for _ in range(m):
        a = _random_invertible(rng, n, entry_bound, resample_budget)
        if rank_mode == "exact":
            if r == 0:
                b = Matrix([[] for _ in range(n)], ncols=0)
            else:
                b = None
                for _ in range(resample_budget):
                    left = _random_matrix(rng, n, r, entry_bound)
                    right = _random_matrix(rng, r, r, entry_bound)
                    candidate = left @ right
                    if candidate.rank() == r:
                        b = candidate
                        break
                if b is None:
                    raise RuntimeError("resample budget exhausted for a rank-r input")
        else:
            lo = max(r, 1) if (rank_mode == "at_least" and r >= 1) else 1
            b = None
            for _ in range(resample_budget):
                width = rng.randint(lo, n)
                candidate = _random_matrix(rng, n, width, entry_bound)
                if rank_mode == "any" or candidate.rank() >= r:
                    b = candidate
                    break
            if b is None:
                raise RuntimeError("resample budget exhausted for the input matrix")
        modes.append(Mode(a, b))
    return SwitchedSystem(tuple(modes))


# -- the experiment ---------------------------------------------------------------


def cell_bound(n: int, r: int, m: int, rank_mode: str) -> int:
    """Tightest applicable proven bound for a cell."""
    bounds = [sound_depth_cap(n)]
    if r >= 1:
        bounds.append((n - r + 1) * (n - r) // 2 + 1)
        if r == n - 1:
            bounds.append(2)
        if (n, r) == (3, 1) and m >= 2:
            bounds.append(4)
    return min(bounds)


def _tightness(n: int, r: int, m: int) -> str:
    if r >= 1 and m >= n - r:
        return "proven"
    if r == 0 and m >= n:
        return "proven"
    if r == n - 1 or ((n, r) == (3, 1) and m >= 2):
        return "proven"
    return "unproven-tight"


def _planted_system(n: int, r: int, m: int, rank_mode: str):
    """Extremal instance matching the cell, modes duplicated up to m.

    Duplicating an existing mode never changes the minimal length, so a
    family with fewer modes can stand in for a higher-m cell.
    """
    if r >= 1:
        m_eff = min(m, n - r)
        if m_eff < 2:
            return None
        base = family_rank(n, r, m_eff)
        expected = family_rank_length(n, r, m_eff)
    else:
        if rank_mode == "exact":
            return None  # family inputs have mixed ranks 1 and 0
        m_eff = min(m, n)
        if m_eff < 2:
            return None
        base = family_a(n, m_eff)
        expected = family_a_length(n, m_eff)
    modes = list(base.modes)
    while len(modes) < m:
        modes.append(modes[0])
    return SwitchedSystem(tuple(modes)), expected


@dataclass
class CellReport:
    n: int
    r: int
    m: int
    samples: int
    controllable: int
    inconclusive: int
    max_len: int | None
    min_len: int | None
    bound: int
    tightness: str
    violations: list = field(default_factory=list)
    histogram: dict[int, int] = field(default_factory=dict)
    planted_len: int | None = None
    planted_expected: int | None = None
    wall_time_s: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "m": self.m,
            "samples": self.samples,
            "controllable": self.controllable,
            "inconclusive": self.inconclusive,
            "max_len": self.max_len,
            "min_len": self.min_len,
            "bound": self.bound,
            "tightness": self.tightness,
            "violations": list(self.violations),
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "planted_len": self.planted_len,
            "planted_expected": self.planted_expected,
            "wall_time_s": round(self.wall_time_s, 4),
        }


@dataclass
class BoundReport:
    cells: list[CellReport]
    config: BoundExperimentConfig

    @property
    def total_violations(self) -> int:
        return sum(len(c.violations) for c in self.cells)

    def to_json(self, *, indent: int | None = 2) -> str:
        doc = {
            "config": {
                "n": list(self.config.n_values),
                "r": list(self.config.r_values) if self.config.r_values else None,
                "m": list(self.config.m_values),
                "samples": self.config.samples,
                "entry_bound": self.config.entry_bound,
                "seed": self.config.seed,
                "rank_mode": self.config.rank_mode,
                "plant_extremal": self.config.plant_extremal,
            },
            "cells": [c.to_json_dict() for c in self.cells],
        }
        return json.dumps(doc, indent=indent)

    def to_text_table(self) -> str:
        header = (
            f"{'n':>2} {'r':>2} {'m':>2} {'smpl':>5} {'ctrl':>5} {'incl':>5} "
            f"{'max':>4} {'bound':>5} {'plant':>6} {'viol':>4}  tightness"
        )
        lines = [header, "-" * len(header)]
        for c in self.cells:
            planted = "-" if c.planted_len is None else str(c.planted_len)
            max_len = "-" if c.max_len is None else str(c.max_len)
            lines.append(
                f"{c.n:>2} {c.r:>2} {c.m:>2} {c.samples:>5} {c.controllable:>5} "
                f"{c.inconclusive:>5} {max_len:>4} {c.bound:>5} {planted:>6} "
                f"{len(c.violations):>4}  {c.tightness}"
            )
        lines.append(
            f"total violations: {self.total_violations} "
            f"({'OK' if self.total_violations == 0 else 'BOUND VIOLATED'})"
        )
        return "\n".join(lines)


def _measure_length(sys: SwitchedSystem, depth_cap: int, state_cap: int):
    """(length, None) for controllable, (None, reason) otherwise."""
    try:
        if not is_controllable(sys):
            return None, "not-controllable"
    except Exception as exc:  # singular A cannot happen for sampled systems
        return None, f"error: {exc}"
    try:
        result = shortest_controllable_sequences(
            sys, depth_cap, witness_cap=1, state_cap=state_cap
        )
    except StateBudgetError:
        return None, "state-cap"
    if result.status is SearchStatus.CONTROLLABLE:
        return result.shortest_length, None
    return None, "depth-cap"


def run_bound_experiment(cfg: BoundExperimentConfig) -> BoundReport:
    """Run the grid; deterministic for a fixed config."""
    cells = []
    for n, r, m in cfg.cells():
        start = time.perf_counter()
        depth_cap = cfg.depth_cap if cfg.depth_cap is not None else sound_depth_cap(n)
        bound = cell_bound(n, r, m, cfg.rank_mode)
        cell = CellReport(
            n=n,
            r=r,
            m=m,
            samples=cfg.samples,
            controllable=0,
            inconclusive=0,
            max_len=None,
            min_len=None,
            bound=bound,
            tightness=_tightness(n, r, m),
        )
        for s in range(cfg.samples):
            seed = cfg.seed * 1_000_003 + n * 100_000 + r * 10_000 + m * 1_000 + s
            sys = sample_system(
                n, m, cfg.rank_mode, r, cfg.entry_bound, seed
            )
            length, why = _measure_length(sys, depth_cap, cfg.state_cap)
            if length is None:
                if why != "not-controllable":
                    cell.inconclusive += 1
                continue
            cell.controllable += 1
            cell.histogram[length] = cell.histogram.get(length, 0) + 1
            cell.max_len = length if cell.max_len is None else max(cell.max_len, length)
            cell.min_len = length if cell.min_len is None else min(cell.min_len, length)
            if length > bound:
                cell.violations.append(
                    {"sample": s, "seed": seed, "length": length, "bound": bound}
                )
        if cfg.plant_extremal:
            planted = _planted_system(n, r, m, cfg.rank_mode)
            if planted is not None:
                planted_sys, expected = planted
                length, why = _measure_length(planted_sys, depth_cap, cfg.state_cap)
                cell.planted_len = length
                cell.planted_expected = expected
                if length != expected:
                    cell.violations.append(
                        {
                            "sample": "planted",
                            "length": length,
                            "expected": expected,
                            "reason": why,
                        }
                    )
                elif length is not None and length > bound:
                    cell.violations.append(
                        {"sample": "planted", "length": length, "bound": bound}
                    )
        cell.wall_time_s = time.perf_counter() - start
        cells.append(cell)
    return BoundReport(cells=cells, config=cfg)
