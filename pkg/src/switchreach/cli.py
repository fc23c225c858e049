"""Command-line front end.

Subcommands: analyze | shortest | automaton | generate | bounds | reduce.
Systems travel as JSON (see model.load_system); "-" reads stdin.  Exit
codes: 0 definitive answer, 2 inconclusive (a cap was hit), 1 usage or
format error.
"""

from __future__ import annotations

import argparse
import sys as _sys
from pathlib import Path

from .bounds import BoundExperimentConfig, config_from_json, run_bound_experiment
from .extremal import (
    FAMILY_TAGS,
    CertificateError,
    canonical_weights,
    expected_length,
    generate_family,
    verify_weight_certificate,
)
from .linalg import ShapeError
from .model import (
    RegularizationError,
    SystemFormatError,
    feedback_regularize,
    format_sequence,
    load_system,
    matrix_to_json,
    save_system,
    validate,
)
from .reachability import (
    SingularModeError,
    TermBudgetError,
    is_controllable,
    v_chain,
)
from .reduction import ReductionError, reduce_rank_system
from .search import (
    SearchStatus,
    StateBudgetError,
    build_automaton,
    export_dot,
    shortest_controllable_sequences,
    sound_depth_cap,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2


class CliError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return _sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        _sys.stdout.write(text)
        if not text.endswith("\n"):
            _sys.stdout.write("\n")
    else:
        Path(path).write_text(text)


def _load(path: str):
    return load_system(_read_text(path))


def _print_validity(sys_) -> None:
    report = validate(sys_)
    for v in report.per_mode:
        inv = "yes" if v.a_invertible else "NO"
        reg = "yes" if v.regular else "NO"
        print(
            f"mode {v.index}: A invertible={inv}, rank(B)={v.b_rank}, "
            f"Im(A)+Im(B) full={reg}"
        )


def cmd_analyze(args) -> int:
    sys_ = _load(args.system)
    print(f"system: n={sys_.n}, m={sys_.m}")
    _print_validity(sys_)
    chain = v_chain(sys_)
    if chain.all_b_zero:
        print("V-chain: V_1 = {0} (every input matrix is zero)")
        print("verdict: NOT CONTROLLABLE (V_1 = {0})")
        return EXIT_OK
    dims = " -> ".join(str(d) for d in chain.dims)
    print(f"V-chain dims: {dims} (fixed point l={chain.ell})")
    report = validate(sys_)
    if not report.all_a_invertible:
        print(
            "verdict: REFUSED - some A_i is singular, so the fixed point may "
            "overestimate the reachable set."
        )
        if report.all_modes_regular:
            print(
                "every mode satisfies Im(A)+Im(B) = R^n: run `shortest --regularize` "
                "or feedback_regularize() for an equivalent invertible system"
            )
        else:
            print(
                "some mode also fails Im(A)+Im(B) = R^n; only search with an "
                "explicit depth cap can give partial answers here"
            )
        return EXIT_ERROR
    fixed = chain.fixed_point
    print(f"reachable space dimension: {fixed.dim} of {sys_.n}")
    print("verdict: CONTROLLABLE" if fixed.is_full else "verdict: NOT CONTROLLABLE")
    return EXIT_OK


def cmd_shortest(args) -> int:
    sys_ = _load(args.system)
    report = validate(sys_)
    if args.regularize and not report.all_a_invertible:
        sys_ = feedback_regularize(sys_, seed=args.seed)
        print("applied feedback regularization (reachable spaces unchanged)")
    result = shortest_controllable_sequences(
        sys_,
        args.depth_cap,
        args.witness_cap,
        state_cap=args.state_cap,
    )
    if result.status is SearchStatus.CONTROLLABLE:
        print(f"status: controllable, shortest length {result.shortest_length}")
        words = " ".join(format_sequence(w, sys_.m) for w in result.witnesses)
        print(f"witnesses ({len(result.witnesses)}): {words}")
        return EXIT_OK
    if result.status is SearchStatus.PROVABLY_NOT_CONTROLLABLE:
        print("status: provably not controllable")
        return EXIT_OK
    print(f"status: inconclusive up to depth {result.depth_cap_used}")
    return EXIT_INCONCLUSIVE


def cmd_automaton(args) -> int:
    sys_ = _load(args.system)
    if args.depth_cap is None:
        report = validate(sys_)
        if not report.all_a_invertible:
            raise CliError(
                "an explicit --depth-cap is required when some A_i is singular"
            )
        depth_cap = sound_depth_cap(sys_.n)
    else:
        depth_cap = args.depth_cap
    aut = build_automaton(sys_, depth_cap, state_cap=args.state_cap)
    print(
        f"automaton: {aut.state_count} states, {aut.edge_count} edges, "
        f"depth explored {aut.depth_explored}, "
        f"{'closed' if aut.closed else 'cap reached'}"
    )
    if aut.accepting is not None:
        print(f"shortest path to the full space: length {aut.states[aut.accepting]}")
    else:
        print("full space not reached")
    dot = export_dot(aut)
    if args.dot:
        _write_text(args.dot, dot)
        print(f"DOT written to {args.dot}")
    else:
        _sys.stdout.write(dot)
    return EXIT_OK


def _parse_r(value: str) -> int | None:
    if value in ("-", "_", "none"):
        return None
    try:
        return int(value)
    except ValueError as exc:
        raise CliError(f"rank parameter must be an integer or '-', got {value!r}") from exc


def cmd_generate(args) -> int:
    r = _parse_r(args.r)
    try:
        sys_ = generate_family(args.family, args.n, r, args.m)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _write_text(args.output, save_system(sys_, indent=2))
    if args.weights:
        weights = canonical_weights(args.family, args.n, r, args.m)
        report = verify_weight_certificate(sys_, weights)
        print(f"weights: {weights}", file=_sys.stderr)
        if report.holds:
            print(
                f"certified lower bound {report.bound} "
                f"(checked {report.states_checked} reachable coordinate subspaces)",
                file=_sys.stderr,
            )
        else:
            v = report.violations[0]
            print(
                "certificate does not hold: mode "
                f"{v.mode} lifts span{{{','.join('e%d' % i for i in v.subspace_indices)}}} "
                f"from weight {v.weight_before} to {v.weight_after}; "
                f"minimal length {expected_length(args.family, args.n, r, args.m)} "
                "is confirmed by exhaustive search instead",
                file=_sys.stderr,
            )
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.config:
        cfg = config_from_json(_read_text(args.config))
    else:
        cfg = BoundExperimentConfig()
    if args.seed is not None:
        cfg = BoundExperimentConfig(
            n_values=cfg.n_values,
            r_values=cfg.r_values,
            m_values=cfg.m_values,
            samples=cfg.samples,
            entry_bound=cfg.entry_bound,
            seed=args.seed,
            rank_mode=cfg.rank_mode,
            depth_cap=cfg.depth_cap,
            state_cap=cfg.state_cap,
            plant_extremal=cfg.plant_extremal,
        )
    report = run_bound_experiment(cfg)
    table = report.to_text_table()
    print(table)
    prefix = args.out
    Path(f"{prefix}.json").write_text(report.to_json())
    Path(f"{prefix}.txt").write_text(table + "\n")
    print(f"report written to {prefix}.json and {prefix}.txt")
    return EXIT_OK if report.total_violations == 0 else EXIT_ERROR


def cmd_reduce(args) -> int:
    sys_ = _load(args.system)
    result = reduce_rank_system(sys_, seed=args.seed)
    if args.r is not None and result.transform.r != args.r:
        raise CliError(
            f"requested rank {args.r} but the common input rank is {result.transform.r}"
        )
    import json as _json

    doc = {
        "reduced": _json.loads(save_system(result.reduced)),
        "transform": {
            "P": matrix_to_json(result.transform.p),
            "Q": matrix_to_json(result.transform.q()),
            "Q_inv": matrix_to_json(result.transform.q_inv()),
        },
        "basis_change": matrix_to_json(result.basis_change),
    }
    _write_text(args.output, _json.dumps(doc, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="switchreach",
        description=(
            "Exact controllability analysis of discrete-time switched linear "
            "control systems"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="validity, V-chain and controllability verdict")
    p.add_argument("system", help="system JSON file, or - for stdin")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("shortest", help="minimal controllable sequence search")
    p.add_argument("system", help="system JSON file, or - for stdin")
    p.add_argument("--depth-cap", type=int, default=None)
    p.add_argument("--witness-cap", type=int, default=64)
    p.add_argument("--state-cap", type=int, default=100_000)
    p.add_argument(
        "--regularize",
        action="store_true",
        help="apply feedback regularization first when some A_i is singular",
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_shortest)

    p = sub.add_parser("automaton", help="build and export the subspace automaton")
    p.add_argument("system", help="system JSON file, or - for stdin")
    p.add_argument("--depth-cap", type=int, default=None)
    p.add_argument("--state-cap", type=int, default=100_000)
    p.add_argument("--dot", help="write DOT output to this path")
    p.set_defaults(func=cmd_automaton)

    p = sub.add_parser("generate", help="emit an extremal family system")
    p.add_argument("family", choices=FAMILY_TAGS)
    p.add_argument("n", type=int)
    p.add_argument("r", help="rank parameter, or - for families without one")
    p.add_argument("m", type=int)
    p.add_argument("--weights", action="store_true", help="also run the weight certificate")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bounds", help="randomized bound experiments over a grid")
    p.add_argument("config", nargs="?", default=None, help="config JSON (default grid if omitted)")
    p.add_argument("--out", default="bound_report", help="output file prefix")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("reduce", help="collapse a shared rank-r input image")
    p.add_argument("system", help="system JSON file, or - for stdin")
    p.add_argument("r", nargs="?", type=int, default=None, help="expected common rank")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_reduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        CliError,
        SystemFormatError,
        ShapeError,
        SingularModeError,
        RegularizationError,
        ReductionError,
        CertificateError,
        TermBudgetError,
        StateBudgetError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
