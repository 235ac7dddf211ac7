"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 invalid input data,
64 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import channels, io
from .discord import DiscordResult, discord_given_basis, discord_min
from .errors import RelstateError
from .hsbasis import IDENTITY_FIRST, SCHMIDT_PROJECTOR, identity_first_basis, schmidt_projector_basis
from .measures import (PATH_SVD, PATH_WEDGE, concurrence_two_qubit, i_concurrence,
                       mixed_invariants, pure_invariants)
from .operators import DensityOperator, PureBipartiteState, as_density, maximally_entangled, partial_trace
from .verify import SUITE_NAMES, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_DATA = 2
EXIT_USAGE = 64

SWEEP_TOL = 1e-9

log = logging.getLogger("relstate")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}")
    if not values:
        raise UsageError("empty integer list")
    return values


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` inclusive of ``stop``, rounded to 12 decimals."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--p-grid must look like start:stop:step, got {text!r}")
    if step <= 0 or stop < start:
        raise UsageError("--p-grid needs step > 0 and stop >= start")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    grid = [round(start + i * step, 12) for i in range(n)]
    if grid[0] < 0 or grid[-1] > 1:
        raise UsageError("--p-grid must stay inside [0, 1]")
    return grid


def _resolution(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"--resolution must look like 64x32, got {text!r}")
    if a < 2 or b < 2:
        raise UsageError("--resolution entries must be >= 2")
    return a, b


def _marginal_eigvecs(rho: DensityOperator, keep: str) -> np.ndarray:
    _, v = np.linalg.eigh(partial_trace(rho, keep).matrix)
    return v[:, ::-1]


def cmd_measures(args) -> int:
    state = io.read_state(args.state)
    if isinstance(state, PureBipartiteState):
        report = pure_invariants(state, path=args.path)
        report.extras["i_concurrence"] = i_concurrence(state)
        if state.dims == (2, 2):
            report.extras["concurrence"] = concurrence_two_qubit(state)
    else:
        da, db = state.require_dims()
        if args.basis == SCHMIDT_PROJECTOR:
            ba = schmidt_projector_basis(_marginal_eigvecs(state, "A"))
            bb = schmidt_projector_basis(_marginal_eigvecs(state, "B"))
        else:
            ba, bb = identity_first_basis(da), identity_first_basis(db)
        report = mixed_invariants(state, ba, bb, path=args.path)
    ks = args.k_list or sorted(k for k in report.values if k >= 2) or sorted(report.values)
    bad = [k for k in ks if k not in report.values]
    if bad:
        raise UsageError(f"--k-list entries {bad} outside 1..{max(report.values)}")
    report.values = {k: report.values[k] for k in ks}
    if args.csv:
        print("k,value")
        for k in ks:
            print(f"{k},{report.values[k]!r}")
        for name, v in report.extras.items():
            print(f"{name},{v!r}")
    else:
        print(json.dumps(report.to_dict(), indent=1))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.d not in (2, 3, 4):
        raise UsageError("--d must be 2, 3 or 4")
    grid = parse_grid(args.p_grid)
    ks = args.k_list or [2, 3, 4, args.d * args.d]
    ks = sorted(set(ks))
    if min(ks) < 2 or max(ks) > args.d ** 2:
        raise UsageError(f"--k-list entries must lie in 2..{args.d ** 2}")
    result = channels.sweep(args.channel, args.d, grid, ks)
    text = io.sweep_to_csv(result)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    worst = result.max_difference()
    if worst >= SWEEP_TOL:
        log.error("numeric and closed-form values differ by %.3e", worst)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.suite, trials=args.trials, seed=args.seed, dims=args.dims)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _discord_payload(value: float, result: DiscordResult | None) -> dict:
    out = {"discord": value}
    if result is not None:
        out.update({"upper_bound": True, "method": result.method,
                    "params": [float(x) for x in result.params],
                    "evaluations": result.evaluations,
                    "basis": io.basis_to_dict(result.basis)["vectors"]})
    return out


def cmd_discord(args) -> int:
    rho = as_density(io.read_state(args.state))
    da, _ = rho.require_dims()
    if args.minimize:
        if da not in (2, 3):
            raise UsageError(f"--minimize supports dim A in {{2, 3}}, got {da}")
        result = discord_min(rho, resolution=args.resolution, seed=args.seed)
        value = result.value
    else:
        value = discord_given_basis(rho, io.read_basis(args.basis_file))
        result = None
    if args.json:
        print(json.dumps(_discord_payload(value, result), indent=1))
    else:
        label = "discord (upper bound on D_min)" if result else "discord"
        print(f"{label}: {value:.6f}")
        if result is not None:
            print(f"argmin params: {' '.join(f'{x:.6f}' for x in result.params)}")
    return EXIT_OK


def cmd_make_state(args) -> int:
    d = args.d
    if args.kind == "bell":
        state = maximally_entangled(d)
    elif args.kind == "werner":
        state = channels.werner_state(d, args.p)
    elif args.kind == "xi":
        state = channels.xi_state(d)
    elif args.kind == "dephased":
        state = channels.product_basis_decohere(maximally_entangled(d), args.p)
    elif args.kind == "product":
        e0 = np.zeros(d)
        e0[0] = 1
        state = PureBipartiteState(np.outer(e0, e0))
    else:
        state = PureBipartiteState.normalized(np.diag(np.sqrt(_float_list(args.schmidt))))
    if args.density:
        state = as_density(state)
    io.write_state(args.out, state, metadata={"generator": args.kind})
    return EXIT_OK


def _float_list(text: str | None) -> list[float]:
    if not text:
        raise UsageError("--schmidt is required for kind 'schmidt'")
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--schmidt must be comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relstate", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("measures", help="correlation invariants of a state file")
    p.add_argument("state")
    p.add_argument("--k-list", type=_int_list)
    p.add_argument("--path", choices=[PATH_SVD, PATH_WEDGE], default=PATH_SVD)
    p.add_argument("--basis", choices=[IDENTITY_FIRST, SCHMIDT_PROJECTOR], default=IDENTITY_FIRST)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("sweep", help="Upsilon_k along a decoherence channel, as CSV")
    p.add_argument("--channel", choices=[channels.DEPOLARIZE, channels.DEPHASE], required=True)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--p-grid", default="0:1:0.1")
    p.add_argument("--k-list", type=_int_list)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="randomized property suites")
    p.add_argument("--suite", choices=[*SUITE_NAMES, "all"], default="all")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", type=_int_list)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("discord", help="discord for a given basis, or its minimum")
    p.add_argument("state")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--basis-file")
    how.add_argument("--minimize", action="store_true")
    p.add_argument("--resolution", type=_resolution, default=(64, 32))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_discord)

    p = sub.add_parser("make-state", help="write a named example state to a file")
    p.add_argument("kind", choices=["bell", "werner", "xi", "dephased", "product", "schmidt"])
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--schmidt", help="comma-separated Schmidt coefficients (kind 'schmidt')")
    p.add_argument("--density", action="store_true", help="store as a density matrix")
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(func=cmd_make_state)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RelstateError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
