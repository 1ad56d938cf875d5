"""Command-line entry point: ``lmg3`` or ``python3 -m lmg3``.

Exit status: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import fidelity, geometry, sweep
from .errors import LMGError, OutputError, UsageError
from .model import ModelParams, eigensystem_closed_form, ground_state, mixing_angle
from .verify import VerifyConfig, grid_points, verify_point

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}: {exc}") from None


def _quantities(text: str) -> tuple[str, ...]:
    qs = tuple(q.strip() for q in text.split(",") if q.strip())
    bad = [q for q in qs if q not in sweep.QUANTITIES]
    if bad or not qs:
        raise argparse.ArgumentTypeError(
            f"unknown quantities {bad}; choose from {','.join(sweep.QUANTITIES)}"
        )
    return qs


def _point_args(p: argparse.ArgumentParser):
    p.add_argument("--gamma", type=float, required=True, help="anisotropy parameter")
    p.add_argument("--h", type=float, required=True, help="field strength")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lmg3", description="Three-qubit LMG ground state: spectrum, phases, susceptibilities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="eight energies, mixing angles and ground branch")
    _point_args(p)

    p = sub.add_parser("berry", help="pure and mixed-state Berry phases")
    _point_args(p)
    p.add_argument("--oracle-steps", type=int, default=4096, metavar="K",
                   help="steps of the discrete oracle (default: %(default)s)")

    p = sub.add_parser("fidelity", help="full and partial fidelity susceptibilities")
    _point_args(p)
    p.add_argument("--delta-h", type=float, default=fidelity.DEFAULT_DELTA_H, metavar="D",
                   help="finite-difference step of the oracles (default: %(default)s)")

    p = sub.add_parser("sweep", help="evaluate quantities on a (gamma, h) grid")
    p.add_argument("--gamma-range", type=_range, default=(0.0, 2.0, 21), metavar="a:b:n",
                   help="gamma grid (default: 0:2:21)")
    p.add_argument("--h-range", type=_range, default=(0.0, 1.2, 21), metavar="a:b:n",
                   help="h grid (default: 0:1.2:21)")
    p.add_argument("--quantities", type=_quantities, default=("energies",), metavar="q1,q2",
                   help=f"any of {','.join(sweep.QUANTITIES)} (default: energies)")
    p.add_argument("--preset", choices=sorted(sweep.PRESETS),
                   help="figure dataset on a 41x41 grid; overrides ranges and quantities")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="(default: csv)")
    p.add_argument("--out", default="-", metavar="PATH", help="output file, - for stdout (default: -)")
    p.add_argument("--skip-radius", type=float, default=0.01, metavar="R",
                   help="NA radius around crossings and monopoles (default: %(default)s)")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default: 1)")

    p = sub.add_parser("verify", help="compare closed forms with oracles on a grid")
    p.add_argument("--grid", type=int, default=21, metavar="n",
                   help="n x n grid over gamma in [0,2], h in [0,1.2] (default: %(default)s)")
    p.add_argument("--tol-scale", type=float, default=1.0, metavar="s",
                   help="multiply every tolerance by s (default: %(default)s)")
    p.add_argument("--verbose", action="store_true", help="list every failing check")
    return parser


def _fmt(x: float) -> str:
    return f"{x:.15g}"


def cmd_spectrum(args) -> int:
    params = ModelParams(args.gamma, args.h)
    gs = ground_state(params)
    print(f"gamma {_fmt(params.gamma)}  h {_fmt(params.h)}")
    for k, (e, _) in enumerate(eigensystem_closed_form(params)):
        block = "+" if k < 4 else "-"
        print(f"E[{k}] block {block}  {_fmt(e)}")
    print(f"ground energy {_fmt(gs.energy)}")
    print(f"theta(+h) {_fmt(mixing_angle(params, 1))}")
    print(f"theta(-h) {_fmt(mixing_angle(params, -1))}")
    print(f"branch {_branch_name(gs)}")
    return EXIT_OK


def _branch_name(gs) -> str:
    return {"+": "LowField", "-": "HighField", "0": "Degenerate"}[gs.branch.value]


def cmd_berry(args) -> int:
    params = ModelParams(args.gamma, args.h)
    try:
        res = geometry.berry_phase_pure(params)
    except LMGError as exc:
        print(f"berry: {exc}", file=sys.stderr)
        return EXIT_USAGE
    oracle_phase = geometry.berry_phase_discrete_oracle(params, args.oracle_steps)
    print(f"branch {_branch_name(ground_state(params))}")
    print(f"raw {_fmt(res.raw)}")
    print(f"principal {_fmt(res.principal)}")
    print(f"oracle({args.oracle_steps}) {_fmt(oracle_phase)}")
    mixed = geometry.mixed_berry_phase_two_qubit(params, strict=False)
    print(f"mixed {_fmt(mixed.gamma_phase) if mixed.defined else 'undefined (degenerate marginal)'}")
    return EXIT_OK


def cmd_fidelity(args) -> int:
    params = ModelParams(args.gamma, args.h)
    try:
        rows = [
            ("chi_full", fidelity.fidelity_susceptibility_sum(params), fidelity.Kind.FULL),
            ("chi_1q", fidelity.partial_fs_one_qubit(params), fidelity.Kind.ONE_QUBIT),
            ("chi_2q", fidelity.partial_fs_two_qubit(params), fidelity.Kind.TWO_QUBIT),
        ]
        for name, res, kind in rows:
            fd = fidelity.fd_oracle(params, kind, args.delta_h)
            print(f"{name} {_fmt(res.value)}  oracle {_fmt(fd.value)}")
    except LMGError as exc:
        print(f"fidelity: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.preset:
        spec = sweep.preset_spec(args.preset)
        spec = sweep.SweepSpec(**{**spec.__dict__, "skip_radius": args.skip_radius})
    else:
        (g0, g1, gn), (h0, h1, hn) = args.gamma_range, args.h_range
        spec = sweep.SweepSpec(g0, g1, gn, h0, h1, hn, args.quantities, args.skip_radius)
    table = sweep.run_sweep(spec, workers=args.workers)
    sweep.emit_table(table, args.format, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.grid < 1:
        raise UsageError("--grid must be at least 1")
    config = VerifyConfig().scaled(args.tol_scale)
    t0 = time.perf_counter()
    reports = [verify_point(p, config) for p in grid_points(args.grid)]
    elapsed = time.perf_counter() - t0
    counts = {"pass": 0, "fail": 0, "skip": 0}
    worst: dict[str, float] = {}
    for r in reports:
        for c in r.checks:
            counts["skip" if c.skipped else ("pass" if c.passed else "fail")] += 1
            if c.error is not None and not math.isnan(c.error) and c.tol:
                worst[c.name] = max(worst.get(c.name, 0.0), c.error / c.tol)
    failed = [r for r in reports if not r.passed]
    print(f"verify: {len(reports)} points, {counts['pass']} passed, {counts['fail']} failed, "
          f"{counts['skip']} skipped, {elapsed:.2f} s")
    for name in sorted(worst):
        print(f"  {name:30s} worst error/tol {worst[name]:.3g}")
    for r in failed if args.verbose else failed[:10]:
        for c in r.failures:
            print(f"  FAIL gamma={r.gamma:.6g} h={r.h:.6g} {c.name} error={c.error} tol={c.tol} {c.reason or ''}")
    return EXIT_OK if not failed else EXIT_VERIFY


COMMANDS = {
    "spectrum": cmd_spectrum,
    "berry": cmd_berry,
    "fidelity": cmd_fidelity,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OutputError as exc:
        print(f"lmg3: {exc}", file=sys.stderr)
        return EXIT_IO
    except UsageError as exc:
        print(f"lmg3: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
