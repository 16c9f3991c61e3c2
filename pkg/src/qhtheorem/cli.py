"""Command-line experiment runner.

Exit codes: 0 success, 1 parameter/domain error, 2 file/parse error,
3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from . import scenarios as sc
from .channels import (
    UNITALITY_TOL,
    ChannelError,
    choi_matrix,
    is_trace_preserving,
    extract_f_operators,
    stinespring_channel,
    stinespring_dilation,
    unitality_defect_commutator,
    unitality_defect_direct,
)
from .exceptions import DimensionError, InvalidStateError, NotUnitaryError, ParameterError
from .linalg import validate_density
from .serialization import (
    CHANNEL_SCHEMA,
    ChannelFileError,
    dump_channel,
    format_records,
    load_channel,
    report_record,
    _flatten_matrix,
)

log = logging.getLogger("qhtheorem")

EXIT_OK, EXIT_PARAM, EXIT_FILE, EXIT_INTERNAL = 0, 1, 2, 3

#: max-abs agreement demanded between the direct and commutator routes
ROUTE_AGREEMENT_TOL = 1e-10
CHOI_PSD_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: Tuple[float, ...]


def parse_sweep(text: str) -> SweepSpec:
    """``param:start:stop:count[:log]`` for a grid or ``param=v1,v2,...`` for a list."""
    if "=" in text:
        name, _, rest = text.partition("=")
        try:
            values = tuple(float(v) for v in rest.split(",") if v.strip())
        except ValueError:
            raise ParameterError("sweep", text, "values must be numbers") from None
    else:
        parts = text.split(":")
        if len(parts) not in (4, 5) or (len(parts) == 5 and parts[4] != "log"):
            raise ParameterError("sweep", text, "expected param:start:stop:count[:log] or param=v1,v2,...")
        name = parts[0]
        try:
            start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError:
            raise ParameterError("sweep", text, "start/stop must be numbers and count an integer") from None
        if count < 1:
            raise ParameterError("sweep", text, "count must be positive")
        if len(parts) == 5:
            if start <= 0 or stop <= 0:
                raise ParameterError("sweep", text, "log grids need positive bounds")
            grid = np.geomspace(start, stop, count)
        else:
            grid = np.linspace(start, stop, count)
        values = tuple(float(v) for v in grid)
    if name not in ("p0", "q0", "eps"):
        raise ParameterError("sweep", name, "parameter must be one of p0, q0, eps")
    if not values:
        raise ParameterError("sweep", text, "no values")
    return SweepSpec(name, values)


def _points(args) -> List[sc.ScenarioParams]:
    base = sc.ScenarioParams(p0=args.p0, q0=args.q0, eps=args.eps)
    if not args.sweep:
        return [base]
    spec = parse_sweep(args.sweep)
    points = [replace(base, **{spec.parameter: v}) for v in spec.values]
    return sorted(points, key=lambda p: getattr(p, spec.parameter))


def _check_routes(report: sc.ExperimentReport) -> None:
    diff = float(np.max(np.abs(report.unitality_direct.defect_matrix
                               - report.unitality_commutator.defect_matrix)))
    if diff > ROUTE_AGREEMENT_TOL:
        raise AssertionError(f"{report.scenario_id}/{report.label}: direct and commutator "
                             f"unitality defects differ by {diff:.3e}")


def cmd_demon(args) -> List[Dict]:
    run = sc.quantum_demon if args.variant == "quantum" else sc.semiclassical_demon
    records = []
    for params in _points(args):
        report = run(params, tol=args.tol)
        _check_routes(report)
        records.append(report_record(report))
    return records


def cmd_coolheat(args) -> List[Dict]:
    reports = sc.cool_heat(tol=args.tol)
    for r in reports:
        _check_routes(r)
    return [report_record(r) for r in reports]


def cmd_correlations(args) -> List[Dict]:
    records = []
    for params in _points(args):
        uncorrelated, correlated, expansion = sc.correlated_entropy_experiment(params, tol=args.tol)
        for r in (uncorrelated, correlated):
            _check_routes(r)
            records.append(report_record(r, expansion))
    return records


def cmd_check_channel(args) -> List[Dict]:
    try:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ChannelFileError(args.path, exc.strerror or str(exc)) from exc
    channel = load_channel(text)
    tp, tp_defect = is_trace_preserving(channel, args.tol)
    choi_min = float(np.linalg.eigvalsh(choi_matrix(channel))[0])
    direct = unitality_defect_direct(channel, args.tol)
    rec: Dict = {
        "schema": CHANNEL_SCHEMA,
        "tool_version": __version__,
        "path": args.path,
        "dim": channel.dim,
        "n_kraus": len(channel.kraus_ops),
        "trace_preserving": tp,
        "trace_preservation_defect": tp_defect,
        "choi_min_eigenvalue": choi_min,
        "completely_positive": choi_min >= -CHOI_PSD_TOL,
        "cptp": tp and choi_min >= -CHOI_PSD_TOL,
        "unital": direct.is_unital,
        "max_abs_defect_direct": direct.max_abs_defect,
        "max_abs_defect_commutator": None,
    }
    if tp:
        u, pi0 = stinespring_dilation(channel)
        commutator = unitality_defect_commutator(extract_f_operators(u), pi0, args.tol)
        diff = float(np.max(np.abs(direct.defect_matrix - commutator.defect_matrix)))
        if diff > ROUTE_AGREEMENT_TOL:
            raise AssertionError(f"unitality routes disagree by {diff:.3e}")
        rec["max_abs_defect_commutator"] = commutator.max_abs_defect
    else:
        log.warning("Kraus family is not trace preserving (defect %.3e); "
                    "commutator route skipped", tp_defect)
    rec.update(_flatten_matrix("defect", direct.defect_matrix))
    return [rec]


EXPORTS: Dict[str, Callable] = {
    "semiclassical-demon": lambda a: sc.semiclassical_demon_channel(),
    "quantum-demon": lambda a: sc.quantum_demon(sc.ScenarioParams(p0=a.p0)).channel,
    "cooling": lambda a: sc.cool_heat()[0].channel,
    "heating": lambda a: sc.cool_heat()[1].channel,
    "partial-swap": lambda a: stinespring_channel(
        sc.demon_unitary(), validate_density(np.diag([a.q0, 1.0 - a.q0]))),
}


def cmd_export_channel(args) -> str:
    sc.ScenarioParams(p0=args.p0, q0=args.q0)
    return dump_channel(EXPORTS[args.scenario](args)) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default="-", help="output path (default: standard output)")
    common.add_argument("--tol", type=float, default=UNITALITY_TOL,
                        help="unitality classification tolerance on max|Phi(1) - 1|")
    params = _Parser(add_help=False)
    params.add_argument("--p0", type=float, default=0.5, help="system ground-state population")
    params.add_argument("--q0", type=float, default=0.5, help="reservoir |0> population")
    params.add_argument("--eps", type=float, default=0.0, help="classical correlation strength")
    params.add_argument("--sweep", help="param:start:stop:count[:log] or param=v1,v2,...")

    parser = _Parser(prog="qhtheorem", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("demon", parents=[common, params], help="Maxwell demon on a qubit")
    p.add_argument("--variant", choices=("semiclassical", "quantum"), default="quantum")
    p.set_defaults(func=cmd_demon)

    p = sub.add_parser("coolheat", parents=[common], help="two-qubit cooling and heating")
    p.set_defaults(func=cmd_coolheat)

    p = sub.add_parser("correlations", parents=[common, params],
                       help="entropy growth with weak initial classical correlations")
    p.set_defaults(func=cmd_correlations)

    p = sub.add_parser("check-channel", parents=[common], help="classify a Kraus family from a file")
    p.add_argument("path")
    p.set_defaults(func=cmd_check_channel)

    p = sub.add_parser("export-channel", parents=[common, params], help="write a scenario channel file")
    p.add_argument("--scenario", choices=sorted(EXPORTS), required=True)
    p.set_defaults(func=cmd_export_channel)
    return parser


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"qhtheorem: error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    try:
        result = args.func(args)
        text = result if isinstance(result, str) else format_records(result, args.format)
        _emit(text, args.out)
    except ParameterError as exc:
        print(f"qhtheorem: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (ChannelFileError, DimensionError, ChannelError, OSError) as exc:
        print(f"qhtheorem: file error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except (AssertionError, InvalidStateError, NotUnitaryError) as exc:
        print(f"qhtheorem: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def run() -> None:
    sys.exit(main())
