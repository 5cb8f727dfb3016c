"""Command line front end."""
from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import germ as gm
from . import prepared as pr
from .const import DEFAULT_MAX_DEPTH, DEFAULT_PRECISION, DEFAULT_RESOLVE_DEPTH, DOMAIN, KEY_GOOD, KEY_TOROIDAL
from .diagnostics import get_run_diagnostics
from .driver import ChartForest, ForestCoordinator
from .exceptions import MalformedGerm, MonoforgeError
from .germ_file import load_forest, load_germ
from .record_handler import (
    aci_record,
    corpus_record,
    edge_record,
    error_record,
    germ_record,
    good_record,
    invariants_record,
    invertibility_record,
    normal_form_record,
    prepared_record,
    run_record,
    theorem_record,
    toroidal_record,
    tree2d_record,
)
from .resolve2d import make_germ2d, resolve_all
from .transform3d import CurveCenter, check_descent, monoidal_charts, quadratic_charts, run_corpus

_LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


def version() -> str:
    manifest = Path(__file__).with_name("manifest.json")
    return json.loads(manifest.read_text(encoding="utf-8"))["version"]


def _germ(args: argparse.Namespace) -> gm.MapGerm:
    if args.germ is None:
        raise MalformedGerm(f"{args.command} needs --germ FILE")
    return load_germ(args.germ, args.precision)


def _forest(args: argparse.Namespace) -> ChartForest:
    if args.forest is not None:
        return load_forest(args.forest, args.precision)
    return ChartForest.from_germs([(_germ(args), None, None)])


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as err:
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational number") from err


def _pair(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'alpha,beta', got {text!r}")
    return _fraction(parts[0]), _fraction(parts[1])


# --- germ commands ---------------------------------------------------------------

def cmd_classify(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    g = _germ(args)
    return {"germ": germ_record(g), **normal_form_record(gm.normalize(g, args.strict))}, EXIT_OK


def cmd_invariants(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    nf = gm.normalize(_germ(args))
    return {**normal_form_record(nf), **invariants_record(gm.invariants(nf))}, EXIT_OK


def cmd_blowup(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    g = _germ(args)
    if args.center == "point":
        edges = quadratic_charts(g, args.translate or ())
        report = check_descent(g, edges)
    else:
        names = args.center.split(",")
        if len(names) != 2:
            raise MalformedGerm(f"a curve center is 'first,second', got {args.center!r}")
        center = CurveCenter(names[0], names[1])
        if args.r is None:
            raise MalformedGerm("curve centers need --r")
        edges = monoidal_charts(g, center, args.shift or (), args.r)
        report = check_descent(g, edges, center, args.r)
    record = {"edges": [edge_record(e) for e in edges], "theorems": theorem_record(report)}
    return record, EXIT_OK if report.ok else EXIT_FAILED


def cmd_resolve2d(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    tree = resolve_all(make_germ2d(_germ(args)), args.max_depth or DEFAULT_RESOLVE_DEPTH)
    return tree2d_record(tree), EXIT_OK


def cmd_check_theorems(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    report = run_corpus(args.count, args.seed, precision=args.precision or DEFAULT_PRECISION)
    return corpus_record(report), EXIT_OK if report.ok else EXIT_FAILED


def cmd_classify_prepared(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    pc = pr.classify_prepared(_germ(args))
    return prepared_record(pc), EXIT_OK if pc.prepared else EXIT_FAILED


def cmd_good_bad(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    g = _germ(args)
    pc = pr.prepared_form(g)
    return {"prepared": prepared_record(pc), KEY_GOOD: good_record(pr.good_form(pc)),
            KEY_TOROIDAL: toroidal_record(pr.toroidal_form(pc))}, EXIT_OK


def cmd_invertible(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    return invertibility_record(pr.is_mq_invertible(_germ(args))), EXIT_OK


def cmd_invariants_aci(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    g = _germ(args)
    pc = pr.prepared_form(g)
    try:
        i_value = pr.i_value(pc)
    except MonoforgeError:
        i_value = None
    return aci_record(pr.A_C_invariants(g), i_value), EXIT_OK


# --- forest commands --------------------------------------------------------------

async def _drive(coordinator: ForestCoordinator, args: argparse.Namespace) -> None:
    if args.command == "principalize":
        await coordinator.principalize(args.image or coordinator.forest.leaves()[0].image)
    elif args.command == "monomialize":
        await coordinator.monomialize()
    else:
        await coordinator.toroidalize()


def cmd_forest(args: argparse.Namespace) -> tuple[dict[str, Any], int]:
    coordinator = ForestCoordinator(_forest(args), args.max_depth or DEFAULT_MAX_DEPTH)
    try:
        asyncio.run(_drive(coordinator, args))
    except MonoforgeError as err:
        if args.diagnostics is not None:
            _write(args.diagnostics, get_run_diagnostics(coordinator, _options(args), err))
        raise
    if args.diagnostics is not None:
        _write(args.diagnostics, get_run_diagnostics(coordinator, _options(args)))
    return run_record(coordinator), EXIT_OK


COMMANDS: dict[str, tuple[Callable[[argparse.Namespace], tuple[dict[str, Any], int]], str]] = {
    "classify": (cmd_classify, "normal form of a germ"),
    "invariants": (cmd_invariants, "nu, gamma, tau and the leading form"),
    "blowup": (cmd_blowup, "charts of a point or curve blowup with the order checks"),
    "resolve2d": (cmd_resolve2d, "resolve a surface germ by quadratic transforms"),
    "principalize": (cmd_forest, "make (u, v) principal over one base point"),
    "monomialize": (cmd_forest, "drive A to 0 until every leaf is good"),
    "toroidalize": (cmd_forest, "drive I to 0 until every leaf is toroidal"),
    "check-theorems": (cmd_check_theorems, "order checks over a random germ corpus"),
    "classify-prepared": (cmd_classify_prepared, "strongly prepared form of a germ"),
    "good-bad": (cmd_good_bad, "good or bad point, and the toroidal form"),
    "invertible": (cmd_invertible, "whether (u, v) is principal at the point"),
    "invariants-ACI": (cmd_invariants_aci, "A and C per divisor, and I"),
}


def _options(args: argparse.Namespace) -> dict[str, Any]:
    return {
        "command": args.command,
        "germ_file": None if args.germ is None else str(args.germ),
        "forest_file": None if args.forest is None else str(args.forest),
        "precision": args.precision,
        "max_depth": args.max_depth,
    }


def _write(path: Path | None, record: dict[str, Any]) -> None:
    payload = json.dumps(record, indent=2, default=str)
    if path is None:
        print(payload)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(payload + "\n", encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--germ", type=Path, help="germ file")
    common.add_argument("--forest", type=Path, help="forest file (JSON)")
    common.add_argument("--precision", type=int, help="working precision, overrides the files")
    common.add_argument("--max-depth", dest="max_depth", type=int, help="recursion or phase budget")
    common.add_argument("--json", dest="json_out", type=Path, help="write the JSON record here")
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(prog=DOMAIN, description="Exact local monomialization and toroidalization.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {version()}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        if name == "classify":
            cmd.add_argument("--strict", action="store_true", help="refuse an irrational scale on u")
        elif name == "blowup":
            cmd.add_argument("--center", default="point", help="'point' or a curve 'first,second'")
            cmd.add_argument("--translate", type=_pair, action="append", help="extra chart 'alpha,beta'")
            cmd.add_argument("--shift", type=_fraction, action="append", help="extra curve chart translated by alpha")
            cmd.add_argument("--r", type=int, help="asserted r of a curve center")
        elif name == "check-theorems":
            cmd.add_argument("--count", type=int, default=20, help="germs per parent/child cell")
            cmd.add_argument("--seed", type=int, default=0)
        elif name == "principalize":
            cmd.add_argument("--image", help="base point tag, the first leaf's by default")
        if name in ("principalize", "monomialize", "toroidalize"):
            cmd.add_argument("--diagnostics", type=Path, help="write a diagnostics dump here")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    handler, _ = COMMANDS[args.command]
    try:
        record, status = handler(args)
    except MonoforgeError as err:
        _LOGGER.debug(f"main(): {args.command} failed with {type(err).__name__}")
        _write(args.json_out, error_record(err))
        return EXIT_ERROR
    _write(args.json_out, record)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
