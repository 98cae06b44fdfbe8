import argparse
import json
import logging
import sys
import time
from typing import Dict, List, Optional, Set

from divides.assemblage import assemble_divide, replay_divide
from divides.fiber import build_fiber
from divides.formats import load_divide
from divides.framing import REFERENCE_FIELDS, Base, Loop, WindingFunction, format_curve, parse_curve, twist_eval
from divides.intersection_graph import build
from divides.invariants import record_from_divide
from divides.toggle import (
    apply_script,
    classify_tripod,
    format_script,
    orient_coherently,
    parse_script,
    smith_invariants,
)
from generators.fixtures import tripod_adjacency
from job.helpers import parse_vertices, render_family
from lib.config import config
from lib.errors import DivideKitError, Failure
from lib.metrics import Unit, write_metric


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dividekit", description="Invariants and fiber models of divides")
    sub = parser.add_subparsers(dest="verb", required=True)

    sub.add_parser("validate", help="check a divide for diagram connectivity and crossing strands").add_argument("path")
    sub.add_parser("invariants", help="mu, delta, regions, branches and genus").add_argument("path")

    graph = sub.add_parser("graph", help="augmented intersection graph")
    graph.add_argument("path")
    graph.add_argument("--format", choices=["dot", "json"], default="json")

    fiber = sub.add_parser("fiber", help="Milnor fiber model")
    fiber.add_argument("path")
    fiber.add_argument("--subsurface", help="comma-separated vertex ids")

    winding = sub.add_parser("winding", help="winding numbers of curves")
    winding.add_argument("path")
    group = winding.add_mutually_exclusive_group()
    group.add_argument("--curve", help="distinguished cycle v<k> or strip loop o<k>")
    group.add_argument("--expr", help='twisted curve, e.g. "T(v3)^-1(v5)"')
    winding.add_argument("--field", choices=sorted(REFERENCE_FIELDS), default="lower-cut")

    sub.add_parser("assemble", help="assemblage certificate as JSON").add_argument("path")

    toggle = sub.add_parser("toggle", help="apply triangle toggles to a graph JSON file")
    toggle.add_argument("path")
    toggle.add_argument("--script", help='toggles "a->b; c->d"; defaults to the script stored in a fixture')

    generate = sub.add_parser("generate", help="write a built-in divide, diagram or fixture")
    generate.add_argument("family")
    generate.add_argument("params", nargs="*")
    generate.add_argument("--out", help="output file, standard output when omitted")

    sub.add_parser("audit", help="run the corpus audit")
    return parser


def cmd_validate(args: argparse.Namespace) -> int:
    report = load_divide(args.path).validate()
    for v in report.violations:
        print(f"{v.code}: {v.detail}")
    if report.ok:
        print("ok")
        return 0
    first = report.violations[0]
    print(f"error: {first.code}: {first.detail}", file=sys.stderr)
    return 1


def cmd_invariants(args: argparse.Namespace) -> int:
    record = record_from_divide(load_divide(args.path))
    print("\n".join(record.as_lines()))
    return 0


def cmd_graph(args: argparse.Namespace) -> int:
    graph = build(load_divide(args.path))
    out = graph.to_dot() if args.format == "dot" else graph.to_json() + "\n"
    sys.stdout.write(out)
    return 0


def cmd_fiber(args: argparse.Namespace) -> int:
    fiber = build_fiber(load_divide(args.path))
    if args.subsurface is None:
        print(f"genus: {fiber.genus}\nboundary: {fiber.boundary}\nchi: {fiber.chi}\npolygons: {fiber.polygons}")
        return 0
    s = fiber.subsurface(parse_vertices(args.subsurface))
    print(f"vertices: {','.join(str(v) for v in s.vertices)}")
    print(f"chi: {s.chi}\nboundary: {s.boundary}\ngenus: {s.genus}\ncomponents: {s.components}")
    return 0


def cmd_winding(args: argparse.Namespace) -> int:
    fiber = build_fiber(load_divide(args.path))
    wf = WindingFunction(fiber, REFERENCE_FIELDS[args.field])
    text = args.curve or args.expr
    if text is None:
        for v in range(fiber.mu):
            print(f"v{v}: {wf.value(fiber.curve(v))}")
        return 0
    expr = parse_curve(text)
    if args.curve and not isinstance(expr, (Base, Loop)):
        raise DivideKitError(Failure.PARSE_ERROR, f"--curve takes v<k> or o<k>, got {text!r}")
    vector, value = twist_eval(expr, wf)
    print(f"curve: {format_curve(expr)}")
    print(f"class: {','.join(str(int(x)) for x in vector)}")
    print(f"winding: {value}")
    return 0


def cmd_assemble(args: argparse.Namespace) -> int:
    d = load_divide(args.path)
    _, certificate = assemble_divide(d)
    replay_divide(certificate, d)
    print(certificate.to_json())
    return 0


def _load_graph(path: str) -> Dict:
    with open(path) as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as e:
            raise DivideKitError(Failure.PARSE_ERROR, f"{path}: {e}")
    if "branches" in raw:
        return {"adjacency": tripod_adjacency(raw["branches"], raw["chords"]), "script": raw.get("script", "")}
    ids = [v["id"] if isinstance(v, dict) else v for v in raw.get("vertices", [])]
    skip = {v["id"] for v in raw.get("vertices", []) if isinstance(v, dict) and v.get("kind") == "unbounded"}
    adjacency: Dict[int, Set[int]] = {v: set() for v in ids if v not in skip}
    for u, w in raw.get("edges", []):
        if u in skip or w in skip:
            continue
        adjacency.setdefault(u, set()).add(w)
        adjacency.setdefault(w, set()).add(u)
    return {"adjacency": adjacency, "script": ""}


def cmd_toggle(args: argparse.Namespace) -> int:
    loaded = _load_graph(args.path)
    steps = parse_script(args.script if args.script is not None else loaded["script"])
    history = apply_script(orient_coherently(loaded["adjacency"]), steps)
    result = history[-1]
    tripod = classify_tripod(result.adjacency())
    payload = json.loads(result.to_json())
    payload["script"] = format_script(steps)
    payload["tripod"] = None if tripod is None else "({},{},{})".format(*tripod)
    payload["smith"] = list(smith_invariants(result))
    print(json.dumps(payload, indent=2))
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    text = render_family(args.family, args.params)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
        logging.info(f"Wrote {args.family} {' '.join(args.params)} to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    from job.audit import run_audit

    frame = run_audit()
    print(frame.to_string(index=False))
    return 1 if frame["violations"].sum() else 0


COMMANDS = {
    "validate": cmd_validate,
    "invariants": cmd_invariants,
    "graph": cmd_graph,
    "fiber": cmd_fiber,
    "winding": cmd_winding,
    "assemble": cmd_assemble,
    "toggle": cmd_toggle,
    "generate": cmd_generate,
    "audit": cmd_audit,
}


def run(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    start_ts = time.time()
    status = "success"
    try:
        code = COMMANDS[args.verb](args)
    except DivideKitError as e:
        logging.debug(f"{args.verb} failed", exc_info=True)
        print(f"error: {e.error_type.value}: {e.msg}", file=sys.stderr)
        code = 1
    except OSError as e:
        print(f"error: {Failure.PARSE_ERROR.value}: {e}", file=sys.stderr)
        code = 1
    except Exception as e:
        print(f"error: {Failure.INTERNAL.value}: {type(e).__name__}: {e}", file=sys.stderr)
        logging.exception(f"{args.verb} failed")
        code = 1
    if code:
        status = "failure"

    latency = time.time() - start_ts
    write_metric("command_time", latency, unit=Unit.SECONDS, tags={"verb": args.verb, "status": status})
    return code


def main() -> None:
    logging.basicConfig(level=logging.getLevelName(config.get("LOG_LEVEL")))
    sys.exit(run())
