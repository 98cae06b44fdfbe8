from fractions import Fraction
from typing import Dict, List, Tuple

from divides.divide import Divide
from divides.polylines import Polyline
from lib.errors import DivideKitError, Failure

DIVIDE_HEADER = "divide v1"


def _records(text: str) -> List[Tuple[int, List[str]]]:
    out = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((n, line.split()))
    return out


def _int(token: str, n: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise DivideKitError(Failure.PARSE_ERROR, f"line {n}: expected an integer, got {token!r}")


def parse_divide(text: str) -> Divide:
    records = _records(text)
    if not records or " ".join(records[0][1]) != DIVIDE_HEADER:
        raise DivideKitError(Failure.PARSE_ERROR, f"missing '{DIVIDE_HEADER}' header")
    crossings: Dict[int, Tuple[int, int, int, int]] = {}
    endpoints: Dict[int, int] = {}
    twin: Dict[int, int] = {}
    boundary: List[int] = []
    for n, tokens in records[1:]:
        kind, args = tokens[0], [_int(t, n) for t in tokens[1:]]
        if kind == "crossing" and len(args) == 5:
            if args[0] in crossings:
                raise DivideKitError(Failure.MALFORMED_DIVIDE, f"line {n}: crossing {args[0]} declared twice")
            crossings[args[0]] = tuple(args[1:])  # type: ignore
        elif kind == "endpoint" and len(args) == 2:
            if args[0] in endpoints:
                raise DivideKitError(Failure.MALFORMED_DIVIDE, f"line {n}: endpoint {args[0]} declared twice")
            endpoints[args[0]] = args[1]
        elif kind == "edge" and len(args) == 2:
            a, b = args
            if a in twin or b in twin:
                raise DivideKitError(Failure.MALFORMED_DIVIDE, f"line {n}: half-edge reused in an edge")
            twin[a], twin[b] = b, a
        elif kind == "boundary":
            boundary.extend(args)
        else:
            raise DivideKitError(Failure.PARSE_ERROR, f"line {n}: cannot read {' '.join(tokens)!r}")
    return Divide(crossings=crossings, endpoints=endpoints, twin=twin, boundary=tuple(boundary))


def format_divide(d: Divide) -> str:
    lines = [DIVIDE_HEADER]
    for x in sorted(d.crossings):
        lines.append(f"crossing {x} " + " ".join(str(h) for h in d.crossings[x]))
    for e in sorted(d.endpoints):
        lines.append(f"endpoint {e} {d.endpoints[e]}")
    for h, t in sorted(d.twin.items()):
        if h < t:
            lines.append(f"edge {h} {t}")
    lines.append("boundary " + " ".join(str(e) for e in d.boundary))
    return "\n".join(lines) + "\n"


def parse_polylines(text: str) -> List[Polyline]:
    out = []
    for n, tokens in _records(text):
        if tokens[0] != "polyline" or len(tokens) < 2 or tokens[1] not in ("open", "closed"):
            raise DivideKitError(Failure.PARSE_ERROR, f"line {n}: expected 'polyline open|closed ...'")
        coords = tokens[2:]
        if len(coords) % 2:
            raise DivideKitError(Failure.PARSE_ERROR, f"line {n}: odd number of coordinates")
        try:
            values = [Fraction(c) for c in coords]
        except (ValueError, ZeroDivisionError):
            raise DivideKitError(Failure.PARSE_ERROR, f"line {n}: coordinates must be rationals p/q")
        out.append(Polyline(tokens[1] == "closed", tuple(zip(values[0::2], values[1::2]))))
    return out


def format_polylines(lines: List[Polyline]) -> str:
    rows = []
    for pl in lines:
        coords = " ".join(f"{x} {y}" for x, y in pl.points)
        rows.append(f"polyline {'closed' if pl.closed else 'open'} {coords}")
    return "\n".join(rows) + "\n"


def load_divide(path: str) -> Divide:
    """Read either format; a file of polylines is ingested geometrically."""
    with open(path) as f:
        text = f.read()
    records = _records(text)
    if records and records[0][1][0] == "polyline":
        return Divide.from_polylines(parse_polylines(text), name=path)
    return parse_divide(text)
