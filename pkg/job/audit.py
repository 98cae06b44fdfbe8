import logging
from collections import namedtuple
from typing import Callable, Dict, List, Optional, Set

import numpy as np
import pandas as pd
import progressbar

from divides.assemblage import (
    AssemblageCertificate,
    ColoredState,
    assemble_divide,
    detect_core,
    find_legal,
    is_legal,
    replay_divide,
)
from divides.divide import DISCONNECTED_DIAGRAM, DISJOINT_BRANCHES, Divide
from divides.fiber import FiberComplex, build_fiber
from divides.framing import (
    LOWER_CUT,
    SHIFTED_CUT,
    Base,
    Twist,
    WindingFunction,
    admissible,
    boundary_sum,
    random_curves,
    twist_eval,
)
from divides.intersection_graph import AugmentedIntersectionGraph, build
from divides.invariants import record_from_divide
from divides.toggle import TRIPOD_TYPES, replay_case
from generators.chebyshev import chebyshev_divide
from generators.diagrams import an_diagram, dn_diagram
from generators.fixtures import GRAPH_FIXTURES, load_fixture_divide, load_graph_fixture, locate_fixture
from generators.lines import generic_lines
from generators.pencil import deformed_pencil
from lib.config import config
from lib.errors import DivideKitError
from lib.metrics import Unit, write_metric

Finding = namedtuple("Finding", ["check", "subject", "samples", "violations", "detail"])

CERTIFIED = ["chebyshev(3,10)", "chebyshev(3,12)", "chebyshev(4,5)", "pencil(5)", "pencil(6)"]


def corpus() -> Dict[str, Callable[[], Divide]]:
    out: Dict[str, Callable[[], Divide]] = {}
    for p in (2, 3, 4):
        for q in range(2, 13):
            out[f"chebyshev({p},{q})"] = lambda p=p, q=q: chebyshev_divide(p, q)
    for m in range(2, 7):
        out[f"lines({m})"] = lambda m=m: generic_lines(m)
    for m in (5, 6):
        out[f"pencil({m})"] = lambda m=m: deformed_pencil(m)
    return out


def random_colored(graph: AugmentedIntersectionGraph, rng: np.random.Generator, proper: bool = True) -> Set[int]:
    """Connected colored set grown from a random vertex; proper sets leave something uncolored."""
    bounded = graph.bounded_vertices
    top = len(bounded) - 1 if proper else len(bounded)
    size = int(rng.integers(1, max(top, 1) + 1))
    colored = {bounded[rng.integers(len(bounded))]}
    while len(colored) < size:
        frontier = sorted({w for v in colored for w in graph.adjacency[v]} - colored)
        if not frontier:
            break
        colored.add(frontier[rng.integers(len(frontier))])
    return colored


def check_invariants(d: Divide) -> List[str]:
    record = record_from_divide(d)
    problems = []
    if record.mu != record.r + len(d.crossings):
        problems.append(f"mu={record.mu} but r + crossings = {record.r + len(d.crossings)}")
    if record.mu != 2 * record.delta - record.b + 1:
        problems.append(f"mu={record.mu} but 2 delta - b + 1 = {2 * record.delta - record.b + 1}")
    if 2 * record.g != record.mu - record.b + 1:
        problems.append(f"g={record.g} but (mu - b + 1)/2 = {(record.mu - record.b + 1) / 2}")
    if not d.circles and record.g != record.r:
        problems.append(f"g={record.g} differs from r={record.r}")
    return problems


def check_face_census(graph: AugmentedIntersectionGraph) -> List[str]:
    bigons, triangles = graph.face_census()
    logging.debug(f"{bigons} bigon(s), {triangles} triangle(s)")
    return []


def check_legality(fiber: FiberComplex, rng: np.random.Generator, samples: int) -> List[str]:
    graph = fiber.graph
    problems = []
    for _ in range(samples):
        colored = random_colored(graph, rng)
        rest = [v for v in graph.bounded_vertices if v not in colored]
        if not rest:
            continue
        v = rest[rng.integers(len(rest))]
        verdict = is_legal(ColoredState(graph, frozenset(colored)), v)
        pieces, inside = fiber.curve_pieces(colored, v)
        if (verdict.components, verdict.u_empty) != (pieces, inside):
            problems.append(f"v={v} C={sorted(colored)}: tangent {verdict.components}, fiber {pieces}")
    return problems


def check_attaching(fiber: FiberComplex, rng: np.random.Generator, samples: int) -> List[str]:
    problems = []
    for _ in range(samples):
        colored = random_colored(fiber.graph, rng)
        if len(colored) == fiber.mu:
            continue
        try:
            find_legal(ColoredState(fiber.graph, frozenset(colored)))
        except DivideKitError as e:
            problems.append(f"C={sorted(colored)}: {e.msg}")
    return problems


def check_winding(fiber: FiberComplex, rng: np.random.Generator, samples: int) -> List[str]:
    lower, shifted = WindingFunction(fiber, LOWER_CUT), WindingFunction(fiber, SHIFTED_CUT)
    problems = [f"v{v} winds {lower.value(fiber.curve(v))}" for v in range(fiber.mu) if lower.value(fiber.curve(v))]
    total = boundary_sum(fiber, lower)
    if total != fiber.chi:
        problems.append(f"boundary windings sum to {total}, chi is {fiber.chi}")
    for walk in random_curves(fiber, samples, rng):
        if lower.value(walk) != shifted.value(walk):
            problems.append(f"walk {walk}: {lower.value(walk)} against {shifted.value(walk)}")
    for u, w in fiber.graph.edges():
        for power in (1, -1):
            vector, value = twist_eval(Twist(Base(u), power, Base(w)), lower)
            expected = np.zeros(fiber.mu, dtype=int)
            expected[w] = 1
            expected[u] += power * fiber.pairing(u, w)
            if value != 0 or not np.array_equal(vector, expected):
                problems.append(f"T(v{u})^{power:+d}(v{w}) gives {value}")
    return problems


def certificate_problems(certificate: AssemblageCertificate, fiber: FiberComplex) -> List[str]:
    wf = WindingFunction(fiber)
    problems = [] if certificate.core_type in TRIPOD_TYPES else [f"core type {certificate.core_type} is no tripod"]
    problems += [
        f"v{s.vertex} is not admissible" for s in certificate.steps if not admissible(fiber, fiber.curve(s.vertex), wf)
    ]
    if certificate.final != (fiber.genus, fiber.boundary):
        problems.append(f"certificate ends at {certificate.final}")
    return problems


def check_certificate(d: Divide) -> List[str]:
    fiber, certificate = assemble_divide(d)
    replay_divide(certificate, d)
    return certificate_problems(certificate, fiber)


def _run_check(findings: List[Finding], check: str, subject: str, samples: int, fn: Callable[[], List[str]]) -> None:
    try:
        problems = fn()
    except DivideKitError as e:
        problems = [f"{e.error_type.value}: {e.msg}"]
    findings.append(Finding(check, subject, samples, len(problems), problems[0] if problems else ""))


def audit_divide(name: str, d: Divide, rng: np.random.Generator, findings: List[Finding]) -> None:
    _run_check(findings, "invariants", name, 1, lambda: check_invariants(d))
    graph: Optional[AugmentedIntersectionGraph] = None
    fiber: Optional[FiberComplex] = None
    try:
        graph = build(d)
        fiber = build_fiber(d, graph)
    except DivideKitError as e:
        findings.append(Finding("fiber", name, 1, 1, f"{e.error_type.value}: {e.msg}"))
        return
    _run_check(findings, "face census", name, 1, lambda: check_face_census(graph))
    if fiber.mu < 2:
        return
    legality, attach, winding = (config.get(k) for k in ("LEGALITY_SAMPLES", "ATTACH_SAMPLES", "WINDING_SAMPLES"))
    _run_check(findings, "legality oracle", name, legality, lambda: check_legality(fiber, rng, legality))
    _run_check(findings, "attaching", name, attach, lambda: check_attaching(fiber, rng, attach))
    _run_check(findings, "winding", name, winding, lambda: check_winding(fiber, rng, winding))
    if name in CERTIFIED:
        _run_check(findings, "certificate", name, 1, lambda: check_certificate(d))


def check_no_core(diagram: Dict[int, Set[int]]) -> List[str]:
    core = detect_core(diagram)
    return [] if core is None else [f"core {core.kind} at {core.vertices}"]


def check_counterexample(name: str, code: str) -> List[str]:
    codes = load_fixture_divide(name).validate().codes()
    return [] if code in codes else [f"expected {code}, got {codes}"]


def check_fixture_source(name: str) -> List[str]:
    moves, placement = locate_fixture(name)
    logging.debug(f"{name} sits at {sorted(placement.values())} after {len(moves)} move(s)")
    return []


def audit_controls(findings: List[Finding]) -> None:
    for n in range(1, 31):
        _run_check(findings, "no core", f"A{n}", 1, lambda n=n: check_no_core(an_diagram(n)))
    for n in range(4, 31):
        _run_check(findings, "no core", f"D{n}", 1, lambda n=n: check_no_core(dn_diagram(n)))
    expected = {"disconnected": DISCONNECTED_DIAGRAM, "disjoint": DISJOINT_BRANCHES}
    for name, code in expected.items():
        _run_check(findings, "counterexample", name, 1, lambda name=name, code=code: check_counterexample(name, code))
    for name in GRAPH_FIXTURES:
        _run_check(findings, "toggle replay", name, 1, lambda name=name: [] if replay_case(name) else ["empty"])
        if load_graph_fixture(name).source is not None:
            _run_check(findings, "fixture source", name, 1, lambda name=name: check_fixture_source(name))


def run_audit(names: Optional[List[str]] = None) -> pd.DataFrame:
    """Run every check on the corpus and return one row per (check, subject)."""
    rng = np.random.default_rng(config.get("SEED"))
    builders = corpus()
    names = names or list(builders)
    findings: List[Finding] = []
    items = progressbar.progressbar(names) if config.get("DISPLAY_PROGRESS") else names
    for name in items:
        try:
            d = builders[name]()
        except DivideKitError as e:
            findings.append(Finding("generate", name, 1, 1, f"{e.error_type.value}: {e.msg}"))
            continue
        audit_divide(name, d, rng, findings)
    audit_controls(findings)
    frame = pd.DataFrame(findings, columns=Finding._fields)
    total = int(frame["violations"].sum())
    logging.info(f"Audit ran {len(frame)} checks with {total} violation(s)")
    write_metric("audit_violations", total, unit=Unit.COUNT)
    return frame
