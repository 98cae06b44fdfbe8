from typing import Dict, Set

from generators.family import FamilySpec
from lib.errors import DivideKitError, Failure

Diagram = Dict[int, Set[int]]


def an_diagram(n: int) -> Diagram:
    """Chain 0 - 1 - ... - (n-1)."""
    if n < 1:
        raise DivideKitError(Failure.BAD_PARAMS, f"A_n needs n >= 1, got {n}")
    adj: Diagram = {v: set() for v in range(n)}
    for v in range(n - 1):
        adj[v].add(v + 1)
        adj[v + 1].add(v)
    return adj


def dn_diagram(n: int) -> Diagram:
    """Tripod (1, 1, n - 3) centred at 0 with leaves 1 and 2 and the long arm 3..n-1."""
    if n < 4:
        raise DivideKitError(Failure.BAD_PARAMS, f"D_n needs n >= 4, got {n}")
    adj: Diagram = {v: set() for v in range(n)}
    arm = [0] + list(range(3, n))
    for u, w in [(0, 1), (0, 2)] + list(zip(arm, arm[1:])):
        adj[u].add(w)
        adj[w].add(u)
    return adj


AN_FAMILY = FamilySpec("an", ("n",), (1,), an_diagram, "diagram")
DN_FAMILY = FamilySpec("dn", ("n",), (4,), dn_diagram, "diagram")
