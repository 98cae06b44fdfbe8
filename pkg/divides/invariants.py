import logging
from collections import namedtuple
from dataclasses import dataclass
from math import gcd, prod
from typing import List, Sequence, Tuple

import numpy as np

from divides.divide import Divide
from lib.errors import DivideKitError, Failure

PuiseuxSequence = List[Tuple[int, int]]
NewtonSequence = List[Tuple[int, int]]

KEY_ORDER = ["mu", "delta", "regions", "branches", "genus"]

Census = namedtuple("Census", ["crossings", "circles", "intervals", "regions"])


@dataclass(frozen=True)
class InvariantRecord:
    mu: int
    b: int
    delta: int
    r: int
    g: int
    nu: np.ndarray

    def as_lines(self) -> List[str]:
        values = {"mu": self.mu, "delta": self.delta, "regions": self.r, "branches": self.b, "genus": self.g}
        return [f"{key}: {values[key]}" for key in KEY_ORDER]


def check_puiseux(s: Sequence[Tuple[int, int]]) -> None:
    if not s:
        raise DivideKitError(Failure.INVALID_PUISEUX, "empty sequence")
    ps = 1
    previous = None
    for i, (p, q) in enumerate(s):
        if not 2 <= p < q:
            raise DivideKitError(Failure.INVALID_PUISEUX, f"pair {i}: need 2 <= p < q, got ({p},{q})")
        ps *= p
        if gcd(q, ps) != 1:
            raise DivideKitError(Failure.INVALID_PUISEUX, f"pair {i}: gcd({q}, {ps}) != 1")
        # compare q_i/(p_1...p_i) < q_{i+1}/(p_1...p_{i+1}) without fractions
        ratio = (q, ps)
        if previous is not None and not previous[0] * ratio[1] < ratio[0] * previous[1]:
            raise DivideKitError(Failure.INVALID_PUISEUX, f"pair {i}: exponents must increase")
        previous = ratio


def newton_from_puiseux(s: PuiseuxSequence) -> NewtonSequence:
    check_puiseux(s)
    p1, q1 = s[0]
    out = [(p1, q1)]
    lam = q1
    for (p_prev, q_prev), (p, q) in zip(s, s[1:]):
        lam = q - q_prev * p + lam * p * p_prev
        out.append((p, lam))
    return out


def puiseux_from_pq(p: int, q: int) -> PuiseuxSequence:
    """Single characteristic pair of x^p - y^q (p < q coprime)."""
    lo, hi = sorted((p, q))
    s = [(lo, hi)]
    check_puiseux(s)
    return s


def milnor_irreducible(n: NewtonSequence) -> int:
    """mu = sum_i (p_i - 1)(lambda_i - 1) * prod_{j>i} p_j."""
    total = 0
    for i, (p, lam) in enumerate(n):
        total += (p - 1) * (lam - 1) * prod(pj for pj, _ in n[i + 1 :])
    return total


def milnor_total(branch_mus: Sequence[int], nu, b: int) -> int:
    nu = np.asarray(nu, dtype=int)
    if len(branch_mus) != b or nu.shape != (b, b):
        raise DivideKitError(
            Failure.DIMENSION_MISMATCH, f"{len(branch_mus)} branch values, nu of shape {nu.shape}, b={b}"
        )
    if not np.array_equal(nu, nu.T):
        raise DivideKitError(Failure.DIMENSION_MISMATCH, "nu must be symmetric")
    pairs = int(np.triu(nu, k=1).sum())
    return int(sum(branch_mus)) + 2 * pairs - b + 1


def genus_from_mu(mu: int, b: int) -> int:
    twice = mu - b + 1
    if twice < 0 or twice % 2:
        raise DivideKitError(Failure.INCOHERENT_DIVIDE, f"mu={mu}, b={b} give no integral genus")
    return twice // 2


def genus_ak_with_smooth(k: int, nu: int) -> int:
    """Genus of an A_k branch (k even) together with a smooth branch meeting it with multiplicity nu."""
    mu = milnor_total([k, 0], [[0, nu], [nu, 0]], 2)
    return genus_from_mu(mu, 2)


def genus_three_smooth(nu12: int, nu13: int, nu23: int) -> int:
    mu = milnor_total([0, 0, 0], [[0, nu12, nu13], [nu12, 0, nu23], [nu13, nu23, 0]], 3)
    return genus_from_mu(mu, 3)


def census(d: Divide) -> Census:
    c = d.region_census()
    return Census(crossings=c.delta, circles=c.circles, intervals=c.b - c.circles, regions=c.r)


def record_from_divide(d: Divide) -> InvariantRecord:
    """
    Invariants of a divide.

    Every immersed circle stands for two branches and one extra double point of the
    singularity, so delta counts crossings plus circles and b counts intervals plus twice the
    circles. nu counts crossings between strands.
    """
    c = census(d)
    mu = c.regions + c.crossings
    delta = c.crossings + c.circles
    b = c.intervals + 2 * c.circles
    if mu != 2 * delta - b + 1:
        raise DivideKitError(Failure.INCOHERENT_DIVIDE, f"r + delta = {mu} but 2 delta - b + 1 = {2 * delta - b + 1}")
    record = InvariantRecord(mu=mu, b=b, delta=delta, r=c.regions, g=genus_from_mu(mu, b), nu=d.nu())
    logging.debug(f"Invariants: mu={record.mu} delta={record.delta} r={record.r} b={record.b} g={record.g}")
    return record
