"""CHSH family, the two-setting steering functional, and exact Bell locality."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .boxes import BITS, Box222, correlator, deterministic_box
from .solver import LpResult, lp_feasible_exact

DET_LABELS = list(product(BITS, repeat=4))  # (alpha, beta, gamma, epsilon)


@dataclass(frozen=True)
class ChshId:
    alpha: int
    beta: int
    gamma: int


CHSH_IDS = tuple(ChshId(*bits) for bits in product(BITS, repeat=3))


def chsh_value(box: Box222, cid: ChshId) -> Fraction:
    al, be, ga = cid.alpha, cid.beta, cid.gamma
    c = {(x, y): correlator(box, x, y) for x in BITS for y in BITS}
    return (
        (-1) ** ga * c[0, 0]
        + (-1) ** (be ^ ga) * c[0, 1]
        + (-1) ** (al ^ ga) * c[1, 0]
        + (-1) ** (al ^ be ^ ga ^ 1) * c[1, 1]
    )


def chsh_max(box: Box222) -> Fraction:
    return max(chsh_value(box, cid) for cid in CHSH_IDS)


def steering_radicands(box: Box222) -> tuple[Fraction, Fraction]:
    c = {(x, y): correlator(box, x, y) for x in BITS for y in BITS}
    plus = (c[0, 0] + c[1, 0]) ** 2 + (c[0, 1] + c[1, 1]) ** 2
    minus = (c[0, 0] - c[1, 0]) ** 2 + (c[0, 1] - c[1, 1]) ** 2
    return plus, minus


def steering_functional(box: Box222) -> float:
    p, m = steering_radicands(box)
    return math.sqrt(p) + math.sqrt(m)


def is_unsteerable_mub(box: Box222) -> bool:
    """√p + √m ≤ 2, decided exactly by squaring (p, m rational)."""
    p, m = steering_radicands(box)
    slack = 4 - p - m
    return slack >= 0 and 4 * p * m <= slack * slack


def is_bell_local_lp(box: Box222) -> tuple[bool, object]:
    """Exact LP for box = Σ w_i P_D^i over the 16 deterministic boxes.

    Returns (True, weights) or (False, LpResult carrying a Farkas vector).
    """
    dets = [deterministic_box(*lab) for lab in DET_LABELS]
    A_eq = [[d.entries[i] for d in dets] for i in range(16)]
    b_eq = list(box.entries)
    res: LpResult = lp_feasible_exact(A_eq, b_eq, n=16)
    if not res.feasible:
        return False, res
    return True, dict(zip(DET_LABELS, res.x))


def bell_lp_system(box: Box222):
    """(A_eq, b_eq) of the locality LP, exposed for certificate checks."""
    dets = [deterministic_box(*lab) for lab in DET_LABELS]
    return [[d.entries[i] for d in dets] for i in range(16)], list(box.entries)


__all__ = [
    "ChshId",
    "CHSH_IDS",
    "chsh_value",
    "chsh_max",
    "steering_functional",
    "steering_radicands",
    "is_unsteerable_mub",
    "is_bell_local_lp",
    "bell_lp_system",
]
