"""Bipartite two-input/two-output boxes in exact rational arithmetic.

Entries are indexed by (x, y, a, b) and stored flat in that order, so
index = 8x + 4y + 2a + b.  Rows of the printed 4x4 table are the setting
pairs (0,0), (0,1), (1,0), (1,1); columns are the outcomes 00, 01, 10, 11.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import DomainError, NormalizationError, ParseError, RangeError, SignallingError, WeightError
from .solver import frac

BITS = (0, 1)
INDEX = list(product(BITS, repeat=4))  # (x, y, a, b) in canonical order


def _idx(x: int, y: int, a: int, b: int) -> int:
    return 8 * x + 4 * y + 2 * a + b


@dataclass(frozen=True)
class SingleTable:
    """One party's conditional table t(s, o) = p(o|s)."""

    t: tuple  # ((t00, t01), (t10, t11))

    def __post_init__(self):
        rows = tuple(tuple(frac(v) for v in row) for row in self.t)
        object.__setattr__(self, "t", rows)
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError("a table has two settings and two outcomes")
        for r in rows:
            if any(v < 0 or v > 1 for v in r):
                raise RangeError(f"table entry outside [0,1]: {r}")
            if r[0] + r[1] != 1:
                raise NormalizationError(f"table row does not sum to 1: {r}")

    @classmethod
    def from_p0(cls, p0_setting0, p0_setting1) -> "SingleTable":
        p, q = frac(p0_setting0), frac(p0_setting1)
        return cls(((p, 1 - p), (q, 1 - q)))

    def __call__(self, s: int, o: int) -> Fraction:
        return self.t[s][o]

    @property
    def p0(self) -> tuple[Fraction, Fraction]:
        return self.t[0][0], self.t[1][0]

    def is_deterministic(self) -> bool:
        return all(v in (0, 1) for r in self.t for v in r)

    def to_json(self):
        return [[str(v) for v in r] for r in self.t]


@dataclass(frozen=True)
class DetStrategy:
    """Deterministic response o = alpha·s ⊕ beta."""

    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha not in BITS or self.beta not in BITS:
            raise ValueError("strategy labels are bits")

    def output(self, s: int) -> int:
        return (self.alpha * s) ^ self.beta

    def table(self) -> SingleTable:
        return SingleTable(tuple(tuple(Fraction(int(self.output(s) == o)) for o in BITS) for s in BITS))

    @property
    def label(self) -> str:
        return f"{self.alpha}{self.beta}"

    def __str__(self):
        return self.label


STRATEGIES = tuple(DetStrategy(a, b) for a, b in product(BITS, BITS))


@dataclass(frozen=True)
class LroRelabeling:
    """Local relabeling: inputs flipped, outputs shifted by affine functions of the input.

    The relabeled box is p'(a',b'|x',y') = p(a,b|x,y) with x = x'⊕flip_x,
    y = y'⊕flip_y, a = a'⊕a_alpha·x⊕a_beta and b = b'⊕b_gamma·y⊕b_epsilon.
    """

    flip_x: int = 0
    flip_y: int = 0
    a_alpha: int = 0
    a_beta: int = 0
    b_gamma: int = 0
    b_epsilon: int = 0

    def __post_init__(self):
        if any(v not in BITS for v in self.__dict__.values()):
            raise ValueError("relabeling fields are bits")

    def inverse(self) -> "LroRelabeling":
        return LroRelabeling(
            self.flip_x,
            self.flip_y,
            self.a_alpha,
            (self.a_alpha * self.flip_x) ^ self.a_beta,
            self.b_gamma,
            (self.b_gamma * self.flip_y) ^ self.b_epsilon,
        )


@dataclass(frozen=True)
class Box222:
    entries: tuple  # 16 Fractions in (x, y, a, b) order

    def __post_init__(self):
        vals = tuple(frac(v) for v in self.entries)
        if len(vals) != 16:
            raise ValueError("a box has 16 entries")
        object.__setattr__(self, "entries", vals)
        for v in vals:
            if v < 0 or v > 1:
                raise RangeError(f"entry outside [0,1]: {v}")
        for x, y in product(BITS, BITS):
            s = sum(vals[_idx(x, y, a, b)] for a, b in product(BITS, BITS))
            if s != 1:
                raise NormalizationError(f"block (x,y)=({x},{y}) sums to {s}")

    def __getitem__(self, key) -> Fraction:
        return self.entries[_idx(*key)]

    def p(self, a: int, b: int, x: int, y: int) -> Fraction:
        return self.entries[_idx(x, y, a, b)]

    def rows(self) -> list[list[Fraction]]:
        return [list(self.entries[4 * r: 4 * r + 4]) for r in range(4)]

    def to_json(self) -> dict:
        return {"entries": [[str(v) for v in row] for row in self.rows()]}

    def __str__(self):
        return "\n".join("  ".join(f"{str(v):>6}" for v in row) for row in self.rows())


def make_box(entries: Sequence) -> Box222:
    """Validated box from 16 values in (x, y, a, b) order or a 4x4 row table."""
    flat = list(entries)
    if len(flat) == 4 and all(isinstance(r, (list, tuple)) for r in flat):
        flat = [v for r in flat for v in r]
    return Box222(tuple(frac(v) for v in flat))


def box_from_json(text_or_obj) -> Box222:
    try:
        obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
        rows = obj["entries"]
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ParseError("entries must be a 4x4 table")
        vals = [frac(str(v)) for r in rows for v in r]
    except (KeyError, TypeError, ValueError, ZeroDivisionError, json.JSONDecodeError) as exc:
        if isinstance(exc, (NormalizationError, RangeError)):
            raise
        raise ParseError(f"malformed box file: {exc}") from exc
    return make_box(vals)


def _from_function(f) -> Box222:
    return Box222(tuple(frac(f(x, y, a, b)) for x, y, a, b in INDEX))


def marginal_alice(box: Box222) -> SingleTable:
    rows = []
    for x in BITS:
        per_y = [tuple(sum(box[x, y, a, b] for b in BITS) for a in BITS) for y in BITS]
        if per_y[0] != per_y[1]:
            raise SignallingError(f"Alice's marginal for x={x} depends on y")
        rows.append(per_y[0])
    return SingleTable(tuple(rows))


def marginal_bob(box: Box222) -> SingleTable:
    rows = []
    for y in BITS:
        per_x = [tuple(sum(box[x, y, a, b] for a in BITS) for b in BITS) for x in BITS]
        if per_x[0] != per_x[1]:
            raise SignallingError(f"Bob's marginal for y={y} depends on x")
        rows.append(per_x[0])
    return SingleTable(tuple(rows))


def is_no_signalling(box: Box222) -> bool:
    try:
        marginal_alice(box)
        marginal_bob(box)
    except SignallingError:
        return False
    return True


def deterministic_box(alpha: int, beta: int, gamma: int, epsilon: int) -> Box222:
    A, B = DetStrategy(alpha, beta), DetStrategy(gamma, epsilon)
    return _from_function(lambda x, y, a, b: int(A.output(x) == a and B.output(y) == b))


def product_box(alice: SingleTable, bob: SingleTable) -> Box222:
    return _from_function(lambda x, y, a, b: alice(x, a) * bob(y, b))


def pr_box(alpha: int, beta: int, gamma: int) -> Box222:
    return _from_function(
        lambda x, y, a, b: Fraction(1, 2) if (a ^ b) == ((x * y) ^ (alpha * x) ^ (beta * y) ^ gamma) else 0
    )


def _check_visibility(V) -> Fraction:
    V = frac(V)
    if not 0 < V <= 1:
        raise DomainError(f"V must lie in (0, 1], got {V}")
    return V


def bb84_box(V) -> Box222:
    V = _check_visibility(V)
    return _from_function(
        lambda x, y, a, b: (1 + (-1) ** (a ^ b ^ (x * y)) * (V if x == y else 0)) / Fraction(4)
    )


EXAMPLE2_ROWS = (
    ("5/8", "1/8", "1/8", "1/8"),
    ("1/2", "1/4", "1/4", "0"),
    ("1/2", "1/4", "1/4", "0"),
    ("5/8", "1/8", "1/8", "1/8"),
)


def example2_box() -> Box222:
    return make_box(EXAMPLE2_ROWS)


def maximally_mixed_box() -> Box222:
    return Box222(tuple([Fraction(1, 4)] * 16))


def correlator(box: Box222, x: int, y: int) -> Fraction:
    return sum((-1) ** (a ^ b) * box[x, y, a, b] for a, b in product(BITS, BITS))


def lro_apply(box: Box222, r: LroRelabeling) -> Box222:
    def f(xn, yn, an, bn):
        x, y = xn ^ r.flip_x, yn ^ r.flip_y
        a = an ^ (r.a_alpha * x) ^ r.a_beta
        b = bn ^ (r.b_gamma * y) ^ r.b_epsilon
        return box[x, y, a, b]

    return _from_function(f)


def mix(boxes: Sequence[Box222], weights: Iterable) -> Box222:
    weights = [frac(w) for w in weights]
    if len(weights) != len(boxes) or not boxes:
        raise WeightError("need one weight per box")
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise WeightError(f"weights must be nonnegative and sum to 1: {weights}")
    return Box222(tuple(sum(w * bx.entries[i] for w, bx in zip(weights, boxes)) for i in range(16)))
