"""Qubit realizability of a 2x2 table under the σ_z / σ_x measurement pair.

Setting 0 is σ_z and setting 1 is σ_x; outcome 0 is the +1 eigenvalue.  A
table is realizable by some qubit state iff its Bloch components
r_z = 2t(0,0)-1 and r_x = 2t(1,0)-1 fit in the unit disc (r_y is free).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .boxes import SingleTable
from .errors import DegeneracyError, NotRealizable


@dataclass(frozen=True)
class ReconstructedState:
    amp0: float
    amp1: float
    phase_cos: object  # Fraction when exact, else float
    phase_sign: int = 1

    def __post_init__(self):
        if abs(self.amp0**2 + self.amp1**2 - 1) > 1e-12:
            raise ValueError("amplitudes are not normalised")
        if abs(float(self.phase_cos)) > 1 + 1e-15:
            raise ValueError("|cos φ| exceeds 1")

    @property
    def phase(self) -> float:
        return self.phase_sign * math.acos(max(-1.0, min(1.0, float(self.phase_cos))))

    def ket(self) -> np.ndarray:
        return np.array([self.amp0, np.exp(1j * self.phase) * self.amp1])

    def table_floats(self) -> tuple[float, float]:
        """(p(0|σ_z), p(0|σ_x)) of the state."""
        k = self.ket()
        plus = np.array([1, 1]) / math.sqrt(2)
        return abs(k[0]) ** 2, abs(np.vdot(plus, k)) ** 2

    def to_json(self):
        return {"amp0": self.amp0, "amp1": self.amp1, "phase_cos": str(self.phase_cos), "phase_sign": self.phase_sign}


def mub_disc(table: SingleTable) -> Fraction:
    t0, t1 = table.p0
    return (2 * t0 - 1) ** 2 + (2 * t1 - 1) ** 2 - 1


def is_mub_realizable(table: SingleTable) -> bool:
    return mub_disc(table) <= 0


def _exact_sqrt(q: Fraction):
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def reconstruct_pure_state(table: SingleTable, phase_sign: int = 1) -> ReconstructedState:
    t0, t1 = table.p0
    if t0 in (0, 1):
        if t1 != Fraction(1, 2):
            raise DegeneracyError(f"t(0,0)={t0} forces t(1,0)=1/2, got {t1}")
        return ReconstructedState(float(t0 == 1), float(t0 == 0), Fraction(0), phase_sign)
    if mub_disc(table) > 0:
        raise NotRealizable(f"table {table.to_json()} lies outside the MUB disc")
    prod = t0 * (1 - t0)
    root = _exact_sqrt(prod)
    if root is not None:
        cos = (2 * t1 - 1) / (2 * root)
    else:
        cos = (2 * float(t1) - 1) / (2 * math.sqrt(float(prod)))
        cos = max(-1.0, min(1.0, cos))
    return ReconstructedState(math.sqrt(float(t0)), math.sqrt(float(1 - t0)), cos, phase_sign)
