"""Cones of unnormalised Bob tables b = (P, P·t(0,0), P·t(1,0)).

``LORENTZ`` holds tables realizable by a qubit measured along σ_z and σ_x
(the disc (2u0-P)² + (2u1-P)² ≤ P²); ``SQUARE`` holds every valid table
(0 ≤ u ≤ P) and is used for plain hidden-variable models.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .solver import ONE, ZERO, frac, inverse, matvec, transpose


def sqrt_upper(q: Fraction) -> Fraction:
    """A rational s with s ≥ √q, q ≥ 0."""
    if q <= 0:
        return ZERO
    s = Fraction(math.sqrt(float(q)) * (1 + 1e-12))
    while s * s < q:
        s *= Fraction(1025, 1024)
    return s


def _rational_unit(v0: float, v1: float) -> tuple[Fraction, Fraction]:
    """Rational vector close to (v0, v1)/|v| with norm at most 1."""
    n = math.hypot(v0, v1)
    a = Fraction(v0 / n).limit_denominator(1 << 24)
    b = Fraction(v1 / n).limit_denominator(1 << 24)
    while a * a + b * b > 1:
        a *= Fraction(4095, 4096)
        b *= Fraction(4095, 4096)
    return a, b


class LorentzCone:
    name = "mub-qubit"

    @staticmethod
    def contains(b: Sequence) -> bool:
        P, u0, u1 = b
        return P >= 0 and (2 * u0 - P) ** 2 + (2 * u1 - P) ** 2 <= P * P

    @staticmethod
    def dual_contains(y: Sequence) -> bool:
        s = y[0] + (y[1] + y[2]) / 2
        return s >= 0 and 4 * s * s >= y[1] ** 2 + y[2] ** 2

    @staticmethod
    def slack(b) -> float:
        P, u0, u1 = (float(v) for v in b)
        return P - math.hypot(2 * u0 - P, 2 * u1 - P)

    @staticmethod
    def separators(c) -> list[tuple]:
        """Rational y in the dual cone with y·c < 0 if c lies outside (floats in)."""
        P, u0, u1 = (float(v) for v in c)
        z1, z2 = 2 * u0 - P, 2 * u1 - P
        if math.hypot(z1, z2) == 0:
            return [(ONE, ZERO, ZERO)]
        n0, n1 = _rational_unit(z1, z2)
        # y = Tᵀ(1, -n) where T maps b to (P, 2u0-P, 2u1-P)
        return [(1 + n0 + n1, -2 * n0, -2 * n1), (ONE, ZERO, ZERO)]

    @staticmethod
    def inner_radius_sq(M) -> Fraction:
        """Squared radius of a disc around the Alice-marginal point inside the section of M·K*."""
        Tinv_t = [[ONE, Fraction(1, 2), Fraction(1, 2)], [ZERO, Fraction(1, 2), ZERO], [ZERO, ZERO, Fraction(1, 2)]]
        Minv = inverse(M)
        H = [[sum((Tinv_t[i][k] * Minv[k][j] for k in range(3)), ZERO) for j in range(3)] for i in range(3)]
        ub0 = sqrt_upper(H[0][1] ** 2 + H[0][2] ** 2)
        ub12 = sqrt_upper(sum(H[i][j] ** 2 for i in (1, 2) for j in (1, 2)))
        rho = 1 / (ub0 + ub12)
        return rho * rho


class SquareCone:
    name = "square"
    GENERATORS = ((ONE, ZERO, ZERO), (ONE, ONE, ZERO), (ONE, ZERO, ONE), (ONE, ONE, ONE))
    DUAL_GENERATORS = ((ZERO, ONE, ZERO), (ZERO, ZERO, ONE), (ONE, -ONE, ZERO), (ONE, ZERO, -ONE))

    @staticmethod
    def contains(b: Sequence) -> bool:
        P, u0, u1 = b
        return 0 <= u0 <= P and 0 <= u1 <= P

    @classmethod
    def dual_contains(cls, y: Sequence) -> bool:
        return all(sum((a * b for a, b in zip(y, g)), ZERO) >= 0 for g in cls.GENERATORS)

    @staticmethod
    def slack(b) -> float:
        P, u0, u1 = (float(v) for v in b)
        return min(u0, u1, P - u0, P - u1)

    @classmethod
    def separators(cls, c) -> list[tuple]:
        return list(cls.DUAL_GENERATORS)

    @classmethod
    def inner_radius_sq(cls, M) -> Fraction:
        Minv_t = transpose(inverse(M))
        best = None
        for g in cls.GENERATORS:
            h = matvec(Minv_t, g)
            if h[1] == 0 and h[2] == 0:
                continue
            d2 = 1 / (h[1] ** 2 + h[2] ** 2)
            best = d2 if best is None else min(best, d2)
        return best


LORENTZ = LorentzCone()
SQUARE = SquareCone()


def table_vector(P, t0, t1) -> tuple:
    P = frac(P)
    return (P, P * frac(t0), P * frac(t1))
