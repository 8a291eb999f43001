"""Dense states and measurements, Born-rule boxes and assemblages.

Tensor order is Alice ⊗ Bob and the computational basis is |0>, |1>(, |2>).
Outcome 0 of a projective qubit measurement is the +1 eigenspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .boxes import Box222, make_box
from .errors import AxisError, DimensionError, DomainError, NormalizationError
from .solver import frac

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
SNAP_TOL = 1e-9
SNAP_DEN = 10**6

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

ComplexMatrix = np.ndarray


def _check_hermitian_psd(m: np.ndarray, what: str):
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise ValueError(f"{what} is not Hermitian")
    if np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)) < -PSD_TOL:
        raise ValueError(f"{what} has a negative eigenvalue")


@dataclass(frozen=True, eq=False)
class QState:
    rho: np.ndarray
    dimA: int
    dimB: int

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        object.__setattr__(self, "rho", rho)
        n = self.dimA * self.dimB
        if rho.shape != (n, n):
            raise DimensionError(f"density matrix must be {n}x{n}")
        if not np.all(np.isfinite(rho)):
            raise ValueError("density matrix has non-finite entries")
        _check_hermitian_psd(rho, "density matrix")
        if abs(np.trace(rho) - 1) > TRACE_TOL:
            raise NormalizationError("density matrix trace differs from 1")

    def partial_transpose_b(self) -> np.ndarray:
        dA, dB = self.dimA, self.dimB
        r = self.rho.reshape(dA, dB, dA, dB)
        return r.transpose(0, 3, 2, 1).reshape(dA * dB, dA * dB)

    def reduced_bob(self) -> np.ndarray:
        return np.einsum("ijik->jk", self.rho.reshape(self.dimA, self.dimB, self.dimA, self.dimB))


@dataclass(frozen=True, eq=False)
class Povm:
    effects: tuple

    def __post_init__(self):
        effs = tuple(np.asarray(e, dtype=complex) for e in self.effects)
        object.__setattr__(self, "effects", effs)
        d = effs[0].shape[0]
        for k, e in enumerate(effs):
            if e.shape != (d, d):
                raise DimensionError("effects must share one square shape")
            _check_hermitian_psd(e, f"effect {k}")
        if np.max(np.abs(sum(effs) - np.eye(d))) > HERMITIAN_TOL:
            raise NormalizationError("effects do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]


@dataclass(frozen=True, eq=False)
class MeasurementPair:
    m0: Povm
    m1: Povm

    def __post_init__(self):
        if self.m0.dim != self.m1.dim:
            raise DimensionError("both settings must act on the same space")

    def __getitem__(self, s: int) -> Povm:
        return (self.m0, self.m1)[s]

    @property
    def dim(self) -> int:
        return self.m0.dim


@dataclass(frozen=True, eq=False)
class Assemblage:
    sigma: dict  # (x, a) -> 2x2 unnormalised state

    def bob_state(self, x: int = 0) -> np.ndarray:
        return self.sigma[(x, 0)] + self.sigma[(x, 1)]


def _singlet() -> np.ndarray:
    psi = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)
    return np.outer(psi, psi.conj())


def _visibility(V) -> float:
    v = float(V)
    if not 0 < v <= 1:
        raise DomainError(f"V must lie in (0, 1], got {V}")
    return v


def werner_state(V) -> QState:
    v = _visibility(V)
    return QState(v * _singlet() + (1 - v) / 4 * np.eye(4), 2, 2)


def example2_state() -> QState:
    zero = np.array([1, 0], dtype=complex)
    plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
    k00 = np.kron(zero, zero)
    kpp = np.kron(plus, plus)
    return QState((np.outer(k00, k00.conj()) + np.outer(kpp, kpp.conj())) / 2, 2, 2)


def erasure_state(V) -> QState:
    v = _visibility(V)
    psi = np.array([0, 1, -1, 0, 0, 0], dtype=complex) / math.sqrt(2)
    two = np.zeros((3, 3), dtype=complex)
    two[2, 2] = 1
    return QState(v * np.outer(psi, psi.conj()) + (1 - v) / 2 * np.kron(two, I2), 3, 2)


def projective_qubit(axis: Sequence[float]) -> Povm:
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > 1e-10:
        raise AxisError(f"axis must be a unit 3-vector, got {axis}")
    obs = n[0] * SX + n[1] * SY + n[2] * SZ
    return Povm(((I2 + obs) / 2, (I2 - obs) / 2))


def qubit_pair(axis0, axis1) -> MeasurementPair:
    return MeasurementPair(projective_qubit(axis0), projective_qubit(axis1))


Z_AXIS, X_AXIS = (0.0, 0.0, 1.0), (1.0, 0.0, 0.0)
MINUS_Z_AXIS = (0.0, 0.0, -1.0)


def erasure_povms() -> MeasurementPair:
    e01 = np.diag([0, 1, 0.5]).astype(complex)
    e11 = np.diag([1, 0, 0.5]).astype(complex)
    e02 = np.array([[0.5, 0.5, 0], [0.5, 0.5, 0], [0, 0, 0.5]], dtype=complex)
    e12 = np.array([[0.5, -0.5, 0], [-0.5, 0.5, 0], [0, 0, 0.5]], dtype=complex)
    return MeasurementPair(Povm((e01, e11)), Povm((e02, e12)))


def snap(value: float) -> Fraction:
    """Nearest small-denominator rational when within tolerance, else the float exactly."""
    f = Fraction(value).limit_denominator(SNAP_DEN)
    if abs(float(f) - value) <= SNAP_TOL:
        return f
    return Fraction(value)


def born_probabilities(state: QState, alice: MeasurementPair, bob: MeasurementPair) -> np.ndarray:
    """Raw floating p(ab|xy) as an array indexed [x, y, a, b]."""
    if alice.dim != state.dimA or bob.dim != state.dimB:
        raise DimensionError("measurement dimensions do not match the state")
    out = np.zeros((2, 2, 2, 2))
    for x in (0, 1):
        for y in (0, 1):
            for a in (0, 1):
                for b in (0, 1):
                    op = np.kron(alice[x].effects[a], bob[y].effects[b])
                    out[x, y, a, b] = np.real(np.trace(op @ state.rho))
    return out


def born_box(state: QState, alice: MeasurementPair, bob: MeasurementPair) -> Box222:
    raw = born_probabilities(state, alice, bob)
    for x in (0, 1):
        for y in (0, 1):
            if abs(raw[x, y].sum() - 1) > SNAP_TOL:
                raise NormalizationError("Born probabilities drifted from normalisation")
    vals = [snap(float(v)) for v in raw.reshape(16)]
    # a value snapped to something tiny-negative cannot happen, but clip exact zeros
    return make_box([max(v, Fraction(0)) for v in vals])


def assemblage(state: QState, alice: MeasurementPair) -> Assemblage:
    if alice.dim != state.dimA:
        raise DimensionError("Alice's measurement dimension does not match the state")
    dA, dB = state.dimA, state.dimB
    r = state.rho.reshape(dA, dB, dA, dB)
    sigma = {}
    for x in (0, 1):
        for a in (0, 1):
            # Tr_A[(M ⊗ I) ρ]_{jl} = Σ_{i,k} M_{ik} ρ_{kj,il}
            sigma[(x, a)] = np.einsum("ik,kjil->jl", alice[x].effects[a], r)
    return Assemblage(sigma)


def assemblage_kron(state: QState, alice: MeasurementPair) -> Assemblage:
    """Same as ``assemblage`` through explicit Kronecker products."""
    dA, dB = state.dimA, state.dimB
    sigma = {}
    for x in (0, 1):
        for a in (0, 1):
            full = np.kron(alice[x].effects[a], np.eye(dB)) @ state.rho
            s = np.zeros((dB, dB), dtype=complex)
            for i in range(dA):
                basis = np.zeros(dA)
                basis[i] = 1
                proj = np.kron(basis, np.eye(dB))
                s += proj @ full @ proj.T
            sigma[(x, a)] = s
    return Assemblage(sigma)


def parse_state(desc: str) -> QState:
    """Named constructors: "werner:V=0.5", "erasure:V=0.3", "example2"."""
    name, _, args = desc.partition(":")
    params = dict(kv.split("=") for kv in args.split(",") if kv)
    if name == "werner":
        return werner_state(float(frac(params["V"])))
    if name == "erasure":
        return erasure_state(float(frac(params["V"])))
    if name == "example2":
        return example2_state()
    raise ValueError(f"unknown state constructor {desc!r}")


def state_from_json(obj) -> QState:
    """{"dimA": .., "dimB": .., "rho": [[[re, im], ...], ...]} to a QState."""
    try:
        rho = np.array([[complex(re, im) for re, im in row] for row in obj["rho"]])
        return QState(rho, int(obj["dimA"]), int(obj["dimB"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state: {exc}") from exc


def state_to_json(state: QState) -> dict:
    return {
        "dimA": state.dimA,
        "dimB": state.dimB,
        "rho": [[[float(z.real), float(z.imag)] for z in row] for row in state.rho],
    }
