"""Independent reference computations used to cross-check boxlab.

Nothing here imports boxlab's solvers: tables are typed by hand, Born
probabilities go through an eigen-decomposition of the state, LPs through
scipy's HiGHS, cone programs through cvxpy, and the triangle search through
a perimeter parametrisation with differential evolution.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.optimize import differential_evolution, linprog

Q = Fraction(1, 4)


def bb84_rows(V: Fraction):
    """The noisy BB84 table typed out row by row."""
    hi, lo = (1 + V) / 4, (1 - V) / 4
    return [[hi, lo, lo, hi], [Q, Q, Q, Q], [Q, Q, Q, Q], [lo, hi, hi, lo]]


EXAMPLE2 = [
    [Fraction(5, 8), Fraction(1, 8), Fraction(1, 8), Fraction(1, 8)],
    [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4), Fraction(0)],
    [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4), Fraction(0)],
    [Fraction(5, 8), Fraction(1, 8), Fraction(1, 8), Fraction(1, 8)],
]


def proj(axis):
    """Projectors (+1, -1) of n·σ."""
    n = np.asarray(axis, dtype=float)
    obs = np.array([[n[2], n[0] - 1j * n[1]], [n[0] + 1j * n[1], -n[2]]])
    return [(np.eye(2) + obs) / 2, (np.eye(2) - obs) / 2]


def born_eig(rho, alice, bob):
    """p[x, y, a, b] through ρ = Σ λ |ψ><ψ| and tensor contraction of each ψ."""
    dA = alice[0][0].shape[0]
    dB = bob[0][0].shape[0]
    w, vecs = np.linalg.eigh(rho)
    out = np.zeros((2, 2, 2, 2))
    for lam, v in zip(w, vecs.T):
        if abs(lam) < 1e-15:
            continue
        psi = v.reshape(dA, dB)
        for x in range(2):
            for y in range(2):
                for a in range(2):
                    for b in range(2):
                        amp = alice[x][a] @ psi @ bob[y][b].T
                        out[x, y, a, b] += lam * np.real(np.vdot(psi, amp))
    return out


def singlet_werner(V: float):
    psi = np.array([0, 1, -1, 0]) / math.sqrt(2)
    return V * np.outer(psi, psi) + (1 - V) / 4 * np.eye(4)


def bell_local_scipy(entries) -> bool:
    """Feasibility of the 16-vertex decomposition with scipy's HiGHS."""
    cols = []
    for al, be, ga, ep in np.ndindex(2, 2, 2, 2):
        col = []
        for x, y, a, b in np.ndindex(2, 2, 2, 2):
            col.append(float(((al * x) ^ be) == a and ((ga * y) ^ ep) == b))
        cols.append(col)
    A = np.array(cols).T
    res = linprog(np.zeros(16), A_eq=A, b_eq=[float(v) for v in entries], bounds=[(0, None)] * 16, method="highs")
    return res.status == 0


def bloch_grid_realizable(t0: float, t1: float, step: float = 0.01) -> bool:
    """Search the Bloch ball on a grid for (r_z, r_x) = (2t0-1, 2t1-1)."""
    rz, rx = 2 * t0 - 1, 2 * t1 - 1
    for ry in np.arange(-1, 1 + step / 2, step):
        if rz * rz + rx * rx + ry * ry <= 1 + 1e-12:
            return True
    return False


def box_matrix_float(rows):
    r = np.array([[float(v) for v in row] for row in rows])
    pa0 = r[0, 0] + r[0, 1]
    pa1 = r[2, 0] + r[2, 1]
    pb0 = r[0, 0] + r[0, 2]
    pb1 = r[1, 0] + r[1, 2]
    return np.array([[1, pb0, pb1], [pa0, r[0, 0], r[1, 0]], [pa1, r[2, 0], r[3, 0]]])


def _perimeter(s: float):
    """Point on the unit square's boundary, s in [0, 4)."""
    s = s % 4
    if s < 1:
        return (s, 0.0)
    if s < 2:
        return (1.0, s - 1)
    if s < 3:
        return (3 - s, 1.0)
    return (0.0, 4 - s)


def best_triangle_slack(rows, seed: int = 0) -> float:
    """Largest min-slack over triangles with vertices on the boundary (qubit cone)."""
    M = box_matrix_float(rows)

    def neg(s):
        A = np.array([[1, *_perimeter(v)] for v in s])
        if abs(np.linalg.det(A)) < 1e-9:
            return 10.0
        B = np.linalg.solve(A.T, M)  # rows b_g with Σ a_g b_gᵀ = M
        sl = [b[0] - math.hypot(2 * b[1] - b[0], 2 * b[2] - b[0]) for b in B]
        return -min(sl)

    res = differential_evolution(neg, [(0, 4)] * 3, seed=seed, tol=1e-12, maxiter=3000, popsize=40, polish=True)
    return -res.fun


def corner_socp_max_min_weight(rows):
    """max min_g P_g over corner models with qubit Bob tables (cvxpy)."""
    import cvxpy as cp

    M = box_matrix_float(rows)
    corners = [(1, 1), (0, 0), (1, 0), (0, 1)]
    B = cp.Variable((4, 3))
    t = cp.Variable()
    A = np.array([[1, *c] for c in corners], dtype=float)
    cons = [A.T @ B == M]
    for g in range(4):
        P, u0, u1 = B[g, 0], B[g, 1], B[g, 2]
        cons += [cp.SOC(P, cp.hstack([2 * u0 - P, 2 * u1 - P])), P >= t]
    prob = cp.Problem(cp.Maximize(t), cons)
    prob.solve(solver=cp.CLARABEL)
    return prob.value, B.value


def triangle_threshold() -> float:
    """Visibility where the best boundary triangle for noisy BB84 just fits: √2·s with 2s⁴+s²+2s-1=0."""
    roots = np.roots([2, 0, 1, 2, -1])
    s = min(r.real for r in roots if abs(r.imag) < 1e-12 and 0 < r.real < 1)
    return math.sqrt(2) * s


CORNERS = [(1.0, 1.0), (0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]


def bounded_triangle_slack(rows, steps: int = 2001) -> float:
    """Best min-slack over triangles with two strategy corners and a point on a strategy segment.

    These are the three-value models available when Alice uses at most four
    deterministic strategies and one Bob table is shared by two of them.
    """
    M = box_matrix_float(rows)
    best = -np.inf
    ts = np.linspace(0, 1, steps)
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(4):
                for l in range(k + 1, 4):
                    p = np.outer(1 - ts, CORNERS[k]) + np.outer(ts, CORNERS[l])
                    for t, q in zip(ts, p):
                        A = np.array([[1, *CORNERS[i]], [1, *CORNERS[j]], [1, *q]])
                        if abs(np.linalg.det(A)) < 1e-9:
                            continue
                        B = np.linalg.solve(A.T, M)
                        sl = min(b[0] - math.hypot(2 * b[1] - b[0], 2 * b[2] - b[0]) for b in B)
                        best = max(best, sl)
    return best


def random_model_parts(rng, max_k: int = 4, den: int = 12):
    """Weights, Alice p0 pairs and MUB-realisable Bob p0 pairs with small denominators."""
    k = int(rng.integers(1, max_k + 1))
    raw = rng.integers(1, 10, size=k)
    weights = [Fraction(int(w), int(raw.sum())) for w in raw]
    alice = [(Fraction(int(rng.integers(0, den + 1)), den), Fraction(int(rng.integers(0, den + 1)), den)) for _ in range(k)]
    bob = []
    while len(bob) < k:
        if bob and rng.uniform() < 0.25:
            bob.append(bob[int(rng.integers(0, len(bob)))])
            continue
        t = (Fraction(int(rng.integers(0, den + 1)), den), Fraction(int(rng.integers(0, den + 1)), den))
        if (2 * t[0] - 1) ** 2 + (2 * t[1] - 1) ** 2 <= 1:
            bob.append(t)
    return weights, alice, bob
