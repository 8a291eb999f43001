"""Hidden-variable models of minimal dimension for 2x2x2 boxes.

A model Σ_λ p(λ) A_λ(a|x) B_λ(b|y) is encoded through the 3x3 matrix

    M = [[1,        pB(0|0),  pB(0|1) ],
         [pA(0|0),  p(00|00), p(00|01)],
         [pA(0|1),  p(00|10), p(00|11)]]

which determines a no-signalling box completely.  Every hidden value
contributes a_λ b_λᵀ with a_λ = (1, A_λ(0|0), A_λ(0|1)) and
b_λ = p(λ)·(1, B_λ(0|0), B_λ(0|1)), so a model of dimension k is a
factorisation M = Σ_g a_g b_gᵀ with a_g in the unit square (Alice) and b_g in
a cone (the MUB-qubit cone for LHV-LHS models, the square cone for LHV).

Instances fix, for every group of hidden values sharing one Bob table, the
face of the square spanned by the group's deterministic Alice strategies.
With three groups and a full-rank M, B is unique once the Alice points are
chosen: b_g = Mᵀ(a_j × a_k) / det[a_0 a_1 a_2].  That turns each instance
into a search over at most six face parameters, which is decided by an
exact candidate check or a covering branch-and-bound.
"""

from __future__ import annotations

import heapq
import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .boxes import BITS, STRATEGIES, Box222, DetStrategy, SingleTable, marginal_alice, marginal_bob
from .cones import LORENTZ, SQUARE
from .errors import DegenerateError, DomainError, ExhaustionError, SubdivisionLimit
from .inequalities import is_bell_local_lp, is_unsteerable_mub
from .realizability import mub_disc, reconstruct_pure_state
from .solver import (
    ONE,
    ZERO,
    Certificate,
    DiscConstraint,
    Inconsistent,
    frac,
    leaves_cover,
    lp_feasible_exact,
    lp_solve,
    max_min_slack,
    nullspace,
    rank,
    rationalize,
    solve_linear_exact,
    disc_feasibility,
)

HALF = Fraction(1, 2)

# Alice point (p(0|0), p(0|1)) of each deterministic strategy, in STRATEGIES order
ALPHA = tuple((Fraction(int(s.output(0) == 0)), Fraction(int(s.output(1) == 0))) for s in STRATEGIES)

# closed edges of the square as pairs of strategy indices
EDGES = ((0, 2), (1, 3), (0, 3), (1, 2))

CONES = {"mub-qubit": LORENTZ, "square": SQUARE}


# ---------------------------------------------------------------------------
# models


def _strategy_index(s) -> int:
    if isinstance(s, DetStrategy):
        return STRATEGIES.index(s)
    if isinstance(s, str):
        return STRATEGIES.index(DetStrategy(int(s[0]), int(s[1])))
    if isinstance(s, tuple):
        return STRATEGIES.index(DetStrategy(*s))
    return int(s)


@dataclass(frozen=True)
class AliceAssignment:
    """Deterministic Alice strategy per hidden value (repeats allowed)."""

    strategies: tuple

    def __post_init__(self):
        idx = tuple(_strategy_index(s) for s in self.strategies)
        if not idx:
            raise ValueError("an assignment needs at least one hidden value")
        object.__setattr__(self, "strategies", tuple(STRATEGIES[i] for i in idx))

    @property
    def indices(self) -> tuple:
        return tuple(STRATEGIES.index(s) for s in self.strategies)

    def __len__(self):
        return len(self.strategies)


@dataclass(frozen=True)
class Grouping:
    """Partition of hidden-value indices; each block shares one Bob table."""

    groups: tuple

    def __post_init__(self):
        gs = tuple(tuple(sorted(g)) for g in self.groups)
        object.__setattr__(self, "groups", gs)
        if any(not g for g in gs):
            raise ValueError("groups must be nonempty")
        flat = sorted(i for g in gs for i in g)
        if flat != list(range(len(flat))):
            raise ValueError("groups must partition 0..m-1")

    @classmethod
    def singletons(cls, m: int) -> "Grouping":
        return cls(tuple((i,) for i in range(m)))

    @property
    def m(self) -> int:
        return sum(len(g) for g in self.groups)

    def __len__(self):
        return len(self.groups)


@dataclass(frozen=True)
class LhvLhsModel:
    weights: tuple
    alice_tables: tuple
    bob_tables: tuple
    bob_states: tuple | None = None

    @property
    def dim(self) -> int:
        return len(self.weights)

    def recompose(self) -> Box222:
        ent = []
        for x, y, a, b in itertools.product(BITS, repeat=4):
            ent.append(sum((w * A(x, a) * B(y, b) for w, A, B in zip(self.weights, self.alice_tables, self.bob_tables)), ZERO))
        return Box222(tuple(ent))

    def to_json(self) -> dict:
        out = {
            "dim": self.dim,
            "weights": [str(w) for w in self.weights],
            "alice_tables": [t.to_json() for t in self.alice_tables],
            "bob_tables": [t.to_json() for t in self.bob_tables],
        }
        if self.bob_states is not None:
            out["bob_states"] = [s.to_json() for s in self.bob_states]
        return out


def _model(weights, alice_p0, bob_p0, mub=True) -> LhvLhsModel:
    alice = tuple(SingleTable.from_p0(*a) for a in alice_p0)
    bob = tuple(SingleTable.from_p0(*b) for b in bob_p0)
    states = tuple(reconstruct_pure_state(t) for t in bob) if mub else None
    return LhvLhsModel(tuple(frac(w) for w in weights), alice, bob, states)


def box_matrix(box: Box222) -> list[list[Fraction]]:
    pa, pb = marginal_alice(box), marginal_bob(box)
    return [
        [ONE, pb(0, 0), pb(1, 0)],
        [pa(0, 0), box[0, 0, 0, 0], box[0, 1, 0, 0]],
        [pa(1, 0), box[1, 0, 0, 0], box[1, 1, 0, 0]],
    ]


def model_violation(model: LhvLhsModel, box: Box222, mub: bool = True) -> str | None:
    """Description of the first violated model condition, None if the model is valid."""
    n = len(model.weights)
    if len(model.alice_tables) != n or len(model.bob_tables) != n:
        return "weights and tables differ in length"
    for i, w in enumerate(model.weights):
        if w <= 0:
            return f"weight {i} is not positive: {w}"
    if sum(model.weights) != 1:
        return f"weights sum to {sum(model.weights)}"
    if mub:
        for i, t in enumerate(model.bob_tables):
            if mub_disc(t) > 0:
                return f"Bob table {i} lies outside the MUB disc"
        if model.bob_states is not None:
            for i, (t, s) in enumerate(zip(model.bob_tables, model.bob_states)):
                z, xx = s.table_floats()
                if abs(z - float(t(0, 0))) > 1e-12 or abs(xx - float(t(1, 0))) > 1e-12:
                    return f"state {i} does not reproduce Bob table {i}"
    got = model.recompose()
    for (x, y, a, b), u, v in zip(itertools.product(BITS, repeat=4), got.entries, box.entries):
        if u != v:
            return f"p({a}{b}|{x}{y}) is {u}, target {v}"
    return None


def verify_model(model: LhvLhsModel, box: Box222, mub: bool = True) -> bool:
    return model_violation(model, box, mub) is None


def merge_equal_bob_tables(model: LhvLhsModel) -> LhvLhsModel:
    order, buckets = [], {}
    for i, t in enumerate(model.bob_tables):
        if t not in buckets:
            buckets[t] = []
            order.append(t)
        buckets[t].append(i)
    weights, alice, bob, states = [], [], [], []
    for t in order:
        idx = buckets[t]
        w = sum(model.weights[i] for i in idx)
        p0 = sum(model.weights[i] * model.alice_tables[i](0, 0) for i in idx) / w
        p1 = sum(model.weights[i] * model.alice_tables[i](1, 0) for i in idx) / w
        weights.append(w)
        alice.append(SingleTable.from_p0(p0, p1))
        bob.append(t)
        if model.bob_states is not None:
            states.append(model.bob_states[idx[0]])
    return LhvLhsModel(tuple(weights), tuple(alice), tuple(bob), tuple(states) if model.bob_states is not None else None)


# reference models ----------------------------------------------------------


def bb84_four_model(V) -> LhvLhsModel:
    """Four deterministic Alice responses, one qubit table each, weights 1/4."""
    V = frac(V)
    hi, lo = (1 + V) / 2, (1 - V) / 2
    q = Fraction(1, 4)
    return _model([q] * 4, [ALPHA[i] for i in range(4)], [(hi, lo), (lo, hi), (hi, hi), (lo, lo)])


def example2_three_model() -> LhvLhsModel:
    return _model(
        [HALF, Fraction(1, 4), Fraction(1, 4)],
        [ALPHA[0], ALPHA[2], ALPHA[3]],
        [(Fraction(3, 4), Fraction(3, 4)), (ONE, HALF), (HALF, ONE)],
    )


def example2_two_model() -> LhvLhsModel:
    """The separable decomposition: two product terms with equal weight."""
    return _model([HALF, HALF], [(ONE, HALF), (HALF, ONE)], [(ONE, HALF), (HALF, ONE)])


def model_from_alice_points(box: Box222, points, mub: bool = True) -> LhvLhsModel:
    """The unique model with the three given Alice points (M must have rank 3)."""
    M = box_matrix(box)
    A = [(ONE, frac(p[0]), frac(p[1])) for p in points]
    if len(A) != 3:
        raise ValueError("three Alice points are needed")
    c, d = _exact_k3(M, A)
    if d == 0 or rank(M) != 3:
        raise ValueError("Alice points or box matrix are degenerate")
    bs = [tuple(v / d for v in cg) for cg in c]
    cone = LORENTZ if mub else SQUARE
    for b in bs:
        if b[0] <= 0 or not cone.contains(b):
            raise DomainError(f"Bob vector {b} is outside the cone")
    return _model([b[0] for b in bs], [a[1:] for a in A], [(b[1] / b[0], b[2] / b[0]) for b in bs], mub)


# ---------------------------------------------------------------------------
# exact small-vector helpers


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), ZERO)


def _vm(v, M):
    """vᵀM, i.e. Mᵀv."""
    return tuple(sum((v[i] * M[i][j] for i in range(3)), ZERO) for j in range(3))


def _exact_k3(M, A):
    c = [_vm(_cross(A[1], A[2]), M), _vm(_cross(A[2], A[0]), M), _vm(_cross(A[0], A[1]), M)]
    return c, _dot(A[0], _cross(A[1], A[2]))


def _exact_k2(M, A, n):
    c = [_vm(_cross(A[1], n), M), _vm(_cross(n, A[0]), M)]
    return c, _dot(n, _cross(A[0], A[1]))


def _plane_normal(M) -> tuple:
    """Normal of the column space of a rank-2 matrix."""
    ns = nullspace([list(col) for col in zip(*M)])
    return tuple(ns[0])


def _in_relint(alpha, strats) -> bool:
    pts = [ALPHA[s] for s in strats]
    if len(pts) == 1:
        return tuple(alpha) == pts[0]
    A = [[ONE] * len(pts), [p[0] for p in pts], [p[1] for p in pts]]
    res = max_min_slack(A, [ONE, alpha[0], alpha[1]], len(pts))
    return res.status == "optimal" and res.value > 0


def _barycentric(alpha, strats, strict: bool):
    pts = [ALPHA[s] for s in strats]
    A = [[ONE] * len(pts), [p[0] for p in pts], [p[1] for p in pts]]
    b = [ONE, alpha[0], alpha[1]]
    res = max_min_slack(A, b, len(pts)) if strict else lp_feasible_exact(A, b, n=len(pts))
    return res.x


# ---------------------------------------------------------------------------
# faces


@dataclass(frozen=True)
class Face:
    """Alice points α(θ) = origin + Σ θ_i dirs[i], θ ∈ [0,1]^d (θ0+θ1 ≤ 1 for triangles)."""

    strategies: tuple
    origin: tuple
    dirs: tuple
    triangle: bool = False

    @property
    def dim(self) -> int:
        return len(self.dirs)

    def point(self, theta) -> tuple:
        p = list(self.origin)
        for t, d in zip(theta, self.dirs):
            p[0] += t * d[0]
            p[1] += t * d[1]
        return tuple(p)


def make_face(strats) -> Face:
    s = tuple(sorted(set(strats)))
    pts = [ALPHA[i] for i in s]
    o = pts[0]
    if len(pts) == 1:
        return Face(s, o, ())
    if len(pts) == 2:
        return Face(s, o, ((pts[1][0] - o[0], pts[1][1] - o[1]),))
    if len(pts) == 3:
        return Face(s, o, tuple((p[0] - o[0], p[1] - o[1]) for p in pts[1:]), triangle=True)
    return Face(s, (ZERO, ZERO), ((ONE, ZERO), (ZERO, ONE)))


def slice_face(strats, n) -> Face | None:
    """conv(strategies) ∩ {α : n·(1, α) = 0} as a point or segment face."""
    s = tuple(sorted(set(strats)))
    pts = [ALPHA[i] for i in s]
    f = [n[0] + n[1] * p[0] + n[2] * p[1] for p in pts]
    cand = [p for p, v in zip(pts, f) if v == 0]
    for i, j in itertools.combinations(range(len(pts)), 2):
        if f[i] * f[j] < 0:
            t = f[i] / (f[i] - f[j])
            cand.append((pts[i][0] + t * (pts[j][0] - pts[i][0]), pts[i][1] + t * (pts[j][1] - pts[i][1])))
    if not cand:
        return None
    d = (-n[2], n[1])
    cand.sort(key=lambda p: p[0] * d[0] + p[1] * d[1])
    p, q = cand[0], cand[-1]
    if p == q:
        return Face(s, p, ())
    return Face(s, p, ((q[0] - p[0], q[1] - p[1]),))


# ---------------------------------------------------------------------------
# fixed Alice points


def _solve_fixed(M, points, cone, strict=True) -> Certificate:
    """Bob vectors for fixed Alice points; witness is a list of b_g."""
    k = len(points)
    A = [(ONE, frac(p[0]), frac(p[1])) for p in points]
    # unknowns b_g = (P, u0, u1) for each g, equations Σ_g a_g[i] b_g[j] = M[i][j]
    rows, rhs = [], []
    for i in range(3):
        for j in range(3):
            row = [ZERO] * (3 * k)
            for g in range(k):
                row[3 * g + j] = A[g][i]
            rows.append(row)
            rhs.append(M[i][j])
    if cone is SQUARE:
        # x = (b, τ) ≥ 0; u ≤ P, τ ≤ P, τ ≤ 1; maximise τ
        n = 3 * k + 1
        Aeq = [r + [ZERO] for r in rows]
        Aub, bub = [], []
        for g in range(k):
            for j in (1, 2):
                r = [ZERO] * n
                r[3 * g + j], r[3 * g] = ONE, -ONE
                Aub.append(r)
                bub.append(ZERO)
            r = [ZERO] * n
            r[-1], r[3 * g] = ONE, -ONE
            Aub.append(r)
            bub.append(ZERO)
        r = [ZERO] * n
        r[-1] = ONE
        Aub.append(r)
        bub.append(ONE)
        c = [ZERO] * (n - 1) + [ONE]
        res = lp_solve(c, Aeq, rhs, Aub, bub, n)
        if res.status != "optimal":
            return Certificate("infeasible", evidence={"kind": "lp", "farkas": res.farkas})
        if strict and res.value <= 0:
            return Certificate("infeasible", evidence={"kind": "forced-zero", "tau": res.value})
        x = res.x
        return Certificate("feasible", witness=[tuple(x[3 * g: 3 * g + 3]) for g in range(k)], evidence={"kind": "lp"})
    space = solve_linear_exact(rows, rhs)
    if isinstance(space, Inconsistent):
        return Certificate("infeasible", evidence={"kind": "linear-system", "y": space.y})
    discs, pos = [], []
    for g in range(k):
        P = [ZERO] * (3 * k)
        P[3 * g] = ONE
        u = [ZERO] * (3 * k)
        u[3 * g], u[3 * g + 1] = -ONE, 2 * ONE
        v = [ZERO] * (3 * k)
        v[3 * g], v[3 * g + 2] = -ONE, 2 * ONE
        discs.append(DiscConstraint(space.form(u), space.form(v), space.form(P), f"disc[{g}]"))
        pos.append(space.form(P))
    cert = disc_feasibility(space, discs, pos if strict else ())
    if cert.feasible:
        x = space.point(cert.witness)
        cert.witness = [tuple(x[3 * g: 3 * g + 3]) for g in range(k)]
    return cert


# ---------------------------------------------------------------------------
# face-parameter branch and bound


def _slack_arr(cone, B):
    P, u0, u1 = B[:, 0], B[:, 1], B[:, 2]
    if cone is SQUARE:
        return np.minimum.reduce([u0, u1, P - u0, P - u1])
    return P - np.hypot(2 * u0 - P, 2 * u1 - P)


def _corners(lo, hi):
    return np.array(list(itertools.product(*zip(lo, hi))), dtype=float).reshape(-1, len(lo))


class FaceProblem:
    """Find Alice points on the given faces so that M factorises through the cone."""

    def __init__(self, M, faces: Sequence[Face], cone, strict: bool, r: int, normal=None):
        self.M = M
        self.faces = list(faces)
        self.cone = cone
        self.strict = strict
        self.r = r
        self.k = len(faces)
        self.normal = normal
        if self.k not in (2, 3) or (self.k == 2 and normal is None):
            raise ValueError("face search handles two groups on a plane or three groups")
        self.Mf = np.array([[float(v) for v in row] for row in M])
        self.nf = None if normal is None else np.array([float(v) for v in normal])
        self.offsets = []
        off = 0
        for f in self.faces:
            self.offsets.append(off)
            off += f.dim
        self.D = off
        self.origins = [np.array([float(v) for v in f.origin]) for f in self.faces]
        self.dirs = [np.array([[float(v) for v in d] for d in f.dirs]).reshape(f.dim, 2) for f in self.faces]
        rho2 = cone.inner_radius_sq(M) if (self.k == 3 and r == 3) else None
        self.four_rho2 = None if rho2 is None else 4 * float(rho2) * (1 - 1e-9)

    # float evaluation ---------------------------------------------------
    def alphas(self, T):
        out = []
        for f, o, D, off in zip(self.faces, self.origins, self.dirs, self.offsets):
            out.append(o + T[:, off: off + f.dim] @ D)
        return out

    def evaluate(self, T):
        al = self.alphas(T)
        A = [np.column_stack([np.ones(len(T)), a]) for a in al]
        if self.k == 3:
            c = [np.cross(A[1], A[2]) @ self.Mf, np.cross(A[2], A[0]) @ self.Mf, np.cross(A[0], A[1]) @ self.Mf]
            d = np.einsum("ij,ij->i", A[0], np.cross(A[1], A[2]))
        else:
            n = np.broadcast_to(self.nf, A[0].shape)
            c = [np.cross(A[1], n) @ self.Mf, np.cross(n, A[0]) @ self.Mf]
            d = np.einsum("ij,ij->i", n, np.cross(A[0], A[1]))
        return al, c, d

    def extras(self, T):
        vals = []
        for f, off in zip(self.faces, self.offsets):
            if f.triangle:
                vals.append(1 - T[:, off] - T[:, off + 1])
        return vals

    def score(self, T):
        T = np.atleast_2d(T)
        _, c, d = self.evaluate(T)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.full(len(T), np.inf)
            for cg in c:
                s = np.minimum(s, _slack_arr(self.cone, cg / d[:, None]))
        s[np.abs(d) < 1e-12] = -np.inf
        s = np.nan_to_num(s, nan=-np.inf)
        for e in self.extras(T):
            s = np.minimum(s, e)
        return s

    # exact check --------------------------------------------------------
    def certify(self, theta) -> list | None:
        theta = [frac(t) for t in theta]
        if any(t < 0 or t > 1 for t in theta):
            return None
        alphas = []
        for f, off in zip(self.faces, self.offsets):
            th = theta[off: off + f.dim]
            if f.triangle and th[0] + th[1] > 1:
                return None
            alphas.append(f.point(th))
        A = [(ONE, a[0], a[1]) for a in alphas]
        c, d = _exact_k3(self.M, A) if self.k == 3 else _exact_k2(self.M, A, self.normal)
        if d == 0:
            return None
        bs = [tuple(v / d for v in cg) for cg in c]
        for b in bs:
            if b[0] <= 0 or not self.cone.contains(b):
                return None
        for i in range(3):
            for j in range(3):
                if sum((a[i] * b[j] for a, b in zip(A, bs)), ZERO) != self.M[i][j]:
                    return None
        if self.strict:
            for f, a in zip(self.faces, alphas):
                if not _in_relint(a, f.strategies):
                    return None
        return list(zip(alphas, bs))

    # closing a box ------------------------------------------------------
    def closes(self, lo, hi):
        V = _corners(lo, hi)
        al, c, d = self.evaluate(V)
        scale = max(1.0, float(np.max(np.abs(d))), max(float(np.max(np.abs(cg))) for cg in c))
        margin = 1e-9 * scale
        for e in self.extras(V):
            if e.max() < -margin:
                return "outside-face"
        if self.four_rho2 is not None:
            for j, k in itertools.combinations(range(3), 2):
                lo_d = al[j].min(axis=0) - al[k].max(axis=0)
                hi_d = al[j].max(axis=0) - al[k].min(axis=0)
                far = float(np.sum(np.maximum(lo_d**2, hi_d**2)))
                if far < self.four_rho2 - margin:
                    return f"points {j},{k} too close"
        signs = []
        if d.max() > -margin:
            signs.append(1)
        if d.min() < margin:
            signs.append(-1)
        mid = ((np.array(lo) + np.array(hi)) / 2)[None, :]
        _, cm, _ = self.evaluate(mid)
        reasons = []
        for sg in signs:
            hit = None
            for g in range(self.k):
                for y in self.cone.separators(sg * cm[g][0]):
                    yf = np.array([float(v) for v in y])
                    if (sg * (c[g] @ yf)).max() < -margin:
                        hit = f"group {g} outside cone (det sign {sg:+d})"
                        break
                if hit:
                    break
            if hit is None:
                return None
            reasons.append(hit)
        return "; ".join(reasons) if reasons else "det vanishes"

    # search -------------------------------------------------------------
    def candidates(self, top: int = 4):
        """Promising parameter vectors from a grid and local refinement."""
        if self.D == 0:
            return [np.zeros(0)]
        G = {1: 33, 2: 17, 3: 17, 4: 9}.get(self.D, 5)
        grid = np.array(list(itertools.product(np.linspace(0, 1, G), repeat=self.D)))
        s = self.score(grid)
        order = np.argsort(-s)[:top]
        out = [grid[i] for i in order]

        def neg(t):
            return -float(self.score(np.clip(t, 0, 1))[0])

        for i in order[:2]:
            if not np.isfinite(s[i]):
                continue
            res = minimize(neg, grid[i], method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 2000})
            out.append(np.clip(res.x, 0, 1))
        return out

    def try_candidates(self, cands):
        for t in cands:
            if self.D and self.score(t)[0] < -1e-7:
                continue
            for q in itertools.islice(rationalize(list(t)), 12):
                w = self.certify(q)
                if w is not None:
                    return q, w
        return None

    def search(self, max_depth: int = 60, max_nodes: int = 20000, prepass: bool = True) -> Certificate:
        if self.D == 0:
            w = self.certify([])
            if w is not None:
                return Certificate("feasible", witness=w, evidence={"kind": "point"})
            return Certificate("infeasible", evidence={"kind": "point"})
        if prepass:
            hit = self.try_candidates(self.candidates())
            if hit is not None:
                return Certificate("feasible", witness=hit[1], evidence={"kind": "candidate", "theta": [str(v) for v in hit[0]]})
        lo0, hi0 = [0.0] * self.D, [1.0] * self.D
        tick = itertools.count()
        heap = [(0.0, next(tick), lo0, hi0, "")]
        leaves, nodes = [], 0
        while heap:
            _, _, lo, hi, path = heapq.heappop(heap)
            nodes += 1
            reason = self.closes(lo, hi)
            if reason is not None:
                leaves.append((path, reason))
                continue
            pts = np.vstack([(np.array(lo) + np.array(hi)) / 2, _corners(lo, hi)])
            good = pts[self.score(pts) >= -1e-9]
            for t in good:
                w = self.certify([Fraction(v) for v in t])
                if w is not None:
                    return Certificate("feasible", witness=w, evidence={"kind": "branch-and-bound", "nodes": nodes})
            if len(path) >= max_depth or nodes >= max_nodes:
                return Certificate("inconclusive", evidence={"kind": "subdivision-limit", "nodes": nodes, "depth": len(path)})
            i = int(np.argmax(np.array(hi) - np.array(lo)))
            m = (lo[i] + hi[i]) / 2
            for bit, (a, b) in (("0", (lo[i], m)), ("1", (m, hi[i]))):
                nlo, nhi = list(lo), list(hi)
                nlo[i], nhi[i] = a, b
                ctr = (np.array(nlo) + np.array(nhi)) / 2
                heapq.heappush(heap, (-float(self.score(ctr)[0]), next(tick), nlo, nhi, path + bit))
        return Certificate(
            "infeasible",
            evidence={"kind": "branch-and-bound", "leaves": leaves, "nodes": nodes, "covered": leaves_cover(p for p, _ in leaves)},
        )


# ---------------------------------------------------------------------------
# one instance


def _bob_marginal_ok(M, cone) -> bool:
    return cone.contains(tuple(M[0]))


def _alice_marginal_lp(M, groups, strict: bool):
    cols = [(g, s) for g, strats in enumerate(groups) for s in sorted(set(strats))]
    A = [[ONE] * len(cols), [ALPHA[s][0] for _, s in cols], [ALPHA[s][1] for _, s in cols]]
    b = [ONE, M[1][0], M[2][0]]
    res = max_min_slack(A, b, len(cols)) if strict else lp_feasible_exact(A, b, n=len(cols))
    ok = res.status == "optimal" and (not strict or res.value > 0)
    return ok, cols, res


def solve_instance(M, groups, cone=LORENTZ, strict: bool = True, r: int | None = None, **search_kw) -> Certificate:
    """Decide whether M = Σ_g a_g b_gᵀ with a_g on conv(groups[g]) and b_g in the cone.

    ``groups`` lists strategy indices per group.  With ``strict`` the Alice
    points lie in the relative interiors of their faces and every P_g > 0.
    The witness is a list of (alpha, b) pairs, one per group.
    """
    groups = [tuple(g) for g in groups]
    if r is None:
        r = rank(M)
    if not _bob_marginal_ok(M, cone):
        return Certificate("infeasible", evidence={"kind": "bob-marginal"})
    ok, cols, res = _alice_marginal_lp(M, groups, strict)
    if not ok:
        return Certificate("infeasible", evidence={"kind": "alice-marginal", "farkas": res.farkas})
    # groups with one strategy and the same point can share a Bob vector
    merged, owner = [], []
    for g in groups:
        key = tuple(sorted(set(g)))
        if len(key) == 1 and key in merged:
            owner.append(merged.index(key))
        else:
            owner.append(len(merged))
            merged.append(key)
    k = len(merged)
    if k < r:
        return Certificate("infeasible", evidence={"kind": "rank", "rank": r, "groups": k})

    if r == 1:
        pi = res.x
        per = []
        for g in range(len(groups)):
            w = [(s, p) for (gg, s), p in zip(cols, pi) if gg == g]
            P = sum((p for _, p in w), ZERO)
            al = (sum((p * ALPHA[s][0] for s, p in w), ZERO) / P, sum((p * ALPHA[s][1] for s, p in w), ZERO) / P)
            per.append((al, tuple(P * v for v in M[0])))
        return Certificate("feasible", witness=per, evidence={"kind": "rank-one"})

    if all(len(g) == 1 for g in merged):
        cert = _solve_fixed(M, [ALPHA[g[0]] for g in merged], cone, strict)
        if cert.feasible:
            cert.witness = list(zip([ALPHA[g[0]] for g in merged], cert.witness))
    elif k == 2 and r == 2:
        n = _plane_normal(M)
        faces = [slice_face(g, n) for g in merged]
        if any(f is None for f in faces):
            return Certificate("infeasible", evidence={"kind": "face-misses-plane"})
        cert = FaceProblem(M, faces, cone, strict, r, normal=n).search(**search_kw)
    elif k == 3:
        cert = FaceProblem(M, [make_face(g) for g in merged], cone, strict, r).search(**search_kw)
    else:
        raise ValueError(f"unsupported instance shape: {len(merged)} groups with shared faces at rank {r}")
    if cert.feasible:
        counts = [owner.count(i) for i in range(k)]
        cert.witness = [(cert.witness[o][0], tuple(v / counts[o] for v in cert.witness[o][1])) for o in owner]
    return cert


def _refined_model(assignment: AliceAssignment, grouping: Grouping, per_group, mub: bool) -> LhvLhsModel:
    """One hidden value per assignment entry, Alice deterministic."""
    idx = assignment.indices
    weights = [None] * len(idx)
    bob = [None] * len(idx)
    for g, members in enumerate(grouping.groups):
        alpha, b = per_group[g]
        strats = sorted({idx[i] for i in members})
        pi = _barycentric(alpha, strats, strict=True)
        for s, p in zip(strats, pi):
            mem = [i for i in members if idx[i] == s]
            for i in mem:
                weights[i] = b[0] * p / len(mem)
                bob[i] = (b[1] / b[0], b[2] / b[0])
    return _model(weights, [ALPHA[s] for s in idx], bob, mub)


def _merged_model(per_group, mub: bool) -> LhvLhsModel:
    return _model([b[0] for _, b in per_group], [a for a, _ in per_group], [(b[1] / b[0], b[2] / b[0]) for _, b in per_group], mub)


def _instance(box, assignment, grouping, cone, raise_degenerate) -> Certificate:
    if not isinstance(assignment, AliceAssignment):
        assignment = AliceAssignment(tuple(assignment))
    if grouping is None:
        grouping = Grouping.singletons(len(assignment))
    elif not isinstance(grouping, Grouping):
        grouping = Grouping(tuple(grouping))
    if grouping.m != len(assignment):
        raise ValueError("grouping does not match the assignment length")
    M = box_matrix(box)
    idx = assignment.indices
    groups = [tuple(idx[i] for i in g) for g in grouping.groups]
    cert = solve_instance(M, groups, cone, strict=True)
    mub = cone is LORENTZ
    if cert.feasible:
        per = cert.witness
        cert.witness = _refined_model(assignment, grouping, per, mub)
        cert.evidence["merged"] = _merged_model(per, mub)
    elif cert.kind == "forced-zero" and raise_degenerate:
        raise DegenerateError("the instance is only feasible with a zero weight")
    return cert


def dlhvlhs_feasible(box: Box222, assignment, grouping=None, raise_degenerate: bool = False) -> Certificate:
    return _instance(box, assignment, grouping, LORENTZ, raise_degenerate)


def dlhv_feasible(box: Box222, assignment, grouping=None, raise_degenerate: bool = False) -> Certificate:
    return _instance(box, assignment, grouping, SQUARE, raise_degenerate)


# ---------------------------------------------------------------------------
# minimal dimension


@dataclass
class DimensionReport:
    min_dim: int | None
    verdict: str
    rank: int | None = None
    model: LhvLhsModel | None = None
    model_class: str = "general"
    certificates: list = field(default_factory=list)
    explored: int = 0
    lower_bound: int | None = None

    @property
    def decided(self) -> bool:
        return self.min_dim is not None

    def to_json(self) -> dict:
        return {
            "min_dim": self.min_dim,
            "verdict": self.verdict,
            "rank": self.rank,
            "model_class": self.model_class,
            "lower_bound": self.lower_bound,
            "witness": None if self.model is None else self.model.to_json(),
            "explored": self.explored,
            "certificates": [{k: v for k, v in c.items() if k != "certificate"} for c in self.certificates],
        }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("BOXLAB_THREADS", "1")))
    except ValueError:
        return 1


def _job(args):
    M, groups, cone_name, strict, r = args
    return solve_instance(M, groups, CONES[cone_name], strict, r)


def _run_jobs(jobs):
    n = _threads()
    if n > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n) as ex:
            return list(ex.map(_job, jobs))
    return [_job(j) for j in jobs]


def _record(certs, dim, label, cert):
    certs.append({"dim": dim, "instance": label, "verdict": cert.verdict, "kind": cert.kind, "certificate": cert})


def _label(groups) -> str:
    return " | ".join(",".join(STRATEGIES[s].label for s in g) for g in groups)


def _set_partitions(items, k):
    """Partitions of the list ``items`` into exactly k nonempty blocks."""
    if not items:
        if k == 0:
            yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest, k - 1):
        yield [[first]] + part
    for part in _set_partitions(rest, k):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def enumerate_instances(k: int, model_class: str):
    """Canonical grouped instances with k groups and at most four strategies."""
    seen = set()
    pick = itertools.combinations if model_class == "distinct" else itertools.combinations_with_replacement
    for m in range(k, 5):
        for ms in pick(range(4), m):
            for part in _set_partitions(list(ms), k):
                key = tuple(sorted(tuple(sorted(b)) for b in part))
                if key not in seen:
                    seen.add(key)
                    yield key


def _start(box, cone):
    """Common prelude: returns (M, r, report or None)."""
    if cone is LORENTZ:
        if not is_unsteerable_mub(box):
            return None, None, DimensionReport(None, "steerable")
    elif not is_bell_local_lp(box)[0]:
        return None, None, DimensionReport(None, "nonlocal")
    M = box_matrix(box)
    r = rank(M)
    if not _bob_marginal_ok(M, cone):
        raise ExhaustionError("the Bob marginal table is outside the cone; no model exists")
    return M, r, None


def _general(box, cone, max_nodes) -> DimensionReport:
    mub = cone is LORENTZ
    M, r, early = _start(box, cone)
    if early is not None:
        return early
    certs, explored = [], 0
    for dim in range(1, r):
        _record(certs, dim, "rank", Certificate("infeasible", evidence={"kind": "rank", "rank": r}))
    found, inconclusive = None, False
    if r < 3:
        groups = [tuple(range(4))] * r
        cert = solve_instance(M, groups, cone, strict=False, r=r, max_nodes=max_nodes)
        explored += 1
        _record(certs, r, _label(groups), cert)
        if cert.feasible:
            found = (r, cert.witness)
        inconclusive |= cert.verdict == "inconclusive"
    if found is None and r <= 3:
        triples = list(itertools.combinations_with_replacement(EDGES, 3))
        probs = [FaceProblem(M, [make_face(e) for e in t], cone, False, r) for t in triples]
        # cheap global pass first: most feasible boxes are found by a grid point
        for t, p in zip(triples, probs):
            hit = p.try_candidates(p.candidates())
            if hit is not None:
                explored += 1
                cert = Certificate("feasible", witness=hit[1], evidence={"kind": "candidate"})
                _record(certs, 3, _label(t), cert)
                found = (3, hit[1])
                break
        if found is None:
            for t, p in zip(triples, probs):
                explored += 1
                cert = p.search(max_nodes=max_nodes, prepass=False)
                _record(certs, 3, _label(t), cert)
                if cert.feasible:
                    found = (3, cert.witness)
                    break
                inconclusive |= cert.verdict == "inconclusive"
    if found is None:
        explored += 1
        groups = [(s,) for s in range(4)]
        cert = solve_instance(M, groups, cone, strict=True, r=r)
        _record(certs, 4, _label(groups), cert)
        if cert.feasible:
            found = (4, cert.witness)
    if found is None:
        raise ExhaustionError("no model with at most four hidden values exists")
    dim, per = found
    model = _merged_model(per, mub)
    lower = next((c["dim"] for c in certs if c["verdict"] == "inconclusive"), dim)
    if inconclusive and lower < dim:
        return DimensionReport(None, "inconclusive", r, model, "general", certs, explored, lower)
    return DimensionReport(dim, "feasible", r, model, "general", certs, explored, dim)


def _enumerated(box, cone, model_class, max_nodes) -> DimensionReport:
    mub = cone is LORENTZ
    M, r, early = _start(box, cone)
    if early is not None:
        return early
    certs, explored, lower = [], 0, None
    for k in range(1, 5):
        keys = list(enumerate_instances(k, model_class))
        jobs = [(M, list(key), cone.name, True, r) for key in keys]
        results = _run_jobs(jobs)
        explored += len(keys)
        hit = None
        for key, cert in zip(keys, results):
            _record(certs, k, _label(key), cert)
            if cert.feasible and hit is None:
                hit = (key, cert)
        if hit is None and lower is None and any(c.verdict == "inconclusive" for c in results):
            lower = k
        if hit is not None:
            key, cert = hit
            idx = tuple(s for g in key for s in g)
            pos, groups = 0, []
            for g in key:
                groups.append(tuple(range(pos, pos + len(g))))
                pos += len(g)
            model = _refined_model(AliceAssignment(idx), Grouping(tuple(groups)), cert.witness, mub)
            model = merge_equal_bob_tables(model) if len(key) < len(idx) else model
            if lower is not None:
                return DimensionReport(None, "inconclusive", r, model, model_class, certs, explored, lower)
            return DimensionReport(k, "feasible", r, model, model_class, certs, explored, k)
    raise ExhaustionError(f"no {model_class} model with at most four hidden values exists")


def _min_dim(box, cone, model_class, max_nodes):
    if model_class == "general":
        return _general(box, cone, max_nodes)
    if model_class in ("bounded", "distinct"):
        return _enumerated(box, cone, model_class, max_nodes)
    raise ValueError(f"unknown model class {model_class!r}")


def min_dim_lhvlhs(box: Box222, model_class: str = "general", max_nodes: int = 20000) -> DimensionReport:
    """Least number of hidden values in an LHV-LHS model (qubit Bob, σ_z and σ_x).

    ``model_class`` selects the models searched: "general" allows any Alice
    response per hidden value; "bounded" restricts to at most four
    deterministic Alice strategies (repeats allowed) with Bob tables shared
    inside groups; "distinct" further requires distinct strategies.
    """
    return _min_dim(box, LORENTZ, model_class, max_nodes)


def min_dim_lhv(box: Box222, model_class: str = "general", max_nodes: int = 20000) -> DimensionReport:
    return _min_dim(box, SQUARE, model_class, max_nodes)


def _decide(report: DimensionReport, bound: int) -> bool:
    if report.min_dim is not None:
        return report.min_dim > bound
    if report.lower_bound is not None and report.lower_bound > bound:
        return True
    if report.model is not None and report.model.dim <= bound:
        return False
    raise SubdivisionLimit(f"minimal dimension undetermined between {report.lower_bound} and {report.model.dim if report.model else 4}")


def is_super_unsteerable(box: Box222, dimA: int, model_class: str = "general") -> tuple[bool, DimensionReport]:
    if dimA < 2:
        raise DomainError("dimA must be at least 2")
    report = min_dim_lhvlhs(box, model_class)
    if report.verdict == "steerable":
        return False, report
    return _decide(report, dimA), report


def is_superlocal(box: Box222, dimA: int, dimB: int, model_class: str = "general") -> tuple[bool, DimensionReport]:
    if dimA < 2 or dimB < 2:
        raise DomainError("dimensions must be at least 2")
    report = min_dim_lhv(box, model_class)
    if report.verdict == "nonlocal":
        return False, report
    return _decide(report, min(dimA, dimB)), report


__all__ = [
    "ALPHA",
    "AliceAssignment",
    "Grouping",
    "LhvLhsModel",
    "Face",
    "FaceProblem",
    "DimensionReport",
    "box_matrix",
    "verify_model",
    "model_violation",
    "merge_equal_bob_tables",
    "bb84_four_model",
    "example2_three_model",
    "example2_two_model",
    "model_from_alice_points",
    "make_face",
    "slice_face",
    "solve_instance",
    "dlhvlhs_feasible",
    "dlhv_feasible",
    "enumerate_instances",
    "min_dim_lhvlhs",
    "min_dim_lhv",
    "is_super_unsteerable",
    "is_superlocal",
]
