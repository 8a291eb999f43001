"""Exact rational linear algebra, an exact simplex, and rigorous disc feasibility.

Everything that produces a verdict here works over ``fractions.Fraction``.
Floating point only appears in the candidate search of ``disc_feasibility``;
candidates are always re-checked exactly before being returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize

RationalMatrix = list  # list of rows of Fractions

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    """Convert ints, strings ("3/8", "0.125"), floats and Fractions exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    raise TypeError(f"cannot convert {x!r} to a rational")


def to_matrix(A) -> list[list[Fraction]]:
    return [[frac(v) for v in row] for row in A]


def matmul(A, B):
    return [[sum((a * b for a, b in zip(row, col)), ZERO) for col in zip(*B)] for row in A]


def matvec(A, x):
    return [sum((a * b for a, b in zip(row, x)), ZERO) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def rref(A):
    """Reduced row echelon form and pivot columns."""
    R = to_matrix(A)
    m = len(R)
    n = len(R[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [v * inv for v in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def rank(A) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A)[1])


def det(A) -> Fraction:
    M = to_matrix(A)
    n = len(M)
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return d


def nullspace(A) -> list[list[Fraction]]:
    R, piv = rref(A)
    n = len(A[0])
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def inverse(A):
    n = len(A)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(to_matrix(A))]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


# ---------------------------------------------------------------------------
# affine solution sets


@dataclass(frozen=True)
class AffineSolutionSpace:
    """x = particular + Σ_i z_i basis[i], optionally with bounds on each z_i."""

    particular: tuple
    basis: tuple = ()
    bounds: tuple | None = None

    @property
    def nparams(self) -> int:
        return len(self.basis)

    def point(self, params: Sequence) -> list[Fraction]:
        x = list(self.particular)
        for z, b in zip(params, self.basis):
            if z:
                x = [xi + z * bi for xi, bi in zip(x, b)]
        return x

    def form(self, coeffs: Sequence, const=ZERO) -> "AffineForm":
        """Pull back the linear functional coeffs·x + const to the parameters."""
        coeffs = [frac(c) for c in coeffs]
        c0 = frac(const) + sum((c * p for c, p in zip(coeffs, self.particular)), ZERO)
        cz = tuple(sum((c * bi for c, bi in zip(coeffs, b)), ZERO) for b in self.basis)
        return AffineForm(cz, c0)


@dataclass(frozen=True)
class Inconsistent:
    """Ax = b has no solution; y satisfies yᵀA = 0 and yᵀb = 1."""

    y: tuple


def solve_linear_exact(A, b) -> AffineSolutionSpace | Inconsistent:
    A = to_matrix(A)
    b = [frac(v) for v in b]
    m = len(A)
    n = len(A[0]) if m else 0
    R, piv = rref([row + [bi] for row, bi in zip(A, b)])
    if n in piv:
        # left null vector of A with yᵀb != 0
        for y in nullspace(transpose(A)) if m else []:
            s = sum((yi * bi for yi, bi in zip(y, b)), ZERO)
            if s != 0:
                return Inconsistent(tuple(yi / s for yi in y))
        raise AssertionError("inconsistent system without a certificate")
    x = [ZERO] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    free = [j for j in range(n) if j not in piv]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(tuple(v))
    return AffineSolutionSpace(tuple(x), tuple(basis))


# ---------------------------------------------------------------------------
# exact simplex


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple | None = None
    value: Fraction | None = None
    farkas: tuple | None = None  # (y_eq, y_ub) when infeasible

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _pivot(T, cost, r, c):
    piv = T[r][c]
    if piv != 1:
        T[r] = [v / piv for v in T[r]]
    row = T[r]
    for i in range(len(T)):
        if i != r:
            f = T[i][c]
            if f:
                T[i] = [a - f * b for a, b in zip(T[i], row)]
    f = cost[c]
    if f:
        cost[:] = [a - f * b for a, b in zip(cost, row)]


def _run_simplex(T, basis, cost, allowed) -> str:
    """Minimise with Bland's rule; cost holds reduced costs and -objective."""
    while True:
        enter = next((j for j in allowed if cost[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, cost, best[1], enter)
        basis[best[1]] = enter


def lp_solve(c, A_eq=(), b_eq=(), A_ub=(), b_ub=(), n: int | None = None) -> LpResult:
    """Maximise cᵀx subject to A_eq x = b_eq, A_ub x ≤ b_ub, x ≥ 0 (exactly).

    ``c=None`` asks for feasibility only.  Infeasible results carry a Farkas
    pair (y_eq free, y_ub ≥ 0) with A_eqᵀy_eq + A_ubᵀy_ub ≥ 0 and
    b_eqᵀy_eq + b_ubᵀy_ub < 0.
    """
    A_eq, A_ub = to_matrix(A_eq), to_matrix(A_ub)
    b_eq, b_ub = [frac(v) for v in b_eq], [frac(v) for v in b_ub]
    if n is None:
        n = len((A_eq or A_ub)[0])
    meq, mub = len(A_eq), len(A_ub)
    m = meq + mub
    N = n + mub + m
    T, sign = [], []
    for i in range(m):
        if i < meq:
            row = list(A_eq[i]) + [ZERO] * mub
            rhs = b_eq[i]
        else:
            j = i - meq
            row = list(A_ub[j]) + [ONE if k == j else ZERO for k in range(mub)]
            rhs = b_ub[j]
        s = -1 if rhs < 0 else 1
        sign.append(s)
        if s < 0:
            row = [-v for v in row]
            rhs = -rhs
        T.append(row + [ONE if k == i else ZERO for k in range(m)] + [rhs])
    basis = [n + mub + i for i in range(m)]
    cost = [ZERO] * (N + 1)
    for row in T:
        for j in range(n + mub):
            cost[j] -= row[j]
        cost[N] -= row[N]
    _run_simplex(T, basis, cost, range(N))
    if -cost[N] > 0:
        # π_i = 1 - reduced cost of artificial i; y = -π with the row signs undone
        y = [-(ONE - cost[n + mub + i]) * sign[i] for i in range(m)]
        return LpResult("infeasible", farkas=(tuple(y[:meq]), tuple(y[meq:])))
    # drive artificials out of the basis, dropping redundant rows
    keep = []
    for i in range(len(T)):
        if basis[i] >= n + mub:
            j = next((j for j in range(n + mub) if T[i][j] != 0), None)
            if j is None:
                continue
            _pivot(T, cost, i, j)
            basis[i] = j
        keep.append(i)
    T = [T[i] for i in keep]
    basis = [basis[i] for i in keep]
    cvec = [frac(v) for v in c] if c is not None else [ZERO] * n
    c2 = [-v for v in cvec] + [ZERO] * (N - n)
    cost = [c2[j] - sum((c2[basis[i]] * T[i][j] for i in range(len(T))), ZERO) for j in range(N)]
    cost.append(-sum((c2[basis[i]] * T[i][N] for i in range(len(T))), ZERO))
    status = _run_simplex(T, basis, cost, range(n + mub))
    x = [ZERO] * N
    for i, bcol in enumerate(basis):
        x[bcol] = T[i][N]
    xs = tuple(x[:n])
    if status == "unbounded":
        return LpResult("unbounded", x=xs)
    return LpResult("optimal", x=xs, value=sum((ci * xi for ci, xi in zip(cvec, xs)), ZERO))


def lp_feasible_exact(A_eq=(), b_eq=(), A_ub=(), b_ub=(), n: int | None = None) -> LpResult:
    return lp_solve(None, A_eq, b_eq, A_ub, b_ub, n)


def verify_farkas(A_eq, b_eq, A_ub, b_ub, y_eq, y_ub, n: int | None = None) -> bool:
    A_eq, A_ub = to_matrix(A_eq), to_matrix(A_ub)
    if n is None:
        n = len((A_eq or A_ub)[0])
    if any(v < 0 for v in y_ub):
        return False
    for j in range(n):
        s = sum((y * row[j] for y, row in zip(y_eq, A_eq)), ZERO)
        s += sum((y * row[j] for y, row in zip(y_ub, A_ub)), ZERO)
        if s < 0:
            return False
    rhs = sum((y * frac(b) for y, b in zip(y_eq, b_eq)), ZERO)
    rhs += sum((y * frac(b) for y, b in zip(y_ub, b_ub)), ZERO)
    return rhs < 0


def max_min_slack(A_eq, b_eq, n: int, A_ub=(), b_ub=()) -> LpResult:
    """Maximise τ subject to A_eq x = b_eq, A_ub x ≤ b_ub, x ≥ τ·1, τ ≥ 0.

    Substitutes x = x' + τ·1.  The returned x is the original variable.
    A strictly positive feasible x exists iff the optimum τ is > 0.
    """
    A_eq, A_ub = to_matrix(A_eq), to_matrix(A_ub)
    Ae = [row + [sum(row, ZERO)] for row in A_eq]
    Au = [row + [sum(row, ZERO)] for row in A_ub]
    # bound τ ≤ 1 so the LP stays bounded
    Au.append([ZERO] * n + [ONE])
    bu = list(b_ub) + [ONE]
    res = lp_solve([ZERO] * n + [ONE], Ae, b_eq, Au, bu, n + 1)
    if res.status != "optimal":
        return res
    tau = res.x[-1]
    return LpResult("optimal", x=tuple(v + tau for v in res.x[:-1]), value=tau)


# ---------------------------------------------------------------------------
# interval arithmetic


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


class Interval:
    """Closed float interval with outward rounding on every operation."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        self.lo = lo
        self.hi = lo if hi is None else hi

    @classmethod
    def from_rationals(cls, lo: Fraction, hi: Fraction) -> "Interval":
        a, b = float(lo), float(hi)
        if Fraction(a) > lo:
            a = _down(a)
        if Fraction(b) < hi:
            b = _up(b)
        return cls(a, b)

    def __add__(self, o):
        o = _iv(o)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-_iv(o))

    def __rsub__(self, o):
        return _iv(o) - self

    def __mul__(self, o):
        o = _iv(o)
        ps = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return Interval(_down(min(ps)), _up(max(ps)))

    __rmul__ = __mul__

    def sqr(self) -> "Interval":
        lo, hi = abs(self.lo), abs(self.hi)
        if self.lo <= 0 <= self.hi:
            return Interval(0.0, _up(max(lo, hi) ** 2))
        a, b = min(lo, hi), max(lo, hi)
        return Interval(_down(a * a), _up(b * b))

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


def _iv(x) -> Interval:
    if isinstance(x, Interval):
        return x
    f = frac(x)
    return Interval.from_rationals(f, f)


# ---------------------------------------------------------------------------
# affine forms and constraints


@dataclass(frozen=True)
class AffineForm:
    coeffs: tuple
    const: Fraction = ZERO

    def at(self, z: Sequence) -> Fraction:
        return self.const + sum((c * zi for c, zi in zip(self.coeffs, z) if c), ZERO)

    def at_float(self, z) -> float:
        return float(self.const) + float(np.dot([float(c) for c in self.coeffs], z)) if self.coeffs else float(self.const)

    def range(self, box: Sequence) -> tuple[Fraction, Fraction]:
        lo = hi = self.const
        for c, (a, b) in zip(self.coeffs, box):
            if c > 0:
                lo += c * a
                hi += c * b
            elif c < 0:
                lo += c * b
                hi += c * a
        return lo, hi

    def interval(self, box) -> Interval:
        return Interval.from_rationals(*self.range(box))

    def is_constant(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def substitute(self, space: AffineSolutionSpace) -> "AffineForm":
        """Rewrite in the parameters of ``space`` (where z = space.point(y))."""
        return space.form(self.coeffs, self.const)

    def __add__(self, o: "AffineForm") -> "AffineForm":
        return AffineForm(tuple(a + b for a, b in zip(self.coeffs, o.coeffs)), self.const + o.const)

    def __sub__(self, o: "AffineForm") -> "AffineForm":
        return AffineForm(tuple(a - b for a, b in zip(self.coeffs, o.coeffs)), self.const - o.const)

    def scale(self, s) -> "AffineForm":
        s = frac(s)
        return AffineForm(tuple(s * a for a in self.coeffs), s * self.const)


def _sq_range(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    if lo <= 0 <= hi:
        return ZERO, max(lo * lo, hi * hi)
    a, b = sorted((abs(lo), abs(hi)))
    return a * a, b * b


@dataclass(frozen=True)
class DiscConstraint:
    """u² + v² ≤ w² together with w ≥ 0."""

    u: AffineForm
    v: AffineForm
    w: AffineForm
    label: str = "disc"

    def holds_at(self, z) -> bool:
        u, v, w = self.u.at(z), self.v.at(z), self.w.at(z)
        return w >= 0 and u * u + v * v <= w * w

    def slack_float(self, z) -> float:
        u, v, w = self.u.at_float(z), self.v.at_float(z), self.w.at_float(z)
        return w - math.hypot(u, v)

    def violated_on(self, box) -> bool:
        ulo, uhi = self.u.range(box)
        vlo, vhi = self.v.range(box)
        wlo, whi = self.w.range(box)
        if whi < 0:
            return True
        su, sv = _sq_range(ulo, uhi), _sq_range(vlo, vhi)
        sw = _sq_range(max(wlo, ZERO), whi)
        return su[0] + sv[0] - sw[1] > 0

    def substitute(self, space) -> "DiscConstraint":
        return DiscConstraint(self.u.substitute(space), self.v.substitute(space), self.w.substitute(space), self.label)


@dataclass(frozen=True)
class LinearConstraint:
    """form ≥ 0, or form > 0 when strict."""

    form: AffineForm
    label: str = "linear"
    strict: bool = False

    def holds_at(self, z) -> bool:
        val = self.form.at(z)
        return val > 0 if self.strict else val >= 0

    def slack_float(self, z) -> float:
        return self.form.at_float(z)

    def violated_on(self, box) -> bool:
        return self.form.range(box)[1] < 0

    def substitute(self, space) -> "LinearConstraint":
        return LinearConstraint(self.form.substitute(space), self.label, self.strict)


def certify_point(candidate: Sequence, constraints: Iterable) -> bool:
    """Exact re-evaluation of every constraint at a rational point."""
    z = [frac(v) for v in candidate]
    return all(c.holds_at(z) for c in constraints)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    """Outcome of one feasibility question.

    verdict is "feasible", "infeasible" or "inconclusive".  ``witness`` holds
    the certified point or model; ``evidence`` describes the proof.
    """

    verdict: str
    witness: object = None
    evidence: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.verdict == "feasible"

    @property
    def infeasible(self) -> bool:
        return self.verdict == "infeasible"

    @property
    def kind(self) -> str:
        return self.evidence.get("kind", "")


def leaves_cover(paths: Iterable[str]) -> bool:
    """Binary subdivision paths cover the root iff Σ 2^-len = 1 and none nests."""
    paths = list(paths)
    total = sum((Fraction(1, 2 ** len(p)) for p in paths), ZERO)
    if total != 1:
        return False
    s = sorted(paths)
    return all(not b.startswith(a) for a, b in zip(s, s[1:]))


# ---------------------------------------------------------------------------
# rigorous disc feasibility


def rationalize(values: Sequence[float]) -> Iterable[list[Fraction]]:
    """Rational approximations within 1e-7 of a float vector, simplest first."""
    dens = list(range(1, 13)) + [16, 20, 24, 32, 48, 64, 100, 128, 256, 1000, 1024, 4096]
    dens += [10 ** k for k in range(4, 10)] + [2 ** k for k in (16, 20, 24, 30, 40)]
    seen = set()
    for d in dens:
        c = tuple(Fraction(v).limit_denominator(d) for v in values)
        if max((abs(float(q) - v) for q, v in zip(c, values)), default=0.0) > 1e-7:
            continue
        if c not in seen:
            seen.add(c)
            yield list(c)
    yield [Fraction(v) for v in values]


def _relaxation(discs, lins):
    """Linear consequences (form, label, tag) of the constraints."""
    out = []
    for i, d in enumerate(discs):
        out.append((d.w - d.u, i, "w-u"))
        out.append((d.w + d.u, i, "w+u"))
        out.append((d.w - d.v, i, "w-v"))
        out.append((d.w + d.v, i, "w+v"))
    for i, c in enumerate(lins):
        out.append((c.form, i, "lin"))
    return out


def _lp_rows(forms, n):
    """Rows of A_ub z' ≤ b for f(z) ≥ 0 with z = z⁺ - z⁻."""
    A, b = [], []
    for f in forms:
        A.append([-c for c in f.coeffs] + [c for c in f.coeffs])
        b.append(f.const)
    return A, b


def _implicit_equalities(forms, n):
    """Indices of inequalities f ≥ 0 that hold with equality on the whole set."""
    if n == 0:
        return [i for i, f in enumerate(forms) if f.const == 0], None
    A, b = _lp_rows(forms, n)
    feas = lp_feasible_exact(A_ub=A, b_ub=b, n=2 * n)
    if not feas.feasible:
        return None, feas
    undecided = list(range(len(forms)))
    while undecided:
        # maximise Σ s_i with f_i ≥ s_i, 0 ≤ s_i ≤ 1 over the undecided rows
        k = len(undecided)
        Au = [row + [ZERO] * k for row in A]
        bu = list(b)
        for t, i in enumerate(undecided):
            Au[i][2 * n + t] = ONE
            Au.append([ZERO] * (2 * n) + [ONE if s == t else ZERO for s in range(k)])
            bu.append(ONE)
        res = lp_solve([ZERO] * (2 * n) + [ONE] * k, A_ub=Au, b_ub=bu, n=2 * n + k)
        s = res.x[2 * n:]
        positive = [i for t, i in enumerate(undecided) if s[t] > 0]
        if not positive:
            return undecided, None
        undecided = [i for i in undecided if i not in positive]
    return [], None


def disc_feasibility(
    space: AffineSolutionSpace,
    discs: Sequence[DiscConstraint],
    strict_positive: Sequence[AffineForm] = (),
    linear: Sequence[LinearConstraint] = (),
    max_depth: int = 60,
    max_nodes: int = 20000,
) -> Certificate:
    """Decide ∃ z: discs hold, linear forms ≥ 0, strict forms > 0.

    All forms are over the parameters of ``space``.  Returns a feasible
    certificate with an exactly checked rational parameter vector, an
    infeasible certificate whose evidence proves emptiness (LP Farkas vector,
    forced zero of a strict form, or a covering branch-and-bound trace), or an
    inconclusive one when the subdivision limits are reached.
    """
    n0 = space.nparams
    lins = list(linear) + [LinearConstraint(f, f"strict[{i}]", strict=True) for i, f in enumerate(strict_positive)]
    discs = list(discs)
    original = discs + lins
    # current parametrisation: z = chart.point(y)
    chart = AffineSolutionSpace(tuple([ZERO] * n0), tuple(tuple(ONE if i == j else ZERO for i in range(n0)) for j in range(n0)))
    reductions = []
    while chart.nparams:
        n = chart.nparams
        cur_discs = [d.substitute(chart) for d in discs]
        cur_lins = [c.substitute(chart) for c in lins]
        rel = _relaxation(cur_discs, cur_lins)
        eq_idx, bad = _implicit_equalities([r[0] for r in rel], n)
        if eq_idx is None:
            return Certificate("infeasible", evidence={"kind": "lp-relaxation", "farkas": bad.farkas, "reductions": reductions})
        forced = [cur_lins[rel[i][1]].label for i in eq_idx if rel[i][2] == "lin" and cur_lins[rel[i][1]].strict]
        if forced:
            return Certificate("infeasible", evidence={"kind": "forced-zero", "forced": forced, "reductions": reductions})
        new_eqs = []
        for i in eq_idx:
            form, j, tag = rel[i]
            if not form.is_constant():
                new_eqs.append((form, f"{tag}@{j}"))
            if tag in ("w-u", "w+u"):
                new_eqs.append((cur_discs[j].v, f"tangent v@{cur_discs[j].label}"))
            if tag in ("w-v", "w+v"):
                new_eqs.append((cur_discs[j].u, f"tangent u@{cur_discs[j].label}"))
        new_eqs = [(f, l) for f, l in new_eqs if not (f.is_constant() and f.const == 0)]
        if not new_eqs:
            break
        sub = solve_linear_exact([list(f.coeffs) for f, _ in new_eqs], [-f.const for f, _ in new_eqs])
        if isinstance(sub, Inconsistent):
            return Certificate("infeasible", evidence={"kind": "forced-zero", "forced": [l for _, l in new_eqs], "reductions": reductions})
        reductions.append([l for _, l in new_eqs])
        # compose: z = chart.point(sub.point(y))
        origin = chart.point([ZERO] * n)
        basis = tuple(tuple(a - b for a, b in zip(chart.point(v), origin)) for v in sub.basis)
        chart = AffineSolutionSpace(tuple(chart.point(sub.particular)), basis)
    n = chart.nparams
    cur = [d.substitute(chart) for d in discs] + [c.substitute(chart) for c in lins]

    def finish(y):
        z = chart.point(y)
        assert certify_point(z, original)
        return Certificate("feasible", witness=z, evidence={"kind": "point", "reductions": reductions})

    if n == 0:
        if certify_point([], cur):
            return finish([])
        bad = next(c for c in cur if not c.holds_at([]))
        kind = "forced-zero" if isinstance(bad, LinearConstraint) and bad.strict and bad.form.const == 0 else "point"
        return Certificate("infeasible", evidence={"kind": kind, "violated": bad.label, "forced": [bad.label], "reductions": reductions})

    # bounds from the linear relaxation
    forms = [r[0] for r in _relaxation(cur[: len(discs)], cur[len(discs):])]
    A, b = _lp_rows(forms, n)
    box = []
    for i in range(n):
        e = [ZERO] * n
        e[i] = ONE
        hi = lp_solve(e + [-v for v in e], A_ub=A, b_ub=b, n=2 * n)
        lo = lp_solve([-v for v in e] + e, A_ub=A, b_ub=b, n=2 * n)
        if hi.status != "optimal" or lo.status != "optimal":
            raise ValueError("parameter set is unbounded; add probability bounds")
        box.append((-lo.value, hi.value))

    # numerical candidate: maximise the smallest slack
    for cand in _float_candidates(cur, box):
        for y in rationalize(cand):
            if all(lo <= yi <= hi for yi, (lo, hi) in zip(y, box)) and certify_point(y, cur):
                return finish(y)

    stack = [(box, "")]
    leaves = []
    nodes = 0
    while stack:
        bx, path = stack.pop()
        nodes += 1
        closing = next((c.label for c in cur if c.violated_on(bx)), None)
        if closing is not None:
            leaves.append((path, closing))
            continue
        mid = [(lo + hi) / 2 for lo, hi in bx]
        if certify_point(mid, cur):
            return finish(mid)
        if len(path) >= max_depth or nodes >= max_nodes:
            return Certificate("inconclusive", evidence={"kind": "subdivision-limit", "depth": len(path), "nodes": nodes, "reductions": reductions})
        i = max(range(n), key=lambda k: bx[k][1] - bx[k][0])
        lo, hi = bx[i]
        left, right = list(bx), list(bx)
        left[i] = (lo, mid[i])
        right[i] = (mid[i], hi)
        stack.append((right, path + "1"))
        stack.append((left, path + "0"))
    return Certificate(
        "infeasible",
        evidence={"kind": "branch-and-bound", "box": box, "leaves": leaves, "nodes": nodes, "reductions": reductions},
    )


def _float_candidates(constraints, box):
    n = len(box)
    lo = np.array([float(a) for a, _ in box])
    hi = np.array([float(b) for _, b in box])
    x0 = (lo + hi) / 2

    def slacks(z):
        return np.array([c.slack_float(z) for c in constraints])

    cons = [{"type": "ineq", "fun": lambda v: slacks(v[:-1]) - v[-1]}]
    bounds = list(zip(lo, hi)) + [(None, None)]
    try:
        res = minimize(lambda v: -v[-1], np.append(x0, min(slacks(x0))), constraints=cons, bounds=bounds, method="SLSQP", options={"maxiter": 300, "ftol": 1e-15})
        out = [np.clip(res.x[:n], lo, hi)]
    except (ValueError, FloatingPointError):
        out = []
    out.append(x0)
    return out
