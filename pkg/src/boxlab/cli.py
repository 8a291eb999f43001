"""Command-line front end: ``boxlab analyze | reproduce | mindim``.

Reports go to stdout as JSON; rationals print as "p/q" strings and floats
with 12 significant digits.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction

import numpy as np

from .boxes import EXAMPLE2_ROWS, Box222, bb84_box, box_from_json, example2_box, is_no_signalling, make_box
from .decomposition import (
    AliceAssignment,
    Grouping,
    bb84_four_model,
    box_matrix,
    dlhvlhs_feasible,
    enumerate_instances,
    example2_three_model,
    min_dim_lhv,
    min_dim_lhvlhs,
    model_violation,
    solve_instance,
    _decide,
    _label,
)
from .errors import BoxlabError, MismatchError, SubdivisionLimit
from .inequalities import chsh_max, is_bell_local_lp, is_unsteerable_mub, steering_functional
from .quantum import (
    MINUS_Z_AXIS,
    X_AXIS,
    Z_AXIS,
    born_box,
    born_probabilities,
    erasure_povms,
    erasure_state,
    example2_state,
    qubit_pair,
    werner_state,
)
from .solver import frac, rank

TARGETS = ("bb84", "example2", "werner-born", "erasure-born", "eq25-model", "eq31-model", "thm1-enum", "thm2-enum", "appendixA-enum")


def jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    return obj


def emit(obj):
    print(json.dumps(jsonable(obj), indent=2))


def _rows(box: Box222):
    return [[str(v) for v in row] for row in box.rows()]


def _diff(got: Box222, want: Box222) -> dict:
    out = {}
    for r, (gr, wr) in enumerate(zip(got.rows(), want.rows())):
        for c, (g, w) in enumerate(zip(gr, wr)):
            if g != w:
                out[f"row{r}col{c}"] = {"got": str(g), "expected": str(w)}
    return out


def _check_box(got: Box222, want: Box222, what: str):
    d = _diff(got, want)
    if d:
        raise MismatchError(f"{what} differs from the expected table", d)


# ---------------------------------------------------------------------------
# analyze


def classification_tag(unsteerable: bool, min_dim, dimA: int) -> str:
    if not unsteerable:
        return "steerable"
    if min_dim is not None and min_dim > dimA:
        return f"super-unsteerable:min-dim-{min_dim}"
    return "not-super-unsteerable"


def analyze_box(box: Box222, dimA: int = 2, dimB: int = 2, model_class: str = "general") -> dict:
    report = {"box": box.to_json(), "dimA": dimA, "dimB": dimB, "model_class": model_class}
    ns = is_no_signalling(box)
    report["no_signalling"] = ns
    report["chsh_max"] = chsh_max(box)
    local, _ = is_bell_local_lp(box)
    report["local"] = local
    if not ns:
        report["classification"] = "signalling"
        return report
    unst = is_unsteerable_mub(box)
    report["unsteerable"] = unst
    report["steering_value"] = steering_functional(box)
    if local:
        lhv = min_dim_lhv(box, model_class)
        report["min_dim_lhv"] = lhv.to_json()
        try:
            report["superlocal"] = _decide(lhv, min(dimA, dimB))
        except SubdivisionLimit:
            report["superlocal"] = None
    min_dim = None
    if unst:
        rep = min_dim_lhvlhs(box, model_class)
        report["min_dim_lhvlhs"] = rep.to_json()
        min_dim = rep.min_dim
        try:
            report["super_unsteerable"] = {str(dimA): _decide(rep, dimA)}
        except SubdivisionLimit:
            report["super_unsteerable"] = {str(dimA): None}
    report["classification"] = classification_tag(unst, min_dim, dimA)
    return report


# ---------------------------------------------------------------------------
# reproduce


def bb84_expected(V: Fraction) -> Box222:
    hi, lo, q = (1 + V) / 4, (1 - V) / 4, Fraction(1, 4)
    return make_box([[hi, lo, lo, hi], [q, q, q, q], [q, q, q, q], [lo, hi, hi, lo]])


def _born_check(state, alice, bob, want: Box222, what: str) -> dict:
    raw = born_probabilities(state, alice, bob)
    dev = float(np.max(np.abs(raw.reshape(16) - np.array([float(v) for v in want.entries]))))
    if dev > 1e-12:
        raise MismatchError(f"{what}: raw Born probabilities deviate by {dev:.3g}", {"max_deviation": dev})
    got = born_box(state, alice, bob)
    _check_box(got, want, what)
    return {"table": _rows(got), "max_raw_deviation": dev}


def _enum(box, groups_list, cone_name="mub-qubit"):
    from .decomposition import CONES

    M = box_matrix(box)
    r = rank(M)
    out = []
    for groups in groups_list:
        cert = solve_instance(M, [list(g) for g in groups], CONES[cone_name], strict=True, r=r)
        out.append({"instance": _label(groups), "verdict": cert.verdict, "kind": cert.kind})
    return out


def _all_groupings(ms):
    """All canonical groupings of a multiset of strategies."""
    from .decomposition import _set_partitions

    seen = set()
    for k in range(1, len(ms) + 1):
        for part in _set_partitions(list(ms), k):
            key = tuple(sorted(tuple(sorted(b)) for b in part))
            if key not in seen:
                seen.add(key)
                yield key


def reproduce(target: str, V: Fraction | None = None) -> dict:
    if target == "bb84":
        V = V if V is not None else Fraction(1, 2)
        got = bb84_box(V)
        _check_box(got, bb84_expected(V), "bb84 box")
        return {"target": target, "V": V, "table": _rows(got)}
    if target == "example2":
        got = example2_box()
        born = born_box(example2_state(), qubit_pair(X_AXIS, Z_AXIS), qubit_pair(X_AXIS, Z_AXIS))
        _check_box(born, make_box(EXAMPLE2_ROWS), "example2 Born box")
        return {"target": target, "table": _rows(got)}
    if target == "werner-born":
        V = V if V is not None else Fraction(1, 2)
        res = _born_check(werner_state(V), qubit_pair(MINUS_Z_AXIS, X_AXIS), qubit_pair(Z_AXIS, X_AXIS), bb84_expected(V), "Werner Born box")
        return {"target": target, "V": V, **res}
    if target == "erasure-born":
        V = V if V is not None else Fraction(3, 5)
        res = _born_check(erasure_state(V), erasure_povms(), qubit_pair(Z_AXIS, X_AXIS), bb84_expected(V), "erasure Born box")
        return {"target": target, "V": V, **res}
    if target == "eq25-model":
        V = V if V is not None else Fraction(1, 2)
        box = bb84_box(V)
        model = bb84_four_model(V)
        bad = model_violation(model, box)
        if bad:
            raise MismatchError("reference four-value model fails", {"violation": bad})
        cert = dlhvlhs_feasible(box, AliceAssignment(("00", "01", "10", "11")))
        if not cert.feasible or cert.witness.bob_tables != model.bob_tables or cert.witness.weights != model.weights:
            raise MismatchError("solver witness differs from the reference model", {"verdict": cert.verdict})
        return {"target": target, "V": V, "model": model}
    if target == "eq31-model":
        box = example2_box()
        model = example2_three_model()
        bad = model_violation(model, box)
        if bad:
            raise MismatchError("reference three-value model fails", {"violation": bad})
        cert = dlhvlhs_feasible(box, AliceAssignment(("00", "10", "11")))
        if not cert.feasible or cert.witness.weights != model.weights or cert.witness.bob_tables != model.bob_tables:
            raise MismatchError("solver witness differs from the reference model", {"verdict": cert.verdict})
        return {"target": target, "model": model}
    if target == "thm1-enum":
        V = V if V is not None else Fraction(1, 2)
        box = bb84_box(V)
        if not is_unsteerable_mub(box):
            raise MismatchError("box is steerable", {"V": str(V)})
        instances = [g for m in (2, 3) for ms in itertools.combinations_with_replacement(range(4), m) for g in _all_groupings(ms)]
        rows = _enum(box, sorted(set(instances)))
        bad = [r for r in rows if r["verdict"] != "infeasible"]
        if bad:
            raise MismatchError("some instance with two or three hidden values is not infeasible", {"instances": bad})
        return {"target": target, "V": V, "instances": len(rows), "all_infeasible": True, "results": rows}
    if target == "thm2-enum":
        box = example2_box()
        keys = [key for k in (1, 2) for key in enumerate_instances(k, "bounded")]
        rows = _enum(box, keys)
        bad = [r for r in rows if r["verdict"] != "infeasible"]
        if bad:
            raise MismatchError("some instance with two hidden values is not infeasible", {"instances": bad})
        return {"target": target, "instances": len(rows), "all_infeasible": True, "results": rows}
    if target == "appendixA-enum":
        box = example2_box()
        rows = []
        for perm in itertools.permutations(range(4)):
            cert = dlhvlhs_feasible(box, AliceAssignment(perm), Grouping.singletons(4))
            rows.append({"assignment": [str(AliceAssignment(perm).strategies[i]) for i in range(4)], "verdict": cert.verdict, "kind": cert.kind})
        bad = [r for r in rows if r["verdict"] != "infeasible"]
        if bad:
            raise MismatchError("a four-value instance is not infeasible", {"instances": bad})
        return {"target": target, "instances": len(rows), "all_infeasible": True, "results": rows}
    raise ValueError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")


# ---------------------------------------------------------------------------
# entry point


def _load(path: str) -> Box222:
    with open(path) as fh:
        return box_from_json(fh.read())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boxlab", description="Hidden-variable dimension of 2x2x2 boxes.")
    sub = p.add_subparsers(dest="cmd", required=True)
    a = sub.add_parser("analyze", help="full report for a box file")
    a.add_argument("file")
    a.add_argument("--dimA", type=int, default=None)
    a.add_argument("--dimB", type=int, default=2)
    a.add_argument("--class", dest="model_class", default="general", choices=("general", "bounded", "distinct"))
    r = sub.add_parser("reproduce", help="regenerate a reference result and compare")
    r.add_argument("target", choices=TARGETS)
    r.add_argument("--v", default=None, help="visibility as p/q")
    m = sub.add_parser("mindim", help="minimal hidden-variable dimension")
    m.add_argument("file")
    m.add_argument("--model", choices=("lhv", "lhvlhs"), default="lhvlhs")
    m.add_argument("--class", dest="model_class", default="general", choices=("general", "bounded", "distinct"))
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "analyze":
            dimA = args.dimA
            if dimA is None:
                print("note: --dimA not given, using 2", file=sys.stderr)
                dimA = 2
            emit(analyze_box(_load(args.file), dimA, args.dimB, args.model_class))
        elif args.cmd == "reproduce":
            V = frac(args.v) if args.v is not None else None
            out = reproduce(args.target, V)
            out["status"] = "match"
            emit(out)
        else:
            box = _load(args.file)
            fn = min_dim_lhv if args.model == "lhv" else min_dim_lhvlhs
            emit(fn(box, args.model_class))
    except MismatchError as exc:
        emit({"status": "mismatch", "message": str(exc), "diff": exc.diff})
        print(f"mismatch: {exc}", file=sys.stderr)
        return 1
    except (BoxlabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
