"""JSON form of classification reports and the independent report checker.

Rationals travel as ``"p/q"`` strings so nothing is rounded on the way. The
checker re-derives every claim it can from the VASS itself and the embedded
witnesses; it never calls the LP-based analysis.
"""
from __future__ import annotations

import hashlib
from fractions import Fraction
from typing import Any, Dict, List, Optional

from . import __version__
from .decompose import INF, NON_TERMINATING, TERMINATING, DecomposeNode, Report, SccReport
from .graph import MultiCycle, sccs
from .linmap import LinMap
from .model import Vass, format_vass, incidence_matrix, update_matrix
from .verify import check_linmap, check_multicycle

SCHEMA = "vasslyze-report/1"


class SchemaError(ValueError):
    pass


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def unrat(s) -> Fraction:
    if not isinstance(s, (str, int)) or isinstance(s, bool):
        raise SchemaError(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"bad rational {s!r}") from e


def input_hash(v: Vass) -> str:
    return "sha256:" + hashlib.sha256(format_vass(v).encode()).hexdigest()


def linmap_to_json(f: Optional[LinMap]):
    if f is None:
        return None
    return {"c": [rat(x) for x in f.normal], "w": {q: rat(w) for q, w in f.weights.items()}}


def linmap_from_json(d) -> LinMap:
    try:
        return LinMap([unrat(x) for x in d["c"]], {q: unrat(w) for q, w in d["w"].items()})
    except (KeyError, TypeError, AttributeError) as e:
        raise SchemaError(f"malformed linear map: {d!r}") from e


def multicycle_to_json(m: Optional[MultiCycle]):
    if m is None:
        return None
    return [{"cycle": list(c), "multiplicity": k} for c, k in m.cycles.items()]


def multicycle_from_json(items) -> MultiCycle:
    try:
        cycles: Dict = {}
        for it in items:
            k = it["multiplicity"]
            if not isinstance(k, int) or k < 1:
                raise SchemaError(f"bad multiplicity {k!r}")
            key = tuple(int(t) for t in it["cycle"])
            cycles[key] = cycles.get(key, 0) + k
        return MultiCycle(cycles)
    except (KeyError, TypeError) as e:
        raise SchemaError(f"malformed multicycle: {items!r}") from e


def _result(x):
    return "inf" if x == INF else int(x)


def node_to_json(n: DecomposeNode) -> Dict[str, Any]:
    return {
        "transitions": list(n.transitions),
        "depth": n.depth,
        "qrf": linmap_to_json(n.qrf),
        "ranked": sorted(n.ranked),
        "result": _result(n.result),
        "children": [node_to_json(c) for c in n.children],
    }


def scc_to_json(s: SccReport, seconds: Optional[float] = None) -> Dict[str, Any]:
    lin = s.linear
    if lin.bounded:
        linear = {"bounded": True, "c": rat(lin.c), "rho": [rat(x) for x in lin.rho]}
    else:
        linear = {"bounded": False, "ray": [rat(x) for x in lin.ray]}
    out = {
        "states": list(s.vass.states),
        "transitions": list(s.vass.transition_ids),
        "verdict": s.verdict,
        "k": s.k,
        "tight": s.tight,
        "bound_kind": s.bound_kind,
        "linear": linear,
        "rf": linmap_to_json(s.rf),
        "positive_qrf": linmap_to_json(s.positive_qrf),
        "depth": s.depth,
        "trace": node_to_json(s.trace),
        "offending": None if s.offending is None else list(s.offending),
        "witness": multicycle_to_json(s.witness),
        "per_transition": {str(t): multicycle_to_json(m) for t, m in s.per_transition.items()},
    }
    if seconds is not None:
        out["timings"] = {"seconds": seconds}
    return out


def report_to_json(
    v: Vass, r: Report, timings: Optional[Dict[str, Any]] = None
) -> Dict[str, Any]:
    """``timings`` holds wall-clock floats; they are diagnostics, not checked."""
    per = (timings or {}).get("sccs", [None] * len(r.components))
    out = {
        "schema": SCHEMA,
        "version": __version__,
        "input_hash": input_hash(v),
        "verdict": r.verdict,
        "k": r.k,
        "tight": r.tight,
        "bound_kind": r.bound_kind,
        "sccs": [scc_to_json(s, t) for s, t in zip(r.components, per)],
    }
    if timings is not None:
        out["timings"] = {"total_seconds": timings.get("total")}
    return out


# ---------------------------------------------------------------- checking


class _Checker:
    def __init__(self):
        self.problems: List[str] = []

    def fail(self, where: str, msg: str) -> None:
        self.problems.append(f"{where}: {msg}")

    def node(self, root: Vass, d: Dict[str, Any], depth: int, where: str):
        """Re-derive the result of a trace node; returns (result, max depth) or None."""
        try:
            tids = [int(t) for t in d["transitions"]]
            ranked = {int(t) for t in d["ranked"]}
            f = linmap_from_json(d["qrf"])
            children = d["children"]
        except (KeyError, TypeError, ValueError) as e:
            raise SchemaError(f"{where}: malformed trace node") from e
        if d.get("depth") != depth:
            self.fail(where, f"depth {d.get('depth')} but node sits at depth {depth}")
        try:
            sub = root.restrict(tids)
        except (ValueError, KeyError) as e:
            self.fail(where, f"transitions do not form a sub-VASS ({e})")
            return None
        try:
            chk = check_linmap(sub, f)
        except ValueError as e:
            self.fail(where, str(e))
            return None
        if not chk.is_qrf:
            self.fail(where, "qrf is not a quasi-ranking function: " + "; ".join(chk.details))
            return None
        if chk.ranked != ranked:
            self.fail(where, f"claimed ranked set {sorted(ranked)} differs from {sorted(chk.ranked)}")
            return None
        if not ranked:
            result, deepest = INF, depth
        elif not chk.neutral:
            result, deepest = 1, depth
        else:
            expected = [tuple(s.transition_ids) for s in sccs(sub, chk.neutral)]
            got = [tuple(int(t) for t in c.get("transitions", [])) for c in children]
            infinite_child = False
            best, deepest = 0, depth
            for i, c in enumerate(children):
                sub_res = self.node(root, c, depth + 1, f"{where}.{i}")
                if sub_res is None:
                    return None
                r, dd = sub_res
                deepest = max(deepest, dd)
                if r == INF:
                    infinite_child = True
                    break
                best = max(best, r)
            if infinite_child:
                if got != expected[: len(got)]:
                    self.fail(where, "children are not the SCCs of the neutral transitions")
                    return None
                result = INF
            else:
                if got != expected:
                    self.fail(where, "children are not the SCCs of the neutral transitions")
                    return None
                result = 1 + best
        if d.get("result") != _result(result):
            self.fail(where, f"result {d.get('result')} but trace gives {_result(result)}")
        return result, deepest

    def linear(self, v: Vass, d: Dict[str, Any], rf: Optional[LinMap], where: str) -> None:
        U = update_matrix(v).tolist()
        F = incidence_matrix(v).tolist()
        if d.get("bounded"):
            rho = [unrat(x) for x in d["rho"]]
            c = unrat(d["c"])
            if len(rho) != len(v.transitions) or any(x < 0 for x in rho):
                self.fail(where, "rho is not a non-negative flow over the transitions")
                return
            if any(sum(a * x for a, x in zip(row, rho)) < -1 for row in U):
                self.fail(where, "rho violates U rho >= -1")
            if any(sum(a * x for a, x in zip(row, rho)) != 0 for row in F):
                self.fail(where, "rho violates F rho = 0")
            if sum(rho) != c:
                self.fail(where, f"sum of rho is {sum(rho)}, not c = {c}")
            if rf is None:
                self.fail(where, "bounded linear LP but no ranking function")
            elif not check_linmap(v, rf).is_rf:
                self.fail(where, "rf is not a ranking function")
            elif sum(rf.normal) != c:
                # RF is dual feasible; equal objectives certify optimality
                self.fail(where, f"rf objective {sum(rf.normal)} differs from c = {c}")
        else:
            ray = [unrat(x) for x in d["ray"]]
            if len(ray) != len(v.transitions) or any(x < 0 for x in ray) or not any(ray):
                self.fail(where, "ray is not a non-zero non-negative flow")
                return
            if any(sum(a * x for a, x in zip(row, ray)) < 0 for row in U):
                self.fail(where, "ray violates U r >= 0")
            if any(sum(a * x for a, x in zip(row, ray)) != 0 for row in F):
                self.fail(where, "ray violates F r = 0")
            if rf is not None:
                self.fail(where, "unbounded linear LP cannot come with a ranking function")

    def scc(self, v: Vass, d: Dict[str, Any], where: str):
        try:
            rf = None if d["rf"] is None else linmap_from_json(d["rf"])
            pos = None if d["positive_qrf"] is None else linmap_from_json(d["positive_qrf"])
            verdict, k, tight = d["verdict"], d["k"], d["tight"]
            trace, linear = d["trace"], d["linear"]
        except (KeyError, TypeError) as e:
            raise SchemaError(f"{where}: missing field {e}") from e
        self.linear(v, linear, rf, where + ".linear")
        if tight:
            if pos is None:
                self.fail(where, "tight without a positive QRF")
            elif not check_linmap(v, pos).is_positive:
                self.fail(where, "positive_qrf is not a positive quasi-ranking function")
        elif pos is not None and check_linmap(v, pos).is_positive:
            self.fail(where, "a positive QRF is present but the bound is not marked tight")
        res = self.node(v, trace, 0, where + ".trace")
        if res is None:
            return None
        result, deepest = res
        if d.get("depth") != deepest:
            self.fail(where, f"depth {d.get('depth')} but trace depth is {deepest}")
        if result == INF:
            if verdict != NON_TERMINATING or k is not None:
                self.fail(where, "trace proves non-termination but the verdict disagrees")
            self.witness(v, d, where)
        else:
            if verdict != TERMINATING or k != result:
                self.fail(where, f"trace gives k = {result}, report says {verdict} k = {k}")
            if not 1 <= result <= v.dim:
                self.fail(where, f"k = {result} outside 1..{v.dim}")
            if linear.get("bounded") != (result == 1):
                self.fail(where, "linear LP and degree disagree")
        expect_kind = None if result == INF else ("theta" if tight else "omega")
        if d.get("bound_kind") != expect_kind:
            self.fail(where, f"bound_kind should be {expect_kind}")
        return verdict, k, tight

    def witness(self, v: Vass, d: Dict[str, Any], where: str) -> None:
        if not d.get("witness"):
            self.fail(where, "non-terminating without a multicycle witness")
            return
        m = multicycle_from_json(d["witness"])
        chk = check_multicycle(v, m, require_nonneg=True)
        if not chk.ok or len(m) == 0:
            self.fail(where, "witness is not a non-negative multicycle: " + "; ".join(chk.details))
        for key, items in (d.get("per_transition") or {}).items():
            mt = multicycle_from_json(items)
            if not mt.contains(int(key)):
                self.fail(where, f"multicycle for transition {key} does not use it")
            if not check_multicycle(v, mt, require_nonneg=True).ok:
                self.fail(where, f"multicycle for transition {key} is not a non-negative multicycle")


def check_report(doc: Dict[str, Any], v: Vass) -> List[str]:
    """Problems found in ``doc`` against ``v``; empty means every witness holds.

    Raises :class:`SchemaError` when the document is not a report at all.
    """
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise SchemaError(f"not a {SCHEMA} document")
    ck = _Checker()
    if doc.get("input_hash") != input_hash(v):
        ck.fail("input_hash", "report was produced for a different VASS")
    parts = sccs(v)
    entries = doc.get("sccs")
    if not isinstance(entries, list):
        raise SchemaError("sccs must be a list")
    expected = [list(p.transition_ids) for p in parts]
    got = [e.get("transitions") for e in entries]
    if got != expected:
        ck.fail("sccs", f"SCC partition {got} differs from {expected}")
        return ck.problems
    claims = []
    for i, (p, e) in enumerate(zip(parts, entries)):
        c = ck.scc(p, e, f"sccs[{i}]")
        if c is not None:
            claims.append(c)
    if len(claims) == len(parts) and not ck.problems:
        if any(c[0] == NON_TERMINATING for c in claims):
            agg = (NON_TERMINATING, None, False, None)
        else:
            tight = all(c[2] for c in claims)
            agg = (TERMINATING, max(c[1] for c in claims), tight, "theta" if tight else "omega")
        top = (doc.get("verdict"), doc.get("k"), doc.get("tight"), doc.get("bound_kind"))
        if top != agg:
            ck.fail("report", f"aggregate {top} does not follow from the SCCs {agg}")
    return ck.problems


def strip_timings(doc: Dict[str, Any]) -> Dict[str, Any]:
    out = {k: v for k, v in doc.items() if k != "timings"}
    out["sccs"] = [{k: v for k, v in s.items() if k != "timings"} for s in doc.get("sccs", [])]
    return out
